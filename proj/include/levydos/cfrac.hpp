// Continued-fraction route to the complex Lyapunov exponent
//
//   Omega(E) = c(0)/2 + K(E),   K(E) = -E/(c(1) - E/(c(2) - E/(c(3) + ...)))
//
// valid for subordinator environments on C minus the positive real axis. The
// fraction is evaluated forward with the truncated tail closed by the
// asymptotic remainder z* = (c - sqrt(c^2 - 4E))/2, whose principal branch
// selects the E + i0+ continuation. The density of states on the spectrum is
// recovered by evaluating just above the cut and extrapolating the imaginary
// offset to zero.

#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <memory>
#include <utility>
#include <vector>

#include "levydos/levy_process.hpp"

namespace levydos {

enum class omega_method { continued_fraction, closed_form, monte_carlo, asymptotic };

struct omega_value {
    cplx E;
    cplx omega;
    double gamma = 0.0;        // Re omega; +inf for infinite-mean environments
    double N = 0.0;            // integrated density of states, >= 0
    omega_method method = omega_method::continued_fraction;
    double err_estimate = 0.0; // relative, honest (may exceed any requested tol)
};

// Memoising, thread-safe view of the coefficient sequence c(n). Copies share
// one store; reads after the first evaluation are lock-free.
class coefficient_cache {
  public:
    static constexpr int max_terms = 1 << 21;

    explicit coefficient_cache(levy_spec spec);
    explicit coefficient_cache(std::function<double(int)> generator);

    double operator()(int n) const;

  private:
    struct store;
    std::shared_ptr<store> store_;
};

// Evaluation record: last convergent pair, the tail seed in effect, and the
// achieved relative residual.
struct cf_state {
    cplx E;
    cplx p, q;           // numerator/denominator of the last convergent
    cplx tail_seed;
    int n_terms = 0;
    bool converged = false;
    double residual = 0.0;
};

struct cf_trace_row {
    int n = 0;
    cplx plain;   // bare convergent p_n/q_n
    cplx seeded;  // tail-seeded value at the same depth
};

// K(E) to relative accuracy tol for E outside [0, inf). Throws
// validation_error on the cut and numeric_error (with diagnostics) if the
// doubling schedule exhausts max_terms.
cplx evaluate_K(const coefficient_cache& c, cplx E, double tol,
                cf_state* state = nullptr, std::vector<cf_trace_row>* trace = nullptr);

// Omega(E) = c(0)/2 + K(E). Requires a finite-mean subordinator; infinite-mean
// environments must go through dos_continued, which needs only Im K.
omega_value omega_cf(const coefficient_cache& c, const levy_spec& spec, cplx E);
omega_value omega_cf(const levy_spec& spec, cplx E);

// Density of states at E > 0: evaluates Omega(E + i eta) along the schedule
// and extrapolates eta -> 0. Near spectral edges pass a denser schedule; the
// err_estimate stays honest either way.
inline const std::vector<double> default_eta_schedule{1e-2, 1e-3, 1e-4};
omega_value dos_continued(const coefficient_cache& c, const levy_spec& spec, double E,
                          const std::vector<double>& eta_schedule = default_eta_schedule);
omega_value dos_continued(const levy_spec& spec, double E,
                          const std::vector<double>& eta_schedule = default_eta_schedule);

// Positive recessive solution of E f(n+1) - c(n) f(n) + f(n-1) = 0 with
// f(0) = 1, built from the remainder recursion; entries 0..n_max.
std::vector<double> mellin_sequence(const levy_spec& spec, double E, int n_max);

// kappa(a, b) with kappa(dt) = N(t) dt / t, computed two ways: first
// integrating Im K(t + i eta)/t and then extrapolating eta, and second
// integrating the pointwise-extrapolated N(t)/t. The pair must agree.
std::pair<double, double> stieltjes_inversion_check(const levy_spec& spec, double a, double b,
                                                    int grid = 64);

// Coefficients mu_0..mu_order of -K(E)/E = sum mu_k E^k about E = 0; these
// are the negative moments int t^{-k-1} kappa(dt), so all must be positive.
std::vector<double> cf_series_at_zero(const levy_spec& spec, int order);

// CSV dump (header + one row per trace entry) for convergence diagnostics.
void dump_convergents(std::ostream& out, const std::vector<cf_trace_row>& rows);

}  // namespace levydos

#pragma once

// Lévy process specifications and the quantities derived from them: the
// exponent Λ(θ) with E e^{iθW(x)} = e^{xΛ(θ)}, the difference-equation
// coefficient c(s) = −Λ(is)/s, measure tails, interlacing (finite-activity)
// approximations, and the two Appendix distributions (one-sided stable and
// gamma) used to validate samplers.
//
// Drift convention: drift_a stores a, the process is W(x) = 2a·x + jumps,
// so a pure drift has c(s) = 2a. The Brownian family is parameterised by
// (g, μ) with Λ(θ) = 2g(iμθ − θ²).

#include <complex>
#include <string>
#include <vector>

namespace levydos {

using cplx = std::complex<double>;

enum class family {
    pure_drift,
    brownian_drift,
    exp_poisson,
    hermite,
    alpha_stable,
    gamma_process,
    custom_tabulated,
};

// Tail table for custom measures: strictly decreasing positive tail values
// m(y_i, ∞) at increasing y_i > 0. Between knots the tail is exponential
// (log-linear in y); below the first knot it is a power law fitted to the
// first segment (exponent must be < 1 so the measure has finite mean);
// beyond the last knot the final exponential rate continues.
struct tail_table {
    std::vector<double> y;
    std::vector<double> tail;
};

struct levy_spec {
    family fam = family::pure_drift;
    double drift_a = 0.0;
    double gaussian_g = 0.0;
    // family-specific parameters (unused ones stay 0)
    double mu = 0.0;     // brownian_drift
    double rho = 0.0;    // exp_poisson intensity
    double q = 0.0;      // exp_poisson / hermite
    double p = 0.0;      // hermite / alpha_stable scale
    double alpha = 0.0;  // alpha_stable
    double b = 0.0;      // gamma_process
    tail_table table;    // custom_tabulated

    bool is_subordinator() const { return fam != family::brownian_drift; }
    // c(0) = E W(1) exists (alpha_stable is the one infinite-mean family)
    bool has_finite_mean() const { return fam != family::alpha_stable; }

    static levy_spec pure_drift(double a);
    static levy_spec brownian(double g, double mu);
    static levy_spec exp_poisson(double rho, double q, double a = 0.0);
    static levy_spec hermite(double p, double q, double a = 0.0);
    static levy_spec alpha_stable(double p, double alpha);
    static levy_spec gamma_process(double b, double a = 0.0);
    static levy_spec custom(tail_table t, double a = 0.0);
};

// Λ(θ). Subordinators require Im θ ≥ 0 (analyticity half-plane); the
// Brownian family accepts any complex θ.
cplx levy_exponent(const levy_spec& spec, cplx theta);

// c(s) = −Λ(is)/s for s > 0, extended to s = 0 by the limit E W(1).
// Throws for alpha_stable at s = 0 (infinite mean).
double coefficient_c(const levy_spec& spec, double s);

// m(y, ∞); zero for measureless families.
double measure_tail(const levy_spec& spec, double y);

// Finite-activity approximation: jumps below eps are absorbed into the
// drift as their exact mean (∫₀^ε y m(dy), halved because drift_a is the
// "a" of W = 2a·x + …), jumps above eps arrive at rate m(eps,∞) with the
// normalised restricted tail as their law.
struct interlacing_spec {
    double effective_drift = 0.0;  // same convention as levy_spec::drift_a
    double jump_rate = 0.0;        // m(eps, ∞)
    double epsilon = 0.0;

    // inverse CDF of the jump law: v ∈ (0,1) → height y ≥ eps
    double jump_quantile(double v) const;

    // interpolation table: y against log of the survival fraction
    std::vector<double> log_survival;  // decreasing from 0
    std::vector<double> height;        // increasing from eps
};

interlacing_spec interlace(const levy_spec& spec, double eps);

// Density of the one-sided stable law W(x) with Λ(θ) = −(−iθ)^α (p = 1
// normalisation; rescale u and the value by (px)^{1/α} for general p).
// Branch-cut quadrature, switching to the saddle-point form deep in the
// left tail where the integral loses all its mass.
double stable_density(double alpha, double u, double x);

// Gamma process marginal: density of W(x) at u and the n-th moment.
struct density_and_moment {
    double density = 0.0;
    double moment = 0.0;
};
density_and_moment gamma_density_and_moments(double b, double x, double u, int n);

// JSON round trip: {"family": "...", "params": {...}}. Key names are the
// member names above; custom tables serialise as parallel arrays y/tail.
std::string spec_to_json(const levy_spec& spec);
levy_spec spec_from_json(const std::string& text);

// Two-column CSV (y, tail), comments with '#', header row optional.
tail_table tail_table_from_csv(const std::string& path);

}  // namespace levydos

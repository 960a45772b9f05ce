#pragma once

// Low-energy behaviour of the integrated density of states.
//
// Below the asymptotic threshold the rescaled difference equation
// y(n+1) + y(n-1) = c(n)/sqrt(E) y(n) has a turning point n_k where
// c(n) falls through 2 sqrt(E). A discrete WKB pass through it gives
//
//   ln N(E) = -(2/h) int_h^{x_k} arccosh C(t) dt - arccosh C(h) + ln k + O(1)
//
// with a family-specific small parameter h(E) and coefficient profile C
// (C(nh) = c(n)/2k, C(x_k) = 1). The catalogue collects the leading forms
// this machinery produces, the comparison exponents for the scalar-potential
// problem -psi'' + w psi = E psi driven by the same noise (the Kotani case),
// and the Tauberian map from spectral tails to anomalous-diffusion exponents.

#include <cstdint>
#include <optional>
#include <vector>

#include "levydos/levy_process.hpp"

namespace levydos {

// Families with a catalogued low-energy form. The kotani_* entries describe
// the scalar-potential comparison problem, not the supersymmetric operator.
enum class asym_family {
    finite_measure,         // any subordinator with m(0,inf) = rho < inf
    hermite,                // half-integral family (exact closed form)
    alpha_stable,           // measures with the stable y^{-1-alpha} singularity
    gamma_marginal,         // m(dy) ~ dy/y near 0: logarithmic correction
    kotani_finite_measure,  // scalar potential, finite measure (Lifshits tail)
    kotani_alpha_stable,    // scalar potential, stable subordinator
};

const char* to_string(asym_family fam);

// Leading behaviour
//   ln N(E) = -exponential_coeff * E^{exponential_power} * (ln(1/E) if marked)
//             + algebraic_power * ln E + O(1)
// The O(1) constant is deliberately not part of the form. algebraic_power is
// absent where no route pins the prefactor. Entries for the infinite-measure
// singularity classes rest on small-jump heuristics rather than a solvable
// model and carry the heuristic flag.
struct asymptotic_form {
    double exponential_coeff = 0.0;  // > 0
    double exponential_power = 0.0;  // < 0
    std::optional<double> algebraic_power;
    bool log_correction = false;
    asym_family validity = asym_family::finite_measure;
    bool heuristic = false;
};

struct asym_params {
    double rho = 0.0;    // finite_measure / kotani_finite_measure
    double p = 0.0;      // hermite / alpha_stable / kotani_alpha_stable
    double q = 0.0;      // hermite
    double alpha = 0.0;  // alpha_stable / kotani_alpha_stable
};

asymptotic_form asymptotic_catalog(asym_family fam, const asym_params& params);

// Largest n with c(n) >= 2k, the boundary between the exponentially growing
// and oscillatory regimes at energy E = k^2. Needs a driftless subordinator
// (c decreasing to zero; an infinite measure sum is fine) and 2k < c(1).
std::int64_t turning_point(const levy_spec& spec, double k);

// mu(alpha) = int_0^1 arccosh(t^{alpha-1}) dt, the turning-point integral of
// the stable coefficient profile C(x) = x^{alpha-1}. Equal closed forms:
// (1-alpha) 2F1(1/2, b; 1+b; 1) and (1/2) B(1/2, b) with b = 1/(2(1-alpha)).
double mu_alpha(double alpha);

// The WKB estimate above: exponential plus algebraic terms of ln N(E); the
// O(1) constant is not computed. Scaling maps exist for the exponential-jump,
// half-integral, and stable families only; other families are rejected.
double wkb_log_dos(const levy_spec& spec, double E);

// Tauberian map: ln N ~ -E^{x} with x = exponential_power < 0 turns into a
// return-probability decay ln P ~ -t^{nu}, nu = x/(x-1) in (0,1). A
// log_correction on the form carries over to a log factor in t.
double diffusion_exponent(const asymptotic_form& form);

// Least-squares fit of ln N against a catalogued shape: coefficients of
// -E^{exponential_power} (with the shape's log factor), ln E, and 1. The
// shape's own coefficient values are ignored; only its powers matter.
struct low_energy_fit {
    double exponential_coeff = 0.0;
    double algebraic_power = 0.0;
    double constant = 0.0;
    std::vector<double> residuals;  // data minus fit, per point
    double rms_residual = 0.0;
    double max_abs_residual = 0.0;
};

low_energy_fit fit_low_energy(const std::vector<double>& energy, const std::vector<double>& dos,
                              const asymptotic_form& shape);

}  // namespace levydos

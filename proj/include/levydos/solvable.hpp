#pragma once

// Closed-form evaluations of Omega(E) = gamma(E) - i pi N(E) for the four
// environments where the Mellin difference equation
//     E fhat(s+1) - c(s) fhat(s) + fhat(s-1) = 0
// is solvable outright: pure drift, Brownian motion (Bessel ratios),
// exponential jumps (a hypergeometric solution), and the half-integral
// gamma-ratio family (parabolic cylinder ratios).  These serve as oracles
// for the continued-fraction engine and the Monte Carlo sampler.

#include <complex>

#include "levydos/cfrac.hpp"
#include "levydos/levy_process.hpp"

namespace levydos {

// A levy_spec vetted to have a closed form.  Construction rejects families
// without one (stable, gamma, tabulated), extra drift on top of the jump
// families (the solutions below assume a = 0 there), and the q = 0
// half-integral variant, which only the continued-fraction route covers.
struct closed_form_model {
    enum class kind { drift, brownian, exp_poisson, hermite };
    kind form = kind::drift;
    levy_spec spec;

    static closed_form_model from_spec(const levy_spec& s);
};

// Omega(E) off the spectrum: E complex, or real below the spectral edge
// (a^2 for pure drift, 0 for the jump families).  On the cut use dos_closed.
// The half-integral family is evaluated for real E < 0 only; its parabolic
// cylinder argument leaves the implemented axes for general complex E.
omega_value omega_closed(const closed_form_model& m, cplx E);
omega_value omega_closed(const levy_spec& s, cplx E);

// Boundary values on the spectrum: N(E) and gamma(E) at real E > 0, taken
// as the limit from the upper half-plane.
omega_value dos_closed(const closed_form_model& m, double E);
omega_value dos_closed(const levy_spec& s, double E);

// Stationary density of the Riccati variable at E < 0, normalised so the
// integral over the support is 1 (the normalisation is done by quadrature
// on every call).  Points off the support return 0.  Pure drift has a point
// mass, not a density, and is rejected.
double invariant_density(const closed_form_model& m, double E, double z);
double invariant_density(const levy_spec& s, double E, double z);

// Mellin transform fhat(s) = int z^{-s} f(z) dz of the stationary density,
// normalised to fhat(0) = 1, for s >= 0 and E < 0.
double mellin_closed(const closed_form_model& m, double s, double E);
double mellin_closed(const levy_spec& s, double sarg, double E);

// High-energy limit of gamma(E) for the half-integral family: unlike the
// classical cases gamma does not vanish as E -> +infinity but approaches
//   p * [ G(q/2)/(2 G((q+1)/2)) + (2^q/sqrt(pi)) (G((q+1)/2)^2 - (q/2) G(q/2)^2) / G(q) ].
double gamma_infinity_hermite(double p, double q);

}  // namespace levydos

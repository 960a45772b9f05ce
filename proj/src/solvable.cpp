#include "levydos/solvable.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "levydos/errors.hpp"
#include "levydos/quadrature.hpp"
#include "levydos/specfun.hpp"

namespace levydos {
namespace {

constexpr double pi = 3.14159265358979323846;

void require(bool ok, const char* msg) {
    if (!ok) throw validation_error(msg);
}

// principal sqrt(-E): positive real for E < 0, Re > 0 everywhere off the cut
// [0, inf), and exactly -i sqrt(E) in the limit from the upper half-plane
// (signed zero does the right thing for real inputs).
cplx root_neg(cplx E) { return std::sqrt(-E); }

double gamma_ratio(double num, double den) {
    return std::exp(std::lgamma(num) - std::lgamma(den));
}

// Recessive solution of the difference equation for exponential jumps,
//   u(s) = k^{-s} B(rho/2k, q+s+1) 2F1(q+s+1, rho/2k + 1; q+s+1+rho/2k; -1),
// valid for complex k with Re k > 0 (k = -i sqrt(E) on the spectrum).
cplx masson_u(double rho, double q, cplx k, double s) {
    const cplx h = 0.5 * rho / k;
    const cplx a(q + s + 1.0);
    return std::pow(k, -s) * specfun::beta_fn(h, a) *
           specfun::hyp2f1_at_minus1(a, h + 1.0, a + h);
}

// Omega for the half-integral family at real E < 0, where the parabolic
// cylinder argument x = p sqrt(-2/E) sits on the real axis.  The scaled
// evaluations keep the ratio finite when x is large (E near 0) and the
// unscaled D would underflow.
double hermite_omega_neg(double p, double q, double E, double* err) {
    const double x = p * std::sqrt(-2.0 / E);
    const auto d1 = specfun::pcf_d_scaled(-q - 1.0, x);
    const auto d0 = specfun::pcf_d_scaled(-q, x);
    const double big_g = gamma_ratio(0.5 * q, 0.5 * (q + 1.0));
    const double ratio =
        d1.mantissa.real() / d0.mantissa.real() * std::exp(d1.log_scale - d0.log_scale);
    if (err) *err = d1.est_error + d0.est_error + 1e-15;
    return 0.5 * p * big_g + q * std::sqrt(-E) / std::sqrt(2.0) * big_g * ratio;
}

omega_value pack(cplx E, cplx omega, double err) {
    omega_value out;
    out.E = E;
    out.omega = omega;
    out.gamma = omega.real();
    out.N = std::max(0.0, -omega.imag() / pi);
    out.method = omega_method::closed_form;
    out.err_estimate = err;
    return out;
}

// lower edge of the spectrum: the closed forms are analytic off [edge, inf)
double spectral_edge(const closed_form_model& m) {
    return m.form == closed_form_model::kind::drift ? m.spec.drift_a * m.spec.drift_a : 0.0;
}

// Unnormalised stationary density, parametrised by the distance x > 0 from
// the support edge so the quadrature nodes clustering at the edge never hit
// a z - k cancellation (z - k computed from nearby doubles is exact, but the
// integrator's own shift a + x can round back onto a).
double density_from_edge(const closed_form_model& m, double E, double x) {
    const double k = std::sqrt(-E);
    switch (m.form) {
        case closed_form_model::kind::brownian: {
            const double g = m.spec.gaussian_g;
            return std::exp((m.spec.mu - 1.0) * std::log(x) - (x - E / x) / (2.0 * g));
        }
        case closed_form_model::kind::exp_poisson: {
            // (z-k)^{h-1} with h < 1 is an integrable singularity; capping the
            // log keeps the extreme denormal-offset nodes finite and perturbs
            // the integral below 1e-290
            const double h = 0.5 * m.spec.rho / k;
            const double lg = -m.spec.q * std::log(k + x) + (h - 1.0) * std::log(x) -
                              (h + 1.0) * std::log(x + 2.0 * k);
            return std::exp(std::min(lg, 700.0));
        }
        case closed_form_model::kind::hermite: {
            // shape of the Mellin inversion, with the noise strength p kept in
            // the essential-singularity exponent; z^2 - k^2 = x (x + 2k)
            const double p2 = m.spec.p * m.spec.p;
            const double z = k + x, d2 = x * (x + 2.0 * k);
            return std::exp((1.0 - m.spec.q) * std::log(z) - 1.5 * std::log(d2) -
                            p2 * (z * z / (k * k)) / d2);
        }
        case closed_form_model::kind::drift:
            break;
    }
    throw validation_error("invariant_density: pure drift concentrates on a point mass");
}

}  // namespace

closed_form_model closed_form_model::from_spec(const levy_spec& s) {
    closed_form_model m;
    m.spec = s;
    switch (s.fam) {
        case family::pure_drift:
            m.form = kind::drift;
            return m;
        case family::brownian_drift:
            m.form = kind::brownian;
            return m;
        case family::exp_poisson:
            require(s.drift_a == 0.0,
                    "closed_form_model: exponential jumps plus drift has no closed form");
            m.form = kind::exp_poisson;
            return m;
        case family::hermite:
            require(s.drift_a == 0.0,
                    "closed_form_model: half-integral family plus drift has no closed form");
            require(s.q > 0.0,
                    "closed_form_model: the q = 0 variant has no closed form; "
                    "use the continued-fraction route on its coefficients");
            m.form = kind::hermite;
            return m;
        case family::alpha_stable:
        case family::gamma_process:
        case family::custom_tabulated:
            break;
    }
    throw validation_error("closed_form_model: no closed form for this family");
}

omega_value omega_closed(const closed_form_model& m, cplx E) {
    if (E.imag() == 0.0 && E.real() >= spectral_edge(m))
        throw validation_error(
            "omega_closed: E lies on the branch cut; dos_closed takes the boundary values");
    switch (m.form) {
        case closed_form_model::kind::drift: {
            const double a = m.spec.drift_a;
            return pack(E, std::sqrt(a * a - E), 1e-15);
        }
        case closed_form_model::kind::brownian: {
            const double g = m.spec.gaussian_g;
            const cplx k = root_neg(E);
            const auto b1 = specfun::bessel_k_i(1.0 - m.spec.mu, k / g);
            const auto b0 = specfun::bessel_k_i(-m.spec.mu, k / g);
            // the cosh-integral representation degrades as k/g turns imaginary
            // (E hugging the cut); fail loudly rather than return its garbage
            const double rel =
                b1.est_error / std::abs(b1.k) + b0.est_error / std::abs(b0.k);
            if (!(rel < 1e-8))
                throw numeric_error(
                    "omega_closed: Macdonald quadrature loses accuracy this close to "
                    "the branch cut; boundary values come from dos_closed");
            return pack(E, m.spec.mu * g + k * b1.k / b0.k, rel + 1e-15);
        }
        case closed_form_model::kind::exp_poisson: {
            const cplx k = root_neg(E);
            const cplx f1 = masson_u(m.spec.rho, m.spec.q, k, 1.0) /
                            masson_u(m.spec.rho, m.spec.q, k, 0.0);
            return pack(E, 0.5 * m.spec.rho / m.spec.q - E * f1, 1e-13);
        }
        case closed_form_model::kind::hermite: {
            if (E.imag() != 0.0)
                throw validation_error(
                    "omega_closed: half-integral family is implemented for real E only "
                    "(E < 0 here, E > 0 via dos_closed)");
            double err = 0.0;
            const double om = hermite_omega_neg(m.spec.p, m.spec.q, E.real(), &err);
            return pack(E, om, err);
        }
    }
    throw validation_error("omega_closed: unknown model");
}

omega_value dos_closed(const closed_form_model& m, double E) {
    require(E > 0.0, "dos_closed: E must lie in the spectrum interior (E > 0)");
    switch (m.form) {
        case closed_form_model::kind::drift: {
            const double a2 = m.spec.drift_a * m.spec.drift_a;
            const cplx om = E > a2 ? cplx(0.0, -std::sqrt(E - a2)) : cplx(std::sqrt(a2 - E));
            return pack(E, om, 1e-15);
        }
        case closed_form_model::kind::brownian: {
            // boundary values from the upper half-plane: k -> -ik turns the
            // Macdonald functions into Hankel functions of the first kind
            const double g = m.spec.gaussian_g;
            const double k = std::sqrt(E);
            const cplx h1 = specfun::hankel1(1.0 - m.spec.mu, k / g);
            const cplx h0 = specfun::hankel1(-m.spec.mu, k / g);
            return pack(E, m.spec.mu * g + k * h1 / h0, 1e-13);
        }
        case closed_form_model::kind::exp_poisson: {
            const cplx k = root_neg(cplx(E, 0.0));  // = -i sqrt(E)
            const cplx f1 = masson_u(m.spec.rho, m.spec.q, k, 1.0) /
                            masson_u(m.spec.rho, m.spec.q, k, 0.0);
            return pack(E, 0.5 * m.spec.rho / m.spec.q - E * f1, 1e-12);
        }
        case closed_form_model::kind::hermite: {
            // gamma from the continuation of the parabolic cylinder ratio
            // (x = p sqrt(-2/E) rotates onto the positive imaginary axis as E
            // crosses to +), N from the squared-modulus formula; the latter is
            // manifestly nonnegative and the two agree on the imaginary part
            // (checked in the tests).  Scaled evaluations: |D| grows like
            // exp(r^2/4) on the imaginary axis and would overflow for small E.
            const double p = m.spec.p, q = m.spec.q;
            const cplx ir(0.0, p * std::sqrt(2.0 / E));
            const auto d1 = specfun::pcf_d_scaled(-q - 1.0, ir);
            const auto d0 = specfun::pcf_d_scaled(-q, ir);
            const cplx w = d1.mantissa / d0.mantissa * std::exp(d1.log_scale - d0.log_scale);
            const double big_g = gamma_ratio(0.5 * q, 0.5 * (q + 1.0));
            const double wing = q * std::sqrt(0.5 * E) * big_g;
            const double gamma = 0.5 * p * big_g + wing * w.imag();
            const double n_mod = 0.5 / std::sqrt(pi) *
                                 std::exp(std::lgamma(0.5 * q) - std::lgamma(q) -
                                          std::lgamma(0.5 * (q + 1.0)) - 2.0 * d0.log_scale) *
                                 std::sqrt(E) / std::norm(d0.mantissa);
            const double err = d1.est_error + d0.est_error + 1e-15;
            return pack(E, cplx(gamma, -pi * n_mod), err);
        }
    }
    throw validation_error("dos_closed: unknown model");
}

double invariant_density(const closed_form_model& m, double E, double z) {
    require(E < 0.0, "invariant_density: defined below the spectrum (E < 0)");
    if (m.form == closed_form_model::kind::drift)
        throw validation_error("invariant_density: pure drift concentrates on a point mass");
    const double edge = m.form == closed_form_model::kind::brownian ? 0.0 : std::sqrt(-E);
    if (!(z > edge)) return 0.0;
    const double norm =
        quad::half_line([&](double x) { return density_from_edge(m, E, x); }, 0.0)
            .require("invariant_density normalisation");
    return density_from_edge(m, E, z - edge) / norm;
}

double mellin_closed(const closed_form_model& m, double s, double E) {
    require(s >= 0.0, "mellin_closed: s must be >= 0");
    require(E < 0.0, "mellin_closed: defined below the spectrum (E < 0)");
    switch (m.form) {
        case closed_form_model::kind::drift: {
            const double a = m.spec.drift_a;
            return std::pow(a + std::sqrt(a * a - E), -s);
        }
        case closed_form_model::kind::brownian: {
            const double g = m.spec.gaussian_g;
            const double k = std::sqrt(-E);
            const auto bs = specfun::bessel_k_i(s - m.spec.mu, cplx(k / g));
            const auto b0 = specfun::bessel_k_i(-m.spec.mu, cplx(k / g));
            return std::pow(k, -s) * bs.k.real() / b0.k.real();
        }
        case closed_form_model::kind::exp_poisson: {
            const cplx k(std::sqrt(-E));
            return (masson_u(m.spec.rho, m.spec.q, k, s) /
                    masson_u(m.spec.rho, m.spec.q, k, 0.0))
                .real();
        }
        case closed_form_model::kind::hermite: {
            // fhat(s) = [sqrt(-2/E)]^s G((s+q+1)/2)/G((q+1)/2) D_{-s-q}(x)/D_{-q}(x)
            // with x = p sqrt(-2/E); assembled in log form since D decays fast in s
            const double q = m.spec.q;
            const double x = m.spec.p * std::sqrt(-2.0 / E);
            const auto ds = specfun::pcf_d_scaled(-s - q, x);
            const auto d0 = specfun::pcf_d_scaled(-q, x);
            const double logs = 0.5 * s * std::log(-2.0 / E) +
                                std::lgamma(0.5 * (s + q + 1.0)) -
                                std::lgamma(0.5 * (q + 1.0)) + ds.log_scale - d0.log_scale;
            return ds.mantissa.real() / d0.mantissa.real() * std::exp(logs);
        }
    }
    throw validation_error("mellin_closed: unknown model");
}

double gamma_infinity_hermite(double p, double q) {
    require(p > 0.0 && q > 0.0, "gamma_infinity_hermite: need p > 0, q > 0");
    const double gh = std::tgamma(0.5 * (q + 1.0));
    const double gq2 = std::tgamma(0.5 * q);
    const double bracket = (gh * gh - 0.5 * q * gq2 * gq2) / std::tgamma(q);
    return p * (0.5 * gq2 / gh + std::pow(2.0, q) / std::sqrt(pi) * bracket);
}

omega_value omega_closed(const levy_spec& s, cplx E) {
    return omega_closed(closed_form_model::from_spec(s), E);
}
omega_value dos_closed(const levy_spec& s, double E) {
    return dos_closed(closed_form_model::from_spec(s), E);
}
double invariant_density(const levy_spec& s, double E, double z) {
    return invariant_density(closed_form_model::from_spec(s), E, z);
}
double mellin_closed(const levy_spec& s, double sarg, double E) {
    return mellin_closed(closed_form_model::from_spec(s), sarg, E);
}

}  // namespace levydos

#pragma once

// Special functions needed by the closed-form models: complex Gamma, Beta,
// modified Bessel K/I on the right half plane, Hankel H1 on the positive real
// axis, the parabolic cylinder function D_nu of real or purely imaginary
// argument, and 2F1 evaluated at -1.
//
// Coverage is deliberately narrow: exactly the parameter boxes the model
// formulas use. D_nu of large argument is exposed in a scaled form
// (mantissa, log_scale) because the interesting regimes overflow double.

#include <complex>

namespace levydos::specfun {

using cplx = std::complex<double>;

enum class method { series, recurrence, integral, asymptotic };

struct fn_result {
    cplx value;
    double est_error = 0.0; // absolute
    method method_used = method::series;
};

// value() = mantissa * exp(log_scale); log_scale is real
struct scaled_fn_result {
    cplx mantissa;
    double log_scale = 0.0;
    double est_error = 0.0; // relative to |mantissa|
    method method_used = method::integral;
    cplx value() const { return mantissa * std::exp(log_scale); }
};

// Gamma on the cut plane; poles at non-positive integers are rejected.
cplx gamma_fn(cplx z);

double beta_fn(double a, double b);
cplx beta_fn(cplx a, cplx b);

// K_nu(z) and I_nu(z) for real order, Re z > 0.
struct bessel_pair {
    cplx k;
    cplx i;
    double est_error = 0.0;
};
bessel_pair bessel_k_i(double nu, cplx z);

// H1_nu(x) = J_nu(x) + i Y_nu(x), x > 0, any real order.
cplx hankel1(double nu, double x);

// D_nu(z) for nu <= 1, z on the real or imaginary axis.
fn_result pcf_d(double nu, cplx z);
scaled_fn_result pcf_d_scaled(double nu, cplx z);

// 2F1(a,b;c;-1) via the Pfaff transformation to argument 1/2.
double hyp2f1_at_minus1(double a, double b, double c);
cplx hyp2f1_at_minus1(cplx a, cplx b, cplx c);

namespace detail {
// individual branches, exposed so the crossover window can be tested
scaled_fn_result pcf_d_integral(double nu, cplx z);
scaled_fn_result pcf_d_asymptotic(double nu, cplx z);
double pcf_switch_radius(double nu);
} // namespace detail

} // namespace levydos::specfun

#pragma once

// Thin adapters around the deterministic adaptive quadrature schemes in
// boost::math. Everything numerical in this library that needs an integral
// goes through these entry points so tolerances are handled uniformly.
//
//   finite(f, a, b)    tanh-sinh on (a,b); integrable endpoint singularities ok
//   half_line(f, a)    exp-sinh on (a,inf); integrand must decay
//   kronrod(f, a, b)   adaptive Gauss-Kronrod 15 on [a,b]; smooth integrands

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <complex>
#include <limits>

#include "levydos/errors.hpp"

namespace levydos::quad {

struct options {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    // termination tolerance handed to the underlying scheme; tighter than the
    // acceptance thresholds so the error estimate is meaningful
    double term_tol = 1e-12;
};

template <class V>
struct outcome {
    V value{};
    double est_error = 0.0; // absolute
    bool converged = false;

    V require(const char* what) const {
        if (!converged)
            throw numeric_error(std::string(what) + ": quadrature did not converge (est_error=" +
                                std::to_string(est_error) + ")");
        return value;
    }
};

namespace detail {
template <class V>
bool within(const V& value, double err, const options& opt) {
    using std::abs;
    return err <= opt.abs_tol || err <= opt.rel_tol * abs(value);
}
} // namespace detail

template <class F>
auto finite(F&& f, double a, double b, const options& opt = {}) {
    using V = decltype(f(a));
    boost::math::quadrature::tanh_sinh<double> integrator(15);
    double err = 0, l1 = 0;
    V v = integrator.integrate(f, a, b, opt.term_tol, &err, &l1);
    (void)l1;
    outcome<V> r;
    r.value = v;
    r.est_error = err; // absolute: difference of the last two refinement levels
    r.converged = detail::within(v, r.est_error, opt);
    return r;
}

template <class F>
auto half_line(F&& f, double a, const options& opt = {}) {
    using V = decltype(f(a + 1.0));
    boost::math::quadrature::exp_sinh<double> integrator(12);
    double err = 0, l1 = 0;
    V v = integrator.integrate(f, a, std::numeric_limits<double>::infinity(), opt.term_tol, &err,
                               &l1);
    (void)l1;
    outcome<V> r;
    r.value = v;
    r.est_error = err;
    r.converged = detail::within(v, r.est_error, opt);
    return r;
}

template <class F>
auto kronrod(F&& f, double a, double b, const options& opt = {}) {
    using V = decltype(f(a));
    double err = 0;
    V v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, opt.term_tol,
                                                                        &err);
    outcome<V> r;
    r.value = v;
    r.est_error = err;
    r.converged = detail::within(v, r.est_error, opt);
    return r;
}

} // namespace levydos::quad

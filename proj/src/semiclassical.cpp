#include "levydos/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "levydos/errors.hpp"
#include "levydos/quadrature.hpp"

namespace levydos {

namespace {

constexpr double pi = 3.14159265358979323846;

void require(bool ok, const char* msg) {
    if (!ok) throw validation_error(msg);
}

double beta_fn(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

// arccosh clamped at the turning point, where C dips below 1 by roundoff.
double acosh_clamped(double c) { return std::acosh(std::max(1.0, c)); }

// Least squares via modified Gram-Schmidt; columns are the regressors.
std::vector<double> solve_lsq(std::vector<std::vector<double>> cols, std::vector<double> rhs) {
    const std::size_t m = rhs.size(), n = cols.size();
    std::vector<std::vector<double>> r(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            double dot = 0;
            for (std::size_t t = 0; t < m; ++t) dot += cols[i][t] * cols[j][t];
            r[i][j] = dot;
            for (std::size_t t = 0; t < m; ++t) cols[j][t] -= dot * cols[i][t];
        }
        double nrm = 0;
        for (double v : cols[j]) nrm += v * v;
        nrm = std::sqrt(nrm);
        if (!(nrm > 1e-12)) throw numeric_error("fit_low_energy: collinear regressors");
        r[j][j] = nrm;
        for (double& v : cols[j]) v /= nrm;
    }
    std::vector<double> qtb(n);
    for (std::size_t j = 0; j < n; ++j) {
        double dot = 0;
        for (std::size_t t = 0; t < m; ++t) dot += cols[j][t] * rhs[t];
        qtb[j] = dot;
    }
    std::vector<double> x(n);
    for (std::size_t j = n; j-- > 0;) {
        double s = qtb[j];
        for (std::size_t i = j + 1; i < n; ++i) s -= r[j][i] * x[i];
        x[j] = s / r[j][j];
    }
    return x;
}

double rms(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

const char* to_string(asym_family fam) {
    switch (fam) {
        case asym_family::finite_measure: return "finite-measure";
        case asym_family::hermite: return "hermite";
        case asym_family::alpha_stable: return "alpha-stable";
        case asym_family::gamma_marginal: return "gamma-marginal";
        case asym_family::kotani_finite_measure: return "kotani-finite-measure";
        case asym_family::kotani_alpha_stable: return "kotani-alpha-stable";
    }
    return "?";
}

std::int64_t turning_point(const levy_spec& spec, double k) {
    require(k > 0 && std::isfinite(k), "turning_point: k must be positive");
    require(spec.is_subordinator(), "turning_point: environment must be a subordinator");
    require(spec.drift_a == 0.0, "turning_point: drift keeps c(n) away from zero");
    const double bar = 2.0 * k;
    require(coefficient_c(spec, 1.0) > bar, "turning_point: 2 sqrt(E) >= c(1), energy too high for the asymptotic regime");
    // c is decreasing: bracket by doubling, then bisect the last n with c(n) >= 2k.
    std::int64_t lo = 1, hi = 2;
    while (coefficient_c(spec, static_cast<double>(hi)) >= bar) {
        lo = hi;
        if (hi > (std::int64_t{1} << 52)) throw numeric_error("turning_point: index overflow; energy too small");
        hi *= 2;
    }
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        (coefficient_c(spec, static_cast<double>(mid)) >= bar ? lo : hi) = mid;
    }
    return lo;
}

double mu_alpha(double alpha) {
    require(alpha > 0.0 && alpha < 1.0, "mu_alpha: alpha must lie in (0,1)");
    if (1.0 - alpha < 1e-10) throw numeric_error("mu_alpha: diverges as alpha -> 1");
    const double b = 0.5 / (1.0 - alpha);
    return 0.5 * beta_fn(0.5, b);
}

double wkb_log_dos(const levy_spec& spec, double E) {
    require(E > 0 && std::isfinite(E), "wkb_log_dos: E must be positive");
    const double k = std::sqrt(E);

    // Family-specific scaling map: step h, profile C with C(nh) = c(n)/(2k),
    // turning point x_k solving C(x_k) = 1.
    double h = 0, x_k = 0;
    std::function<double(double)> C;
    switch (spec.fam) {
        case family::exp_poisson: {
            require(spec.drift_a == 0.0, "wkb_log_dos: drift not supported");
            const double rho = spec.rho, q = spec.q;
            h = k;
            x_k = 0.5 * rho - q * h;
            C = [rho, q, h](double x) { return 0.5 * rho / (x + q * h); };
            break;
        }
        case family::hermite: {
            require(spec.drift_a == 0.0, "wkb_log_dos: drift not supported");
            const double p = spec.p, q = spec.q;
            h = 2.0 * E / (p * p);
            const double shift = h * (q - 0.5);
            x_k = 1.0 - shift;
            C = [shift](double x) { return 1.0 / std::sqrt(x + shift); };
            break;
        }
        case family::alpha_stable: {
            const double a = spec.alpha;
            h = std::pow(2.0 * k / spec.p, 1.0 / (1.0 - a));
            x_k = 1.0;
            C = [a](double x) { return std::pow(x, a - 1.0); };
            break;
        }
        default:
            throw validation_error(
                "wkb_log_dos: no scaling map for this family; supported: exponential-jump, half-integral, stable-singularity");
    }
    require(x_k > h, "wkb_log_dos: 2 sqrt(E) >= c(1), energy too high for the asymptotic regime");

    // arccosh C has a sqrt(x_k - x) zero at the turning point; substitute
    // x = x_k - u^2 so the integrand is smooth there.
    const double umax = std::sqrt(x_k - h);
    auto f = [&](double u) { return 2.0 * u * acosh_clamped(C(x_k - u * u)); };
    quad::options opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-11;
    const double action = quad::finite(f, 0.0, umax, opt).require("wkb_log_dos action integral");

    return -(2.0 / h) * action - acosh_clamped(C(h)) + std::log(k);
}

asymptotic_form asymptotic_catalog(asym_family fam, const asym_params& prm) {
    asymptotic_form out;
    out.validity = fam;
    switch (fam) {
        case asym_family::finite_measure:
            require(prm.rho > 0, "asymptotic_catalog: rho must be positive");
            out.exponential_coeff = 0.5 * pi * prm.rho;
            out.exponential_power = -0.5;
            break;
        case asym_family::hermite:
            require(prm.p > 0, "asymptotic_catalog: p must be positive");
            require(prm.q > 0, "asymptotic_catalog: q must be positive");
            out.exponential_coeff = prm.p * prm.p;
            out.exponential_power = -1.0;
            out.algebraic_power = 0.5 - prm.q;
            break;
        case asym_family::alpha_stable: {
            require(prm.p > 0, "asymptotic_catalog: p must be positive");
            require(prm.alpha > 0 && prm.alpha < 1, "asymptotic_catalog: alpha must lie in (0,1)");
            const double a = prm.alpha;
            out.exponential_coeff = mu_alpha(a) * std::pow(2.0, -a / (1.0 - a)) * std::pow(prm.p, 1.0 / (1.0 - a));
            out.exponential_power = -0.5 / (1.0 - a);
            out.algebraic_power = 0.5;
            out.heuristic = true;  // prefactor from small-jump matching, not a solvable model
            break;
        }
        case asym_family::gamma_marginal:
            out.exponential_coeff = 1.0;
            out.exponential_power = -0.5;
            out.log_correction = true;
            out.heuristic = true;
            break;
        case asym_family::kotani_finite_measure:
            require(prm.rho > 0, "asymptotic_catalog: rho must be positive");
            out.exponential_coeff = pi * prm.rho;
            out.exponential_power = -0.5;
            break;
        case asym_family::kotani_alpha_stable: {
            require(prm.p > 0, "asymptotic_catalog: p must be positive");
            require(prm.alpha > 0 && prm.alpha < 1, "asymptotic_catalog: alpha must lie in (0,1)");
            const double a = prm.alpha;
            const double scale = std::pow(prm.p * a / std::tgamma(1.0 - a), 1.0 / (1.0 - a));
            out.exponential_coeff = scale / beta_fn(1.0 / (1.0 - a), 0.5);
            out.exponential_power = -0.5 * (1.0 + a) / (1.0 - a);
            break;
        }
    }
    if (!(std::isfinite(out.exponential_coeff) && out.exponential_coeff > 0 && out.exponential_power < 0))
        throw numeric_error("asymptotic_catalog: degenerate form (alpha too close to 1?)");
    return out;
}

double diffusion_exponent(const asymptotic_form& form) {
    const double x = form.exponential_power;
    return x / (x - 1.0);
}

low_energy_fit fit_low_energy(const std::vector<double>& energy, const std::vector<double>& dos,
                              const asymptotic_form& shape) {
    require(energy.size() == dos.size(), "fit_low_energy: mismatched lengths");
    require(energy.size() >= 6, "fit_low_energy: need at least 6 points");
    for (std::size_t i = 0; i < energy.size(); ++i) {
        require(energy[i] > 0 && dos[i] > 0, "fit_low_energy: energies and dos values must be positive");
        if (shape.log_correction) require(energy[i] < 1.0, "fit_low_energy: log-corrected shapes need E < 1");
    }

    const std::size_t m = energy.size();
    std::vector<double> reg(m), lg(m), ones(m, 1.0), ln_n(m);
    double rmin = std::numeric_limits<double>::infinity(), rmax = 0;
    for (std::size_t i = 0; i < m; ++i) {
        double r = std::pow(energy[i], shape.exponential_power);
        if (shape.log_correction) r *= -std::log(energy[i]);
        reg[i] = -r;
        lg[i] = std::log(energy[i]);
        ln_n[i] = std::log(dos[i]);
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
    }
    if (!(rmax > 2.5 * rmin)) throw numeric_error("fit_low_energy: insufficient dynamic range in the exponential regressor");

    const std::vector<double> x = solve_lsq({reg, lg, ones}, ln_n);
    // A shape with no genuine exponential decay fits just as well without the
    // -E^power column; compare against the algebraic-only model.
    std::vector<double> res3(m), res2(m);
    const std::vector<double> x2 = solve_lsq({lg, ones}, ln_n);
    for (std::size_t i = 0; i < m; ++i) {
        res3[i] = ln_n[i] - (x[0] * reg[i] + x[1] * lg[i] + x[2]);
        res2[i] = ln_n[i] - (x2[0] * lg[i] + x2[1]);
    }
    if (!(x[0] > 0) || rms(res2) <= 2.0 * rms(res3))
        throw numeric_error("fit_low_energy: no exponential decay detected in the table");

    low_energy_fit out;
    out.exponential_coeff = x[0];
    out.algebraic_power = x[1];
    out.constant = x[2];
    out.residuals = std::move(res3);
    out.rms_residual = rms(out.residuals);
    out.max_abs_residual = 0;
    for (double r : out.residuals) out.max_abs_residual = std::max(out.max_abs_residual, std::abs(r));
    return out;
}

}  // namespace levydos

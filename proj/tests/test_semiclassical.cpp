#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "levydos/cfrac.hpp"
#include "levydos/errors.hpp"
#include "levydos/levy_process.hpp"
#include "levydos/quadrature.hpp"
#include "levydos/semiclassical.hpp"
#include "levydos/solvable.hpp"

using namespace levydos;
using doctest::Approx;

namespace {

constexpr double pi = 3.14159265358979323846;

// Unweighted least squares against basis columns, normal equations (small n).
std::vector<double> poly_fit(const std::vector<std::vector<double>>& cols,
                             const std::vector<double>& y) {
    const std::size_t n = cols.size(), m = y.size();
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t t = 0; t < m; ++t) a[i][j] += cols[i][t] * cols[j][t];
        for (std::size_t t = 0; t < m; ++t) a[i][n] += cols[i][t] * y[t];
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        std::swap(a[c], a[piv]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k <= n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t c = n; c-- > 0;) {
        double s = a[c][n];
        for (std::size_t k = c + 1; k < n; ++k) s -= a[c][k] * x[k];
        x[c] = s / a[c][c];
    }
    return x;
}

}  // namespace

TEST_CASE("turning point: exponential-jump, half-integral, stable, gamma families") {
    auto ep = levy_spec::exp_poisson(1.0, 1.0);
    CHECK(turning_point(ep, 0.05) == 9);

    // Independent oracle for the half-integral family: bisect the gamma-ratio
    // coefficient c(n) = p Gamma((n+q)/2) / Gamma((n+q+1)/2) directly.
    auto hm = levy_spec::hermite(1.0, 1.0);
    {
        const double k = 0.1;
        auto c = [](double n) {
            return std::exp(std::lgamma(0.5 * (n + 1.0)) - std::lgamma(0.5 * (n + 2.0)));
        };
        std::int64_t n = 1;
        while (c(static_cast<double>(n + 1)) >= 2.0 * k) ++n;
        CHECK(n == 49);
        CHECK(turning_point(hm, k) == n);
    }

    // Stable coefficients c(n) = p n^{alpha-1}: threshold is (2k/p)^{1/(alpha-1)}.
    auto st = levy_spec::alpha_stable(1.0, 0.5);
    CHECK(turning_point(st, 0.05) == 100);
    CHECK(turning_point(st, 0.01) == 2500);
    CHECK(turning_point(st, 0.003) == 27777);

    // Defining property at the returned index, across families.
    for (const auto& spec : {ep, hm, st, levy_spec::gamma_process(1.0)}) {
        for (double k : {0.05, 0.02}) {
            const std::int64_t n = turning_point(spec, k);
            CHECK(coefficient_c(spec, static_cast<double>(n)) >= 2.0 * k);
            CHECK(coefficient_c(spec, static_cast<double>(n + 1)) < 2.0 * k);
        }
    }

    CHECK_THROWS_AS(turning_point(ep, 0.0), validation_error);
    CHECK_THROWS_AS(turning_point(ep, -1.0), validation_error);
    // c(1) = rho/(1+q) = 1/2: k >= 1/4 has no turning point.
    CHECK(turning_point(ep, 0.125) == 3);
    CHECK_THROWS_AS(turning_point(ep, 0.25), validation_error);
    CHECK_THROWS_AS(turning_point(levy_spec::brownian(1.0, 0.0), 0.05), validation_error);
    CHECK_THROWS_AS(turning_point(levy_spec::exp_poisson(1.0, 1.0, 0.5), 0.05), validation_error);
}

TEST_CASE("mu_alpha matches its defining integral and hypergeometric form") {
    // Defining integral int_0^1 arccosh(t^{alpha-1}) dt, evaluated with the
    // turning-point substitution removed by splitting near t = 1.
    for (double a : {0.1, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9}) {
        auto f = [a](double u) {
            // t = 1 - u^2 flattens the sqrt singularity of arccosh at t = 1
            const double t = 1.0 - u * u;
            return 2.0 * u * std::acosh(std::max(1.0, std::pow(t, a - 1.0)));
        };
        quad::options opt;
        opt.abs_tol = 1e-13;
        const double integral = quad::finite(f, 0.0, 1.0, opt).require("mu integral");
        CHECK(mu_alpha(a) == Approx(integral).epsilon(1e-10));
    }

    // Gauss series for (1-alpha) 2F1(1/2, b; 1+b; 1) converges like M^{-1/2};
    // one Richardson step in 1/sqrt(M) removes the leading tail.
    for (double a : {0.3, 0.5}) {
        const double b = 0.5 / (1.0 - a);
        auto partial = [b](long m_terms) {
            double term = 1.0, s = 1.0;
            for (long n = 0; n < m_terms; ++n) {
                term *= (0.5 + n) * (b + n) / ((1.0 + b + n) * (1.0 + n));
                s += term;
            }
            return s;
        };
        const long m = 100000;
        const double ext = 2.0 * partial(4 * m) - partial(m);
        CHECK(mu_alpha(a) == Approx((1.0 - a) * ext).epsilon(1e-7));
    }

    CHECK(mu_alpha(0.5) == Approx(1.0).epsilon(1e-13));
    CHECK(mu_alpha(1e-8) == Approx(0.5 * pi).epsilon(1e-6));

    // Positive and strictly decreasing up through 0.95.
    double prev = mu_alpha(0.05);
    for (double a = 0.10; a < 0.951; a += 0.05) {
        const double v = mu_alpha(a);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }

    CHECK_THROWS_AS(mu_alpha(0.0), validation_error);
    CHECK_THROWS_AS(mu_alpha(1.0), validation_error);
    CHECK_THROWS_AS(mu_alpha(-0.3), validation_error);
    CHECK_THROWS_AS(mu_alpha(1.0 - 1e-12), numeric_error);
}

TEST_CASE("exponential-jump WKB tracks the analytic expansion to O(1)") {
    // For rho = q = 1 the action integral evaluates to
    // -(2/h) int = -pi rho/(2h) - 2(q+1) ln h + O(1), h = sqrt(E).
    auto ep = levy_spec::exp_poisson(1.0, 1.0);
    for (double E : {1e-6, 3e-6, 1e-5, 3e-5, 1e-4, 3e-4, 1e-3}) {
        const double h = std::sqrt(E);
        const double lead = -0.5 * pi / h - 4.0 * std::log(h) + std::log(h);
        const double diff = wkb_log_dos(ep, E) - lead;
        CHECK(std::abs(diff) < 5.0);
    }
    // The gap shrinks as E grows within the window (h ln-term dominates it).
    CHECK(std::abs(wkb_log_dos(ep, 1e-3) - (-0.5 * pi / std::sqrt(1e-3) - 3.0 * std::log(std::sqrt(1e-3)))) <
          std::abs(wkb_log_dos(ep, 1e-6) - (-0.5 * pi / std::sqrt(1e-6) - 3.0 * std::log(std::sqrt(1e-6)))));
}

TEST_CASE("half-integral WKB reproduces the exact exponential and algebraic orders") {
    // ln N = -p^2/E + (1/2 - q) ln E + O(1): resolve the three orders by
    // fitting wkb values at three energies against {1/E, ln E, 1}.
    for (auto [p, q] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
        auto hm = levy_spec::hermite(p, q);
        std::vector<double> es = {0.004, 0.002, 0.001};
        std::vector<double> inv, lg, ones, y;
        for (double E : es) {
            inv.push_back(1.0 / E);
            lg.push_back(std::log(E));
            ones.push_back(1.0);
            y.push_back(wkb_log_dos(hm, E));
        }
        const auto x = poly_fit({inv, lg, ones}, y);
        CHECK(x[0] == Approx(-p * p).epsilon(1e-4));
        CHECK(std::abs((x[1]) - (0.5 - q)) < 5e-3);
    }
}

TEST_CASE("stable WKB agrees with the continued-fraction density of states") {
    // alpha = 1/2, p = 1: the catalogue coefficient is mu(1/2) 2^{-1} p^2 = 1/2.
    auto st = levy_spec::alpha_stable(1.0, 0.5);
    auto form = asymptotic_catalog(asym_family::alpha_stable, {.p = 1.0, .alpha = 0.5});
    CHECK(form.exponential_coeff == Approx(0.5).epsilon(1e-14));
    CHECK(form.exponential_power == Approx(-1.0).epsilon(1e-14));
    CHECK(form.heuristic);

    // Measured coefficient from pairwise CF slopes on the double-precision
    // visible window: (lnN(E1)-lnN(E2)) / (1/E2 - 1/E1) -> 1/2.
    coefficient_cache cache(st);
    const std::vector<double> etas = {1e-3, 1e-4, 1e-5};
    auto ln_n = [&](double E) { return std::log(dos_continued(cache, st, E, etas).N); };
    const double s1 = (ln_n(0.10) - ln_n(0.05)) / (1.0 / 0.05 - 1.0 / 0.10);
    const double s2 = (ln_n(0.08) - ln_n(0.04)) / (1.0 / 0.04 - 1.0 / 0.08);
    CHECK(std::abs((s1) - (0.5)) < 0.03);
    CHECK(std::abs((s2) - (0.5)) < 0.03);

    // The WKB value itself sits a stable O(1) above ln N: all algebraic terms
    // cancel for this family, so the gap is flat across the window.
    std::vector<double> gaps;
    for (double E : {0.10, 0.06, 0.04}) gaps.push_back(wkb_log_dos(st, E) - ln_n(E));
    for (double g : gaps) CHECK(std::abs(g) < 3.0);
    CHECK(std::abs(gaps.front() - gaps.back()) < 0.2);
}

TEST_CASE("matched measure singularities share the exponential part") {
    // The half-integral coefficients c(n) ~ p sqrt(2/n) match the stable
    // alpha = 1/2 family at p_stable = sqrt(2) p: same small-jump singularity.
    const double p = 1.0;
    auto hm = levy_spec::hermite(p, 1.0);
    auto st = levy_spec::alpha_stable(std::sqrt(2.0) * p, 0.5);

    // Coefficient ratio c_h(n)/c_s(n) -> 1.
    for (double n : {1e3, 1e6}) {
        const double ratio = coefficient_c(hm, n) / coefficient_c(st, n);
        CHECK(std::abs(ratio - 1.0) < 3.0 / std::sqrt(n) + 1e-3);
    }

    // Identical catalogue exponential parts: coeff p^2, power -1.
    auto fh = asymptotic_catalog(asym_family::hermite, {.p = p, .q = 1.0});
    auto fs = asymptotic_catalog(asym_family::alpha_stable, {.p = std::sqrt(2.0) * p, .alpha = 0.5});
    CHECK(fh.exponential_coeff == Approx(fs.exponential_coeff).epsilon(1e-14));
    CHECK(fh.exponential_power == fs.exponential_power);

    // And the WKB routes agree on the 1/E slope.
    const double dh = (wkb_log_dos(hm, 0.005) - wkb_log_dos(hm, 0.01)) / (1.0 / 0.005 - 1.0 / 0.01);
    const double ds = (wkb_log_dos(st, 0.005) - wkb_log_dos(st, 0.01)) / (1.0 / 0.005 - 1.0 / 0.01);
    CHECK(std::abs((dh) - (-p * p)) < 0.01);
    CHECK(std::abs((ds) - (-p * p)) < 0.005);
}

TEST_CASE("half-integral closed form approaches its catalogued asymptote monotonically") {
    // ln N + p^2/E - (1/2-q) ln E - ln(p^{2q}/Gamma((q+1)/2)^2) -> 0 from below,
    // |gap| decreasing over a decade of E.
    for (auto [p, q] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
        auto hm = levy_spec::hermite(p, q);
        const double cst =
            std::log(std::pow(p, 2.0 * q)) - 2.0 * std::lgamma(0.5 * (q + 1.0));
        double prev = std::numeric_limits<double>::infinity();
        for (double E : {0.2, 0.1, 0.05, 0.025}) {
            const double lead = -p * p / E + (0.5 - q) * std::log(E) + cst;
            const double gap = std::abs(std::log(dos_closed(hm, E).N) - lead);
            CHECK(gap < prev);
            prev = gap;
        }
        CHECK(prev < 0.03);  // already inside 3% in log at E = 0.025
    }
}

TEST_CASE("low-energy fit recovers catalogued shapes") {
    auto shape = asymptotic_catalog(asym_family::hermite, {.p = 1.0, .q = 1.0});

    // Exact synthetic table: machine-precision recovery.
    std::vector<double> es, ns, np;
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> jitter(-0.01, 0.01);
    for (int i = 0; i < 10; ++i) {
        const double E = 0.02 * std::pow(10.0, i / 9.0);
        const double ln_n = -1.0 / E - 0.5 * std::log(E) + 0.25;
        es.push_back(E);
        ns.push_back(std::exp(ln_n));
        np.push_back(std::exp(ln_n + jitter(rng)));
    }
    const auto f0 = fit_low_energy(es, ns, shape);
    CHECK(f0.exponential_coeff == Approx(1.0).epsilon(1e-10));
    CHECK(std::abs((f0.algebraic_power) - (-0.5)) < 1e-10);
    CHECK(std::abs((f0.constant) - (0.25)) < 1e-10);
    CHECK(f0.max_abs_residual < 1e-10);
    CHECK(f0.residuals.size() == es.size());

    // +-1% multiplicative noise: coefficient within 0.02, power within 0.05.
    const auto f1 = fit_low_energy(es, np, shape);
    CHECK(std::abs((f1.exponential_coeff) - (1.0)) < 0.02);
    CHECK(std::abs((f1.algebraic_power) - (-0.5)) < 0.05);

    // Table from the exact closed form, window where corrections are small.
    auto hm = levy_spec::hermite(1.0, 1.0);
    std::vector<double> es2, ns2;
    for (int i = 0; i < 10; ++i) {
        const double E = 0.01 * std::pow(10.0, i / 9.0);
        es2.push_back(E);
        ns2.push_back(dos_closed(hm, E).N);
    }
    const auto f2 = fit_low_energy(es2, ns2, shape);
    CHECK(std::abs((f2.exponential_coeff) - (1.0)) < 0.02);
    CHECK(std::abs((f2.algebraic_power) - (-0.5)) < 0.15);

    // Log-corrected shape round-trips exactly too.
    auto gm = asymptotic_catalog(asym_family::gamma_marginal, {});
    std::vector<double> es3, ns3;
    for (int i = 0; i < 8; ++i) {
        const double E = 0.01 * std::pow(20.0, i / 7.0);
        es3.push_back(E);
        ns3.push_back(std::exp(-std::pow(E, -0.5) * std::log(1.0 / E) + 0.3 * std::log(E) + 2.0));
    }
    const auto f3 = fit_low_energy(es3, ns3, gm);
    CHECK(f3.exponential_coeff == Approx(1.0).epsilon(1e-9));
    CHECK(std::abs((f3.algebraic_power) - (0.3)) < 1e-9);
    CHECK(std::abs((f3.constant) - (2.0)) < 1e-8);
}

TEST_CASE("low-energy fit on a continued-fraction table recovers pi rho / 2") {
    // Exponential-jump measure rho = q = 1; window chosen above the
    // double-precision floor of the spectral-shift extrapolation.
    auto ep = levy_spec::exp_poisson(1.0, 1.0);
    coefficient_cache cache(ep);
    std::vector<double> es, ns;
    const int npts = 8;
    for (int i = 0; i < npts; ++i) {
        const double E = 5e-3 * std::pow(10.0, i / double(npts - 1));
        es.push_back(E);
        ns.push_back(dos_continued(cache, ep, E, {1e-3, 1e-4, 1e-5}).N);
    }
    auto shape = asymptotic_catalog(asym_family::finite_measure, {.rho = 1.0});
    const auto fit = fit_low_energy(es, ns, shape);
    CHECK(fit.exponential_coeff == Approx(0.5 * pi).epsilon(0.05));
}

TEST_CASE("low-energy fit rejects unusable tables") {
    auto shape = asymptotic_catalog(asym_family::finite_measure, {.rho = 1.0});

    // Free-particle table has no exponential decay.
    std::vector<double> es, ns;
    for (int i = 0; i < 10; ++i) {
        const double E = 0.04 * std::pow(100.0, i / 9.0);
        es.push_back(E);
        ns.push_back(std::sqrt(E) / pi);
    }
    CHECK_THROWS_AS(fit_low_energy(es, ns, shape), numeric_error);

    // Narrow window: exponential regressor barely varies.
    std::vector<double> es2, ns2;
    for (int i = 0; i < 8; ++i) {
        const double E = 0.5 + 0.1 * i;
        es2.push_back(E);
        ns2.push_back(std::exp(-0.5 * pi / std::sqrt(E)));
    }
    CHECK_THROWS_AS(fit_low_energy(es2, ns2, shape), numeric_error);

    CHECK_THROWS_AS(fit_low_energy({1.0, 2.0}, {0.5, 0.5}, shape), validation_error);
    CHECK_THROWS_AS(fit_low_energy(es, std::vector<double>(10, -1.0), shape), validation_error);
    {
        auto bad_n = ns;
        bad_n[3] = 0.0;
        CHECK_THROWS_AS(fit_low_energy(es, bad_n, shape), validation_error);
    }
    {
        auto gm = asymptotic_catalog(asym_family::gamma_marginal, {});
        // E >= 1 makes the log factor vanish or change sign
        CHECK_THROWS_AS(fit_low_energy({0.1, 0.2, 0.4, 0.6, 0.8, 1.5},
                                       std::vector<double>(6, 0.5), gm),
                        validation_error);
    }
}

TEST_CASE("asymptotic catalogue entries and diffusion exponents") {
    // Finite measure rho = 2: (pi, -1/2), no algebraic prefactor pinned.
    auto fm = asymptotic_catalog(asym_family::finite_measure, {.rho = 2.0});
    CHECK(fm.exponential_coeff == Approx(pi).epsilon(1e-15));
    CHECK(fm.exponential_power == -0.5);
    CHECK(!fm.algebraic_power.has_value());
    CHECK(!fm.log_correction);
    CHECK(!fm.heuristic);

    // Scalar-potential comparison doubles the Lifshits coefficient.
    auto kfm = asymptotic_catalog(asym_family::kotani_finite_measure, {.rho = 2.0});
    CHECK(kfm.exponential_coeff == Approx(2.0 * fm.exponential_coeff).epsilon(1e-15));
    CHECK(kfm.exponential_power == -0.5);

    // Half-integral p = 1.3, q = 0.8.
    auto hm = asymptotic_catalog(asym_family::hermite, {.p = 1.3, .q = 0.8});
    CHECK(hm.exponential_coeff == Approx(1.69).epsilon(1e-14));
    CHECK(hm.exponential_power == -1.0);
    CHECK(std::abs((hm.algebraic_power.value()) - (-0.3)) < 1e-14);

    // Scalar potential with a stable subordinator, alpha = 1/2, p = 1:
    // coefficient (1/(2 sqrt(pi)))^2 / B(2, 1/2) = 3/(16 pi), power -3/2.
    auto kst = asymptotic_catalog(asym_family::kotani_alpha_stable, {.p = 1.0, .alpha = 0.5});
    const double scale = std::pow(0.5 / std::sqrt(pi), 2.0);
    const double beta_2_half = std::tgamma(2.0) * std::tgamma(0.5) / std::tgamma(2.5);
    CHECK(kst.exponential_coeff == Approx(scale / beta_2_half).epsilon(1e-13));
    CHECK(kst.exponential_coeff == Approx(3.0 / (16.0 * pi)).epsilon(1e-13));
    CHECK(kst.exponential_power == Approx(-1.5).epsilon(1e-15));
    CHECK(!kst.heuristic);

    // Marginal gamma case carries the log factor and the heuristic flag.
    auto gm = asymptotic_catalog(asym_family::gamma_marginal, {});
    CHECK(gm.exponential_coeff == 1.0);
    CHECK(gm.exponential_power == -0.5);
    CHECK(gm.log_correction);
    CHECK(gm.heuristic);

    // Tauberian values: nu = x/(x-1).
    CHECK(diffusion_exponent(fm) == Approx(1.0 / 3.0).epsilon(1e-15));
    for (double a : {0.2, 0.5, 0.8}) {
        auto s = asymptotic_catalog(asym_family::alpha_stable, {.p = 1.0, .alpha = a});
        CHECK(diffusion_exponent(s) == Approx(1.0 / (3.0 - 2.0 * a)).epsilon(1e-14));
        auto ks = asymptotic_catalog(asym_family::kotani_alpha_stable, {.p = 1.0, .alpha = a});
        CHECK(diffusion_exponent(ks) == Approx((1.0 + a) / (3.0 - a)).epsilon(1e-14));
    }

    // The map x -> nu -> x is an involution on (-inf, 0) -> (0, 1).
    for (double x : {-0.1, -0.5, -1.0, -2.5, -10.0}) {
        asymptotic_form f;
        f.exponential_coeff = 1.0;
        f.exponential_power = x;
        const double nu = diffusion_exponent(f);
        CHECK(nu > 0.0);
        CHECK(nu < 1.0);
        f.exponential_power = nu;  // reuse the rational map itself
        CHECK(diffusion_exponent(f) == Approx(x).epsilon(1e-12));
    }

    // Family labels round-trip through to_string.
    CHECK(std::string(to_string(asym_family::finite_measure)) == "finite-measure");
    CHECK(std::string(to_string(asym_family::alpha_stable)) == "alpha-stable");
    CHECK(std::string(to_string(asym_family::gamma_marginal)) == "gamma-marginal");
    CHECK(std::string(to_string(asym_family::hermite)) == "hermite");
    CHECK(std::string(to_string(asym_family::kotani_finite_measure)) == "kotani-finite-measure");
    CHECK(std::string(to_string(asym_family::kotani_alpha_stable)) == "kotani-alpha-stable");

    // Parameter validation.
    CHECK_THROWS_AS(asymptotic_catalog(asym_family::finite_measure, {}), validation_error);
    CHECK_THROWS_AS(asymptotic_catalog(asym_family::hermite, {.p = 1.0}), validation_error);
    CHECK_THROWS_AS(asymptotic_catalog(asym_family::alpha_stable, {.p = 1.0, .alpha = 1.2}),
                    validation_error);
    CHECK_THROWS_AS(asymptotic_catalog(asym_family::kotani_alpha_stable, {.p = -1.0, .alpha = 0.5}),
                    validation_error);
    // alpha -> 1 blows the coefficient up past double range.
    CHECK_THROWS(asymptotic_catalog(asym_family::alpha_stable, {.p = 2.0, .alpha = 1.0 - 1e-12}));
}

TEST_CASE("wkb_log_dos rejects out-of-regime and unsupported inputs") {
    auto ep = levy_spec::exp_poisson(1.0, 1.0);
    // Validity boundary at E = (rho / (2(q+1)))^2 = 1/16.
    CHECK_NOTHROW(wkb_log_dos(ep, 0.0624));
    CHECK_THROWS_AS(wkb_log_dos(ep, 0.0626), validation_error);

    auto hm = levy_spec::hermite(1.0, 1.0);
    // Boundary h (q + 1/2) = 1, i.e. E = p^2 / (2q + 1) = 1/3.
    CHECK_NOTHROW(wkb_log_dos(hm, 0.33));
    CHECK_THROWS_AS(wkb_log_dos(hm, 0.34), validation_error);

    CHECK_THROWS_AS(wkb_log_dos(ep, 0.0), validation_error);
    CHECK_THROWS_AS(wkb_log_dos(ep, -1.0), validation_error);
    CHECK_THROWS_AS(wkb_log_dos(levy_spec::pure_drift(1.0), 0.01), validation_error);
    CHECK_THROWS_AS(wkb_log_dos(levy_spec::brownian(1.0, 0.0), 0.01), validation_error);
    CHECK_THROWS_AS(wkb_log_dos(levy_spec::gamma_process(1.0), 0.01), validation_error);
    CHECK_THROWS_AS(wkb_log_dos(levy_spec::exp_poisson(1.0, 1.0, 0.5), 0.01), validation_error);
}

#include "levydos/levy_process.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "levydos/errors.hpp"
#include "levydos/quadrature.hpp"

namespace levydos {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw validation_error(msg);
}

constexpr double pi = 3.14159265358979323846;

// log Gamma for Re z > 0: shift into |z| >= 20, then Stirling with four
// Bernoulli terms (relative error ~1e-13 at the shift boundary)
cplx lgamma_pos(cplx z) {
    cplx acc = 0.0;
    while (std::abs(z) < 20.0) {
        acc -= std::log(z);
        z += 1.0;
    }
    const cplx zi = 1.0 / z, zi2 = zi * zi;
    cplx series = zi * (1.0 / 12.0 + zi2 * (-1.0 / 360.0 + zi2 * (1.0 / 1260.0 - zi2 / 1680.0)));
    return acc + (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * pi) + series;
}

// ---- custom tail tables ----------------------------------------------------

struct tail_model {
    // per segment i: T(y) = tail[i] * exp(-rate[i] * (y - y[i]))
    std::vector<double> rate;
    double head_exponent = 0.0;  // T(y) = tail[0] * (y/y[0])^{-head_exponent} below y[0]

    static tail_model build(const tail_table& t) {
        require(t.y.size() == t.tail.size(), "tail table: y and tail must have equal length");
        require(t.y.size() >= 2, "tail table: need at least two knots");
        tail_model m;
        m.rate.resize(t.y.size() - 1);
        for (size_t i = 0; i + 1 < t.y.size(); ++i) {
            require(t.y[i] > 0 && t.y[i + 1] > t.y[i], "tail table: y must be positive increasing");
            require(t.tail[i] > 0 && t.tail[i + 1] > 0, "tail table: tail values must be positive");
            require(t.tail[i + 1] <= t.tail[i], "tail table: tail must be non-increasing");
            m.rate[i] = std::log(t.tail[i] / t.tail[i + 1]) / (t.y[i + 1] - t.y[i]);
        }
        require(m.rate.back() > 0, "tail table: tail must decay on the last segment");
        m.head_exponent = std::log(t.tail[0] / t.tail[1]) / std::log(t.y[1] / t.y[0]);
        require(m.head_exponent < 1.0,
                "tail table: head slope implies infinite mean (need tail ~ y^-beta, beta < 1)");
        return m;
    }
};

double custom_tail_at(const tail_table& t, const tail_model& m, double y) {
    if (y <= t.y.front())
        return m.head_exponent <= 0.0
                   ? t.tail.front()
                   : t.tail.front() * std::pow(y / t.y.front(), -m.head_exponent);
    if (y >= t.y.back()) return t.tail.back() * std::exp(-m.rate.back() * (y - t.y.back()));
    const auto it = std::upper_bound(t.y.begin(), t.y.end(), y);
    const size_t i = static_cast<size_t>(it - t.y.begin()) - 1;
    return t.tail[i] * std::exp(-m.rate[i] * (y - t.y[i]));
}

// ∫ e^{-s y} T(y) dy over one exponential segment [lo, hi] with T(lo) = T0,
// rate r; stable for |s + r| small and valid for complex s, Re s >= 0.
cplx segment_laplace(cplx s, double lo, double hi, double T0, double r) {
    const cplx w = s + r;
    const double d = hi - lo;
    const cplx front = T0 * std::exp(-s * lo);
    if (std::abs(w) * d < 1e-8) return front * d * (1.0 - 0.5 * w * d);
    return front * (1.0 - std::exp(-w * d)) / w;
}

// ∫_0^inf e^{-s y} T(y) dy for a custom table, Re s >= 0.
cplx custom_tail_laplace(const tail_table& t, const tail_model& m, cplx s) {
    // head: power law, integrable singularity handled by tanh-sinh
    const double beta = m.head_exponent, y0 = t.y.front(), T0 = t.tail.front();
    cplx total = quad::finite(
                     [&](double y) {
                         const double T = beta <= 0.0 ? T0 : T0 * std::pow(y / y0, -beta);
                         return T * std::exp(-s * y);
                     },
                     0.0, y0)
                     .require("custom tail head integral");
    for (size_t i = 0; i + 1 < t.y.size(); ++i)
        total += segment_laplace(s, t.y[i], t.y[i + 1], t.tail[i], m.rate[i]);
    // extension beyond the last knot
    const double r = m.rate.back();
    total += t.tail.back() * std::exp(-s * t.y.back()) / (s + r);
    return total;
}

tail_model model_of(const levy_spec& spec) { return tail_model::build(spec.table); }

// small-jump mean ∫_0^eps y m(dy) = ∫_0^eps T(y) dy − eps·T(eps)
double small_jump_mean(const levy_spec& spec, double eps) {
    switch (spec.fam) {
        case family::pure_drift:
        case family::brownian_drift:
            return 0.0;
        case family::exp_poisson:
            // ∫_0^eps y ρ q e^{-qy} dy
            return spec.rho / spec.q *
                   (1.0 - std::exp(-spec.q * eps) * (1.0 + spec.q * eps));
        case family::alpha_stable:
            // ∫_0^eps T − eps·T(eps) = [1/(1−α) − 1] eps^{1−α} p / Γ(1−α)
            return spec.p * spec.alpha * std::pow(eps, 1.0 - spec.alpha) /
                   ((1.0 - spec.alpha) * std::tgamma(1.0 - spec.alpha));
        case family::gamma_process:
            // y·m(dy) = e^{-by} dy
            return (1.0 - std::exp(-spec.b * eps)) / spec.b;
        case family::hermite:
        case family::custom_tabulated: {
            const double tail_part =
                quad::finite([&](double y) { return measure_tail(spec, y); }, 0.0, eps)
                    .require("small-jump mean");
            return tail_part - eps * measure_tail(spec, eps);
        }
    }
    throw validation_error("small_jump_mean: unknown family");
}

}  // namespace

// ---- factories --------------------------------------------------------------

levy_spec levy_spec::pure_drift(double a) {
    require(a >= 0, "pure_drift: a must be >= 0");
    levy_spec s;
    s.fam = family::pure_drift;
    s.drift_a = a;
    return s;
}

levy_spec levy_spec::brownian(double g, double mu) {
    require(g > 0, "brownian: g must be > 0");
    levy_spec s;
    s.fam = family::brownian_drift;
    s.gaussian_g = g;
    s.mu = mu;
    return s;
}

levy_spec levy_spec::exp_poisson(double rho, double q, double a) {
    require(rho > 0 && q > 0 && a >= 0, "exp_poisson: need rho > 0, q > 0, a >= 0");
    levy_spec s;
    s.fam = family::exp_poisson;
    s.rho = rho;
    s.q = q;
    s.drift_a = a;
    return s;
}

levy_spec levy_spec::hermite(double p, double q, double a) {
    require(p > 0 && q >= 0 && a >= 0, "hermite: need p > 0, q >= 0, a >= 0");
    levy_spec s;
    s.fam = family::hermite;
    s.p = p;
    s.q = q;
    s.drift_a = a;
    return s;
}

levy_spec levy_spec::alpha_stable(double p, double alpha) {
    require(p > 0, "alpha_stable: p must be > 0");
    require(alpha > 0 && alpha < 1, "alpha_stable: need 0 < alpha < 1");
    levy_spec s;
    s.fam = family::alpha_stable;
    s.p = p;
    s.alpha = alpha;
    return s;
}

levy_spec levy_spec::gamma_process(double b, double a) {
    require(b > 0 && a >= 0, "gamma_process: need b > 0, a >= 0");
    levy_spec s;
    s.fam = family::gamma_process;
    s.b = b;
    s.drift_a = a;
    return s;
}

levy_spec levy_spec::custom(tail_table t, double a) {
    require(a >= 0, "custom: a must be >= 0");
    levy_spec s;
    s.fam = family::custom_tabulated;
    s.table = std::move(t);
    s.drift_a = a;
    tail_model::build(s.table);  // validate eagerly
    return s;
}

// ---- exponent and coefficient ----------------------------------------------

cplx levy_exponent(const levy_spec& spec, cplx theta) {
    const cplx i(0.0, 1.0);
    if (spec.is_subordinator() && theta.imag() < -1e-14)
        throw validation_error("levy_exponent: subordinator exponent needs Im theta >= 0");
    const cplx drift = 2.0 * spec.drift_a * i * theta;
    switch (spec.fam) {
        case family::pure_drift:
            return drift;
        case family::brownian_drift:
            return 2.0 * spec.gaussian_g * (i * spec.mu * theta - theta * theta);
        case family::exp_poisson:
            return drift + spec.rho * i * theta / (spec.q - i * theta);
        case family::hermite: {
            if (std::abs(theta) < 1e-300) return drift;
            const cplx w = spec.q - i * theta;  // Re w >= q >= 0; w != 0 off the origin
            const cplx ratio =
                spec.p * i * theta * std::exp(lgamma_pos(0.5 * w) - lgamma_pos(0.5 * (w + 1.0)));
            if (spec.q > 0.0) return drift + ratio;
            // q = 0: the mass subtracted to keep the tail integrable shows up as a
            // constant, fixed by Lambda(0) = 0
            return drift + 2.0 * spec.p / std::sqrt(pi) + ratio;
        }
        case family::alpha_stable:
            return drift - spec.p * std::pow(-i * theta, cplx(spec.alpha));
        case family::gamma_process:
            return drift - std::log(1.0 - i * theta / spec.b);
        case family::custom_tabulated: {
            // Λ = 2a·iθ + iθ ∫ e^{iθy} m(y,∞) dy  (integration by parts)
            if (std::abs(theta) < 1e-300) return drift;
            return drift + i * theta * custom_tail_laplace(spec.table, model_of(spec), -i * theta);
        }
    }
    throw validation_error("levy_exponent: unknown family");
}

double coefficient_c(const levy_spec& spec, double s) {
    require(s >= 0, "coefficient_c: s must be >= 0");
    const double two_a = 2.0 * spec.drift_a;
    switch (spec.fam) {
        case family::pure_drift:
            return two_a;
        case family::brownian_drift:
            return 2.0 * spec.gaussian_g * (spec.mu - s);
        case family::exp_poisson:
            return two_a + spec.rho / (spec.q + s);
        case family::hermite:
            if (spec.q == 0.0) {
                const double ln2 = std::log(2.0);
                // below 1e-5 the lgamma difference is all rounding noise; the series
                // (digamma/trigamma values at 1 and 1/2) is exact to O(s^2) there
                if (s < 1e-5)
                    return two_a + 2.0 * spec.p / std::sqrt(pi) *
                                       (ln2 + s * (0.5 * ln2 * ln2 - pi * pi / 24.0));
                // Γ(s/2)/Γ((s+1)/2) − 2/(√π s), rearranged through expm1 so the
                // near-cancellation at moderate s costs no precision
                return two_a + 2.0 * spec.p / (std::sqrt(pi) * s) *
                                   std::expm1(std::lgamma(1.0 + 0.5 * s) -
                                              std::lgamma(0.5 * (s + 1.0)) + 0.5 * std::log(pi));
            }
            return two_a + spec.p * std::exp(std::lgamma(0.5 * (s + spec.q)) -
                                             std::lgamma(0.5 * (s + spec.q + 1.0)));
        case family::alpha_stable:
            if (s == 0.0)
                throw validation_error(
                    "coefficient_c: alpha_stable has infinite mean, c(0) does not exist; "
                    "density-of-states evaluation must go through the continued-fraction "
                    "route that avoids c(0)");
            return spec.p * std::pow(s, spec.alpha - 1.0);
        case family::gamma_process:
            return two_a + (s == 0.0 ? 1.0 / spec.b : std::log1p(s / spec.b) / s);
        case family::custom_tabulated:
            return two_a + custom_tail_laplace(spec.table, model_of(spec), cplx(s, 0.0)).real();
    }
    throw validation_error("coefficient_c: unknown family");
}

double measure_tail(const levy_spec& spec, double y) {
    require(y >= 0, "measure_tail: y must be >= 0");
    switch (spec.fam) {
        case family::pure_drift:
        case family::brownian_drift:
            return 0.0;
        case family::exp_poisson:
            return spec.rho * std::exp(-spec.q * y);
        case family::hermite: {
            if (y == 0.0) return std::numeric_limits<double>::infinity();
            const double em = std::expm1(-2.0 * y);  // -(1 - e^{-2y})
            if (spec.q > 0.0)
                return 2.0 * spec.p / std::sqrt(pi) * std::exp(-spec.q * y) / std::sqrt(-em);
            // q = 0 tail is (1-e^{-2y})^{-1/2} - 1, written without cancellation
            const double r = std::sqrt(-em);
            return 2.0 * spec.p / std::sqrt(pi) * std::exp(-2.0 * y) / (r * (1.0 + r));
        }
        case family::alpha_stable:
            if (y == 0.0) return std::numeric_limits<double>::infinity();
            return spec.p * std::pow(y, -spec.alpha) / std::tgamma(1.0 - spec.alpha);
        case family::gamma_process: {
            if (y == 0.0) return std::numeric_limits<double>::infinity();
            // exponential integral E1(by)
            const double x = spec.b * y;
            return x > 700.0 ? 0.0 : -std::expint(-x);
        }
        case family::custom_tabulated:
            if (y == 0.0 && model_of(spec).head_exponent > 0)
                return std::numeric_limits<double>::infinity();
            return custom_tail_at(spec.table, model_of(spec), std::max(y, 1e-300));
    }
    throw validation_error("measure_tail: unknown family");
}

// ---- interlacing ------------------------------------------------------------

double interlacing_spec::jump_quantile(double v) const {
    if (jump_rate == 0.0) throw validation_error("jump_quantile: measure is empty");
    const double tau = std::clamp(1.0 - v, 1e-14, 1.0);
    const double target = std::log(tau);
    // log_survival decreases from 0; find the bracketing pair
    const auto it = std::lower_bound(log_survival.begin(), log_survival.end(), target,
                                     [](double a, double b) { return a > b; });
    if (it == log_survival.begin()) return height.front();
    size_t hi = static_cast<size_t>(it - log_survival.begin());
    if (hi >= log_survival.size()) hi = log_survival.size() - 1;
    const size_t lo = hi - 1;
    const size_t n = log_survival.size();

    // quadratic through three neighbouring knots (averaged over both choices
    // where possible), clamped to the bracket so the result stays monotone;
    // exact for exponential tails, where height is linear in log_survival
    const auto quad3 = [&](size_t a) {
        const double xa = log_survival[a], xb = log_survival[a + 1], xc = log_survival[a + 2];
        const double x = target;
        return height[a] * (x - xb) * (x - xc) / ((xa - xb) * (xa - xc)) +
               height[a + 1] * (x - xa) * (x - xc) / ((xb - xa) * (xb - xc)) +
               height[a + 2] * (x - xa) * (x - xb) / ((xc - xa) * (xc - xb));
    };
    double y;
    if (n < 3) {
        const double t0 = log_survival[lo], t1 = log_survival[hi];
        const double w = (t1 == t0) ? 0.0 : (target - t0) / (t1 - t0);
        y = height[lo] + w * (height[hi] - height[lo]);
    } else if (lo == 0) {
        y = quad3(0);
    } else if (hi + 1 >= n) {
        y = quad3(n - 3);
    } else {
        y = 0.5 * (quad3(lo - 1) + quad3(lo));
    }
    return std::clamp(y, height[lo], height[hi]);
}

interlacing_spec interlace(const levy_spec& spec, double eps) {
    require(spec.is_subordinator(), "interlace: only subordinators are supported");
    require(eps > 0, "interlace: eps must be > 0");
    interlacing_spec out;
    out.epsilon = eps;
    out.jump_rate = measure_tail(spec, eps);
    out.effective_drift = spec.drift_a + 0.5 * small_jump_mean(spec, eps);
    if (out.jump_rate == 0.0) return out;

    // build the inverse-CDF table: y against ln of the survival fraction
    // tau = T(y)/T(eps), sampled uniformly in ln(tau) down to 1e-13
    const int n = 1024;
    const double lo = -30.0;
    out.log_survival.resize(n);
    out.height.resize(n);
    double y_lo = eps;
    for (int j = 0; j < n; ++j) {
        const double lt = lo * j / (n - 1);
        out.log_survival[j] = lt;
        if (j == 0) {
            out.height[j] = eps;
            continue;
        }
        const double target = out.jump_rate * std::exp(lt);
        // bracket: tail is monotone decreasing in y
        double y_hi = std::max(2.0 * y_lo, y_lo + 1.0);
        while (measure_tail(spec, y_hi) > target) y_hi *= 2.0;
        double a = y_lo, b2 = y_hi;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (a + b2);
            (measure_tail(spec, mid) > target ? a : b2) = mid;
        }
        out.height[j] = 0.5 * (a + b2);
        y_lo = a;  // next target is smaller, so its height is larger
    }
    return out;
}

// ---- appendix distributions --------------------------------------------------

namespace {

// saddle-point form of the p=1 stable density, valid deep in the left tail;
// assembled in log space since the prefactor and the exponential overflow and
// underflow separately long before their product does
double stable_density_saddle(double alpha, double u) {
    const double A = (1.0 - alpha) * std::pow(alpha, alpha / (1.0 - alpha));
    const double B = (1.0 - alpha) * std::pow(alpha, -1.0 / (1.0 - alpha));
    const double lf = -0.5 * std::log(2.0 * pi * B) -
                      (2.0 - alpha) / (2.0 - 2.0 * alpha) * std::log(u) -
                      A * std::pow(u, -alpha / (1.0 - alpha));
    return lf > -745.0 ? std::exp(lf) : 0.0;
}

double stable_density_unit(double alpha, double u) {
    if (u <= 0.0) return 0.0;
    const double A = (1.0 - alpha) * std::pow(alpha, alpha / (1.0 - alpha));
    if (A * std::pow(u, -alpha / (1.0 - alpha)) > 12.0) return stable_density_saddle(alpha, u);
    // branch-cut integral: (1/pi) Im ∫_0^inf e^{-tu - t^alpha e^{-i pi alpha}} dt.
    // For alpha > 1/2 the two real-part terms have opposite signs; in the
    // regime where this route is used their maximum stays below the saddle
    // bound (< 12), but at extreme abscissae -tu and t^alpha both overflow,
    // so assemble the exponent in parts and cut off the dead tail explicitly.
    const double ca = std::cos(pi * alpha), sa = std::sin(pi * alpha);
    const auto r = quad::half_line(
        [&](double t) -> cplx {
            const double ta = std::pow(t, alpha);
            const double re = -t * u - ta * ca;
            if (!(re > -745.0)) return cplx(0.0, 0.0);
            return std::polar(std::exp(re), ta * sa);
        },
        0.0);
    return r.require("stable_density branch-cut integral").imag() / pi;
}

}  // namespace

double stable_density(double alpha, double u, double x) {
    require(alpha > 0 && alpha < 1, "stable_density: need 0 < alpha < 1");
    require(x > 0, "stable_density: need x > 0");
    if (u <= 0.0) return 0.0;
    const double scale = std::pow(x, -1.0 / alpha);
    return scale * stable_density_unit(alpha, scale * u);
}

density_and_moment gamma_density_and_moments(double b, double x, double u, int n) {
    require(b > 0 && x > 0, "gamma_density_and_moments: need b > 0, x > 0");
    require(n >= 0, "gamma_density_and_moments: need n >= 0");
    density_and_moment out;
    if (u > 0.0)
        out.density =
            std::exp(x * std::log(b) + (x - 1.0) * std::log(u) - b * u - std::lgamma(x));
    out.moment = std::exp(std::lgamma(n + x) - std::lgamma(x) - n * std::log(b));
    return out;
}

// ---- serialisation ------------------------------------------------------------

namespace {

const char* family_name(family f) {
    switch (f) {
        case family::pure_drift: return "pure_drift";
        case family::brownian_drift: return "brownian_drift";
        case family::exp_poisson: return "exp_poisson";
        case family::hermite: return "hermite";
        case family::alpha_stable: return "alpha_stable";
        case family::gamma_process: return "gamma_process";
        case family::custom_tabulated: return "custom_tabulated";
    }
    return "?";
}

}  // namespace

std::string spec_to_json(const levy_spec& spec) {
    nlohmann::json j;
    j["family"] = family_name(spec.fam);
    nlohmann::json& p = j["params"];
    p = nlohmann::json::object();
    switch (spec.fam) {
        case family::pure_drift:
            p["drift_a"] = spec.drift_a;
            break;
        case family::brownian_drift:
            p["gaussian_g"] = spec.gaussian_g;
            p["mu"] = spec.mu;
            break;
        case family::exp_poisson:
            p["rho"] = spec.rho;
            p["q"] = spec.q;
            p["drift_a"] = spec.drift_a;
            break;
        case family::hermite:
            p["p"] = spec.p;
            p["q"] = spec.q;
            p["drift_a"] = spec.drift_a;
            break;
        case family::alpha_stable:
            p["p"] = spec.p;
            p["alpha"] = spec.alpha;
            break;
        case family::gamma_process:
            p["b"] = spec.b;
            p["drift_a"] = spec.drift_a;
            break;
        case family::custom_tabulated:
            p["drift_a"] = spec.drift_a;
            p["y"] = spec.table.y;
            p["tail"] = spec.table.tail;
            break;
    }
    return j.dump();
}

levy_spec spec_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw validation_error(std::string("spec JSON: ") + e.what());
    }
    if (!j.contains("family") || !j["family"].is_string())
        throw validation_error("spec JSON: missing string field 'family'");
    const std::string fam = j["family"];
    const nlohmann::json p = j.value("params", nlohmann::json::object());
    auto get = [&](const char* key, double dflt) -> double {
        if (!p.contains(key)) return dflt;
        if (!p[key].is_number()) throw validation_error(std::string("spec JSON: param '") + key + "' must be a number");
        return p[key];
    };
    auto need = [&](const char* key) -> double {
        if (!p.contains(key))
            throw validation_error(std::string("spec JSON: family '") + fam +
                                   "' requires param '" + key + "'");
        return get(key, 0.0);
    };
    if (fam == "pure_drift") return levy_spec::pure_drift(need("drift_a"));
    if (fam == "brownian_drift") return levy_spec::brownian(need("gaussian_g"), need("mu"));
    if (fam == "exp_poisson")
        return levy_spec::exp_poisson(need("rho"), need("q"), get("drift_a", 0.0));
    if (fam == "hermite") return levy_spec::hermite(need("p"), need("q"), get("drift_a", 0.0));
    if (fam == "alpha_stable") return levy_spec::alpha_stable(need("p"), need("alpha"));
    if (fam == "gamma_process") return levy_spec::gamma_process(need("b"), get("drift_a", 0.0));
    if (fam == "custom_tabulated") {
        tail_table t;
        if (!p.contains("y") || !p.contains("tail"))
            throw validation_error("spec JSON: custom_tabulated requires arrays 'y' and 'tail'");
        t.y = p["y"].get<std::vector<double>>();
        t.tail = p["tail"].get<std::vector<double>>();
        return levy_spec::custom(std::move(t), get("drift_a", 0.0));
    }
    throw validation_error("spec JSON: unknown family '" + fam + "'");
}

tail_table tail_table_from_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("tail CSV: cannot open " + path);
    tail_table t;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double y, tail;
        if (!(row >> y >> tail)) {
            if (t.y.empty()) continue;  // tolerate one header row
            throw validation_error("tail CSV: malformed row '" + line + "'");
        }
        t.y.push_back(y);
        t.tail.push_back(tail);
    }
    if (t.y.size() < 2) throw validation_error("tail CSV: need at least two data rows");
    return t;
}

}  // namespace levydos

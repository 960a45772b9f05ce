#include "levydos/riccati_mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "levydos/errors.hpp"
#include "levydos/rng.hpp"

namespace levydos {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
    if (!ok) throw validation_error(msg);
}

bool has_infinite_measure(const levy_spec& spec) {
    return spec.fam == family::hermite || spec.fam == family::alpha_stable ||
           spec.fam == family::gamma_process;
}

double resolve_burn_in(const path_config& cfg, double E) {
    if (cfg.burn_in >= 0.0) return cfg.burn_in;
    return std::max(10.0 / std::sqrt(std::max(std::abs(E), 0.01)), 1e5 * cfg.dt);
}

double resolve_truncation(const path_config& cfg) {
    if (cfg.truncation > 0.0) return cfg.truncation;
    return 1e-12;  // finite measures lose nothing measurable below this
}

// Characteristic coefficient scale for dt validation and histogram windows.
double coefficient_scale(const levy_spec& spec) {
    if (spec.fam == family::brownian_drift) return std::max(1.0, spec.gaussian_g);
    if (spec.has_finite_mean()) return std::max(1.0, coefficient_c(spec, 0.0));
    return std::max(1.0, coefficient_c(spec, 1.0));
}

std::vector<double> histogram_edges(const levy_spec& spec, double E, const path_config& cfg) {
    const int bins = cfg.histogram_bins;
    double lo, hi;
    if (E < 0.0) {
        const double k = std::sqrt(-E);
        lo = spec.fam == family::brownian_drift ? 0.0 : 0.98 * k;
        hi = cfg.histogram_z_max > 0.0 ? cfg.histogram_z_max
                                       : k + 40.0 * coefficient_scale(spec);
    } else {
        hi = cfg.histogram_z_max > 0.0
                 ? cfg.histogram_z_max
                 : std::max(10.0 * std::max(1.0, std::sqrt(E)), 4.0 * coefficient_scale(spec));
        lo = -hi;
    }
    std::vector<double> edges(bins + 1);
    for (int i = 0; i <= bins; ++i) edges[i] = lo + (hi - lo) * i / bins;
    return edges;
}

// ---- chart-switching integrator -----------------------------------------------
//
// Z blows up at the nodes of psi, so no single variable covers the flow. Three
// overlapping charts do: v = ln Z where Z is large positive (the noise is
// additive there), Z itself through the origin, and u = 1/Z around the
// blow-up, where the passage -inf -> +inf is the regular crossing u = 0.
enum class chart { log_z, direct, reciprocal };

struct flow_state {
    chart ch = chart::log_z;
    double s = 0.0;  // coordinate in the active chart

    double z() const {
        switch (ch) {
            case chart::log_z: return std::exp(s);
            case chart::direct: return s;
            case chart::reciprocal: return s == 0.0 ? inf : 1.0 / s;
        }
        return 0.0;
    }
};

struct chart_rates {
    double f;      // drift of the chart coordinate
    double sigma;  // coefficient of the Stratonovich noise dW
    double g;      // integrand -E/Z in chart coordinates
};

chart_rates rates(const flow_state& st, double E, double w0) {
    switch (st.ch) {
        case chart::log_z: {
            const double em = std::exp(-st.s), ep = std::exp(st.s);
            return {-E * em - ep + w0, 1.0, -E * em};
        }
        case chart::direct: {
            const double z = st.s;
            // g unused: -E/Z is singular at the zero crossing, so the direct
            // chart accumulates the gamma integral by the telescoped identity
            // -E/Z = (ln|Z|)' + Z - w instead (see heun_step).
            return {-E - z * z + w0 * z, z, 0.0};
        }
        case chart::reciprocal: {
            const double u = st.s;
            return {E * u * u + 1.0 - w0 * u, -u, -E * u};
        }
    }
    return {};
}

// Hysteresis bands: switch charts only past the far edge of the overlap.
void reseat(flow_state& st, std::int64_t& resets, double blowup_threshold, bool counting) {
    switch (st.ch) {
        case chart::log_z:
            if (st.s < std::log(0.5)) st = {chart::direct, std::exp(st.s)};
            break;
        case chart::direct:
            if (st.s > 1.0) {
                st = {chart::log_z, std::log(st.s)};
            } else if (st.s < -2.0) {
                // guard only; the reciprocal chart is entered long before this
                if (st.s < blowup_threshold) {
                    if (counting) ++resets;
                    st = {chart::log_z, 20.0};
                } else {
                    st = {chart::reciprocal, 1.0 / st.s};
                }
            }
            break;
        case chart::reciprocal:
            if (st.s >= 0.4)
                st = {chart::log_z, -std::log(st.s)};
            else if (st.s <= -0.5)
                st = {chart::direct, 1.0 / st.s};
            break;
    }
}

struct accumulators {
    double gamma_integral = 0.0;
    double time = 0.0;
    double min_z = inf;
    std::vector<double> weight;  // per histogram bin
    const std::vector<double>* edges = nullptr;

    void deposit(double z, double dx) {
        time += dx;
        min_z = std::min(min_z, z);
        const auto& e = *edges;
        const double lo = e.front(), hi = e.back();
        const double binw = (hi - lo) / static_cast<double>(weight.size());
        auto idx = static_cast<std::ptrdiff_t>(std::floor((std::clamp(z, lo, hi) - lo) / binw));
        idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(weight.size()) - 1);
        weight[static_cast<std::size_t>(idx)] += dx;
    }
};

// One Stratonovich-consistent predictor-corrector step of length dx in the
// active chart; counts a reset when the reciprocal coordinate crosses zero.
void heun_step(flow_state& st, double E, double w0, double dx, double dW,
               std::int64_t& resets, bool counting, accumulators* acc) {
    const chart_rates r0 = rates(st, E, w0);
    flow_state pred = st;
    pred.s += r0.f * dx + r0.sigma * dW;
    const chart_rates r1 = rates(pred, E, w0);
    const double before = st.s;
    st.s += 0.5 * (r0.f + r1.f) * dx + 0.5 * (r0.sigma + r1.sigma) * dW;
    if (st.ch == chart::reciprocal && before < 0.0 && st.s >= 0.0 && counting) ++resets;
    if (acc) {
        if (st.ch == chart::direct) {
            // Pathwise -E/Z = (ln|Z|)' + Z - w; the log difference carries the
            // principal value across the zero crossing exactly, and telescopes
            // between substeps, so no singular values ever enter the sum.
            const double za = std::max(std::abs(before), 1e-300);
            const double zb = std::max(std::abs(st.s), 1e-300);
            acc->gamma_integral += std::log(zb) - std::log(za) +
                                   0.5 * (before + st.s) * dx - (w0 * dx + dW);
        } else {
            acc->gamma_integral += 0.5 * (r0.g + r1.g) * dx;
        }
        acc->deposit(st.z(), dx);
    }
}

// Advance the flow by `span` with no jump inside; substeps shrink where the
// chart drift is fast so no step moves the coordinate by more than ~0.25.
void advance(flow_state& st, increment_stream& stream, double E, double w0, double dt,
             double span, double x0, double burn_in, double blowup_threshold,
             std::int64_t& resets, accumulators* acc) {
    const bool has_noise = stream.gauss_coeff() != 0.0;
    double done = 0.0;
    while (done < span) {
        const chart_rates r = rates(st, E, w0);
        double dx = std::min({dt, span - done, 0.25 / (1.0 + std::abs(r.f))});
        const double x = x0 + done;
        const bool counting = x >= burn_in;
        const double dW = has_noise ? stream.gauss_increment(dx) : 0.0;
        heun_step(st, E, w0, dx, dW, resets, counting, counting ? acc : nullptr);
        reseat(st, resets, blowup_threshold, counting);
        done += dx;
    }
}

double mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double batch_stderr(const std::vector<double>& v) {
    if (v.size() < 2) return inf;
    const double m = mean(v);
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / (static_cast<double>(v.size()) - 1.0) /
                     static_cast<double>(v.size()));
}

}  // namespace

void validate(const path_config& cfg, const levy_spec& spec, double E) {
    require(std::isfinite(E), "path_config: E must be finite");
    require(cfg.total_length > 0 && std::isfinite(cfg.total_length),
            "path_config: total_length must be positive");
    require(cfg.dt > 0 && cfg.dt < cfg.total_length, "path_config: dt must lie in (0, L)");
    require(cfg.n_trajectories >= 1, "path_config: need at least one trajectory");
    require(cfg.histogram_bins >= 8, "path_config: need at least 8 histogram bins");
    require(std::isfinite(cfg.blowup_threshold) && cfg.blowup_threshold <= -100.0,
            "path_config: blowup_threshold must be finite and large negative");
    if (has_infinite_measure(spec))
        require(cfg.truncation > 0, "path_config: infinite measures need a positive truncation");
    require(cfg.truncation >= 0 && std::isfinite(cfg.truncation),
            "path_config: truncation must be finite and non-negative");

    const double c = coefficient_scale(spec);
    require(cfg.dt * std::max(std::abs(E), c * c) <= 0.5,
            "path_config: dt too coarse for the energy scale; refine dt");

    const double burn = resolve_burn_in(cfg, E);
    require(burn < 0.5 * cfg.total_length,
            "path_config: trajectory shorter than twice the burn-in");
}

// ---- increments ----------------------------------------------------------------

increment_stream::increment_stream(const levy_spec& spec, const path_config& cfg,
                                   std::uint64_t stream_index)
    : eng_(stream_seed(cfg.seed, stream_index)) {
    if (spec.fam == family::brownian_drift) {
        drift_ = 2.0 * spec.gaussian_g * spec.mu;
        gauss_ = 2.0 * std::sqrt(spec.gaussian_g);
        return;
    }
    inter_ = interlace(spec, resolve_truncation(cfg));
    drift_ = 2.0 * inter_.effective_drift;
}

std::pair<double, double> increment_stream::next_jump() {
    if (inter_.jump_rate <= 0.0) return {inf, 0.0};
    std::exponential_distribution<double> gap(inter_.jump_rate);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double ell = gap(eng_);
    double v = unit(eng_);
    while (v == 0.0) v = unit(eng_);
    return {ell, inter_.jump_quantile(v)};
}

double increment_stream::gauss_increment(double dx) {
    std::normal_distribution<double> n01(0.0, 1.0);
    return gauss_ * std::sqrt(dx) * n01(eng_);
}

double sample_path_value(increment_stream& s, double x) {
    double w = s.drift_rate() * x;
    if (s.gauss_coeff() != 0.0) w += s.gauss_increment(x);
    double reached = 0.0;
    for (;;) {
        const auto [gap, h] = s.next_jump();
        reached += gap;
        if (reached > x) break;
        w += h;
    }
    return w;
}

// ---- Riccati flow ----------------------------------------------------------------

riccati_run riccati_evolve(const levy_spec& spec, double E, const path_config& cfg,
                           std::uint64_t trajectory_index) {
    validate(cfg, spec, E);
    increment_stream stream(spec, cfg, trajectory_index);
    const double burn = resolve_burn_in(cfg, E);
    const double w0 = stream.drift_rate();

    riccati_run out;
    out.hist.edges = histogram_edges(spec, E, cfg);
    accumulators acc;
    acc.weight.assign(static_cast<std::size_t>(cfg.histogram_bins), 0.0);
    acc.edges = &out.hist.edges;

    // start near the scale the flow relaxes to; the burn-in swallows the rest
    flow_state st{chart::log_z,
                  std::log(std::max({1.0, 2.0 * std::sqrt(std::abs(E)), std::abs(w0)}))};

    double x = 0.0;
    std::int64_t resets = 0;
    while (x < cfg.total_length) {
        auto [gap, h] = stream.next_jump();
        const double span = std::min(gap, cfg.total_length - x);
        advance(st, stream, E, w0, cfg.dt, span, x, burn, cfg.blowup_threshold, resets, &acc);
        x += span;
        if (span == gap && x < cfg.total_length) {
            // multiplicative jump action: Z -> Z e^h
            switch (st.ch) {
                case chart::log_z: st.s += h; break;
                case chart::direct: st.s *= std::exp(h); break;
                case chart::reciprocal: st.s *= std::exp(-h); break;
            }
            reseat(st, resets, cfg.blowup_threshold, x >= burn);
        }
    }

    out.resets = resets;
    out.length = acc.time;
    out.mean_e_over_z = acc.time > 0 ? acc.gamma_integral / acc.time : 0.0;
    out.min_z = acc.min_z;
    double total = 0.0;
    for (double wgt : acc.weight) total += wgt;
    out.hist.mass.resize(acc.weight.size());
    for (std::size_t i = 0; i < acc.weight.size(); ++i)
        out.hist.mass[i] = total > 0 ? acc.weight[i] / total : 0.0;
    return out;
}

mc_estimate estimate(const levy_spec& spec, double E, const path_config& cfg) {
    validate(cfg, spec, E);
    const int n = cfg.n_trajectories;
    std::vector<riccati_run> runs(static_cast<std::size_t>(n));

    int workers = cfg.n_workers > 0 ? cfg.n_workers
                                    : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, n);
    std::atomic<int> cursor{0};
    auto work = [&] {
        for (;;) {
            const int i = cursor.fetch_add(1);
            if (i >= n) return;
            runs[static_cast<std::size_t>(i)] =
                riccati_evolve(spec, E, cfg, static_cast<std::uint64_t>(i));
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    // deterministic reduction in trajectory order
    mc_estimate est;
    std::vector<double> n_i, g_i;
    double total_len = 0.0;
    est.hist.edges = runs.front().hist.edges;
    est.hist.mass.assign(runs.front().hist.mass.size(), 0.0);
    for (const auto& r : runs) {
        n_i.push_back(r.length > 0 ? static_cast<double>(r.resets) / r.length : 0.0);
        g_i.push_back(r.mean_e_over_z);
        est.resets += r.resets;
        total_len += r.length;
        for (std::size_t b = 0; b < est.hist.mass.size(); ++b)
            est.hist.mass[b] += r.hist.mass[b] * r.length;
    }
    if (total_len > 0)
        for (double& m : est.hist.mass) m /= total_len;

    est.N_hat = mean(n_i);
    est.stderr_N = batch_stderr(n_i);
    if (spec.has_finite_mean()) {
        est.gamma_hat = 0.5 * coefficient_c(spec, 0.0) + mean(g_i);
        est.stderr_gamma = batch_stderr(g_i);
    } else {
        est.gamma_hat = inf;  // c(0) diverges; the exponent is infinite
        est.stderr_gamma = inf;
    }

    if (n < 2) est.warning = "single trajectory: no batch-means error estimate";
    if (E > 0 && est.resets < 16) {
        est.stderr_N = std::max(
            est.stderr_N, (std::sqrt(static_cast<double>(est.resets)) + 1.0) / total_len);
        est.warning = "insufficient resets for the requested precision; stderr widened";
    }
    return est;
}

void hist_to_csv(std::ostream& os, const z_histogram& h) {
    os << "z_bin_lo,z_bin_hi,mass\n";
    char buf[96];
    for (std::size_t i = 0; i < h.mass.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", h.edges[i], h.edges[i + 1],
                      h.mass[i]);
        os << buf;
    }
}

void estimate_to_json(std::ostream& os, const mc_estimate& est, const levy_spec& spec, double E,
                      const path_config& cfg) {
    nlohmann::json j;
    j["E"] = E;
    j["N_hat"] = est.N_hat;
    j["stderr_N"] = est.stderr_N;
    if (std::isfinite(est.gamma_hat)) {
        j["gamma_hat"] = est.gamma_hat;
        j["stderr_gamma"] = est.stderr_gamma;
    } else {
        j["gamma_hat"] = nullptr;  // infinite-mean environment
        j["stderr_gamma"] = nullptr;
    }
    j["resets"] = est.resets;
    j["L"] = cfg.total_length * cfg.n_trajectories;
    j["seed"] = cfg.seed;
    j["spec"] = nlohmann::json::parse(spec_to_json(spec));
    if (!est.warning.empty()) j["warning"] = est.warning;
    os << j.dump(2) << '\n';
}

}  // namespace levydos

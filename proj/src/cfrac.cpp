#include "levydos/cfrac.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>

#include "levydos/errors.hpp"

namespace levydos {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr int first_checkpoint = 8;

bool on_cut(cplx E) { return E.imag() == 0.0 && E.real() >= 0.0; }

// asymptotic remainder z* = (c - sqrt(c^2 - 4E))/2; the principal square root
// tends to -sqrt(-E) as c -> 0 and selects the E + i0+ continuation on the cut
cplx tail_remainder(double c, cplx E) {
    return 0.5 * (c - std::sqrt(cplx(c * c, 0.0) - 4.0 * E));
}

struct neville_result {
    cplx value;
    std::vector<double> diagonal_moves;  // |P(0..j) - P(0..j-1)| per column
};

neville_result neville_to_zero(const std::vector<double>& x, std::vector<cplx> T) {
    const size_t m = x.size();
    neville_result out;
    cplx diag = T[0];
    for (size_t j = 1; j < m; ++j) {
        for (size_t i = m - 1; i >= j; --i) {
            T[i] = (x[i - j] * T[i] - x[i] * T[i - 1]) / (x[i - j] - x[i]);
            if (i == j) break;
        }
        out.diagonal_moves.push_back(std::abs(T[j] - diag));
        diag = T[j];
    }
    out.value = diag;
    return out;
}

struct cf_eval {
    cplx value;
    cplx plain;
    cplx seed;
    cplx p, q;
    int n_terms = 0;
    double residual = 0.0;
};

cf_eval evaluate_core(const coefficient_cache& c, cplx E, double tol,
                      std::vector<cf_trace_row>* trace) {
    if (on_cut(E))
        throw validation_error(
            "evaluate_K: E lies on the branch cut [0, inf); evaluate at E + i*eta and "
            "extrapolate eta -> 0 (dos_continued does this)");
    if (!(tol > 0.0)) throw validation_error("evaluate_K: tol must be positive");

    const cplx mE = -E;
    // forward recurrence for the convergents p_n/q_n; rescaled periodically
    cplx Am1(1.0, 0.0), A0(0.0, 0.0), Bm1(0.0, 0.0), B0(1.0, 0.0);
    int next_cp = first_checkpoint;
    cplx S_prev;
    double mv_prev = -1.0;
    int have = 0;
    double last_mv = 0.0, last_sens = 0.0;

    for (int n = 1; n + 2 < coefficient_cache::max_terms; ++n) {
        // c(n) >= 0 with equality only in the free-particle limit, where the
        // seeded approximant is exactly stationary and the loop exits at the
        // first checkpoint anyway.
        const double cn = c(n);
        if (!(cn >= 0.0))
            throw validation_error("evaluate_K: coefficient sequence must stay nonnegative");
        const cplx A1 = cn * A0 + mE * Am1;
        cplx B1 = cn * B0 + mE * Bm1;
        if (B1 == cplx(0.0, 0.0)) B1 = cplx(1e-300, 0.0);  // Lentz floor
        Am1 = A0;
        A0 = A1;
        Bm1 = B0;
        B0 = B1;
        const double mag = std::abs(B0);
        if (mag > 1e140 || (mag > 0.0 && mag < 1e-140)) {
            const double s = 1.0 / mag;
            Am1 *= s;
            A0 *= s;
            Bm1 *= s;
            B0 *= s;
        }
        if (n != next_cp) continue;
        next_cp *= 2;

        // seeded approximant, plus its sensitivity to sliding the seed one
        // coefficient further out — the two error sources controlled here are
        // truncation movement and seed inaccuracy
        const cplx t1 = -tail_remainder(c(n + 1), E);
        const cplx t2 = -tail_remainder(c(n + 2), E);
        const cplx S1 = (A0 + t1 * Am1) / (B0 + t1 * Bm1);
        const cplx S2 = (A0 + t2 * Am1) / (B0 + t2 * Bm1);
        if (trace) trace->push_back({n, A0 / B0, S1});

        const double scale = std::abs(S1) + 1e-300;
        const double sens = std::abs(S1 - S2);
        if (have >= 1) {
            const double mv = std::abs(S1 - S_prev);
            last_mv = mv;
            last_sens = sens;
            if (mv <= 1e-15 * scale && sens <= 1e-14 * scale)
                return {S1, A0 / B0, -t1, A0, B0, n, (mv + sens) / scale};
            if (have >= 2 && mv_prev > 0.0) {
                const double r = mv / mv_prev;
                if (r < 0.9) {
                    const double rel = (mv * r / (1.0 - r) + sens) / scale;
                    if (rel <= tol) return {S1, A0 / B0, -t1, A0, B0, n, rel};
                }
            }
            mv_prev = mv;
        }
        S_prev = S1;
        ++have;
    }

    std::ostringstream msg;
    msg << "evaluate_K: no convergence within " << coefficient_cache::max_terms
        << " terms at E = (" << E.real() << ", " << E.imag() << "); last checkpoint movement "
        << last_mv << ", seed sensitivity " << last_sens << ", requested tol " << tol;
    throw numeric_error(msg.str());
}

double real_tail_remainder(double c, double E) {
    // E < 0: both roots real, the recessive one is negative
    return 0.5 * (c - std::sqrt(c * c - 4.0 * E));
}

}  // namespace

// ---- coefficient cache -------------------------------------------------------

struct coefficient_cache::store {
    static constexpr int chunk_bits = 12;
    static constexpr int chunk_size = 1 << chunk_bits;
    static constexpr int n_chunks = max_terms / chunk_size + 2;

    std::function<double(int)> gen;
    std::array<std::unique_ptr<std::array<double, chunk_size>>, n_chunks> chunks;
    std::atomic<int> high{0};  // indices 1..high materialised (slot = n-1)
    std::once_flag c0_flag;
    double c0 = 0.0;
    std::mutex grow;

    double at(int n) {
        if (n < 0 || n - 1 >= max_terms + chunk_size)
            throw validation_error("coefficient_cache: index out of range");
        if (n == 0) {
            // kept apart so infinite-mean environments (no c(0)) can still
            // stream c(1), c(2), ... for the fraction itself
            std::call_once(c0_flag, [&] { c0 = gen(0); });
            return c0;
        }
        const int slot = n - 1;
        if (slot >= high.load(std::memory_order_acquire)) extend(slot);
        return (*chunks[slot >> chunk_bits])[slot & (chunk_size - 1)];
    }

    void extend(int slot) {
        std::lock_guard lk(grow);
        int h = high.load(std::memory_order_relaxed);
        while (h <= slot) {
            auto& chunk = chunks[h >> chunk_bits];
            if (!chunk) chunk = std::make_unique<std::array<double, chunk_size>>();
            (*chunk)[h & (chunk_size - 1)] = gen(h + 1);
            ++h;
        }
        high.store(h, std::memory_order_release);
    }
};

coefficient_cache::coefficient_cache(levy_spec spec)
    : store_(std::make_shared<store>()) {
    store_->gen = [spec = std::move(spec)](int n) { return coefficient_c(spec, n); };
}

coefficient_cache::coefficient_cache(std::function<double(int)> generator)
    : store_(std::make_shared<store>()) {
    if (!generator) throw validation_error("coefficient_cache: empty generator");
    store_->gen = std::move(generator);
}

double coefficient_cache::operator()(int n) const { return store_->at(n); }

// ---- spec-level operations ----------------------------------------------------

cplx evaluate_K(const coefficient_cache& c, cplx E, double tol, cf_state* state,
                std::vector<cf_trace_row>* trace) {
    const cf_eval r = evaluate_core(c, E, tol, trace);
    if (state) {
        state->E = E;
        state->p = r.p;
        state->q = r.q;
        state->tail_seed = r.seed;
        state->n_terms = r.n_terms;
        state->converged = true;
        state->residual = r.residual;
    }
    return r.value;
}

namespace {

void require_cf_domain(const levy_spec& spec, const char* who) {
    if (!spec.is_subordinator())
        throw validation_error(std::string(who) +
                               ": the continued fraction requires a subordinator environment; "
                               "for the diffusive family it converges to a Bessel-function "
                               "ratio that is not the Lyapunov exponent");
}

}  // namespace

omega_value omega_cf(const coefficient_cache& c, const levy_spec& spec, cplx E) {
    require_cf_domain(spec, "omega_cf");
    if (!spec.has_finite_mean())
        throw validation_error(
            "omega_cf: infinite-mean environment has no c(0) and gamma diverges; "
            "dos_continued still recovers N from Im K alone");
    cf_state st;
    const cplx K = evaluate_K(c, E, 1e-12, &st);
    omega_value out;
    out.E = E;
    out.omega = 0.5 * c(0) + K;
    out.gamma = out.omega.real();
    out.N = std::max(0.0, -out.omega.imag() / pi);
    out.method = omega_method::continued_fraction;
    out.err_estimate = st.residual;
    return out;
}

omega_value omega_cf(const levy_spec& spec, cplx E) {
    return omega_cf(coefficient_cache(spec), spec, E);
}

omega_value dos_continued(const coefficient_cache& c, const levy_spec& spec, double E,
                          const std::vector<double>& eta_schedule) {
    require_cf_domain(spec, "dos_continued");
    if (!(E > 0.0))
        throw validation_error("dos_continued: E must lie in the spectrum interior (E > 0)");
    if (eta_schedule.size() < 2)
        throw validation_error("dos_continued: need at least two imaginary offsets");
    for (size_t i = 0; i < eta_schedule.size(); ++i)
        if (!(eta_schedule[i] > 0.0) || (i > 0 && !(eta_schedule[i] < eta_schedule[i - 1])))
            throw validation_error("dos_continued: eta schedule must be positive and decreasing");

    std::vector<cplx> K(eta_schedule.size());
    double cf_abs_err = 0.0;
    for (size_t i = 0; i < eta_schedule.size(); ++i) {
        cf_state st;
        // near the cut the seeded fraction converges like a power of n, so a
        // tolerance much below the eta-extrapolation residual only burns terms
        K[i] = evaluate_K(c, cplx(E, eta_schedule[i]), 3e-9, &st);
        cf_abs_err = std::max(cf_abs_err, st.residual * std::abs(K[i]));
    }
    const neville_result ex = neville_to_zero(eta_schedule, K);
    const auto& mv = ex.diagonal_moves;
    if (mv.size() >= 2 && mv.back() > mv[mv.size() - 2] &&
        mv.back() > 1e-8 * (std::abs(ex.value) + 1.0) + 30.0 * cf_abs_err) {
        std::ostringstream msg;
        msg << "dos_continued: eta extrapolation not settling at E = " << E << "; trace:";
        for (size_t i = 0; i < eta_schedule.size(); ++i)
            msg << " (eta=" << eta_schedule[i] << ", Im K=" << K[i].imag() << ")";
        msg << "; a denser schedule may be needed near a spectral edge";
        throw numeric_error(msg.str());
    }
    const double abs_err = (mv.empty() ? 0.0 : mv.back()) + cf_abs_err;

    omega_value out;
    out.E = E;
    if (spec.has_finite_mean())
        out.omega = 0.5 * c(0) + ex.value;
    else
        out.omega = cplx(std::numeric_limits<double>::infinity(), ex.value.imag());
    out.gamma = out.omega.real();
    const double N_raw = -ex.value.imag() / pi;
    if (N_raw < -(1e-6 + 10.0 * abs_err / pi)) {
        std::ostringstream msg;
        msg << "dos_continued: density of states came out negative (" << N_raw << ") at E = "
            << E << " beyond the error estimate " << abs_err / pi;
        throw numeric_error(msg.str());
    }
    out.N = std::max(0.0, N_raw);
    out.method = omega_method::continued_fraction;
    out.err_estimate = abs_err / (std::abs(out.omega) + 1e-300);
    return out;
}

omega_value dos_continued(const levy_spec& spec, double E,
                          const std::vector<double>& eta_schedule) {
    return dos_continued(coefficient_cache(spec), spec, E, eta_schedule);
}

std::vector<double> mellin_sequence(const levy_spec& spec, double E, int n_max) {
    require_cf_domain(spec, "mellin_sequence");
    if (!(E < 0.0)) throw validation_error("mellin_sequence: E must be negative");
    if (n_max < 1) throw validation_error("mellin_sequence: n_max must be >= 1");

    const coefficient_cache c(spec);
    std::vector<double> z(n_max + 2, 0.0), z_prev;
    for (int depth = std::max(2 * n_max, n_max + 64);; depth *= 2) {
        if (depth + 1 > coefficient_cache::max_terms)
            throw numeric_error("mellin_sequence: remainder recursion did not settle");
        double znext = real_tail_remainder(c(depth + 1), E);
        for (int n = depth; n >= 1; --n) {
            const double zn = E / (c(n) - znext);
            if (n <= n_max + 1) z[n] = zn;
            znext = zn;
        }
        if (!z_prev.empty()) {
            double worst = 0.0;
            for (int n = 1; n <= n_max + 1; ++n)
                worst = std::max(worst, std::abs(z[n] - z_prev[n]) / std::abs(z[n]));
            if (worst < 1e-13) break;
        }
        z_prev = z;
    }

    std::vector<double> f(n_max + 1);
    f[0] = 1.0;
    for (int n = 1; n <= n_max; ++n) f[n] = f[n - 1] * (z[n] / E);
    return f;
}

std::pair<double, double> stieltjes_inversion_check(const levy_spec& spec, double a, double b,
                                                    int grid) {
    require_cf_domain(spec, "stieltjes_inversion_check");
    if (!(a > 0.0) || !(b >= a))
        throw validation_error("stieltjes_inversion_check: need 0 < a <= b");
    if (grid < 4) throw validation_error("stieltjes_inversion_check: grid too coarse");
    if (a == b) return {0.0, 0.0};

    const coefficient_cache c(spec);
    const int m = grid + (grid % 2);  // even interval count for Simpson
    const double h = (b - a) / m;
    const auto weight = [&](int i) {
        if (i == 0 || i == m) return h / 3.0;
        return (i % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
    };

    // route 1: integrate Im K(t + i eta)/t on the grid, then extrapolate eta
    std::vector<cplx> integrals(default_eta_schedule.size(), 0.0);
    for (size_t k = 0; k < default_eta_schedule.size(); ++k) {
        const double eta = default_eta_schedule[k];
        for (int i = 0; i <= m; ++i) {
            const double t = a + h * i;
            integrals[k] += weight(i) * evaluate_K(c, cplx(t, eta), 3e-9) / t;
        }
    }
    const double via_K = -neville_to_zero(default_eta_schedule, integrals).value.imag() / pi;

    // route 2: extrapolate pointwise first, integrate N(t)/t second
    double via_N = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double t = a + h * i;
        via_N += weight(i) * dos_continued(c, spec, t).N / t;
    }
    return {via_K, via_N};
}

// ---- power series of -K(E)/E at E = 0 ------------------------------------------

namespace {

using poly = std::vector<double>;  // poly[k] = coefficient of E^k

poly poly_inverse(const poly& p) {
    const size_t m = p.size();
    poly q(m, 0.0);
    q[0] = 1.0 / p[0];
    for (size_t k = 1; k < m; ++k) {
        double acc = 0.0;
        for (size_t j = 1; j <= k; ++j) acc += p[j] * q[k - j];
        q[k] = -acc * q[0];
    }
    return q;
}

// series of z*(c) about E = 0: z* = c sum_{k>=1} s_k (4E/c^2)^k with
// s_k = (-1)^{k+1} binom(1/2, k)/2, i.e. E/c + E^2/c^3 + ...
poly seed_series(double c, size_t m) {
    poly z(m, 0.0);
    double binom = 0.5;  // binom(1/2, 1)
    double sign = 1.0;
    double xpow = 4.0 / (c * c);
    for (size_t k = 1; k < m; ++k) {
        z[k] = c * 0.5 * binom * sign * xpow;
        binom *= (0.5 - static_cast<double>(k)) / (static_cast<double>(k) + 1.0);
        sign = -sign;
        xpow *= 4.0 / (c * c);
    }
    return z;
}

}  // namespace

std::vector<double> cf_series_at_zero(const levy_spec& spec, int order) {
    require_cf_domain(spec, "cf_series_at_zero");
    if (order < 0) throw validation_error("cf_series_at_zero: order must be >= 0");

    const coefficient_cache c(spec);
    const size_t m = static_cast<size_t>(order) + 2;
    std::vector<double> mu_prev;
    for (int depth = order + 32;; depth *= 2) {
        if (depth + 1 > coefficient_cache::max_terms)
            throw numeric_error("cf_series_at_zero: series did not settle against depth");
        poly z = seed_series(c(depth + 1), m);
        for (int n = depth; n >= 1; --n) {
            const double cn = c(n);
            if (!(cn > 0.0))
                throw validation_error(
                    "cf_series_at_zero: coefficient sequence touches zero, the density of "
                    "states does not vanish at the origin and the negative moments diverge");
            poly den(m, 0.0);
            den[0] = cn - z[0];
            for (size_t k = 1; k < m; ++k) den[k] = -z[k];
            const poly inv = poly_inverse(den);
            for (size_t k = m - 1; k >= 1; --k) z[k] = inv[k - 1];
            z[0] = 0.0;
        }
        std::vector<double> mu(order + 1);
        for (int k = 0; k <= order; ++k) mu[k] = z[k + 1];
        if (!mu_prev.empty()) {
            double worst = 0.0;
            for (int k = 0; k <= order; ++k)
                worst = std::max(worst, std::abs(mu[k] - mu_prev[k]) /
                                            (std::abs(mu[k]) + 1e-300));
            if (worst < 1e-12) {
                for (int k = 0; k <= order; ++k)
                    if (!(mu[k] > 0.0)) {
                        std::ostringstream msg;
                        msg << "cf_series_at_zero: coefficient mu_" << k
                            << " lost positivity; largest stable order is " << k - 1;
                        throw numeric_error(msg.str());
                    }
                return mu;
            }
        }
        mu_prev = std::move(mu);
    }
}

void dump_convergents(std::ostream& out, const std::vector<cf_trace_row>& rows) {
    out << "n,re_plain,im_plain,re_seeded,im_seeded\n";
    out << std::setprecision(17);
    for (const auto& r : rows)
        out << r.n << ',' << r.plain.real() << ',' << r.plain.imag() << ',' << r.seeded.real()
            << ',' << r.seeded.imag() << '\n';
}

}  // namespace levydos

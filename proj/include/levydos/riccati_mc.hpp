#pragma once

// Monte Carlo route to N(E) and gamma(E): simulate the noise path (jumps above
// a truncation level arrive as a compound Poisson stream, smaller ones are
// absorbed into the drift) and integrate Z' = -E - Z^2 + wZ along it. Nodes of
// psi are blow-ups of Z; the flux of trajectories through -infinity per unit
// length estimates N(E). The Lyapunov exponent comes from
// gamma = c(0)/2 + <-E/Z> over the stationary stretch.

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "levydos/levy_process.hpp"

namespace levydos {

struct path_config {
    double total_length = 1000.0;  // per trajectory, burn-in included
    double dt = 1e-3;
    double truncation = 1e-4;       // jump cutoff for infinite measures
    std::uint64_t seed = 0;
    int n_trajectories = 32;
    double blowup_threshold = -1e8;  // direct-chart guard; the reciprocal
                                     // chart normally handles the passage
    double burn_in = -1.0;           // < 0: max(10/sqrt|E|, 1e5 dt)
    int histogram_bins = 200;
    double histogram_z_max = 0.0;    // <= 0: automatic from E and c
    int n_workers = 0;               // 0: hardware concurrency
};

// Throws validation_error on an unusable configuration (bad lengths, missing
// truncation for an infinite measure, dt too coarse for the energy scale).
void validate(const path_config& cfg, const levy_spec& spec, double E);

// Time-weighted occupation histogram; out-of-range samples are clamped into
// the end bins so the mass always sums to 1.
struct z_histogram {
    std::vector<double> edges;  // size bins + 1
    std::vector<double> mass;   // size bins
};

void hist_to_csv(std::ostream& os, const z_histogram& h);

// Path generator: deterministic drift rate (small-jump compensation included),
// Brownian coefficient, and a Poisson stream of truncated jumps. One instance
// per trajectory; all randomness flows through the owned engine.
class increment_stream {
  public:
    increment_stream(const levy_spec& spec, const path_config& cfg, std::uint64_t stream_index);

    double drift_rate() const { return drift_; }        // dW = drift dx + ...
    double gauss_coeff() const { return gauss_; }       // ... + gauss dB + jumps
    double jump_rate() const { return inter_.jump_rate; }

    // Next inter-arrival gap and jump height; gap is +inf for jump-free noise.
    std::pair<double, double> next_jump();
    double gauss_increment(double dx);  // gauss_coeff * N(0, dx)

  private:
    interlacing_spec inter_;
    double drift_ = 0.0;
    double gauss_ = 0.0;
    std::mt19937_64 eng_;
};

// W(x) accumulated from the stream's increments.
double sample_path_value(increment_stream& s, double x);

struct riccati_run {
    std::int64_t resets = 0;   // blow-up passages after burn-in
    double length = 0.0;       // stationary stretch the counters refer to
    double mean_e_over_z = 0;  // time average of -E/Z over that stretch
    double min_z = 0.0;        // infimum of Z after burn-in
    z_histogram hist;
};

riccati_run riccati_evolve(const levy_spec& spec, double E, const path_config& cfg,
                           std::uint64_t trajectory_index = 0);

struct mc_estimate {
    double N_hat = 0.0;
    double gamma_hat = 0.0;
    double stderr_N = 0.0;
    double stderr_gamma = 0.0;
    z_histogram hist;
    std::int64_t resets = 0;
    std::string warning;  // empty when the estimate is clean
};

// Aggregates independent trajectories (one RNG substream each, scheduled on a
// small worker pool); estimates and their batch-means errors are bit-identical
// for a fixed seed regardless of the worker count.
mc_estimate estimate(const levy_spec& spec, double E, const path_config& cfg);

void estimate_to_json(std::ostream& os, const mc_estimate& est, const levy_spec& spec, double E,
                      const path_config& cfg);

}  // namespace levydos

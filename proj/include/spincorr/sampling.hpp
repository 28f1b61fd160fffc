#pragma once

#include "spincorr/protocol.hpp"
#include "spincorr/rng.hpp"

namespace spincorr {

struct SampleConfig {
    long n_s = 1000;
    int n_repeats = 100;
    uint64_t master_seed = 0;

    void validate() const;
};

// n_s categorical draws from the joint distribution over (branch, m),
// returned as relative frequencies in OutcomeDistribution shape. A branch
// that received no draws keeps the flat placeholder and is flagged unused.
// Deterministic in (dist, n_s, seed).
OutcomeDistribution sample_outcomes(const OutcomeDistribution& dist, long n_s, uint64_t seed);

// The correlator evaluated on empirical frequencies.
double estimate_script_c(const OutcomeDistribution& empirical);

struct ErrorEstimate {
    double mean_c = 0.0;
    double std_c = 0.0;
    std::vector<double> per_repeat;
};

// n_repeats independent samples of size n_s from one exact distribution;
// mean and sample standard deviation of the per-repeat correlator.
ErrorEstimate sample_error_bars(const OutcomeDistribution& dist, const SampleConfig& cfg);
ErrorEstimate error_bars(const ProtocolConfig& config, const SampleConfig& cfg);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Slope of log(std) vs log(n_s) over the given sample sizes (expected near
// -1/2). Requires >= 3 sizes spanning at least one decade.
double scaling_exponent(const ProtocolConfig& config, const std::vector<long>& n_s_list, const SampleConfig& cfg);

}  // namespace spincorr

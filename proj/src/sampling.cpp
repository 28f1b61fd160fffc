#include "spincorr/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace spincorr {

void SampleConfig::validate() const {
    if (n_s < 1) throw std::invalid_argument("sample size n_s must be at least 1");
    if (n_repeats < 2) throw std::invalid_argument("error bars need at least 2 repeats");
}

OutcomeDistribution sample_outcomes(const OutcomeDistribution& dist, long n_s, uint64_t seed) {
    if (n_s < 1) throw std::invalid_argument("sample size n_s must be at least 1");
    const int d = multiplet_dim(dist.l_j);

    // One categorical draw over the 2d joint outcomes (minus branch first,
    // m ascending within each branch) keeps the RNG consumption unambiguous.
    std::vector<double> cumulative(static_cast<size_t>(2 * d), 0.0);
    double run = 0.0;
    for (int k = 0; k < d; ++k) {
        run += dist.minus_used ? dist.p_minus * dist.p_m_given_minus[static_cast<size_t>(k)] : 0.0;
        cumulative[static_cast<size_t>(k)] = run;
    }
    for (int k = 0; k < d; ++k) {
        run += dist.plus_used ? dist.p_plus * dist.p_m_given_plus[static_cast<size_t>(k)] : 0.0;
        cumulative[static_cast<size_t>(d + k)] = run;
    }
    const double total = run;
    if (total <= 0.0) throw ContractViolation("cannot sample from an all-zero distribution");

    std::vector<long> counts(static_cast<size_t>(2 * d), 0);
    SplitMix64 rng(seed);
    for (long draw = 0; draw < n_s; ++draw) {
        const double u = rng.uniform01() * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const size_t idx = std::min(static_cast<size_t>(it - cumulative.begin()), cumulative.size() - 1);
        ++counts[idx];
    }

    OutcomeDistribution empirical;
    empirical.l_j = dist.l_j;
    long n_minus = 0;
    long n_plus = 0;
    for (int k = 0; k < d; ++k) {
        n_minus += counts[static_cast<size_t>(k)];
        n_plus += counts[static_cast<size_t>(d + k)];
    }
    empirical.p_minus = static_cast<double>(n_minus) / static_cast<double>(n_s);
    empirical.p_plus = static_cast<double>(n_plus) / static_cast<double>(n_s);
    empirical.minus_used = n_minus > 0;
    empirical.plus_used = n_plus > 0;
    empirical.p_m_given_minus.assign(static_cast<size_t>(d), 1.0 / d);
    empirical.p_m_given_plus.assign(static_cast<size_t>(d), 1.0 / d);
    if (empirical.minus_used)
        for (int k = 0; k < d; ++k)
            empirical.p_m_given_minus[static_cast<size_t>(k)] =
                static_cast<double>(counts[static_cast<size_t>(k)]) / static_cast<double>(n_minus);
    if (empirical.plus_used)
        for (int k = 0; k < d; ++k)
            empirical.p_m_given_plus[static_cast<size_t>(k)] =
                static_cast<double>(counts[static_cast<size_t>(d + k)]) / static_cast<double>(n_plus);
    empirical.validate();
    return empirical;
}

double estimate_script_c(const OutcomeDistribution& empirical) { return script_c_from_distribution(empirical); }

ErrorEstimate sample_error_bars(const OutcomeDistribution& dist, const SampleConfig& cfg) {
    cfg.validate();
    ErrorEstimate est;
    est.per_repeat.assign(static_cast<size_t>(cfg.n_repeats), 0.0);

    // Per-repeat seeds are derived, not consumed sequentially, so the loop
    // order (and any parallel schedule) cannot change the draws.
#pragma omp parallel for schedule(static)
    for (int r = 0; r < cfg.n_repeats; ++r) {
        const uint64_t seed = derive_stream_seed(cfg.master_seed, static_cast<uint64_t>(r));
        est.per_repeat[static_cast<size_t>(r)] = estimate_script_c(sample_outcomes(dist, cfg.n_s, seed));
    }

    double sum = 0.0;
    for (double v : est.per_repeat) sum += v;
    est.mean_c = sum / static_cast<double>(cfg.n_repeats);
    double ss = 0.0;
    for (double v : est.per_repeat) ss += (v - est.mean_c) * (v - est.mean_c);
    est.std_c = std::sqrt(ss / static_cast<double>(cfg.n_repeats - 1));
    return est;
}

ErrorEstimate error_bars(const ProtocolConfig& config, const SampleConfig& cfg) {
    return sample_error_bars(run_protocol(config), cfg);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope needs matched series");
    const size_t n = x.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t k = 0; k < n; ++k) {
        if (x[k] <= 0.0) throw std::invalid_argument("loglog_slope needs positive x values");
        const double lx = std::log(x[k]);
        // A zero spread (e.g. injected identical values) must map to slope
        // 0, not -inf; floor the log argument instead of rejecting.
        const double ly = std::log(std::max(y[k], 1e-300));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double nn = static_cast<double>(n);
    const double denom = nn * sxx - sx * sx;
    if (std::abs(denom) < 1e-12) throw std::invalid_argument("loglog_slope: degenerate x values");
    return (nn * sxy - sx * sy) / denom;
}

double scaling_exponent(const ProtocolConfig& config, const std::vector<long>& n_s_list, const SampleConfig& cfg) {
    if (n_s_list.size() < 3) throw std::invalid_argument("scaling_exponent needs at least 3 sample sizes");
    const auto [lo, hi] = std::minmax_element(n_s_list.begin(), n_s_list.end());
    if (*lo < 1 || *hi < 10 * *lo)
        throw std::invalid_argument("scaling_exponent needs sample sizes spanning at least one decade");

    const OutcomeDistribution dist = run_protocol(config);
    std::vector<double> xs, ys;
    xs.reserve(n_s_list.size());
    ys.reserve(n_s_list.size());
    for (size_t k = 0; k < n_s_list.size(); ++k) {
        SampleConfig per = cfg;
        per.n_s = n_s_list[k];
        // Decorrelate the sweeps: each sample size gets its own seed stream.
        per.master_seed = derive_stream_seed(cfg.master_seed, 0x5350414eull + k);
        const ErrorEstimate est = sample_error_bars(dist, per);
        xs.push_back(static_cast<double>(per.n_s));
        ys.push_back(est.std_c);
    }
    return loglog_slope(xs, ys);
}

}  // namespace spincorr

#pragma once

// Monte Carlo simulation of container recovery. A round reads one uniformly
// random strand from every surviving container; samples count whole rounds.
//
// Trial i draws from CounterStream(master_seed, i) and writes sample i, so
// results are identical for any number of worker threads.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "dnastore/asymptotics.hpp"
#include "dnastore/code_analysis.hpp"
#include "dnastore/error.hpp"
#include "dnastore/mds_codes.hpp"
#include "dnastore/parallel.hpp"
#include "dnastore/rng.hpp"

namespace dnastore {

enum class ProcessKind { CcpMax, ScalarMds, ArrayBlock };

constexpr std::string_view to_string(ProcessKind k) noexcept {
    switch (k) {
    case ProcessKind::CcpMax: return "ccp";
    case ProcessKind::ScalarMds: return "scalar";
    case ProcessKind::ArrayBlock: return "array";
    }
    return "?";
}

inline constexpr std::size_t kMaxCopiesN = 10000;

struct SimConfig {
    ProcessKind kind = ProcessKind::ScalarMds;
    std::uint64_t n = 1;
    std::size_t m = 1;   // collectors (ccp) or columns needed per row (scalar)
    std::size_t rho = 0; // scalar only
    std::size_t ell = 1; // ccp only
    std::string code;    // array only: code label
    std::size_t p = 0;   // array only: failed container, 0-based
    std::uint64_t trials = 1;
    std::uint64_t master_seed = 0;
};

struct SimAggregate {
    SimConfig config;
    std::vector<std::uint64_t> samples;
    std::vector<double> z; // normalized samples; empty when undefined
    double mean = 0.0;
    double variance = 0.0; // unbiased
    double std_error = 0.0;
    std::uint64_t min = 0;
    std::uint64_t max = 0;
};

/// Summary statistics folded over samples in trial order.
inline void summarize_samples(SimAggregate& agg) {
    const auto& s = agg.samples;
    require(!s.empty(), ErrorCode::InvalidArgument, "no samples");
    unsigned __int128 total = 0;
    for (auto x : s) total += x;
    const double count = double(s.size());
    agg.mean = double(total) / count;
    double ss = 0.0;
    for (auto x : s) {
        const double d = double(x) - agg.mean;
        ss += d * d;
    }
    agg.variance = s.size() > 1 ? ss / (count - 1.0) : 0.0;
    agg.std_error = std::sqrt(agg.variance / count);
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    agg.min = *lo;
    agg.max = *hi;
}

namespace detail {

inline void validate_common(std::uint64_t n, std::uint64_t trials) {
    require(n >= 1, ErrorCode::InvalidArgument, "n must be >= 1");
    require(trials >= 1, ErrorCode::InvalidArgument, "trials must be >= 1");
}

// Draws for one coupon collector needing `ell` copies of each of n coupons.
inline std::uint64_t collector_time(std::uint64_t n, std::size_t ell, CounterStream& rng,
                                    std::vector<std::uint32_t>& counts) {
    if (ell == 1) {
        // k coupons already seen: next new one after Geometric((n-k)/n) draws
        std::uint64_t t = 0;
        for (std::uint64_t k = 0; k < n; ++k) t += rng.geometric(double(n - k) / double(n));
        return t;
    }
    counts.assign(n, 0);
    std::uint64_t remaining = n, t = 0;
    while (remaining > 0) {
        ++t;
        auto& c = counts[rng.below(n)];
        if (++c == ell) --remaining;
    }
    return t;
}

template <typename Trial>
SimAggregate run_trials(const SimConfig& config, unsigned threads, Trial&& trial) {
    SimAggregate agg;
    agg.config = config;
    agg.samples.assign(config.trials, 0);
    parallel_for(config.trials, threads, [&](std::size_t i) {
        CounterStream rng(config.master_seed, i);
        agg.samples[i] = trial(rng);
    });
    summarize_samples(agg);
    return agg;
}

} // namespace detail

/// Max over m independent collectors of the time to see every coupon ell times.
inline SimAggregate sim_ccp_max(std::uint64_t n, std::size_t ell, std::size_t m, std::uint64_t trials,
                                std::uint64_t seed, unsigned threads = 1) {
    detail::validate_common(n, trials);
    require(ell >= 1 && m >= 1, ErrorCode::InvalidArgument, "ell and m must be >= 1");
    require(ell == 1 || n <= kMaxCopiesN, ErrorCode::TooLarge,
            "multi-copy simulation is capped at n <= " + std::to_string(kMaxCopiesN));
    SimConfig cfg{ProcessKind::CcpMax, n, m, 0, ell, {}, 0, trials, seed};
    auto agg = detail::run_trials(cfg, threads, [&](CounterStream& rng) {
        std::vector<std::uint32_t> counts;
        std::uint64_t worst = 0;
        for (std::size_t j = 0; j < m; ++j) worst = std::max(worst, detail::collector_time(n, ell, rng, counts));
        return worst;
    });
    const double dn = double(n);
    const double shift = std::log(dn) + (ell > 1 ? double(ell - 1) * std::log(std::log(dn)) : 0.0);
    if (std::isfinite(shift)) {
        agg.z.reserve(trials);
        for (auto t : agg.samples) agg.z.push_back(double(t) / dn - shift);
    }
    return agg;
}

namespace detail {

// Round at which each row is first marked by one column: the rows appear in
// uniformly random order, the k-th new row after Geometric((n-k)/n) rounds.
inline void column_first_hits(std::uint64_t n, CounterStream& rng, std::vector<std::uint32_t>& order,
                              std::vector<std::uint64_t>& hit, std::size_t column, std::size_t columns) {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0u);
    for (std::uint64_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    std::uint64_t t = 0;
    for (std::uint64_t k = 0; k < n; ++k) {
        t += rng.geometric(double(n - k) / double(n));
        hit[std::size_t(order[k]) * columns + column] = t;
    }
}

inline std::uint64_t scalar_trial_fast(std::uint64_t n, std::size_t m, std::size_t rho, CounterStream& rng) {
    const std::size_t columns = m + rho;
    std::vector<std::uint64_t> hit(n * columns);
    std::vector<std::uint32_t> order;
    for (std::size_t c = 0; c < columns; ++c) column_first_hits(n, rng, order, hit, c, columns);
    std::uint64_t worst = 0;
    for (std::uint64_t row = 0; row < n; ++row) {
        auto first = hit.begin() + std::ptrdiff_t(row * columns);
        std::nth_element(first, first + std::ptrdiff_t(m - 1), first + std::ptrdiff_t(columns));
        worst = std::max(worst, *(first + std::ptrdiff_t(m - 1)));
    }
    return worst;
}

inline std::uint64_t scalar_trial_naive(std::uint64_t n, std::size_t m, std::size_t rho, CounterStream& rng) {
    const std::size_t columns = m + rho;
    std::vector<std::uint8_t> marked(n * columns, 0);
    std::vector<std::size_t> per_row(n, 0);
    std::uint64_t unsatisfied = n, t = 0;
    while (unsatisfied > 0) {
        ++t;
        for (std::size_t c = 0; c < columns; ++c) {
            const std::uint64_t row = rng.below(n);
            auto& cell = marked[row * columns + c];
            if (cell) continue;
            cell = 1;
            if (++per_row[row] == m) --unsatisfied;
        }
    }
    return t;
}

inline SimAggregate scalar_sim(std::uint64_t n, std::size_t m, std::size_t rho, std::uint64_t trials,
                               std::uint64_t seed, unsigned threads, bool naive) {
    validate_common(n, trials);
    require(m >= 1, ErrorCode::InvalidArgument, "m must be >= 1");
    SimConfig cfg{ProcessKind::ScalarMds, n, m, rho, 1, {}, 0, trials, seed};
    auto agg = run_trials(cfg, threads, [&](CounterStream& rng) {
        return naive ? scalar_trial_naive(n, m, rho, rng) : scalar_trial_fast(n, m, rho, rng);
    });
    const double dn = double(n);
    agg.z.reserve(trials);
    for (auto t : agg.samples) agg.z.push_back(double(rho + 1) * double(t) / dn - std::log(dn));
    return agg;
}

} // namespace detail

/// Rounds until each of n rows is marked by at least m of the m+rho columns.
inline SimAggregate sim_scalar_mds(std::uint64_t n, std::size_t m, std::size_t rho, std::uint64_t trials,
                                   std::uint64_t seed, unsigned threads = 1) {
    return detail::scalar_sim(n, m, rho, trials, seed, threads, false);
}

/// Round-by-round reference simulation of the same process.
inline SimAggregate sim_scalar_mds_naive(std::uint64_t n, std::size_t m, std::size_t rho, std::uint64_t trials,
                                         std::uint64_t seed, unsigned threads = 1) {
    return detail::scalar_sim(n, m, rho, trials, seed, threads, true);
}

/// Rounds until every b-row block's observed positions leave the failed
/// column determined, per the classification in `report`.
inline SimAggregate sim_array(const ArrayCodeSpec& code, const BadBlockReport& report, std::uint64_t n,
                              std::uint64_t trials, std::uint64_t seed, unsigned threads = 1) {
    detail::validate_common(n, trials);
    require(n % code.b == 0, ErrorCode::BlockMismatch,
            "block height " + std::to_string(code.b) + " does not divide n=" + std::to_string(n));
    require(report.classification && report.M == code.M && report.b == code.b && report.p < code.M &&
                report.classification->bits() == code.b * (code.M - 1),
            ErrorCode::ClassificationMismatch, "classification does not match the code");
    const auto& cls = *report.classification;
    const std::size_t b = code.b;
    const std::size_t survivors = code.M - 1;
    const std::uint64_t blocks = n / b;
    SimConfig cfg{ProcessKind::ArrayBlock, n, survivors, 0, 1, code.name, report.p, trials, seed};
    auto agg = detail::run_trials(cfg, threads, [&](CounterStream& rng) {
        std::vector<PositionMask> masks(blocks, 0);
        std::uint64_t bad = cls.is_bad(0) ? blocks : 0;
        std::uint64_t t = 0;
        while (bad > 0) {
            ++t;
            for (std::size_t s = 0; s < survivors; ++s) {
                const std::uint64_t row = rng.below(n);
                auto& mask = masks[row / b];
                const PositionMask updated = mask | PositionMask{1} << (s * b + row % b);
                if (updated == mask) continue;
                const bool was_bad = cls.is_bad(mask), now_bad = cls.is_bad(updated);
                mask = updated;
                if (was_bad && !now_bad) --bad;
                else if (!was_bad && now_bad) ++bad;
            }
        }
        return t;
    });
    const double dn = double(n);
    agg.z.reserve(trials);
    for (auto t : agg.samples) agg.z.push_back(double(report.alpha_star) * double(t) / dn - std::log(dn));
    return agg;
}

/// Kolmogorov-Smirnov distance between the empirical CDF of `values` and
/// Gumbel(mu, beta).
inline double ks_distance(std::vector<double> values, double mu, double beta) {
    require(values.size() >= 2, ErrorCode::InvalidArgument, "need at least 2 samples");
    std::sort(values.begin(), values.end());
    const double count = double(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double f = gumbel_cdf(values[i], mu, beta);
        d = std::max({d, f - double(i) / count, double(i + 1) / count - f});
    }
    return d;
}

} // namespace dnastore

#pragma once

// Exact expected stopping times for small instances of the recovery
// processes: closed sums for the single-copy collector, and absorbing
// Markov chains solved by back-substitution for everything else.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dnastore/code_analysis.hpp"
#include "dnastore/error.hpp"

namespace dnastore {

struct ExactResult {
    double value = 0.0;
    std::size_t states = 0;
};

inline constexpr std::size_t kMaxChainStates = 1'000'000;
inline constexpr std::size_t kMaxProcessBits = 20;
inline constexpr double kResidualTolerance = 1e-9;

/// n * H_n.
inline double exact_ccp_mean(std::uint64_t n) {
    require(n >= 1, ErrorCode::InvalidArgument, "n must be >= 1");
    double h = 0.0;
    for (std::uint64_t k = n; k >= 1; --k) h += 1.0 / double(k);
    return double(n) * h;
}

/// Expected maximum of m independent single-copy collector times, as the
/// tail sum of P[max > t] using inclusion-exclusion for P[X > t].
inline ExactResult exact_max_ccp_mean(std::uint64_t n, std::size_t m) {
    require(n >= 1 && m >= 1, ErrorCode::InvalidArgument, "n and m must be >= 1");
    require(n <= 20, ErrorCode::TooLarge, "inclusion-exclusion is limited to n <= 20");
    std::vector<double> binom(n + 1, 1.0);
    for (std::uint64_t j = 1; j <= n; ++j) binom[j] = binom[j - 1] * double(n - j + 1) / double(j);
    const double dn = double(n);
    double total = 0.0;
    std::uint64_t t = 0;
    for (;; ++t) {
        // P[X > t] = sum_{j>=1} (-1)^{j+1} C(n,j) (1 - j/n)^t
        double tail = 0.0;
        if (t == 0) {
            tail = 1.0;
        } else {
            for (std::uint64_t j = 1; j < n; ++j) {
                const double term = binom[j] * std::pow(1.0 - double(j) / dn, double(t));
                tail += (j % 2 == 1) ? term : -term;
            }
        }
        tail = std::clamp(tail, 0.0, 1.0);
        total += -std::expm1(double(m) * std::log1p(-tail));
        // P[max > s] <= m n (1-1/n)^s, so the rest sums to at most m n^2 (1-1/n)^{t+1}
        const double remainder = double(m) * dn * dn * std::pow(1.0 - 1.0 / dn, double(t + 1));
        if (remainder < 1e-12) break;
    }
    return {total, std::size_t(t + 1)};
}

namespace detail {

// Solves expected absorption times of a chain whose non-self transitions
// strictly increase `progress`. Returns the value at `initial`.
template <typename Transitions, typename Absorbing, typename Progress>
ExactResult solve_monotone_chain(std::uint64_t initial, Transitions&& transitions, Absorbing&& absorbing,
                                 Progress&& progress, std::size_t max_states) {
    std::unordered_map<std::uint64_t, std::size_t> index;
    std::vector<std::uint64_t> states;
    std::vector<std::vector<std::pair<std::uint64_t, double>>> out;
    std::vector<std::uint64_t> stack{initial};
    index.emplace(initial, 0);
    states.push_back(initial);
    out.emplace_back();
    while (!stack.empty()) {
        const std::uint64_t s = stack.back();
        stack.pop_back();
        if (absorbing(s)) continue;
        auto moves = transitions(s);
        for (const auto& [next, prob] : moves) {
            if (index.emplace(next, states.size()).second) {
                require(states.size() < max_states, ErrorCode::TooLarge,
                        "state space exceeds " + std::to_string(max_states));
                states.push_back(next);
                out.emplace_back();
                stack.push_back(next);
            }
        }
        out[index.at(s)] = std::move(moves);
    }

    std::vector<std::size_t> order(states.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return progress(states[a]) > progress(states[b]); });

    std::vector<double> expect(states.size(), 0.0);
    for (auto i : order) {
        if (absorbing(states[i])) continue;
        double stay = 0.0, acc = 1.0;
        for (const auto& [next, prob] : out[i]) {
            if (next == states[i]) stay += prob;
            else acc += prob * expect[index.at(next)];
        }
        require(stay < 1.0, ErrorCode::InvalidArgument, "chain has a non-absorbing trap state");
        expect[i] = acc / (1.0 - stay);
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (absorbing(states[i])) continue;
        double lhs = expect[i], rhs = 1.0, total_prob = 0.0;
        for (const auto& [next, prob] : out[i]) {
            rhs += prob * expect[index.at(next)];
            total_prob += prob;
        }
        require(std::abs(total_prob - 1.0) <= 1e-12, ErrorCode::InvalidArgument, "transition rows must sum to 1");
        require(std::abs(lhs - rhs) <= kResidualTolerance * std::max(1.0, std::abs(lhs)), ErrorCode::InvalidArgument,
                "back-substitution residual too large");
    }
    return {expect[0], states.size()};
}

} // namespace detail

/// Expected draws until each of n coupons has been seen ell times. State:
/// how many coupons hold exactly c copies, c = 0..ell-1.
inline ExactResult exact_ccp_l_mean(std::uint64_t n, std::size_t ell) {
    require(n >= 1 && ell >= 1, ErrorCode::InvalidArgument, "n and ell must be >= 1");
    // number of states is C(n+ell, ell)
    double states = 1.0;
    for (std::size_t k = 1; k <= ell; ++k) {
        states = states * double(n + k) / double(k);
        require(states <= double(kMaxChainStates), ErrorCode::TooLarge, "state budget exceeded");
    }
    const std::uint64_t radix = n + 1;
    auto get = [&](std::uint64_t s, std::size_t c) {
        for (std::size_t i = 0; i < c; ++i) s /= radix;
        return s % radix;
    };
    std::vector<std::uint64_t> weight(ell, 1);
    for (std::size_t c = 1; c < ell; ++c) weight[c] = weight[c - 1] * radix;
    const double dn = double(n);

    auto below_ell = [&](std::uint64_t s) {
        std::uint64_t total = 0;
        for (std::size_t c = 0; c < ell; ++c) total += get(s, c);
        return total;
    };
    auto transitions = [&](std::uint64_t s) {
        std::vector<std::pair<std::uint64_t, double>> moves;
        const std::uint64_t done = n - below_ell(s);
        if (done > 0) moves.emplace_back(s, double(done) / dn);
        for (std::size_t c = 0; c < ell; ++c) {
            const std::uint64_t count = get(s, c);
            if (count == 0) continue;
            std::uint64_t next = s - weight[c];
            if (c + 1 < ell) next += weight[c + 1];
            moves.emplace_back(next, double(count) / dn);
        }
        return moves;
    };
    auto absorbing = [&](std::uint64_t s) { return below_ell(s) == 0; };
    auto progress = [&](std::uint64_t s) {
        std::uint64_t copies = 0, below = 0;
        for (std::size_t c = 0; c < ell; ++c) {
            copies += c * get(s, c);
            below += get(s, c);
        }
        return copies + (n - below) * ell;
    };
    return detail::solve_monotone_chain(n, transitions, absorbing, progress, kMaxChainStates);
}

/// Stopping rule over an n x columns mark matrix; bit row*columns + col.
using MarkPredicate = std::function<bool(std::uint64_t)>;

/// Expected rounds until `done` holds, where each round every column marks
/// one uniformly random row.
inline ExactResult exact_process_mean(std::uint64_t n, std::size_t columns, const MarkPredicate& done) {
    require(n >= 1 && columns >= 1, ErrorCode::InvalidArgument, "n and columns must be >= 1");
    require(n * columns <= kMaxProcessBits, ErrorCode::TooLarge,
            "n*columns exceeds " + std::to_string(kMaxProcessBits) + " mark bits");
    const double step = 1.0 / double(n);
    auto transitions = [&](std::uint64_t s) {
        std::unordered_map<std::uint64_t, double> dist{{s, 1.0}};
        for (std::size_t c = 0; c < columns; ++c) {
            std::unordered_map<std::uint64_t, double> next;
            for (const auto& [state, prob] : dist)
                for (std::uint64_t row = 0; row < n; ++row)
                    next[state | std::uint64_t{1} << (row * columns + c)] += prob * step;
            dist = std::move(next);
        }
        std::vector<std::pair<std::uint64_t, double>> moves(dist.begin(), dist.end());
        std::sort(moves.begin(), moves.end());
        return moves;
    };
    auto progress = [](std::uint64_t s) { return std::uint64_t(std::popcount(s)); };
    return detail::solve_monotone_chain(0, transitions, done, progress, std::size_t{1} << kMaxProcessBits);
}

/// Scalar MDS process: every row needs marks from m of the m+rho columns.
inline ExactResult exact_scalar_process_mean(std::uint64_t n, std::size_t m, std::size_t rho) {
    require(m >= 1, ErrorCode::InvalidArgument, "m must be >= 1");
    const std::size_t columns = m + rho;
    return exact_process_mean(n, columns, [=](std::uint64_t s) {
        for (std::uint64_t row = 0; row < n; ++row)
            if (std::size_t(std::popcount((s >> (row * columns)) & ((std::uint64_t{1} << columns) - 1))) < m)
                return false;
        return true;
    });
}

/// Array process: every b-row block's marked positions must recover the
/// failed column.
inline ExactResult exact_block_process_mean(const BadBlockReport& report, std::uint64_t n) {
    require(report.classification != nullptr, ErrorCode::ClassificationMismatch, "report has no classification");
    require(n % report.b == 0, ErrorCode::BlockMismatch, "block height does not divide n");
    const std::size_t columns = report.M - 1;
    const std::size_t b = report.b;
    const auto cls = report.classification;
    return exact_process_mean(n, columns, [=](std::uint64_t s) {
        for (std::uint64_t a = 0; a < n / b; ++a) {
            PositionMask block = 0;
            for (std::size_t i = 0; i < b; ++i)
                for (std::size_t c = 0; c < columns; ++c)
                    if (s >> ((a * b + i) * columns + c) & 1u) block |= PositionMask{1} << (c * b + i);
            if (cls->is_bad(block)) return false;
        }
        return true;
    });
}

} // namespace dnastore

#pragma once

// Bad-blocks configuration of a linear array code for one failed container.
//
// A set B of observed positions (row in block, surviving container) is bad
// when the symbols at B do not determine the failed column. Position sets
// are bitmasks: survivor s (the s-th container other than p, in increasing
// order) and row i map to bit s*b + i.

#include <bit>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dnastore/error.hpp"
#include "dnastore/finite_field.hpp"
#include "dnastore/mds_codes.hpp"
#include "dnastore/parallel.hpp"

namespace dnastore {

inline constexpr std::size_t kMaxAnalysisBits = 24;

using PositionMask = std::uint32_t;

/// Good/bad flag for every subset of [b] x ([M] \ {p}); bit set = bad.
class BadSetClassification {
public:
    BadSetClassification() = default;
    explicit BadSetClassification(std::size_t bits)
        : bits_(bits), words_(((std::size_t{1} << bits) + 63) / 64, 0) {}

    std::size_t bits() const noexcept { return bits_; }
    std::size_t subsets() const noexcept { return std::size_t{1} << bits_; }
    bool is_bad(PositionMask mask) const noexcept { return (words_[mask >> 6] >> (mask & 63)) & 1u; }
    void mark_bad(PositionMask mask) noexcept { words_[mask >> 6] |= std::uint64_t{1} << (mask & 63); }

    friend bool operator==(const BadSetClassification&, const BadSetClassification&) = default;

private:
    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

struct BadBlockReport {
    std::size_t p = 0; // 0-based failed container
    std::size_t b = 1;
    std::size_t M = 0;
    std::size_t alpha_star = 0;
    std::size_t beta_star = 0;
    std::vector<std::uint64_t> b_delta; // index = |B|, 0..b(M-1)
    std::vector<PositionMask> maximal_bad_sets; // ascending
    double bound_log_coeff = 0.0;               // 1/alpha*
    double bound_linear_coeff = 0.0;            // beta*/(b alpha*)
    std::shared_ptr<const BadSetClassification> classification;

    std::size_t survivor_bits() const noexcept { return b * (M - 1); }
};

/// Reports compare by value, classification included.
inline bool same_report(const BadBlockReport& x, const BadBlockReport& y) {
    return x.p == y.p && x.b == y.b && x.M == y.M && x.alpha_star == y.alpha_star &&
           x.beta_star == y.beta_star && x.b_delta == y.b_delta && x.maximal_bad_sets == y.maximal_bad_sets &&
           x.bound_log_coeff == y.bound_log_coeff && x.bound_linear_coeff == y.bound_linear_coeff &&
           x.classification && y.classification && *x.classification == *y.classification;
}

inline std::size_t survivor_container(std::size_t s, std::size_t p) noexcept { return s < p ? s : s + 1; }

inline std::vector<Position> mask_positions(PositionMask mask, std::size_t b, std::size_t p) {
    std::vector<Position> out;
    for (std::size_t bit = 0; bit < 32; ++bit)
        if (mask >> bit & 1u) out.push_back({bit % b, survivor_container(bit / b, p)});
    return out;
}

inline PositionMask positions_mask(const std::vector<Position>& positions, std::size_t b, std::size_t M,
                                   std::size_t p) {
    PositionMask mask = 0;
    for (const auto& pos : positions) {
        require(pos.row < b && pos.container < M && pos.container != p, ErrorCode::PositionOutOfRange,
                "position must lie in [b] x ([M] \\ {p})");
        const std::size_t s = pos.container < p ? pos.container : pos.container - 1;
        mask |= PositionMask{1} << (s * b + pos.row);
    }
    return mask;
}

namespace detail {

inline bool recoverable_from_coords(const ArrayCodeSpec& code, std::size_t p, const std::vector<std::size_t>& coords) {
    const FieldMatrix eq = restriction_equations(code, coords);
    return kernel_fixes_column(code, rank_and_kernel(*code.field, eq).kernel, p);
}

inline std::vector<std::size_t> mask_coords(const ArrayCodeSpec& code, std::size_t p, PositionMask mask) {
    std::vector<std::size_t> coords;
    for (const auto& pos : mask_positions(mask, code.b, p)) coords.push_back(code.coordinate(pos));
    return coords;
}

inline void check_analysis_budget(const ArrayCodeSpec& code, std::size_t p) {
    require(p < code.M, ErrorCode::PositionOutOfRange, "failed container out of range");
    require(code.b * (code.M - 1) <= kMaxAnalysisBits, ErrorCode::TooLarge,
            "b*(M-1) exceeds the enumeration budget of " + std::to_string(kMaxAnalysisBits) + " bits");
}

inline BadBlockReport summarize(const ArrayCodeSpec& code, std::size_t p,
                                std::shared_ptr<const BadSetClassification> cls) {
    BadBlockReport rep;
    rep.p = p;
    rep.b = code.b;
    rep.M = code.M;
    const std::size_t bits = rep.survivor_bits();
    rep.b_delta.assign(bits + 1, 0);
    std::size_t largest = 0;
    bool any = false;
    for (std::size_t mask = 0; mask < cls->subsets(); ++mask) {
        if (!cls->is_bad(static_cast<PositionMask>(mask))) continue;
        const auto size = static_cast<std::size_t>(std::popcount(mask));
        ++rep.b_delta[size];
        largest = any ? std::max(largest, size) : size;
        any = true;
    }
    require(any, ErrorCode::InvalidArgument,
            "column " + std::to_string(p + 1) + " is constant; no bad sets exist");
    rep.alpha_star = bits - largest;
    rep.beta_star = rep.b_delta[largest];
    for (std::size_t mask = 0; mask < cls->subsets(); ++mask)
        if (cls->is_bad(static_cast<PositionMask>(mask)) && std::size_t(std::popcount(mask)) == largest)
            rep.maximal_bad_sets.push_back(static_cast<PositionMask>(mask));
    if (rep.alpha_star > 0) {
        rep.bound_log_coeff = 1.0 / double(rep.alpha_star);
        rep.bound_linear_coeff = double(rep.beta_star) / (double(code.b) * double(rep.alpha_star));
    }
    rep.classification = std::move(cls);
    return rep;
}

} // namespace detail

/// Whether the symbols at `positions` determine column p of every codeword.
inline bool is_recoverable(const ArrayCodeSpec& code, std::size_t p, const std::vector<Position>& positions) {
    require(p < code.M, ErrorCode::PositionOutOfRange, "failed container out of range");
    std::vector<std::size_t> coords;
    for (const auto& pos : positions) {
        require(pos.row < code.b && pos.container < code.M && pos.container != p, ErrorCode::PositionOutOfRange,
                "position must lie in [b] x ([M] \\ {p})");
        coords.push_back(code.coordinate(pos));
    }
    return detail::recoverable_from_coords(code, p, coords);
}

/// Classifies every subset of surviving positions with rank computations.
inline BadBlockReport analyze(const ArrayCodeSpec& code, std::size_t p, unsigned threads = 1) {
    detail::check_analysis_budget(code, p);
    const std::size_t bits = code.b * (code.M - 1);
    const std::size_t total = std::size_t{1} << bits;
    std::vector<std::uint8_t> bad(total, 0);
    parallel_for(total, threads, [&](std::size_t mask) {
        const auto coords = detail::mask_coords(code, p, static_cast<PositionMask>(mask));
        bad[mask] = !detail::recoverable_from_coords(code, p, coords);
    });
    auto cls = std::make_shared<BadSetClassification>(bits);
    for (std::size_t mask = 0; mask < total; ++mask)
        if (bad[mask]) cls->mark_bad(static_cast<PositionMask>(mask));
    return detail::summarize(code, p, std::move(cls));
}

inline constexpr std::uint64_t kMaxBruteForceCodewords = 100000;

/// Independent classification: enumerate every codeword and look for two
/// that agree on B yet differ in column p.
inline BadBlockReport brute_force_analyze(const ArrayCodeSpec& code, std::size_t p) {
    detail::check_analysis_budget(code, p);
    const FiniteField& f = *code.field;
    const std::size_t L = code.message_length();
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < L; ++i) {
        count *= f.order();
        require(count <= kMaxBruteForceCodewords, ErrorCode::TooLarge,
                "q^(b(M-r)) exceeds the brute-force budget");
    }
    std::vector<FieldVector> words;
    words.reserve(count);
    FieldVector message(L, f.zero());
    for (std::uint64_t code_index = 0; code_index < count; ++code_index) {
        std::uint64_t c = code_index;
        for (std::size_t i = 0; i < L; ++i) {
            message[i] = {static_cast<std::uint32_t>(c % f.order())};
            c /= f.order();
        }
        words.push_back(code.encode_block(message));
    }

    auto key_of = [](const FieldVector& word, const std::vector<std::size_t>& coords) {
        std::string key;
        key.reserve(coords.size() * 2);
        for (auto c : coords) {
            key.push_back(static_cast<char>(word[c].value & 0xff));
            key.push_back(static_cast<char>(word[c].value >> 8));
        }
        return key;
    };
    std::vector<std::size_t> target;
    for (std::size_t i = 0; i < code.b; ++i) target.push_back(code.coordinate({i, p}));

    const std::size_t bits = code.b * (code.M - 1);
    auto cls = std::make_shared<BadSetClassification>(bits);
    for (std::size_t mask = 0; mask < cls->subsets(); ++mask) {
        const auto coords = detail::mask_coords(code, p, static_cast<PositionMask>(mask));
        std::map<std::string, std::string> seen;
        for (const auto& word : words) {
            auto [it, inserted] = seen.try_emplace(key_of(word, coords), key_of(word, target));
            if (!inserted && it->second != key_of(word, target)) {
                cls->mark_bad(static_cast<PositionMask>(mask));
                break;
            }
        }
    }
    return detail::summarize(code, p, std::move(cls));
}

/// Every subset of a bad set is bad.
inline bool is_downward_closed(const BadSetClassification& cls) {
    for (std::size_t mask = 0; mask < cls.subsets(); ++mask) {
        if (!cls.is_bad(static_cast<PositionMask>(mask))) continue;
        for (std::size_t bit = 0; bit < cls.bits(); ++bit)
            if ((mask >> bit & 1u) && !cls.is_bad(static_cast<PositionMask>(mask & ~(std::size_t{1} << bit))))
                return false;
    }
    return true;
}

} // namespace dnastore

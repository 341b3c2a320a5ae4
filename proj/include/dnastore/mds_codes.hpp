#pragma once

// Linear array codes Sigma^{b x (M-r)} -> Sigma^{b x M} given by a generator
// matrix, the scalar (b = 1) MDS constructions, and erasure decoding.
//
// Flattening: entry (i, j) of a b-row block (row i, container j, both
// 0-based) lives at index j*b + i. Messages use the same flattening over
// their M-r data columns. A block encodes as codeword = message * generator.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dnastore/error.hpp"
#include "dnastore/finite_field.hpp"

namespace dnastore {

/// One observed symbol of a block: 0-based row within the block and container.
struct Position {
    std::size_t row = 0;
    std::size_t container = 0;

    friend constexpr auto operator<=>(Position, Position) = default;
};

struct Observation {
    Position at;
    FieldElement symbol;
};

struct ArrayCodeSpec {
    std::shared_ptr<const FiniteField> field;
    std::size_t M = 0;
    std::size_t r = 0;
    std::size_t b = 1;
    FieldMatrix generator; // (b*(M-r)) x (b*M)
    std::string name;

    std::size_t data_columns() const noexcept { return M - r; }
    std::size_t message_length() const noexcept { return b * (M - r); }
    std::size_t block_length() const noexcept { return b * M; }
    std::size_t coordinate(Position pos) const noexcept { return pos.container * b + pos.row; }

    FieldVector encode_block(const FieldVector& message) const {
        return left_multiply(*field, message, generator);
    }
};

/// Checks shape constraints and that the encoder is injective.
inline void validate(const ArrayCodeSpec& code) {
    require(code.field != nullptr, ErrorCode::InvalidArgument, "code has no field");
    require(code.M >= 2 && code.r >= 1 && code.r < code.M, ErrorCode::InvalidArgument,
            "need 1 <= r < M");
    require(code.b >= 1, ErrorCode::InvalidArgument, "block height must be >= 1");
    require(code.generator.rows == code.message_length() && code.generator.cols == code.block_length(),
            ErrorCode::DimensionMismatch, "generator must be (b*(M-r)) x (b*M)");
    for (auto v : code.generator.data)
        require(v.value < code.field->order(), ErrorCode::FieldMismatch, "generator entry outside field");
    require(rank(*code.field, code.generator) == code.message_length(), ErrorCode::RankDeficientGenerator,
            "generator is not of full row rank");
}

inline ArrayCodeSpec make_parity_code(std::size_t M, std::shared_ptr<const FiniteField> field) {
    require(M >= 2, ErrorCode::InvalidArgument, "parity code needs M >= 2");
    ArrayCodeSpec code{std::move(field), M, 1, 1, FieldMatrix(M - 1, M), {}};
    for (std::size_t i = 0; i + 1 < M; ++i) {
        code.generator(i, i) = code.field->one();
        code.generator(i, M - 1) = code.field->one();
    }
    code.name = "parity:" + std::to_string(M) + "," + std::to_string(code.field->order());
    validate(code);
    return code;
}

/// Doubly extended Reed-Solomon code of length M and redundancy r. The
/// message is the coefficient vector of f with deg f < M-r. Coordinates are
/// f(0), f(1), f(a), ..., f(a^{M-3}) for the field's primitive element a,
/// followed by the coefficient of x^{M-r-1} (the point at infinity).
inline ArrayCodeSpec make_rs_doubly_extended(std::size_t M, std::size_t r,
                                             std::shared_ptr<const FiniteField> field) {
    require(M >= 2 && r >= 1 && r < M, ErrorCode::InvalidArgument, "need 1 <= r < M");
    require(field->order() + 1 >= M, ErrorCode::FieldTooSmall,
            "doubly extended RS needs q >= M-1");
    const std::size_t k = M - r;
    const FiniteField& f = *field;
    std::vector<FieldElement> points;
    points.push_back(f.zero());
    for (std::size_t i = 0; i + 2 < M; ++i) points.push_back(f.primitive_power(i));

    FieldMatrix g(k, M);
    for (std::size_t c = 0; c + 1 < M; ++c) {
        FieldElement power = f.one();
        for (std::size_t i = 0; i < k; ++i) {
            g(i, c) = power;
            power = f.mul(power, points[c]);
        }
    }
    g(k - 1, M - 1) = f.one();
    ArrayCodeSpec code{std::move(field), M, r, 1, std::move(g), {}};
    code.name = "rs:" + std::to_string(M) + "," + std::to_string(r) + "," + std::to_string(code.field->order());
    validate(code);
    return code;
}

/// The four-container regenerating code over GF(3):
///   [a b]    [a b a+b a+2d]
///   [c d] -> [c d c+d c+b ]
inline ArrayCodeSpec make_f3_regen_example() {
    auto field = std::make_shared<const FiniteField>(FiniteField::create(3));
    ArrayCodeSpec code{field, 4, 2, 2, FieldMatrix(4, 8), "f3-regen-example"};
    // message flattening: a -> 0, c -> 1, b -> 2, d -> 3
    enum : std::size_t { a = 0, c = 1, b = 2, d = 3 };
    auto set = [&](std::size_t msg, std::size_t row, std::size_t container, std::uint32_t coeff) {
        code.generator(msg, code.coordinate({row, container})) = field->element(coeff);
    };
    set(a, 0, 0, 1);
    set(b, 0, 1, 1);
    set(a, 0, 2, 1);
    set(b, 0, 2, 1);
    set(a, 0, 3, 1);
    set(d, 0, 3, 2);
    set(c, 1, 0, 1);
    set(d, 1, 1, 1);
    set(c, 1, 2, 1);
    set(d, 1, 2, 1);
    set(c, 1, 3, 1);
    set(b, 1, 3, 1);
    validate(code);
    return code;
}

struct EncodedState {
    std::size_t n = 0;
    std::size_t M = 0;
    FieldMatrix symbols; // n x M; rows a*b .. a*b+b-1 form block a
};

/// Encodes an n x (M-r) message matrix block by block.
inline EncodedState encode_state(const ArrayCodeSpec& code, const FieldMatrix& message) {
    const std::size_t n = message.rows;
    require(message.cols == code.data_columns(), ErrorCode::DimensionMismatch,
            "message must have M-r columns");
    require(n % code.b == 0, ErrorCode::BlockMismatch,
            "block height " + std::to_string(code.b) + " does not divide n=" + std::to_string(n));
    EncodedState state{n, code.M, FieldMatrix(n, code.M)};
    FieldVector block(code.message_length());
    for (std::size_t a = 0; a < n / code.b; ++a) {
        for (std::size_t j = 0; j < code.data_columns(); ++j)
            for (std::size_t i = 0; i < code.b; ++i) block[j * code.b + i] = message(a * code.b + i, j);
        const FieldVector word = code.encode_block(block);
        for (std::size_t j = 0; j < code.M; ++j)
            for (std::size_t i = 0; i < code.b; ++i) state.symbols(a * code.b + i, j) = word[j * code.b + i];
    }
    return state;
}

namespace detail {

// Generator columns for the given flattened coordinates, as equation rows:
// row t holds generator column coords[t] transposed.
inline FieldMatrix restriction_equations(const ArrayCodeSpec& code, const std::vector<std::size_t>& coords) {
    FieldMatrix eq(coords.size(), code.message_length());
    for (std::size_t t = 0; t < coords.size(); ++t)
        for (std::size_t i = 0; i < code.message_length(); ++i) eq(t, i) = code.generator(i, coords[t]);
    return eq;
}

// True iff every message in `kernel` maps to a zero p-th column.
inline bool kernel_fixes_column(const ArrayCodeSpec& code, const std::vector<FieldVector>& kernel,
                                std::size_t p) {
    const FiniteField& f = *code.field;
    for (const auto& v : kernel) {
        for (std::size_t i = 0; i < code.b; ++i) {
            const std::size_t c = code.coordinate({i, p});
            FieldElement acc = f.zero();
            for (std::size_t k = 0; k < v.size(); ++k) acc = f.add(acc, f.mul(v[k], code.generator(k, c)));
            if (acc.value != 0) return false;
        }
    }
    return true;
}

} // namespace detail

/// Recovers column p of a block from observed symbols. Returns nullopt when
/// the observed positions do not pin down column p.
inline std::optional<FieldVector> erasure_decode(const ArrayCodeSpec& code,
                                                 const std::vector<Observation>& observed, std::size_t p) {
    require(p < code.M, ErrorCode::PositionOutOfRange, "target column out of range");
    const FiniteField& f = *code.field;
    const std::size_t L = code.message_length();
    std::vector<std::size_t> coords;
    for (const auto& o : observed) {
        require(o.at.row < code.b && o.at.container < code.M, ErrorCode::PositionOutOfRange,
                "observed position out of range");
        require(o.symbol.value < f.order(), ErrorCode::FieldMismatch, "observed symbol outside field");
        coords.push_back(code.coordinate(o.at));
    }
    const FieldMatrix eq = detail::restriction_equations(code, coords);

    FieldMatrix aug(eq.rows, L + 1);
    for (std::size_t t = 0; t < eq.rows; ++t) {
        for (std::size_t i = 0; i < L; ++i) aug(t, i) = eq(t, i);
        aug(t, L) = observed[t].symbol;
    }
    const auto pivots = row_reduce(f, aug);
    for (auto c : pivots)
        if (c == L) throw Error(ErrorCode::InconsistentObservations, "no codeword matches the observations");

    if (!detail::kernel_fixes_column(code, rank_and_kernel(f, eq).kernel, p)) return std::nullopt;

    FieldVector message(L, f.zero());
    for (std::size_t k = 0; k < pivots.size(); ++k) message[pivots[k]] = aug(k, L);
    const FieldVector word = code.encode_block(message);
    FieldVector column(code.b);
    for (std::size_t i = 0; i < code.b; ++i) column[i] = word[code.coordinate({i, p})];
    return column;
}

/// True when every choice of M-r containers determines the message.
inline bool check_mds(const ArrayCodeSpec& code) {
    const std::size_t k = code.data_columns();
    std::vector<std::size_t> pick(k);
    for (std::size_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
        std::vector<std::size_t> coords;
        for (auto j : pick)
            for (std::size_t i = 0; i < code.b; ++i) coords.push_back(code.coordinate({i, j}));
        if (rank(*code.field, detail::restriction_equations(code, coords)) != code.message_length()) return false;
        std::size_t t = k;
        while (t > 0 && pick[t - 1] == code.M - k + t - 1) --t;
        if (t == 0) return true;
        ++pick[t - 1];
        for (std::size_t u = t; u < k; ++u) pick[u] = pick[u - 1] + 1;
    }
}

} // namespace dnastore

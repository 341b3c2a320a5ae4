#pragma once

// Arithmetic and exact linear algebra over GF(q), q = p^e <= 2^16.
//
// Elements are canonical integers in [0, q) whose base-p digits are the
// polynomial coefficients (lowest degree first). Prime fields multiply with
// plain modular arithmetic; extension fields go through log/antilog tables
// built once when the field is created.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dnastore/error.hpp"

namespace dnastore {

struct FieldElement {
    std::uint32_t value = 0;

    friend constexpr auto operator<=>(FieldElement, FieldElement) = default;
};

namespace detail {

inline bool is_prime(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::vector<std::uint32_t> prime_factors(std::uint32_t n) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

// Polynomials over GF(p), coefficient vectors lowest degree first.
using Poly = std::vector<std::uint32_t>;

inline void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
    // p is prime: a^(p-2)
    std::uint64_t result = 1, base = a % p;
    for (std::uint32_t k = p - 2; k; k >>= 1) {
        if (k & 1) result = result * base % p;
        base = base * base % p;
    }
    return static_cast<std::uint32_t>(result);
}

// Remainder of a modulo b (b nonzero after trimming).
inline Poly poly_mod(Poly a, Poly b, std::uint32_t p) {
    trim(a);
    trim(b);
    const std::uint32_t lead_inv = inv_mod(b.back(), p);
    while (a.size() >= b.size()) {
        const std::uint64_t factor = std::uint64_t(a.back()) * lead_inv % p;
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) {
            const std::uint64_t sub = factor * b[i] % p;
            a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - sub) % p);
        }
        trim(a);
    }
    return a;
}

// No monic factor of degree 1..deg/2 divides the polynomial.
inline bool is_irreducible(const Poly& f, std::uint32_t p) {
    Poly g = f;
    trim(g);
    const std::size_t deg = g.size() - 1;
    if (deg <= 1) return deg == 1;
    for (std::size_t d = 1; d <= deg / 2; ++d) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < d; ++i) count *= p;
        for (std::uint64_t code = 0; code < count; ++code) {
            Poly h(d + 1, 0);
            std::uint64_t c = code;
            for (std::size_t i = 0; i < d; ++i) {
                h[i] = static_cast<std::uint32_t>(c % p);
                c /= p;
            }
            h[d] = 1;
            if (poly_mod(g, h, p).empty()) return false;
        }
    }
    return true;
}

} // namespace detail

class FiniteField {
public:
    static constexpr std::uint32_t kMaxOrder = 65536;

    /// Builds GF(p^e). When `modulus` is omitted for e > 1 the lexicographically
    /// smallest monic irreducible polynomial of degree e is used. Coefficients
    /// are given lowest degree first; a non-monic modulus is normalized.
    static FiniteField create(std::uint32_t p, std::uint32_t e = 1,
                              std::optional<std::vector<std::uint32_t>> modulus = std::nullopt) {
        require(detail::is_prime(p), ErrorCode::NotPrime, std::to_string(p) + " is not prime");
        require(e >= 1, ErrorCode::InvalidArgument, "extension degree must be >= 1");
        std::uint64_t q = 1;
        for (std::uint32_t i = 0; i < e; ++i) {
            q *= p;
            require(q <= kMaxOrder, ErrorCode::OrderTooLarge,
                    "field order exceeds " + std::to_string(kMaxOrder));
        }

        detail::Poly poly;
        if (e == 1) {
            poly = {0, 1};
        } else if (modulus) {
            poly = *modulus;
            for (auto c : poly)
                require(c < p, ErrorCode::InvalidArgument, "modulus coefficient out of range");
            detail::trim(poly);
            require(poly.size() == e + 1, ErrorCode::InvalidArgument,
                    "modulus degree must equal the extension degree");
            const std::uint32_t lead_inv = detail::inv_mod(poly.back(), p);
            for (auto& c : poly) c = static_cast<std::uint32_t>(std::uint64_t(c) * lead_inv % p);
            require(detail::is_irreducible(poly, p), ErrorCode::ReducibleModulus,
                    "modulus is reducible over GF(" + std::to_string(p) + ")");
        } else {
            poly = default_modulus(p, e);
        }
        return FiniteField(p, e, static_cast<std::uint32_t>(q), std::move(poly));
    }

    /// Smallest monic irreducible of degree e, comparing the non-leading
    /// coefficients from the highest degree down.
    static std::vector<std::uint32_t> default_modulus(std::uint32_t p, std::uint32_t e) {
        std::uint64_t count = 1;
        for (std::uint32_t i = 0; i < e; ++i) count *= p;
        for (std::uint64_t code = 0; code < count; ++code) {
            detail::Poly f(e + 1, 0);
            std::uint64_t c = code;
            for (std::uint32_t i = 0; i < e; ++i) {
                f[i] = static_cast<std::uint32_t>(c % p);
                c /= p;
            }
            f[e] = 1;
            if (detail::is_irreducible(f, p)) return f;
        }
        throw Error(ErrorCode::ReducibleModulus, "no irreducible polynomial found");
    }

    std::uint32_t characteristic() const noexcept { return p_; }
    std::uint32_t degree() const noexcept { return e_; }
    std::uint32_t order() const noexcept { return q_; }
    const std::vector<std::uint32_t>& modulus() const noexcept { return modulus_; }

    FieldElement zero() const noexcept { return {0}; }
    FieldElement one() const noexcept { return {1}; }
    FieldElement element(std::uint32_t v) const {
        require(v < q_, ErrorCode::InvalidArgument,
                "element " + std::to_string(v) + " outside GF(" + std::to_string(q_) + ")");
        return {v};
    }
    FieldElement primitive() const noexcept { return {exp_[1]}; }

    FieldElement add(FieldElement a, FieldElement b) const noexcept {
        if (e_ == 1) return {(a.value + b.value) % p_};
        if (p_ == 2) return {a.value ^ b.value};
        return digitwise(a.value, b.value, false);
    }
    FieldElement sub(FieldElement a, FieldElement b) const noexcept {
        if (e_ == 1) return {(a.value + p_ - b.value) % p_};
        if (p_ == 2) return {a.value ^ b.value};
        return digitwise(a.value, b.value, true);
    }
    FieldElement neg(FieldElement a) const noexcept { return sub(zero(), a); }

    FieldElement mul(FieldElement a, FieldElement b) const noexcept {
        if (e_ == 1)
            return {static_cast<std::uint32_t>(std::uint64_t(a.value) * b.value % p_)};
        if (a.value == 0 || b.value == 0) return {0};
        return {exp_[log_[a.value] + log_[b.value]]};
    }
    FieldElement inv(FieldElement a) const {
        require(a.value != 0, ErrorCode::InvalidArgument, "zero has no inverse");
        return {exp_[(q_ - 1 - log_[a.value]) % (q_ - 1)]};
    }
    FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }

    /// primitive()^k
    FieldElement primitive_power(std::uint64_t k) const noexcept {
        return {exp_[k % (q_ - 1)]};
    }

    friend bool operator==(const FiniteField& a, const FiniteField& b) noexcept {
        return a.p_ == b.p_ && a.e_ == b.e_ && a.modulus_ == b.modulus_;
    }

private:
    FiniteField(std::uint32_t p, std::uint32_t e, std::uint32_t q, detail::Poly modulus)
        : p_(p), e_(e), q_(q), modulus_(std::move(modulus)) {
        build_tables();
#ifndef NDEBUG
        spot_check();
#endif
    }

    FieldElement digitwise(std::uint32_t a, std::uint32_t b, bool subtract) const noexcept {
        std::uint32_t out = 0, scale = 1;
        for (std::uint32_t i = 0; i < e_; ++i) {
            const std::uint32_t da = a % p_, db = b % p_;
            const std::uint32_t d = subtract ? (da + p_ - db) % p_ : (da + db) % p_;
            out += d * scale;
            scale *= p_;
            a /= p_;
            b /= p_;
        }
        return {out};
    }

    // Schoolbook product reduced modulo the field polynomial; table setup only.
    std::uint32_t slow_mul(std::uint32_t a, std::uint32_t b) const {
        if (e_ == 1) return static_cast<std::uint32_t>(std::uint64_t(a) * b % p_);
        detail::Poly pa(e_), pb(e_);
        for (std::uint32_t i = 0; i < e_; ++i) {
            pa[i] = a % p_;
            a /= p_;
            pb[i] = b % p_;
            b /= p_;
        }
        detail::Poly prod(2 * e_, 0);
        for (std::uint32_t i = 0; i < e_; ++i)
            for (std::uint32_t j = 0; j < e_; ++j)
                prod[i + j] = static_cast<std::uint32_t>((prod[i + j] + std::uint64_t(pa[i]) * pb[j]) % p_);
        const detail::Poly rem = detail::poly_mod(std::move(prod), modulus_, p_);
        std::uint32_t out = 0, scale = 1;
        for (std::size_t i = 0; i < rem.size(); ++i) {
            out += rem[i] * scale;
            scale *= p_;
        }
        return out;
    }

    void build_tables() {
        const std::uint32_t group = q_ - 1;
        const auto factors = detail::prime_factors(group);
        auto slow_pow = [&](std::uint32_t g, std::uint64_t k) {
            std::uint32_t result = 1;
            while (k) {
                if (k & 1) result = slow_mul(result, g);
                g = slow_mul(g, g);
                k >>= 1;
            }
            return result;
        };
        std::uint32_t generator = 1;
        for (std::uint32_t g = (q_ == 2 ? 1 : 2); g < q_; ++g) {
            bool primitive = true;
            for (auto f : factors) {
                if (slow_pow(g, group / f) == 1) {
                    primitive = false;
                    break;
                }
            }
            if (primitive) {
                generator = g;
                break;
            }
        }
        exp_.assign(2 * std::size_t(group), 0);
        log_.assign(q_, 0);
        std::uint32_t x = 1;
        for (std::uint32_t k = 0; k < group; ++k) {
            exp_[k] = exp_[k + group] = x;
            log_[x] = k;
            x = slow_mul(x, generator);
        }
    }

#ifndef NDEBUG
    void spot_check() const {
        std::uint64_t s = 0x9e3779b97f4a7c15ULL ^ q_;
        auto next = [&] {
            s += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = s;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return FieldElement{static_cast<std::uint32_t>((z ^ (z >> 31)) % q_)};
        };
        for (int i = 0; i < 64; ++i) {
            const auto a = next(), b = next(), c = next();
            require(add(add(a, b), c) == add(a, add(b, c)), ErrorCode::ReducibleModulus, "addition not associative");
            require(mul(mul(a, b), c) == mul(a, mul(b, c)), ErrorCode::ReducibleModulus, "multiplication not associative");
            require(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)), ErrorCode::ReducibleModulus, "not distributive");
            require(mul(a, b) == FieldElement{slow_mul(a.value, b.value)}, ErrorCode::ReducibleModulus, "table mismatch");
        }
    }
#endif

    std::uint32_t p_;
    std::uint32_t e_;
    std::uint32_t q_;
    std::vector<std::uint32_t> modulus_;
    std::vector<std::uint32_t> exp_;
    std::vector<std::uint32_t> log_;
};

using FieldVector = std::vector<FieldElement>;

struct FieldMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<FieldElement> data; // row-major

    FieldMatrix() = default;
    FieldMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

    static FieldMatrix from_rows(const std::vector<std::vector<std::uint32_t>>& values,
                                 const FiniteField& field) {
        FieldMatrix m(values.size(), values.empty() ? 0 : values.front().size());
        for (std::size_t i = 0; i < m.rows; ++i) {
            require(values[i].size() == m.cols, ErrorCode::DimensionMismatch, "ragged matrix rows");
            for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = field.element(values[i][j]);
        }
        return m;
    }

    FieldElement& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    FieldElement operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    friend bool operator==(const FieldMatrix&, const FieldMatrix&) = default;
};

/// Row vector times matrix: x (length rows) -> x * A (length cols).
inline FieldVector left_multiply(const FiniteField& f, const FieldVector& x, const FieldMatrix& a) {
    require(x.size() == a.rows, ErrorCode::DimensionMismatch, "vector length must equal matrix rows");
    FieldVector out(a.cols, f.zero());
    for (std::size_t i = 0; i < a.rows; ++i) {
        if (x[i].value == 0) continue;
        for (std::size_t j = 0; j < a.cols; ++j) out[j] = f.add(out[j], f.mul(x[i], a(i, j)));
    }
    return out;
}

/// A * v for a column vector v (length cols).
inline FieldVector right_multiply(const FiniteField& f, const FieldMatrix& a, const FieldVector& v) {
    require(v.size() == a.cols, ErrorCode::DimensionMismatch, "vector length must equal matrix cols");
    FieldVector out(a.rows, f.zero());
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) out[i] = f.add(out[i], f.mul(a(i, j), v[j]));
    return out;
}

inline FieldMatrix transpose(const FieldMatrix& a) {
    FieldMatrix t(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
    return t;
}

/// Reduced row echelon form in place; returns pivot column of each pivot row.
inline std::vector<std::size_t> row_reduce(const FiniteField& f, FieldMatrix& a) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols && row < a.rows; ++col) {
        std::size_t pivot = row;
        while (pivot < a.rows && a(pivot, col).value == 0) ++pivot;
        if (pivot == a.rows) continue;
        if (pivot != row)
            for (std::size_t j = 0; j < a.cols; ++j) std::swap(a(pivot, j), a(row, j));
        const FieldElement scale = f.inv(a(row, col));
        for (std::size_t j = col; j < a.cols; ++j) a(row, j) = f.mul(a(row, j), scale);
        for (std::size_t i = 0; i < a.rows; ++i) {
            if (i == row || a(i, col).value == 0) continue;
            const FieldElement factor = a(i, col);
            for (std::size_t j = col; j < a.cols; ++j)
                a(i, j) = f.sub(a(i, j), f.mul(factor, a(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

struct RankKernel {
    std::size_t rank = 0;
    std::vector<FieldVector> kernel; // each v satisfies A v = 0
};

inline RankKernel rank_and_kernel(const FiniteField& f, const FieldMatrix& a) {
    require(a.data.size() == a.rows * a.cols, ErrorCode::DimensionMismatch, "malformed matrix");
    FieldMatrix r = a;
    const auto pivots = row_reduce(f, r);
    RankKernel out;
    out.rank = pivots.size();
    std::vector<bool> is_pivot(a.cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    for (std::size_t free = 0; free < a.cols; ++free) {
        if (is_pivot[free]) continue;
        FieldVector v(a.cols, f.zero());
        v[free] = f.one();
        for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = f.neg(r(k, free));
        out.kernel.push_back(std::move(v));
    }
    return out;
}

inline std::size_t rank(const FiniteField& f, const FieldMatrix& a) {
    FieldMatrix r = a;
    return row_reduce(f, r).size();
}

} // namespace dnastore

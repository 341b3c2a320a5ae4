#include <gtest/gtest.h>

#include <cstdint>
#include <random>
#include <vector>

#include "dnastore/finite_field.hpp"

using namespace dnastore;

namespace {

FieldElement el(std::uint32_t v) { return {v}; }

// Schoolbook product of base-p digit vectors reduced mod the field modulus,
// independent of the log tables.
std::uint32_t reference_mul(const FiniteField& f, std::uint32_t a, std::uint32_t b) {
    const std::uint32_t p = f.characteristic(), e = f.degree();
    std::vector<std::uint64_t> x(e), y(e), prod(2 * e, 0);
    for (std::uint32_t i = 0; i < e; ++i) {
        x[i] = a % p;
        a /= p;
        y[i] = b % p;
        b /= p;
    }
    for (std::uint32_t i = 0; i < e; ++i)
        for (std::uint32_t j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
    const auto& mod = f.modulus(); // monic, degree e
    for (std::size_t d = 2 * e - 1; d >= e; --d) {
        const std::uint64_t c = prod[d];
        if (c == 0) continue;
        for (std::uint32_t i = 0; i <= e; ++i)
            prod[d - e + i] = (prod[d - e + i] + (p - c) * mod[i]) % p;
    }
    std::uint32_t out = 0, scale = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
        out += std::uint32_t(prod[i]) * scale;
        scale *= p;
    }
    return out;
}

void check_axioms_exhaustive(const FiniteField& f) {
    const std::uint32_t q = f.order();
    for (std::uint32_t a = 0; a < q; ++a) {
        EXPECT_EQ(f.add(el(a), f.neg(el(a))), f.zero());
        if (a != 0) {
            EXPECT_EQ(f.mul(el(a), f.inv(el(a))), f.one());
        }
        for (std::uint32_t b = 0; b < q; ++b) {
            EXPECT_EQ(f.mul(el(a), el(b)).value, reference_mul(f, a, b));
            for (std::uint32_t c = 0; c < q; ++c) {
                ASSERT_EQ(f.add(f.add(el(a), el(b)), el(c)), f.add(el(a), f.add(el(b), el(c))));
                ASSERT_EQ(f.mul(el(a), f.add(el(b), el(c))), f.add(f.mul(el(a), el(b)), f.mul(el(a), el(c))));
            }
        }
    }
}

// Number of monic irreducibles of degree e over GF(p): (1/e) sum_{d|e} mu(d) p^{e/d}.
std::int64_t necklace_count(std::int64_t p, std::int64_t e) {
    auto mobius = [](std::int64_t n) {
        int sign = 1;
        for (std::int64_t d = 2; d * d <= n; ++d) {
            if (n % d) continue;
            n /= d;
            if (n % d == 0) return 0;
            sign = -sign;
        }
        return n > 1 ? -sign : sign;
    };
    std::int64_t total = 0;
    for (std::int64_t d = 1; d <= e; ++d) {
        if (e % d) continue;
        std::int64_t pw = 1;
        for (std::int64_t i = 0; i < e / d; ++i) pw *= p;
        total += mobius(d) * pw;
    }
    return total / e;
}

} // namespace

TEST(FiniteField, PrimeFieldArithmetic) {
    const auto f = FiniteField::create(3);
    EXPECT_EQ(f.order(), 3u);
    EXPECT_EQ(f.add(el(2), el(2)), el(1));
    EXPECT_EQ(f.mul(el(2), el(2)), el(1));
    EXPECT_EQ(f.sub(el(0), el(1)), el(2));
}

TEST(FiniteField, ExtensionFieldGF4) {
    const auto f = FiniteField::create(2, 2, std::vector<std::uint32_t>{1, 1, 1});
    const FieldElement x = el(2); // the polynomial x
    EXPECT_EQ(f.mul(x, x), f.add(x, f.one()));
    EXPECT_EQ(f.mul(x, x), el(3));
}

TEST(FiniteField, ConstructionErrors) {
    auto code_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::ParseError;
    };
    EXPECT_EQ(code_of([] { FiniteField::create(4); }), ErrorCode::NotPrime);
    EXPECT_EQ(code_of([] { FiniteField::create(1); }), ErrorCode::NotPrime);
    EXPECT_EQ(code_of([] { FiniteField::create(2, 17); }), ErrorCode::OrderTooLarge);
    EXPECT_EQ(code_of([] { FiniteField::create(257, 2); }), ErrorCode::OrderTooLarge);
    // x^2 + 1 = (x + 1)^2 over GF(2)
    EXPECT_EQ(code_of([] { FiniteField::create(2, 2, std::vector<std::uint32_t>{1, 0, 1}); }),
              ErrorCode::ReducibleModulus);
    // x^4 + x^2 + 1 = (x^2 + x + 1)^2 over GF(2): no roots, reducible
    EXPECT_EQ(code_of([] { FiniteField::create(2, 4, std::vector<std::uint32_t>{1, 0, 1, 0, 1}); }),
              ErrorCode::ReducibleModulus);
    EXPECT_EQ(code_of([] { FiniteField::create(3, 2, std::vector<std::uint32_t>{1, 1}); }),
              ErrorCode::InvalidArgument);
}

TEST(FiniteField, LargestOrders) {
    EXPECT_EQ(FiniteField::create(2, 16).order(), 65536u);
    EXPECT_EQ(FiniteField::create(65521).order(), 65521u);
}

TEST(FiniteField, DefaultModuli) {
    EXPECT_EQ(FiniteField::default_modulus(2, 2), (std::vector<std::uint32_t>{1, 1, 1}));
    EXPECT_EQ(FiniteField::default_modulus(2, 3), (std::vector<std::uint32_t>{1, 1, 0, 1}));
    EXPECT_EQ(FiniteField::default_modulus(2, 8), (std::vector<std::uint32_t>{1, 1, 0, 1, 1, 0, 0, 0, 1}));
    EXPECT_EQ(FiniteField::default_modulus(3, 2), (std::vector<std::uint32_t>{1, 0, 1}));
    EXPECT_EQ(FiniteField::default_modulus(5, 2), (std::vector<std::uint32_t>{2, 0, 1}));
    EXPECT_EQ(FiniteField::default_modulus(7, 2), (std::vector<std::uint32_t>{1, 0, 1}));
}

TEST(FiniteField, IrreducibilityCountsMatchNecklaceFormula) {
    const std::vector<std::pair<std::uint32_t, std::uint32_t>> cases{
        {2, 1}, {2, 2}, {2, 3}, {2, 4}, {2, 5}, {2, 6}, {2, 8}, {3, 2}, {3, 3}, {3, 4}, {5, 2}, {5, 3}, {7, 2}, {7, 3}};
    for (auto [p, e] : cases) {
        std::uint64_t total = 1;
        for (std::uint32_t i = 0; i < e; ++i) total *= p;
        std::int64_t found = 0;
        for (std::uint64_t code = 0; code < total; ++code) {
            detail::Poly f(e + 1, 0);
            std::uint64_t c = code;
            for (std::uint32_t i = 0; i < e; ++i) {
                f[i] = std::uint32_t(c % p);
                c /= p;
            }
            f[e] = 1;
            found += detail::is_irreducible(f, p);
        }
        EXPECT_EQ(found, necklace_count(p, e)) << "p=" << p << " e=" << e;
    }
}

TEST(FiniteField, AxiomsExhaustiveSmallFields) {
    for (auto [p, e] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
             {2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}, {11, 1}, {13, 1}, {2, 4}}) {
        SCOPED_TRACE("p=" + std::to_string(p) + " e=" + std::to_string(e));
        check_axioms_exhaustive(FiniteField::create(p, e));
    }
}

TEST(FiniteField, AxiomsRandomizedLargeFields) {
    std::mt19937_64 gen(12345);
    for (auto [p, e] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{
             {2, 8}, {3, 5}, {5, 4}, {7, 3}, {2, 16}, {65521, 1}, {251, 2}}) {
        const auto f = FiniteField::create(p, e);
        std::uniform_int_distribution<std::uint32_t> pick(0, f.order() - 1);
        for (int i = 0; i < 10000; ++i) {
            const auto a = el(pick(gen)), b = el(pick(gen)), c = el(pick(gen));
            ASSERT_EQ(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            ASSERT_EQ(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            ASSERT_EQ(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            ASSERT_EQ(f.add(a, f.neg(a)), f.zero());
            ASSERT_EQ(f.mul(a, b).value, reference_mul(f, a.value, b.value));
            if (a.value != 0) {
                ASSERT_EQ(f.mul(a, f.inv(a)), f.one());
            }
        }
    }
}

TEST(FiniteField, PrimitiveElementGeneratesGroup) {
    for (auto [p, e] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 1}, {3, 1}, {2, 4}, {3, 2}, {13, 1}}) {
        const auto f = FiniteField::create(p, e);
        std::vector<bool> seen(f.order(), false);
        for (std::uint32_t k = 0; k + 1 < f.order(); ++k) seen[f.primitive_power(k).value] = true;
        for (std::uint32_t v = 1; v < f.order(); ++v) EXPECT_TRUE(seen[v]);
    }
}

TEST(RankKernel, Identity) {
    const auto f = FiniteField::create(3);
    const auto rk = rank_and_kernel(f, FieldMatrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, f));
    EXPECT_EQ(rk.rank, 3u);
    EXPECT_TRUE(rk.kernel.empty());
}

TEST(RankKernel, ZeroMatrix) {
    const auto f = FiniteField::create(3);
    const auto rk = rank_and_kernel(f, FieldMatrix(2, 2));
    EXPECT_EQ(rk.rank, 0u);
    EXPECT_EQ(rk.kernel.size(), 2u);
}

TEST(RankKernel, RankOneOverGF5) {
    const auto f = FiniteField::create(5);
    const auto a = FieldMatrix::from_rows({{1, 2}, {2, 4}}, f);
    const auto rk = rank_and_kernel(f, a);
    ASSERT_EQ(rk.rank, 1u);
    ASSERT_EQ(rk.kernel.size(), 1u);
    const auto& v = rk.kernel[0];
    EXPECT_EQ(right_multiply(f, a, v), (FieldVector{f.zero(), f.zero()}));
    // proportional to (2, -1) = (2, 4)
    const FieldElement scale = f.div(v[0], el(2));
    EXPECT_EQ(v[1], f.mul(scale, el(4)));
}

TEST(RankKernel, AgreesWithBruteForceNullSpace) {
    std::mt19937_64 gen(7);
    for (auto [p, e] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}}) {
        const auto f = FiniteField::create(p, e);
        const std::uint32_t q = f.order();
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t rows = 1 + gen() % 4, cols = 1 + gen() % 5;
            std::uint64_t total = 1;
            for (std::size_t i = 0; i < cols; ++i) total *= q;
            if (total > 100000) continue;
            FieldMatrix a(rows, cols);
            // sparse-ish entries so rank deficiency shows up often
            for (auto& x : a.data) x = el(gen() % 3 == 0 ? 0 : std::uint32_t(gen() % q));
            const auto rk = rank_and_kernel(f, a);
            ASSERT_EQ(rk.rank + rk.kernel.size(), cols);

            std::uint64_t null_count = 0;
            FieldVector v(cols);
            for (std::uint64_t code = 0; code < total; ++code) {
                std::uint64_t c = code;
                for (auto& x : v) {
                    x = el(std::uint32_t(c % q));
                    c /= q;
                }
                const auto av = right_multiply(f, a, v);
                bool zero = true;
                for (auto x : av) zero = zero && x.value == 0;
                null_count += zero;
            }
            std::uint64_t expected = 1;
            for (std::size_t i = 0; i < rk.kernel.size(); ++i) expected *= q;
            EXPECT_EQ(null_count, expected);

            for (const auto& k : rk.kernel)
                for (auto x : right_multiply(f, a, k)) EXPECT_EQ(x.value, 0u);
            if (!rk.kernel.empty()) {
                FieldMatrix basis(rk.kernel.size(), cols);
                for (std::size_t i = 0; i < rk.kernel.size(); ++i)
                    for (std::size_t j = 0; j < cols; ++j) basis(i, j) = rk.kernel[i][j];
                EXPECT_EQ(rank(f, basis), rk.kernel.size());
            }
        }
    }
}

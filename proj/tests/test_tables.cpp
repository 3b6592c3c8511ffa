#include <gtest/gtest.h>

#include "support.hpp"

namespace lcc {
namespace {

using testing::Rng;

const PrimeModulus P2(2), P3(3), P5(5);

FunctionTable T(const PrimeModulus& p, std::uint32_t n, std::vector<Residue> v) { return FunctionTable(p, n, std::move(v)); }

/// Interpolation by solving the p^n x p^n Vandermonde-type system directly.
Polynomial solve_interpolation(const FunctionTable& t) {
  const std::uint64_t p = t.modulus().value();
  const auto n = t.arity();
  const auto pts = testing::all_points(static_cast<std::uint32_t>(p), n);  // exponent vectors share the shape
  const std::size_t N = pts.size();
  std::vector<std::vector<Residue>> a(N, std::vector<Residue>(N + 1));
  for (std::size_t r = 0; r < N; ++r) {
    for (std::size_t c = 0; c < N; ++c) {
      std::uint64_t v = 1;
      for (std::uint32_t i = 0; i < n; ++i) v = v * testing::naive_pow(pts[r][i], pts[c][i], p) % p;
      a[r][c] = static_cast<Residue>(v);
    }
    a[r][N] = t[r];
  }
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t piv = c;
    while (a[piv][c] == 0) ++piv;
    std::swap(a[piv], a[c]);
    const auto inv = testing::naive_pow(a[c][c], p - 2, p);
    for (auto& x : a[c]) x = static_cast<Residue>(x * inv % p);
    for (std::size_t r = 0; r < N; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const std::uint64_t f = a[r][c];
      for (std::size_t k = 0; k <= N; ++k) a[r][k] = static_cast<Residue>((a[r][k] + (p - f) * a[c][k]) % p);
    }
  }
  Polynomial out(t.modulus());
  for (std::size_t c = 0; c < N; ++c) {
    std::vector<Monomial::Factor> fac;
    for (std::uint32_t i = 0; i < n; ++i) fac.emplace_back(i + 1, pts[c][i]);
    out.accumulate(Monomial(std::move(fac)), a[c][N]);
  }
  return out;
}

TEST(Evaluate, Examples) {
  EXPECT_EQ(evaluate(parse("x1 + x2 + 2*x2^3", P3), 2), evaluate(parse("x1", P3), 2));
  EXPECT_TRUE(evaluate(Polynomial(P5), 3).is_zero());
  EXPECT_EQ(evaluate(parse("x1*x2", P2), 2), T(P2, 2, {0, 0, 0, 1}));
  EXPECT_THROW(evaluate(parse("x3", P2), 2), std::invalid_argument);
}

TEST(Projection, Examples) {
  EXPECT_EQ(projection(P2, 2, 1), T(P2, 2, {0, 0, 1, 1}));
  EXPECT_EQ(projection(P3, 1, 1), T(P3, 1, {0, 1, 2}));
  EXPECT_EQ(projection(P3, 2, 2), T(P3, 2, {0, 1, 2, 0, 1, 2, 0, 1, 2}));
  EXPECT_THROW(projection(P3, 2, 3), std::out_of_range);
}

TEST(Interpolate, Examples) {
  EXPECT_TRUE(interpolate(FunctionTable::zero(P3, 2)).is_zero());
  EXPECT_EQ(interpolate(T(P2, 2, {0, 0, 0, 1})), parse("x1*x2", P2));
  EXPECT_EQ(interpolate(evaluate(parse("x1^2 + 2", P3), 1)), parse("x1^2 + 2", P3));
}

TEST(LinearCombination, Examples) {
  const auto t = evaluate(parse("x1^2 + x2", P3), 2);
  const auto s = evaluate(parse("x1*x2", P3), 2);
  const std::vector<FunctionTable> ts{t, s};
  EXPECT_EQ(linear_combination(std::vector<Residue>{1, 0}, ts), t);
  const auto a = evaluate(parse("x1 + x2", P2), 2);
  const std::vector<FunctionTable> twice{a, a};
  EXPECT_TRUE(linear_combination(std::vector<Residue>{1, 1}, twice).is_zero());
  const auto x = evaluate(parse("x1", P3), 1);
  const std::vector<FunctionTable> xs{x, x};
  EXPECT_EQ(linear_combination(std::vector<Residue>{2, 2}, xs), x);
}

TEST(ComposeTables, Examples) {
  const auto t = evaluate(parse("x1^2 + x2", P3), 2);
  const auto s = evaluate(parse("2*x1*x2 + 1", P3), 2);
  const std::vector<FunctionTable> ts{t, s};
  EXPECT_EQ(compose_tables(projection(P3, 2, 1), ts), t);
  const std::vector<FunctionTable> projs{projection(P3, 2, 1), projection(P3, 2, 2)};
  EXPECT_EQ(compose_tables(t, projs), t);
  const std::vector<FunctionTable> diag{projection(P3, 1, 1), projection(P3, 1, 1)};
  EXPECT_EQ(compose_tables(evaluate(parse("x1*x2", P3), 2), diag), evaluate(parse("x1^2", P3), 1));
}

TEST(Serialization, RoundTripAndFormat) {
  const auto t = evaluate(parse("x1*x2 + x1", P3), 2);
  EXPECT_EQ(serialize(t), "3 2\n000120210\n");
  EXPECT_EQ(deserialize_table(serialize(t)), t);
  const PrimeModulus p11(11);
  const auto big = evaluate(parse("x1^3", p11), 1);
  EXPECT_EQ(deserialize_table(serialize(big)), big);
  EXPECT_THROW(deserialize_table("3 2\n0001"), std::invalid_argument);
  EXPECT_THROW(deserialize_table("3 1\n013"), std::invalid_argument);
  EXPECT_THROW(deserialize_table("4 1\n0123"), std::invalid_argument);
}

TEST(Points, EncodeDecode) {
  std::vector<Residue> pt(3);
  for (std::size_t i = 0; i < 125; ++i) {
    decode_point(P5, i, pt);
    EXPECT_EQ(encode_point(P5, pt), i);
  }
}

// --- properties -------------------------------------------------------------

TEST(TablesProperty, InterpolationMatchesLinearSolve) {
  Rng rng(21);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    const PrimeModulus m(p);
    for (std::uint32_t n = 1; n <= (p == 5 ? 2u : 3u); ++n) {
      for (int i = 0; i < 15; ++i) {
        std::vector<Residue> v(table_size(m, n));
        for (auto& x : v) x = std::uniform_int_distribution<Residue>(0, p - 1)(rng);
        const FunctionTable t(m, n, v);
        const auto f = interpolate(t);
        EXPECT_TRUE(f.is_reduced());
        EXPECT_EQ(f, solve_interpolation(t));
        EXPECT_EQ(evaluate(f, n), t);
      }
    }
  }
}

TEST(TablesProperty, EvaluateMatchesNaive) {
  Rng rng(22);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    const PrimeModulus m(p);
    for (int i = 0; i < 30; ++i) {
      const auto f = testing::random_poly(rng, m, 3, 2 * p, 4);
      EXPECT_EQ(evaluate(f, 3).values().size(), table_size(m, 3));
      const auto naive = testing::naive_table(f, 3);
      EXPECT_TRUE(std::equal(naive.begin(), naive.end(), evaluate(f, 3).values().begin()));
    }
  }
}

TEST(TablesProperty, ComposeTablesMatchesPolynomialComposition) {
  Rng rng(23);
  const PrimeModulus m(3);
  for (int i = 0; i < 40; ++i) {
    const auto g = testing::random_poly(rng, m, 2, 3, 4);
    const auto a = testing::random_poly(rng, m, 3, 3, 3);
    const auto b = testing::random_poly(rng, m, 3, 3, 3);
    const std::vector<FunctionTable> args{evaluate(a, 3), evaluate(b, 3)};
    EXPECT_EQ(compose_tables(evaluate(g, 2), args), evaluate(compose_at(g, {1, 2}, {a, b}), 3));
  }
}

}  // namespace
}  // namespace lcc

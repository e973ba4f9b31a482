#include <gtest/gtest.h>

#include <random>

#include "gshift/mixture.hpp"
#include "gshift/operator.hpp"
#include "oracles.hpp"

using namespace gshift;

namespace {

SparseVector e(Coord n) { return SparseVector::unit(n); }

OperatorExpr jordan(std::size_t size, Coord offset = 1) { return nilpotent_model({{size, offset}}); }

OperatorExpr one_over_n_shift() { return forward_shift(WeightSequence::rule(TailRule::one_over_n())); }

}  // namespace

TEST(Apply, Examples) {
  EXPECT_EQ(apply(one_over_n_shift(), e(3)), Scalar::ratio(1, 3) * e(4));
  const Scalar i = Scalar::imaginary_unit();
  EXPECT_EQ(apply(scalar_identity(i), e(1) + e(2)), i * e(1) + i * e(2));
  const Rational eps(1, 20);
  EXPECT_EQ(apply(rank_one(Functional(e(4)), e(1), Scalar(eps)), e(4)), Scalar(eps) * e(1));
}

TEST(PowerApply, Examples) {
  const SparseVector v = e(1) + Scalar(3) * e(7);
  EXPECT_EQ(power_apply(one_over_n_shift(), v, 0), v);
  EXPECT_TRUE(power_apply(jordan(3), e(1), 3).empty());
  const auto constant_two = forward_shift(WeightSequence::rule(TailRule::constant(2)));
  // 2^4 by repeated multiplication.
  Rational product = 1;
  for (int k = 0; k < 4; ++k) product *= 2;
  EXPECT_EQ(power_apply(constant_two, e(1), 4), Scalar(product) * e(5));
}

TEST(OperatorNormBound, Examples) {
  const auto r = rank_one(Functional(e(2)), Scalar::ratio(1, 20) * e(1));
  const auto b = operator_norm_bound(r, NormMode::l2);
  EXPECT_EQ(b.upper, Rational(1, 20));
  EXPECT_TRUE(b.exact);

  std::vector<SumTerm> terms;
  Rational series = 0;
  for (int k = 0; k < 12; ++k) {
    const Rational t = Rational(9, 200) / pow(Rational(2), k);
    series += t;
    terms.push_back({Scalar(1), rank_one(Functional(e(k + 2)), Scalar(t) * e(1))});
  }
  const auto s = operator_norm_bound(sum(terms), NormMode::l2);
  EXPECT_EQ(s.upper, series);
  EXPECT_LT(s.upper, Rational(9, 100));

  DenseMatrix m(2, 2);
  m(0, 1) = Scalar(1);
  EXPECT_EQ(operator_norm_bound(dense_block(1, m), NormMode::l2).upper, Rational(1));
}

TEST(OperatorNormBound, LazyMajorantSumsGeometricSeries) {
  MixtureSpec spec;
  spec.forward.push_back(WeightSequence::rule(TailRule::one_over_n()));
  const auto corr = shift_mixture_correction(spec, Rational(1, 5), 60, 600);
  // first / (1 - ratio) with first = threshold(1), ratio 1/2.
  EXPECT_EQ(operator_norm_bound(corr.k, NormMode::l2).upper, 2 * mixture_threshold(spec, Rational(1, 5), 1));
}

TEST(OperatorNormBound, SoundOnRandomVectors) {
  oracle::RationalSource src(3);
  std::vector<OperatorExpr> ops;
  ops.push_back(one_over_n_shift());
  ops.push_back(bilateral_shift(WeightSequence::rule(TailRule::geometric(Rational(1, 2)))));
  ops.push_back(dense_block(2, oracle::to_dense_matrix(oracle::random_invertible(src, 4))));
  ops.push_back(sum({{Scalar(1), jordan(3)}, {Scalar::ratio(1, 2), rank_one(Functional(e(2) + e(5)), e(1))}}));
  for (const auto& op : ops) {
    for (auto p : {NormMode::l1, NormMode::l2, NormMode::linf}) {
      const double bound = operator_norm_bound(op, p).upper.get_d();
      for (int t = 0; t < 200; ++t) {
        SparseVector v;
        for (Coord n = -3; n <= 8; ++n) v.set(n, Scalar(src.next(), src.next()));
        if (v.empty()) continue;
        EXPECT_LE(vector_norm(apply(op, v), p).value, bound * vector_norm(v, p).value * (1 + 1e-12));
      }
    }
  }
}

TEST(Truncate, Examples) {
  const auto shift = truncate(forward_shift(WeightSequence::rule(TailRule::constant(1))), 3);
  EXPECT_TRUE(shift.leaked);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(shift.matrix(i, j), Scalar(i == j + 1 ? 1 : 0));

  const auto block = truncate(jordan(3), 5);
  EXPECT_FALSE(block.leaked);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(block.matrix(i, j), Scalar(i == j + 1 && i < 3 ? 1 : 0));

  const auto id = truncate(scalar_identity(Scalar(1)), 2);
  EXPECT_FALSE(id.leaked);
  EXPECT_EQ(id.matrix, DenseMatrix::identity(2));
}

TEST(Truncate, ConsistentWithApply) {
  oracle::RationalSource src(12);
  const auto op = sum({{Scalar(1), dense_block(2, oracle::to_dense_matrix(oracle::random_invertible(src, 3)))},
                       {Scalar(1), rank_one(Functional(e(1)), e(5))}});
  const auto view = truncate(op, 6);
  ASSERT_FALSE(view.leaked);
  for (int t = 0; t < 50; ++t) {
    SparseVector v;
    for (Coord n = 1; n <= 6; ++n) v.set(n, Scalar(src.next()));
    const auto image = apply(op, v).restricted(1, 6);
    for (std::size_t i = 0; i < 6; ++i) {
      Scalar acc(0);
      for (std::size_t j = 0; j < 6; ++j) acc += view.matrix(i, j) * v.get(static_cast<Coord>(j + 1));
      EXPECT_EQ(image.get(static_cast<Coord>(i + 1)), acc);
    }
  }
}

TEST(GeneralizedKernelExponent, Examples) {
  EXPECT_EQ(generalized_kernel_exponent(jordan(3), e(1), 10), 3U);
  EXPECT_FALSE(generalized_kernel_exponent(scalar_identity(Scalar(1)), e(1), 50).has_value());
  EXPECT_FALSE(generalized_kernel_exponent(one_over_n_shift(), e(1), 50).has_value());
}

TEST(DensityReport, Examples) {
  const auto j5 = gk_density_report(jordan(5), 100, 1000);
  EXPECT_TRUE(j5.dense_on_horizon);
  for (const auto& [n, exponent] : j5.exponents) {
    ASSERT_TRUE(exponent);
    // Distance to the block end for block coordinates, one outside.
    const std::size_t expected = n <= 5 ? static_cast<std::size_t>(6 - n) : 1U;
    EXPECT_EQ(*exponent, expected);
  }
  const auto shift = gk_density_report(forward_shift(WeightSequence::rule(TailRule::constant(1))), 10, 100);
  EXPECT_FALSE(shift.dense_on_horizon);
  for (const auto& [n, exponent] : shift.exponents) EXPECT_FALSE(exponent.has_value());
}

TEST(ColumnFiniteness, RandomExpressionsHaveFiniteImages) {
  oracle::RationalSource src(77);
  for (int t = 0; t < 30; ++t) {
    std::vector<SumTerm> terms;
    terms.push_back({Scalar(src.next()), one_over_n_shift()});
    terms.push_back({Scalar(src.next()), jordan(1 + src.below(4), static_cast<Coord>(src.below(5)))});
    terms.push_back({Scalar(src.next()), rank_one(Functional(e(static_cast<Coord>(src.below(6)))), e(9))});
    terms.push_back({Scalar(src.next()), scalar_identity(Scalar(src.next()))});
    const auto op = sum(terms);
    for (Coord n = -2; n <= 10; ++n) {
      const auto image = apply(op, e(n));
      EXPECT_LE(image.support_size(), 8U);
    }
  }
}

TEST(NilpotentModel, Examples) {
  const auto n5 = jordan(5);
  for (Coord k = 1; k <= 5; ++k) EXPECT_TRUE(power_apply(n5, e(k), 5).empty());
  const auto report = gk_density_report(n5, 20, 100);
  for (const auto& [n, exponent] : report.exponents) EXPECT_LE(*exponent, 5U);

  try {
    (void)nilpotent_model({{2, 1}, {3, 2}});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::OverlappingBlocks);
  }

  const auto ok = nilpotent_model({{2, 1}, {3, 4}});
  std::size_t max_exponent = 0;
  for (const auto& [n, exponent] : gk_density_report(ok, 10, 100).exponents) max_exponent = std::max(max_exponent, *exponent);
  EXPECT_EQ(max_exponent, 3U);
}

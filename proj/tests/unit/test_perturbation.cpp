#include <gtest/gtest.h>

#include "gshift/mixture.hpp"
#include "gshift/perturbation.hpp"
#include "oracles.hpp"

using namespace gshift;

namespace {

SparseVector e(Coord n) { return SparseVector::unit(n); }

ChainFamily build(const OperatorExpr& s, std::size_t chains) {
  ChainBuildOptions options;
  options.chains = chains;
  options.k_max = 200;
  return build_chains(s, standard_provider(), options);
}

}  // namespace

TEST(EpsilonSchedule, UnitFactorsHalveEachStep) {
  const std::map<std::int64_t, Rational> u{{2, 1}, {3, 1}, {4, 1}};
  const auto eps = epsilon_schedule(u, Rational(1, 10));
  EXPECT_EQ(eps.at(2), Rational(9, 200));
  EXPECT_EQ(eps.at(3), Rational(9, 400));
  EXPECT_EQ(eps.at(4), Rational(9, 800));
  Rational total = 0;
  for (const auto& [l, v] : eps) total += v;
  EXPECT_LT(total, Rational(9, 100));
}

TEST(EpsilonSchedule, LargerFactorShrinksCoefficientNotTermBound) {
  const std::map<std::int64_t, Rational> u{{2, 2}, {3, 1}};
  const auto eps = epsilon_schedule(u, Rational(1, 10));
  EXPECT_EQ(eps.at(2), Rational(9, 400));
  EXPECT_EQ(eps.at(2) * 2, Rational(9, 200));
}

TEST(EpsilonSchedule, NonPositiveEpsRejected) {
  try {
    (void)epsilon_schedule(std::map<std::int64_t, Rational>{{2, 1}}, Rational(0));
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::Precondition);
  }
}

TEST(SingleChainOrdering, ReversesEachChain) {
  const auto family = build(nilpotent_model({{3, 1}}), 3);
  const auto set = single_chain_ordering(family);
  const auto order = set.enumerate(10);
  ASSERT_EQ(order.size(), 5U);
  EXPECT_EQ(*set.vector({1, 1}), e(3));
  EXPECT_EQ(*set.vector({1, 3}), e(1));
  EXPECT_EQ(*set.vector({1, 4}), e(4));
  EXPECT_EQ(single_chain_position(family, 1, 3), 1);
  EXPECT_EQ(single_chain_position(family, 2, 1), 4);
}

TEST(AssembleOneShift, JordanFivePlusZeroAgainstDenseOracle) {
  const auto s = nilpotent_model({{5, 1}});
  const auto family = build(s, 8);  // 5 + 7 = 12 family vectors
  const auto result = assemble_one_shift(s, family, Rational(1, 10));
  EXPECT_LE(result.distance_bound, Rational(9, 100));
  EXPECT_EQ(result.recognition.verdict, Verdict::yes);

  // Change of basis to the single-chain order, computed densely.
  const std::size_t dim = 12;
  const auto set = single_chain_ordering(family);
  oracle::Matrix x = oracle::zeros(dim, dim);
  for (std::size_t k = 1; k <= dim; ++k) {
    const auto col = oracle::dense(*set.vector({1, static_cast<std::int64_t>(k)}), dim);
    for (std::size_t i = 0; i < dim; ++i) x[i][k - 1] = col[i];
  }
  const auto c = oracle::multiply(oracle::multiply(*oracle::inverse(x), oracle::matrix_of(result.output, dim)), x);
  std::set<std::size_t> junctions;
  for (std::size_t l = 2; l <= family.chain_count(); ++l) {
    junctions.insert(static_cast<std::size_t>(single_chain_position(family, l, family.chains[l - 1].length())));
  }
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j <= i; ++j) EXPECT_EQ(sgn(c[i][j]), 0);
  }
  for (std::size_t k = 2; k <= dim; ++k) {
    const auto& coefficient = c[k - 2][k - 1];
    if (junctions.count(k)) {
      // Chain index of this junction: position k is y^l_{d_l}.
      std::int64_t l = 0;
      for (std::size_t m = 2; m <= family.chain_count(); ++m)
        if (static_cast<std::size_t>(single_chain_position(family, m, family.chains[m - 1].length())) == k) l = static_cast<std::int64_t>(m);
      EXPECT_EQ(coefficient, result.plan.epsilons.at(l));
    } else {
      EXPECT_EQ(coefficient, 1);
    }
  }
}

TEST(AssembleOneShift, ZeroOperatorBecomesWeightedBackwardShift) {
  const auto s = zero_operator();
  const auto family = build(s, 6);
  const auto result = assemble_one_shift(s, family, Rational(1, 5));
  EXPECT_TRUE(result.plan.skipped.empty());
  EXPECT_EQ(result.plan.corrections.size(), 5U);
  EXPECT_LE(operator_norm_bound(result.output, NormMode::l2).upper, Rational(9, 50));
  for (std::int64_t l = 2; l <= 6; ++l) {
    EXPECT_EQ(apply(result.output, e(l)), Scalar(result.plan.epsilons.at(l)) * e(l - 1));
  }
}

TEST(AssembleOneShift, IdempotentOnItsOwnOutput) {
  const auto s = nilpotent_model({{3, 1}, {2, 4}});
  const auto family = build(s, 5);
  const auto first = assemble_one_shift(s, family, Rational(1, 10));
  const auto second = assemble_one_shift(first.output, family, Rational(1, 10));
  EXPECT_EQ(second.distance_bound, Rational(0));
  EXPECT_TRUE(second.plan.corrections.empty());
  EXPECT_EQ(second.plan.skipped.size(), family.chain_count() - 1);
  EXPECT_EQ(second.output, first.output);
}

TEST(AssembleOneShift, CorrectionsActLocallyOnTheFamily) {
  const auto s = nilpotent_model({{4, 1}, {2, 6}});
  const auto family = build(s, 6);
  const auto result = assemble_one_shift(s, family, Rational(1, 10));
  for (std::size_t l = 1; l <= family.chain_count(); ++l) {
    for (std::size_t j = 1; j <= family.chains[l - 1].length(); ++j) {
      const auto diff = apply(result.output, family.y(l, j)) - apply(s, family.y(l, j));
      const bool junction = j == family.chains[l - 1].length() && result.plan.corrections.count(static_cast<std::int64_t>(l));
      if (junction) {
        EXPECT_EQ(diff, Scalar(result.plan.epsilons.at(static_cast<std::int64_t>(l))) * family.y(l - 1, 1));
      } else {
        EXPECT_TRUE(diff.empty());
      }
    }
  }
}

TEST(AssembleOneShift, SkipsJunctionWithExistingCoefficient) {
  // Chain 2 = (e_4) with S e_4 = 3 e_1: the junction coefficient already exists.
  DenseMatrix m(4, 4);
  m(1, 0) = Scalar(1);
  m(2, 1) = Scalar(1);
  m(0, 3) = Scalar(3);
  const auto s = dense_block(1, m);
  const auto family = build(s, 3);
  const auto result = assemble_one_shift(s, family, Rational(1, 10));
  EXPECT_TRUE(result.plan.skipped.count(2));
  const auto pos = single_chain_position(family, 2, 1);
  EXPECT_EQ(result.recognition.certificate.row({1, pos})->a(pos - 1), Scalar(3));
}

TEST(AssembleOneShift, SampledNormsStayBelowCertifiedBound) {
  const auto s = nilpotent_model({{5, 1}});
  const auto result = assemble_one_shift(s, build(s, 8), Rational(1, 100));
  const auto check = sample_correction_norms(result.plan, NormMode::l2, 500, 7);
  EXPECT_EQ(check.samples, 500U);
  EXPECT_TRUE(check.within_bound);
  EXPECT_GT(check.max_ratio, 0.0);
  EXPECT_LE(check.max_ratio, result.plan.total_bound.get_d() * (1 + 1e-12));
}

#include <gtest/gtest.h>

#include "gshift/mixture.hpp"
#include "oracles.hpp"

using namespace gshift;

namespace {

MixtureSpec single(WeightSequence w, bool bilateral) {
  MixtureSpec spec;
  (bilateral ? spec.bilateral : spec.forward).push_back(std::move(w));
  return spec;
}

/// Independent cut scan: greedy positions with |w_n| < threshold_j, n >= first.
std::vector<std::int64_t> scan_cuts(const std::function<Rational(std::int64_t)>& w, Rational threshold, std::int64_t first,
                                    std::int64_t cover) {
  std::vector<std::int64_t> cuts;
  std::int64_t n = first;
  while (cuts.empty() || cuts.back() < cover) {
    while (!(abs(w(n)) < threshold)) ++n;
    cuts.push_back(n++);
    threshold /= 2;
  }
  return cuts;
}

}  // namespace

TEST(MixtureLayout, CoordinatesInterleaveChains) {
  MixtureSpec spec;
  spec.forward.push_back(WeightSequence::rule(TailRule::one_over_n()));
  spec.bilateral.push_back(WeightSequence::rule(TailRule::geometric(Rational(1, 2))));
  EXPECT_EQ(mixture_coordinate(spec, 0, 1), 1);
  EXPECT_EQ(mixture_coordinate(spec, 1, 1), 2);
  EXPECT_EQ(mixture_coordinate(spec, 0, 3), 5);
  EXPECT_EQ(mixture_coordinate(spec, 1, 0), 0);
  const auto site = mixture_site(spec, -2);
  ASSERT_TRUE(site);
  EXPECT_EQ(site->chain, 1U);
  EXPECT_EQ(site->position, -1);
  EXPECT_FALSE(mixture_site(spec, -1).has_value());  // forward chain has no position 0
  const auto s = mixture_operator(spec);
  EXPECT_EQ(apply(s, SparseVector::unit(5)), Scalar::ratio(1, 3) * SparseVector::unit(7));
  EXPECT_EQ(apply(s, SparseVector::unit(-2)), Scalar::ratio(1, 2) * SparseVector::unit(0));
}

TEST(MixtureCorrection, ForwardOneOverN) {
  const auto spec = single(WeightSequence::rule(TailRule::one_over_n()), false);
  const Rational eps(1, 5);
  const auto c = shift_mixture_correction(spec, eps, 200, 2000);
  EXPECT_LT(c.norm_bound, Rational(1, 10));
  EXPECT_TRUE(c.density.dense_on_horizon);
  EXPECT_TRUE(c.exponents_match_formula);
  const auto expected = scan_cuts([](std::int64_t n) { return Rational(1, n); }, Rational(9, 200), 1, 200);
  ASSERT_EQ(c.cuts.size(), 1U);
  EXPECT_EQ(c.cuts[0], expected);
  EXPECT_EQ(c.cuts[0].front(), 23);
  for (std::size_t j = 0; j < expected.size(); ++j) EXPECT_EQ(c.thresholds[0][j], mixture_threshold(spec, eps, j + 1));

  // (S - K) kills every cut vector; exponents follow the distance to the next cut.
  for (auto cut : expected) EXPECT_TRUE(apply(c.difference, SparseVector::unit(cut)).empty());
  for (const auto& [n, exponent] : c.density.exponents) {
    ASSERT_TRUE(exponent);
    const auto next = *std::lower_bound(expected.begin(), expected.end(), n);
    EXPECT_EQ(*exponent, static_cast<std::size_t>(next - n + 1));
    EXPECT_TRUE(power_apply(c.difference, SparseVector::unit(n), *exponent).empty());
  }
}

TEST(MixtureCorrection, BilateralOneOverAbsN) {
  const auto spec = single(WeightSequence::rule(TailRule::one_over_n()), true);
  const auto c = shift_mixture_correction(spec, Rational(1, 5), 200, 2000);
  EXPECT_LT(c.norm_bound, Rational(1, 10));
  EXPECT_TRUE(c.density.dense_on_horizon);
  EXPECT_TRUE(c.exponents_match_formula);
  for (auto cut : c.cuts[0]) EXPECT_GT(cut, 0);
  EXPECT_EQ(c.density.exponents.size(), 401U);
  for (const auto& [n, exponent] : c.density.exponents) {
    ASSERT_TRUE(exponent) << n;
    const auto next = *std::lower_bound(c.cuts[0].begin(), c.cuts[0].end(), n);
    EXPECT_EQ(*exponent, static_cast<std::size_t>(next - n + 1));
  }
}

TEST(MixtureCorrection, ConstantWeightsHaveNoCuts) {
  try {
    (void)shift_mixture_correction(single(WeightSequence::rule(TailRule::constant(1)), false), Rational(1, 5), 100, 1000);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::NotFoundWithinHorizon);
  }
}

TEST(MixtureCorrection, TwoChainThresholdsSplitTheBudget) {
  MixtureSpec spec;
  spec.forward.push_back(WeightSequence::rule(TailRule::one_over_n()));
  spec.bilateral.push_back(WeightSequence::rule(TailRule::geometric(Rational(1, 2))));
  EXPECT_EQ(mixture_threshold(spec, Rational(1, 5), 1), Rational(9, 400));
  const auto c = shift_mixture_correction(spec, Rational(1, 5), 120, 2000);
  EXPECT_LT(c.norm_bound, Rational(1, 10));
  EXPECT_TRUE(c.density.dense_on_horizon);
  EXPECT_TRUE(c.exponents_match_formula);
}

TEST(MixturePipeline, ForwardOneOverNApproximatedByOneShift) {
  const auto spec = single(WeightSequence::rule(TailRule::one_over_n()), false);
  MixtureApproximationOptions options;
  options.horizon = 200;
  const auto out = approximate_mixture_by_one_shift(spec, Rational(1, 5), options);
  EXPECT_LT(out.result.distance_bound, Rational(1, 5));
  EXPECT_EQ(out.result.recognition.verdict, Verdict::yes);
  const auto& cert = out.result.recognition.certificate;
  for (const auto& index : cert.order) {
    EXPECT_EQ(cert.recombine(index), apply(out.result.output, cert.vector(index)));
  }
  // Truncation check at 64: no column of S - B is longer than the bound.
  const auto s = mixture_operator(spec);
  const Rational bound2 = out.result.distance_bound * out.result.distance_bound;
  for (Coord n = 1; n <= 64; ++n) {
    const auto column = apply(s, SparseVector::unit(n)) - apply(out.result.output, SparseVector::unit(n));
    EXPECT_LE(oracle::norm2_squared(column), bound2);
  }
}

TEST(MixturePipeline, QuasinilpotentGeometricWeights) {
  const auto out = approximate_mixture_by_one_shift(single(WeightSequence::rule(TailRule::geometric(Rational(1, 2))), false),
                                                    Rational(1, 5), MixtureApproximationOptions{});
  EXPECT_LT(out.result.distance_bound, Rational(1, 5));
  EXPECT_EQ(out.result.recognition.verdict, Verdict::yes);
}

TEST(MixturePipeline, WeightsBoundedBelowFail) {
  try {
    (void)approximate_mixture_by_one_shift(single(WeightSequence::rule(TailRule::one_plus_one_over_n()), false),
                                           Rational(1, 5), MixtureApproximationOptions{});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::NotFoundWithinHorizon);
  }
}

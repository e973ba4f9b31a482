#include <gtest/gtest.h>

#include "gshift/chains.hpp"
#include "gshift/mixture.hpp"
#include "oracles.hpp"

using namespace gshift;

namespace {

SparseVector e(Coord n) { return SparseVector::unit(n); }

EchelonBasis basis_of(std::initializer_list<SparseVector> vs) {
  EchelonBasis b;
  for (const auto& v : vs) b.insert(v);
  return b;
}

ChainFamily build(const OperatorExpr& s, std::size_t chains) {
  ChainBuildOptions options;
  options.chains = chains;
  options.k_max = 100;
  return build_chains(s, standard_provider(), options);
}

}  // namespace

TEST(ChainLength, Examples) {
  const auto j3 = nilpotent_model({{3, 1}});
  EXPECT_EQ(chain_length(j3, e(1), EchelonBasis{}, 10), 3U);
  EXPECT_EQ(chain_length(j3, e(4), basis_of({e(1), e(2), e(3)}), 10), 1U);

  // y = e_5 -> y' = e_6 -> e_1, with E_prev = (e_1, e_2, e_3).
  DenseMatrix m(6, 6);
  m(5, 4) = Scalar(1);
  m(0, 5) = Scalar(1);
  const auto s = sum({{Scalar(1), j3}, {Scalar(1), dense_block(1, m)}});
  const auto e_prev = basis_of({e(1), e(2), e(3)});
  const auto d = chain_length(s, e(5), e_prev, 10);
  EXPECT_EQ(d, 2U);
  // Oracle: rank stays full for d steps and S^d y falls into E_prev.
  const auto sm = oracle::matrix_of(s, 6);
  const oracle::Vec y = oracle::dense(e(5), 6);
  const oracle::Vec y1 = oracle::multiply(sm, y);
  const oracle::Vec y2 = oracle::multiply(sm, y1);
  oracle::Matrix stacked{oracle::dense(e(1), 6), oracle::dense(e(2), 6), oracle::dense(e(3), 6), y, y1};
  EXPECT_EQ(oracle::rank(stacked), 5U);
  stacked.push_back(y2);
  EXPECT_EQ(oracle::rank(stacked), 5U);
  oracle::Matrix prev{oracle::dense(e(1), 6), oracle::dense(e(2), 6), oracle::dense(e(3), 6), y2};
  EXPECT_EQ(oracle::rank(prev), 3U);
}

TEST(ChainLength, NotNilpotentModulo) {
  try {
    (void)chain_length(scalar_identity(Scalar(1)), e(1), EchelonBasis{}, 10);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::NotNilpotentModulo);
  }
}

TEST(BuildChains, JordanThreePlusZero) {
  const auto family = build(nilpotent_model({{3, 1}}), 3);
  ASSERT_EQ(family.chain_count(), 3U);
  EXPECT_EQ(family.chains[0].vectors, (std::vector<SparseVector>{e(1), e(2), e(3)}));
  EXPECT_EQ(family.chains[1].vectors, (std::vector<SparseVector>{e(4)}));
  EXPECT_EQ(family.chains[2].vectors, (std::vector<SparseVector>{e(5)}));
  EXPECT_EQ(family.chains[1].source, 4U);
  EXPECT_TRUE(check_chain_invariants(nilpotent_model({{3, 1}}), family).all());
}

TEST(BuildChains, ZeroOperatorGivesSingletons) {
  const auto family = build(zero_operator(), 4);
  ASSERT_EQ(family.chain_count(), 4U);
  for (std::size_t l = 0; l < 4; ++l) {
    EXPECT_EQ(family.chains[l].vectors, std::vector<SparseVector>{e(static_cast<Coord>(l + 1))});
  }
}

TEST(BuildChains, TwoJordanPairs) {
  const auto family = build(nilpotent_model({{2, 1}, {2, 3}}), 2);
  ASSERT_EQ(family.chain_count(), 2U);
  EXPECT_EQ(family.chains[0].vectors, (std::vector<SparseVector>{e(1), e(2)}));
  EXPECT_EQ(family.chains[1].vectors, (std::vector<SparseVector>{e(3), e(4)}));
}

TEST(BuildChains, SkipsProvidedVectorsAlreadyInSpan) {
  // N e_1 = e_2 + e_3 and N e_2 = e_3: e_2 and e_3 are covered by chain 1.
  DenseMatrix m(3, 3);
  m(1, 0) = Scalar(1);
  m(2, 0) = Scalar(1);
  m(2, 1) = Scalar(1);
  const auto s = dense_block(1, m);
  const auto family = build(s, 2);
  EXPECT_EQ(family.chains[0].length(), 3U);
  EXPECT_EQ(family.chains[1].source, 4U);
  EXPECT_EQ(family.consumed.size(), 4U);
}

TEST(BuildChains, RejectsVectorsOutsideGeneralizedKernel) {
  try {
    (void)build(forward_shift(WeightSequence::rule(TailRule::one_over_n())), 2);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::NotInGeneralizedKernel);
  }
}

TEST(BuildChains, ProviderExhaustedKeepsPartialFamily) {
  const VectorProvider three = [](std::size_t n) -> std::optional<SparseVector> {
    if (n > 3) return std::nullopt;
    return SparseVector::unit(static_cast<Coord>(n));
  };
  ChainBuildOptions options;
  options.chains = 5;
  try {
    (void)build_chains(zero_operator(), three, options);
    FAIL();
  } catch (const ProviderExhausted& err) {
    EXPECT_EQ(err.partial().chain_count(), 3U);
  }
}

TEST(BuildChains, BilateralProviderOrder) {
  const auto provider = bilateral_provider();
  EXPECT_EQ(*provider(1), e(0));
  EXPECT_EQ(*provider(2), e(1));
  EXPECT_EQ(*provider(3), e(-1));
  EXPECT_EQ(*provider(4), e(2));
}

TEST(BuildChains, RandomModelsSatisfyInvariantsByDenseOracle) {
  oracle::RationalSource src(2024);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 2 + src.below(7);
    const auto p = oracle::random_invertible(src, n);
    const auto u = oracle::random_strict_upper(src, n, 0.3);
    const auto m = oracle::multiply(oracle::multiply(p, u), *oracle::inverse(p));
    const auto s = dense_block(1, oracle::to_dense_matrix(m));
    const std::size_t chains = n + 2;
    const auto family = build(s, chains);
    ASSERT_EQ(family.chain_count(), chains);
    EXPECT_EQ(oracle::check_family(s, family), "");
    EXPECT_TRUE(check_chain_invariants(s, family).all());
  }
}

TEST(BuildChains, FunctionalsBiorthogonalToWholeFamily) {
  const auto s = nilpotent_model({{3, 1}, {2, 5}});
  const auto family = build(s, 4);
  for (std::size_t l = 1; l <= family.chain_count(); ++l)
    for (std::size_t j = 1; j <= family.chains[l - 1].length(); ++j)
      for (std::size_t m = 1; m <= family.chain_count(); ++m)
        for (std::size_t i = 1; i <= family.chains[m - 1].length(); ++i) {
          EXPECT_EQ(family.functional(l, j)(family.y(m, i)), Scalar(l == m && i == j ? 1 : 0));
        }
}

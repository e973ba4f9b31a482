#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gshift/chains.hpp"
#include "gshift/operator.hpp"
#include "gshift/shift_theory.hpp"

namespace gshift {

/// Certified rank-one factor norm u_l = ||f_{l,d_l}|| * ||y^{l-1}_1|| for each
/// junction l >= 2.
std::map<std::int64_t, Rational> junction_factor_norms(const ChainFamily& family);

/// eps_l = (9/10) eps 2^{-(l-1)} / u_l for l >= 2.
std::map<std::int64_t, Rational> epsilon_schedule(const std::map<std::int64_t, Rational>& factor_norms,
                                                  const Rational& eps);
std::map<std::int64_t, Rational> epsilon_schedule(const ChainFamily& family, const Rational& eps);

struct Correction {
  std::int64_t chain = 0;  // l
  RankOne term;            // eps_l * f_{l,d_l}(x) * y^{l-1}_1
  Rational norm_bound;
};

struct PerturbationPlan {
  std::map<std::int64_t, Rational> epsilons;
  std::map<std::int64_t, Correction> corrections;
  std::set<std::int64_t> skipped;
  Rational total_bound;
};

/// Reorders the family into one chain y^1_{d_1}, ..., y^1_1, y^2_{d_2}, ...
AdaptedSet single_chain_ordering(const ChainFamily& family);
/// Position of y^chain_position in that single chain.
std::int64_t single_chain_position(const ChainFamily& family, std::size_t chain, std::size_t position);

struct ApproximationResult {
  OperatorExpr input;
  OperatorExpr output;
  ChainFamily family;
  PerturbationPlan plan;
  RecognitionResult recognition;
  /// Certified bound on ||input - output||.
  Rational distance_bound;
  Rational eps;
  std::vector<std::string> trace;
};

/// Perturbs `s` into a generalised backward 1-shift adapted to the single
/// chain ordering of `family`. Throws CertificateFailure if the recognizer
/// does not accept the result or the bound is not below eps.
ApproximationResult assemble_one_shift(const OperatorExpr& s, const ChainFamily& family, const Rational& eps);

struct SampleCheck {
  std::size_t samples = 0;
  /// max over samples of ||(S' - S) v|| / ||v||, in binary64.
  double max_ratio = 0.0;
  bool within_bound = true;
};

/// Float cross-check of the certified correction bound on random vectors
/// supported where the corrections act. Relative tolerance 1e-12.
SampleCheck sample_correction_norms(const PerturbationPlan& plan, NormMode p, std::size_t samples,
                                    std::uint64_t seed);

}  // namespace gshift

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gshift/chains.hpp"
#include "gshift/operator.hpp"
#include "gshift/perturbation.hpp"
#include "gshift/weights.hpp"

namespace gshift {

/// Direct sum of weighted shifts: forward chains S x_j = a_j x_{j+1} (j >= 1)
/// and bilateral chains S y_j = b_j y_{j+1} (j in Z).
struct MixtureSpec {
  std::vector<WeightSequence> forward;
  std::vector<WeightSequence> bilateral;
  NormMode norm = NormMode::l2;

  [[nodiscard]] std::size_t chain_count() const noexcept { return forward.size() + bilateral.size(); }
  [[nodiscard]] const WeightSequence& weights(std::size_t chain) const;
  [[nodiscard]] bool is_bilateral(std::size_t chain) const noexcept { return chain >= forward.size(); }
  friend bool operator==(const MixtureSpec&, const MixtureSpec&) = default;
};

/// Chain c (0-based) position j sits at coordinate C*(j-1) + c + 1, where C is
/// the number of chains.
struct MixtureSite {
  std::size_t chain = 0;
  std::int64_t position = 1;
};

Coord mixture_coordinate(const MixtureSpec& spec, std::size_t chain, std::int64_t position);
/// nullopt when no chain of the mixture uses coordinate n.
std::optional<MixtureSite> mixture_site(const MixtureSpec& spec, Coord n);

OperatorExpr mixture_operator(const MixtureSpec& spec);
/// Basis coordinates of the mixture in the order 0, 1, -1, 2, -2, ...
VectorProvider mixture_provider(const MixtureSpec& spec, ArithmeticMode mode = ArithmeticMode::exact);

struct CompactCorrection {
  MixtureSpec spec;
  Rational eps;
  std::size_t horizon = 0;
  OperatorExpr s;
  OperatorExpr k;
  OperatorExpr difference;  // S - K
  /// Per chain: cut positions found while covering the horizon, their
  /// thresholds and the realised factors |a_n| * ||x*_n||.
  std::vector<std::vector<std::int64_t>> cuts;
  std::vector<std::vector<Rational>> thresholds;
  std::vector<std::vector<Rational>> cut_norms;
  Rational norm_bound;  // certified bound on ||K||
  Rational realized_bound;
  DensityReport density;
  bool exponents_match_formula = false;
  std::vector<std::string> trace;
};

/// Threshold for cut j (1-based) of any chain: (9/10)(eps/2)/C * 2^{-j}.
Rational mixture_threshold(const MixtureSpec& spec, const Rational& eps, std::size_t j);

/// Builds K as a lazy rank-one sum so that S - K has a dense generalised kernel.
/// The horizon counts coordinates: every basis coordinate n with |n| <= horizon
/// is checked. Throws NotFoundWithinHorizon when a chain has no admissible cut.
CompactCorrection shift_mixture_correction(const MixtureSpec& spec, const Rational& eps, std::size_t horizon,
                                           std::size_t k_max);

struct MixtureApproximationOptions {
  std::size_t horizon = 200;
  std::size_t chains = 4;
  std::size_t k_max = 2000;
};

struct MixtureApproximation {
  CompactCorrection correction;
  /// input = S, output = B, distance_bound = ||K|| + ||(S-K) - B||.
  ApproximationResult result;
};

MixtureApproximation approximate_mixture_by_one_shift(const MixtureSpec& spec, const Rational& eps,
                                                      const MixtureApproximationOptions& options);

struct JordanBlock {
  std::size_t size = 1;
  Coord offset = 1;
  friend bool operator==(const JordanBlock&, const JordanBlock&) = default;
};

/// Direct sum of blocks N e_{o+i} = e_{o+i+1}, N e_{o+size-1} = 0, zero
/// elsewhere. Throws OverlappingBlocks.
OperatorExpr nilpotent_model(const std::vector<JordanBlock>& blocks, ArithmeticMode mode = ArithmeticMode::exact);

}  // namespace gshift

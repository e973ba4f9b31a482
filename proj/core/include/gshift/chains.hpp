#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gshift/chain_index.hpp"
#include "gshift/errors.hpp"
#include "gshift/linalg.hpp"
#include "gshift/operator.hpp"
#include "gshift/vector.hpp"

namespace gshift {

/// Sequence x_1, x_2, ... (1-based); nullopt past the end of a finite supply.
using VectorProvider = std::function<std::optional<SparseVector>(std::size_t n)>;

/// x_n = e_n.
VectorProvider standard_provider(ArithmeticMode mode = ArithmeticMode::exact);
/// x_n runs over e_0, e_1, e_-1, e_2, e_-2, ...
VectorProvider bilateral_provider(ArithmeticMode mode = ArithmeticMode::exact);

struct Chain {
  std::vector<SparseVector> vectors;  // y_1 .. y_d
  std::size_t source = 0;             // y_1 = x_source

  [[nodiscard]] std::size_t length() const noexcept { return vectors.size(); }
};

struct ChainFamily {
  std::vector<Chain> chains;
  /// Biorthogonal against every vector of the family.
  std::map<ChainIndex, Functional> functionals;
  NormMode norm = NormMode::l2;
  /// x_1 .. x_n for every n the construction consumed.
  std::vector<SparseVector> consumed;

  [[nodiscard]] std::size_t chain_count() const noexcept { return chains.size(); }
  [[nodiscard]] std::size_t size() const;
  /// y^chain_position, both 1-based.
  [[nodiscard]] const SparseVector& y(std::size_t chain, std::size_t position) const;
  [[nodiscard]] const Functional& functional(std::size_t chain, std::size_t position) const;
  /// Ordered basis y^1_1 .. y^m_{d_m} of E_m.
  [[nodiscard]] std::vector<SparseVector> basis_of_E(std::size_t m) const;
  [[nodiscard]] std::vector<SparseVector> flattened() const { return basis_of_E(chains.size()); }
};

struct ChainBuildOptions {
  std::size_t chains = 4;
  std::size_t k_max = 1000;
  NormMode norm = NormMode::l2;
  /// Largest n requested from the provider.
  std::size_t provider_limit = 100000;
};

/// Smallest r >= 1 with S^r y in span{y, ..., S^{r-1} y} + E_prev. Also checks
/// that S^r y lies in E_prev itself. Throws NotNilpotentModulo.
std::size_t chain_length(const OperatorExpr& s, const SparseVector& y, const EchelonBasis& e_prev,
                         std::size_t k_max);

/// Raised when the provider runs dry before L chains exist.
class ProviderExhausted : public Error {
 public:
  ProviderExhausted(ChainFamily partial, const std::string& what)
      : Error(ErrorCode::ProviderExhausted, what), partial_(std::move(partial)) {}
  [[nodiscard]] const ChainFamily& partial() const noexcept { return partial_; }

 private:
  ChainFamily partial_;
};

/// Greedy chain construction: each chain starts at the smallest-index x_n
/// outside the span of the chains so far. Invariants are checked before
/// returning (CertificateFailure on violation).
ChainFamily build_chains(const OperatorExpr& s, const VectorProvider& xs, const ChainBuildOptions& options);

struct ChainInvariantReport {
  bool shift_cond = true;    // S y_j = y_{j+1} inside each chain
  bool shift_cond2 = true;   // S y_d in E_{m-1}
  bool ind_cond = true;      // chain m independent of E_{m-1}
  bool useupxns = true;      // x_1 .. x_{source_m} in E_m
  bool use_only_xns = true;  // y^m_1 is a provided vector
  bool ys_lin_indep = true;
  bool biorthogonal = true;  // functionals pair to the Kronecker delta
  std::string first_violation;

  [[nodiscard]] bool all() const noexcept {
    return shift_cond && shift_cond2 && ind_cond && useupxns && use_only_xns && ys_lin_indep && biorthogonal;
  }
};

ChainInvariantReport check_chain_invariants(const OperatorExpr& s, const ChainFamily& family);

}  // namespace gshift

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gshift/chain_index.hpp"
#include "gshift/operator.hpp"
#include "gshift/vector.hpp"

namespace gshift {

/// Indexed independent family {x^l_k} on which a generalised shift acts.
/// Chains may be finite (the generator returns nullopt past their end).
class AdaptedSet {
 public:
  using Generator = std::function<std::optional<SparseVector>(ChainIndex)>;

  /// `arity` nullopt means infinitely many chains.
  AdaptedSet(std::optional<std::size_t> arity, Generator generator)
      : arity_(arity), generator_(std::move(generator)) {}

  /// One chain x^1_k = e_k.
  static AdaptedSet standard_chain();
  /// Finite explicit chains; chains[l-1][k-1] = x^l_k.
  static AdaptedSet from_chains(std::vector<std::vector<SparseVector>> chains);

  [[nodiscard]] std::optional<std::size_t> arity() const noexcept { return arity_; }
  [[nodiscard]] std::optional<SparseVector> vector(ChainIndex index) const;

  /// Prefix in lexicographic order: chains 1..min(arity, horizon) (all chains
  /// when arity is finite), positions 1..horizon of each.
  [[nodiscard]] std::vector<ChainIndex> enumerate(std::size_t horizon) const;

 private:
  std::optional<std::size_t> arity_;
  Generator generator_;
};

/// Coefficients of S x^l_k over lexicographic predecessors.
struct CertificateRow {
  ChainIndex index;
  std::vector<std::pair<ChainIndex, Scalar>> terms;  // nonzero, increasing index

  /// Coefficient a^{l,k}_i on x^l_i (same chain).
  [[nodiscard]] std::optional<Scalar> a(std::int64_t i) const;
  /// Coefficient b^{l,k}_{i,j} on x^i_j (earlier chain).
  [[nodiscard]] std::optional<Scalar> b(std::int64_t chain, std::int64_t position) const;
  [[nodiscard]] std::optional<Scalar> coefficient(ChainIndex at) const;
};

class ShiftCertificate {
 public:
  std::vector<ChainIndex> order;                // enumerated prefix, lexicographic
  std::map<ChainIndex, SparseVector> vectors;   // x^l_k for every enumerated index
  std::map<ChainIndex, CertificateRow> rows;    // indices whose image expanded validly

  [[nodiscard]] const SparseVector& vector(ChainIndex index) const;
  [[nodiscard]] const CertificateRow* row(ChainIndex index) const;
  /// 1-based position of `index` in the linear order.
  [[nodiscard]] std::size_t linear_position(ChainIndex index) const;
  /// Longest descending path through the rows starting at `index`: a bound on
  /// its kernel exponent.
  [[nodiscard]] std::size_t depth(ChainIndex index) const;
  /// sum over the row of coefficient * vector.
  [[nodiscard]] SparseVector recombine(ChainIndex index) const;
};

enum class Verdict { yes, no, inconclusive };
std::string to_string(Verdict v);

enum class FailureReason {
  none,
  successor_term,              // image uses an index >= the current one
  zero_immediate_predecessor,  // a^{l,k}_{k-1} = 0 with k > 1
  expansion_outside_prefix,    // image not in the span of the enumerated prefix
};
std::string to_string(FailureReason r);

struct RecognitionResult {
  Verdict verdict = Verdict::inconclusive;
  std::optional<ChainIndex> first_failure;
  FailureReason reason = FailureReason::none;
  std::size_t horizon = 0;
  ShiftCertificate certificate;
  /// Per-index outcome, lexicographic.
  std::vector<std::pair<ChainIndex, FailureReason>> outcomes;
};

/// Tests whether `op` is a generalised backward shift adapted to `set` on the
/// enumerated prefix. Throws DependentBasis when the prefix is dependent.
RecognitionResult recognize_generalized_shift(const OperatorExpr& op, const AdaptedSet& set, std::size_t horizon);

/// n with op^n x_index = 0, n <= certificate depth. Throws ExceededBound.
std::size_t kernel_witness(const OperatorExpr& op, const ShiftCertificate& cert, ChainIndex index);

/// v with op^r v = x_index, built by back-substitution over the certificate.
/// Throws InsufficientChain or SingularCoefficient.
SparseVector hyperrange_witness(const OperatorExpr& op, const ShiftCertificate& cert, ChainIndex index,
                                std::size_t r);

struct MembershipReport {
  ChainIndex index;
  std::optional<std::size_t> kernel_exponent;
  std::map<std::size_t, SparseVector> hyperrange;  // r -> preimage
  Verdict verdict = Verdict::inconclusive;
  std::string note;
};

struct MullerReport {
  Verdict verdict = Verdict::inconclusive;
  Verdict recognition = Verdict::inconclusive;
  std::optional<ChainIndex> first_failure;
  std::size_t probe_horizon = 0;
  std::size_t r_max = 0;
  /// Largest m with e_1..e_m in the span of the enumerated prefix.
  std::size_t coordinates_exhausted = 0;
  std::vector<MembershipReport> members;
};

/// Records kernel and hyperrange witnesses for every certificate index within
/// the first `probe_horizon` positions of the linear order.
MullerReport muller_hypothesis_check(const OperatorExpr& op, const ShiftCertificate& cert, std::size_t probe_horizon,
                                     std::size_t r_max);
/// Runs the recognizer first; when it does not accept, falls back to plain
/// kernel probes on the adapted vectors.
MullerReport muller_hypothesis_check(const OperatorExpr& op, const AdaptedSet& set, std::size_t horizon,
                                     std::size_t r_max, std::size_t k_max);

/// Largest m such that e_1..e_m lie in the span of `vectors`.
std::size_t coordinates_exhausted(std::span<const SparseVector> vectors);

// Orbit evidence ------------------------------------------------------------------

struct OrbitTarget {
  SparseVector center;
  double radius = 0.1;
};

struct OrbitOptions {
  std::size_t dimension = 64;
  std::size_t iterations = 5000;
  std::size_t window = 8;  // coordinates 1..window used for distances
  double norm_cap = 1e150;
  NormMode p = NormMode::l2;
};

struct OrbitSample {
  std::size_t iteration = 0;
  double norm = 0.0;
  std::vector<double> distances;  // per target
};

struct OrbitReport {
  static constexpr const char* kLabel = "HEURISTIC EVIDENCE";
  std::vector<OrbitSample> samples;
  std::vector<std::optional<std::size_t>> first_hit;  // per target
  bool overflow = false;
  std::optional<std::size_t> overflow_iteration;
};

/// Iterates (lambda + op) on the leading `dimension` coordinates in binary64.
/// No pass/fail semantics: finite truncations are never hypercyclic.
OrbitReport orbit_visit_evidence(const OperatorExpr& op, const Scalar& lambda, const SparseVector& seed,
                                 const std::vector<OrbitTarget>& targets, const OrbitOptions& options);

/// CSV with header iteration,norm,target_id,distance.
std::string orbit_csv(const OrbitReport& report);

}  // namespace gshift

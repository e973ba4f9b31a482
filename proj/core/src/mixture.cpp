#include "gshift/mixture.hpp"

#include <algorithm>
#include <mutex>

#include "gshift/weight_analysis.hpp"

namespace gshift {

const WeightSequence& MixtureSpec::weights(std::size_t chain) const {
  if (chain < forward.size()) return forward[chain];
  if (chain < chain_count()) return bilateral[chain - forward.size()];
  throw Error(ErrorCode::Precondition, "mixture has no chain " + std::to_string(chain));
}

Coord mixture_coordinate(const MixtureSpec& spec, std::size_t chain, std::int64_t position) {
  const auto c = static_cast<Coord>(spec.chain_count());
  return c * (position - 1) + static_cast<Coord>(chain) + 1;
}

std::optional<MixtureSite> mixture_site(const MixtureSpec& spec, Coord n) {
  const auto c = static_cast<Coord>(spec.chain_count());
  if (c == 0) return std::nullopt;
  const Coord shifted = n - 1;
  Coord q = shifted / c;
  Coord r = shifted % c;
  if (r < 0) {
    r += c;
    --q;
  }
  MixtureSite site{static_cast<std::size_t>(r), q + 1};
  if (site.position < 1 && !spec.is_bilateral(site.chain)) return std::nullopt;
  return site;
}

OperatorExpr mixture_operator(const MixtureSpec& spec) {
  if (spec.chain_count() == 0) throw Error(ErrorCode::Precondition, "a mixture needs at least one chain");
  const auto stride = static_cast<std::int64_t>(spec.chain_count());
  std::vector<SumTerm> terms;
  for (std::size_t c = 0; c < spec.chain_count(); ++c) {
    WeightedShift shift{spec.is_bilateral(c) ? ShiftDirection::bilateral : ShiftDirection::forward, spec.weights(c),
                        stride, static_cast<Coord>(c) + 1};
    terms.push_back({Scalar::one(spec.weights(c).mode()), OperatorExpr(std::move(shift))});
  }
  if (terms.size() == 1) return terms.front().op;
  return sum(std::move(terms));
}

VectorProvider mixture_provider(const MixtureSpec& spec, ArithmeticMode mode) {
  return [spec, mode](std::size_t n) -> std::optional<SparseVector> {
    std::size_t seen = 0;
    for (std::size_t t = 1;; ++t) {
      const auto k = static_cast<Coord>(t / 2);
      const Coord coord = t % 2 == 0 ? k : -k;
      if (mixture_site(spec, coord) && ++seen == n) return SparseVector::unit(coord, mode);
    }
  };
}

Rational mixture_threshold(const MixtureSpec& spec, const Rational& eps, std::size_t j) {
  const Rational base = Rational(9, 10) * (eps / 2) / Rational(static_cast<unsigned long>(spec.chain_count()));
  return base * pow(Rational(1, 2), static_cast<std::int64_t>(j));
}

namespace {

/// Cut positions per chain, extended on demand. Shared by the lazy sum's term
/// generator and locality map.
class CutTable {
 public:
  CutTable(MixtureSpec spec, Rational eps, std::int64_t min_scan)
      : spec_(std::move(spec)), eps_(std::move(eps)), min_scan_(min_scan), cuts_(spec_.chain_count()) {}

  /// j-th cut (1-based) of chain c.
  std::int64_t cut(std::size_t c, std::size_t j) {
    std::lock_guard lock(mutex_);
    while (cuts_[c].size() < j) extend(c, min_scan_);
    return cuts_[c][j - 1];
  }

  /// 1-based number of the cut at `position`, if that position is a cut.
  std::optional<std::size_t> cut_number(std::size_t c, std::int64_t position) {
    std::lock_guard lock(mutex_);
    if (position < 1) return std::nullopt;
    while (cuts_[c].empty() || cuts_[c].back() < position) extend(c, position);
    const auto& list = cuts_[c];
    const auto it = std::lower_bound(list.begin(), list.end(), position);
    if (it == list.end() || *it != position) return std::nullopt;
    return static_cast<std::size_t>(it - list.begin()) + 1;
  }

  /// Smallest cut >= position (positions < 1 map to the first cut).
  std::int64_t next_cut(std::size_t c, std::int64_t position) {
    std::lock_guard lock(mutex_);
    while (cuts_[c].empty() || cuts_[c].back() < position) extend(c, position);
    return *std::lower_bound(cuts_[c].begin(), cuts_[c].end(), position);
  }

  std::vector<std::int64_t> snapshot(std::size_t c) {
    std::lock_guard lock(mutex_);
    return cuts_[c];
  }

 private:
  void extend(std::size_t c, std::int64_t target) {
    auto& list = cuts_[c];
    const std::size_t j = list.size() + 1;
    const std::int64_t from = list.empty() ? 1 : list.back() + 1;
    // The search window grows with the requested position.
    const std::int64_t last = 4 * std::max({target, min_scan_, from}) + 64;
    const auto n = first_index_below(spec_.weights(c), constant_functional_bound(1),
                                     mixture_threshold(spec_, eps_, j), from, last);
    if (!n) throw NotFoundWithinHorizon(list, j - 1, last);
    list.push_back(*n);
  }

  MixtureSpec spec_;
  Rational eps_;
  std::int64_t min_scan_;
  std::mutex mutex_;
  std::vector<std::vector<std::int64_t>> cuts_;
};

}  // namespace

CompactCorrection shift_mixture_correction(const MixtureSpec& spec, const Rational& eps, std::size_t horizon,
                                           std::size_t k_max) {
  if (spec.chain_count() == 0) throw Error(ErrorCode::Precondition, "a mixture needs at least one chain");
  if (sgn(eps) <= 0) throw Error(ErrorCode::Precondition, "eps must be positive");
  if (horizon == 0) throw Error(ErrorCode::Precondition, "horizon must be positive");

  CompactCorrection out;
  out.spec = spec;
  out.eps = eps;
  out.horizon = horizon;
  const std::size_t chains = spec.chain_count();
  auto table = std::make_shared<CutTable>(spec, eps, static_cast<std::int64_t>(horizon));

  // Horizon coordinates and the largest position of each chain among them.
  const auto n_max = static_cast<Coord>(horizon);
  std::vector<Coord> coords;
  std::vector<std::int64_t> max_position(chains, 0);
  for (Coord n = -n_max; n <= n_max; ++n) {
    const auto site = mixture_site(spec, n);
    if (!site) continue;
    coords.push_back(n);
    max_position[site->chain] = std::max(max_position[site->chain], site->position);
  }

  out.cuts.resize(chains);
  out.thresholds.resize(chains);
  out.cut_norms.resize(chains);
  for (std::size_t c = 0; c < chains; ++c) {
    try {
      table->next_cut(c, std::max<std::int64_t>(max_position[c], 1));
    } catch (const NotFoundWithinHorizon& e) {
      out.trace.push_back("chain " + std::to_string(c + 1) + ": " + e.what());
      throw;
    }
    out.cuts[c] = table->snapshot(c);
    for (std::size_t j = 1; j <= out.cuts[c].size(); ++j) {
      out.thresholds[c].push_back(mixture_threshold(spec, eps, j));
      const Rational factor = spec.weights(c)(out.cuts[c][j - 1]).abs_upper().value;
      out.cut_norms[c].push_back(factor);
      out.realized_bound += factor;
    }
  }

  const NormMode p = spec.norm;
  LazySum k;
  k.label = "mixture_correction";
  k.term = [spec, table, chains, p](std::size_t t) {
    const std::size_t c = t % chains;
    const std::size_t j = t / chains + 1;
    const std::int64_t n = table->cut(c, j);
    const WeightSequence& w = spec.weights(c);
    return OperatorExpr(RankOne{Functional(SparseVector::unit(mixture_coordinate(spec, c, n), w.mode()), p),
                                SparseVector::unit(mixture_coordinate(spec, c, n + 1), w.mode()), w(n)});
  };
  k.locality.lookup = [spec, table, chains](Coord n) -> std::optional<std::vector<std::size_t>> {
    const auto site = mixture_site(spec, n);
    if (!site) return std::vector<std::size_t>{};
    const auto j = table->cut_number(site->chain, site->position);
    if (!j) return std::vector<std::size_t>{};
    return std::vector<std::size_t>{(*j - 1) * chains + site->chain};
  };
  // Term t pays at most the threshold of cut t / C + 1.
  k.majorant = Majorant{mixture_threshold(spec, eps, 1), Rational(1, 2), chains};
  k.coefficient = Scalar::one(spec.weights(0).mode());

  out.s = mixture_operator(spec);
  out.k = OperatorExpr(std::move(k));
  out.difference = difference(out.s, out.k);
  out.norm_bound = operator_norm_bound(out.k, p).upper;
  if (!(out.norm_bound < eps / 2) || !(out.realized_bound <= out.norm_bound)) {
    throw Error(ErrorCode::CertificateFailure, "correction norm bound " + format_rational(out.norm_bound) +
                                                   " is not below eps/2");
  }

  for (std::size_t c = 0; c < chains; ++c) {
    for (const auto n : out.cuts[c]) {
      const auto image = apply(out.difference, SparseVector::unit(mixture_coordinate(spec, c, n)));
      if (!image.empty()) {
        throw Error(ErrorCode::CertificateFailure, "S - K does not annihilate cut " + std::to_string(n) +
                                                       " of chain " + std::to_string(c + 1));
      }
    }
  }

  out.density = gk_density_report(out.difference, coords, k_max);
  out.exponents_match_formula = out.density.dense_on_horizon;
  for (const auto& [coord, exponent] : out.density.exponents) {
    const auto site = *mixture_site(spec, coord);
    const WeightSequence& w = spec.weights(site.chain);
    // Next annihilating position: a zero weight or a cut.
    std::int64_t q = site.position;
    const std::int64_t cut = table->next_cut(site.chain, q);
    while (q < cut && !w(q).is_zero()) ++q;
    const auto expected = static_cast<std::size_t>(q - site.position + 1);
    if (!exponent || *exponent != expected) out.exponents_match_formula = false;
  }
  out.trace.push_back("||K|| <= " + format_rational(out.norm_bound));
  out.trace.push_back(std::string("density on horizon: ") + (out.density.dense_on_horizon ? "yes" : "no"));
  if (!out.exponents_match_formula) {
    throw Error(ErrorCode::CertificateFailure, "kernel exponents of S - K disagree with the cut distances");
  }
  return out;
}

MixtureApproximation approximate_mixture_by_one_shift(const MixtureSpec& spec, const Rational& eps,
                                                      const MixtureApproximationOptions& options) {
  MixtureApproximation out;
  out.correction = shift_mixture_correction(spec, eps, options.horizon, options.k_max);
  const ArithmeticMode mode = spec.weights(0).mode();
  ChainBuildOptions build;
  build.chains = options.chains;
  build.k_max = options.k_max;
  build.norm = spec.norm;
  const ChainFamily family = build_chains(out.correction.difference, mixture_provider(spec, mode), build);
  out.result = assemble_one_shift(out.correction.difference, family, eps / 2);
  out.result.trace.insert(out.result.trace.begin(), out.correction.trace.begin(), out.correction.trace.end());
  out.result.input = out.correction.s;
  out.result.distance_bound = out.correction.norm_bound + out.result.plan.total_bound;
  out.result.eps = eps;
  if (!(out.result.distance_bound < eps)) {
    throw Error(ErrorCode::CertificateFailure, "total distance bound is not below eps");
  }
  return out;
}

OperatorExpr nilpotent_model(const std::vector<JordanBlock>& blocks, ArithmeticMode mode) {
  std::vector<JordanBlock> sorted = blocks;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.offset < b.offset; });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].size == 0) throw Error(ErrorCode::Precondition, "block sizes must be positive");
    if (i > 0 && sorted[i - 1].offset + static_cast<Coord>(sorted[i - 1].size) > sorted[i].offset) {
      throw Error(ErrorCode::OverlappingBlocks, "blocks at offsets " + std::to_string(sorted[i - 1].offset) +
                                                    " and " + std::to_string(sorted[i].offset) + " overlap");
    }
  }
  std::vector<SumTerm> terms;
  for (const auto& b : blocks) {
    DenseMatrix m(b.size, b.size, mode);
    for (std::size_t i = 0; i + 1 < b.size; ++i) m(i + 1, i) = Scalar::one(mode);
    terms.push_back({Scalar::one(mode), dense_block(b.offset, std::move(m))});
  }
  if (terms.empty()) return zero_operator();
  if (terms.size() == 1) return terms.front().op;
  return sum(std::move(terms));
}

}  // namespace gshift

#include "gshift/shift_theory.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <sstream>

#include "gshift/errors.hpp"
#include "gshift/linalg.hpp"

namespace gshift {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(FailureReason r) {
  switch (r) {
    case FailureReason::none: return "none";
    case FailureReason::successor_term: return "successor_term";
    case FailureReason::zero_immediate_predecessor: return "zero_immediate_predecessor";
    case FailureReason::expansion_outside_prefix: return "expansion_outside_prefix";
  }
  return "none";
}

// AdaptedSet ------------------------------------------------------------------------

AdaptedSet AdaptedSet::standard_chain() {
  return AdaptedSet(1, [](ChainIndex index) -> std::optional<SparseVector> {
    if (index.chain != 1 || index.position < 1) return std::nullopt;
    return SparseVector::unit(index.position);
  });
}

AdaptedSet AdaptedSet::from_chains(std::vector<std::vector<SparseVector>> chains) {
  const std::size_t arity = chains.size();
  auto shared = std::make_shared<const std::vector<std::vector<SparseVector>>>(std::move(chains));
  return AdaptedSet(arity, [shared](ChainIndex index) -> std::optional<SparseVector> {
    if (index.chain < 1 || index.position < 1) return std::nullopt;
    const auto l = static_cast<std::size_t>(index.chain - 1);
    const auto k = static_cast<std::size_t>(index.position - 1);
    if (l >= shared->size() || k >= (*shared)[l].size()) return std::nullopt;
    return (*shared)[l][k];
  });
}

std::optional<SparseVector> AdaptedSet::vector(ChainIndex index) const {
  if (arity_ && index.chain > static_cast<std::int64_t>(*arity_)) return std::nullopt;
  return generator_(index);
}

std::vector<ChainIndex> AdaptedSet::enumerate(std::size_t horizon) const {
  std::vector<ChainIndex> out;
  const std::size_t chains = arity_ ? *arity_ : horizon;
  for (std::size_t l = 1; l <= chains; ++l) {
    for (std::size_t k = 1; k <= horizon; ++k) {
      const ChainIndex index{static_cast<std::int64_t>(l), static_cast<std::int64_t>(k)};
      if (!generator_(index)) break;
      out.push_back(index);
    }
  }
  return out;
}

// Certificates ------------------------------------------------------------------------

std::optional<Scalar> CertificateRow::coefficient(ChainIndex at) const {
  for (const auto& [index, value] : terms) {
    if (index == at) return value;
  }
  return std::nullopt;
}

std::optional<Scalar> CertificateRow::a(std::int64_t i) const {
  return coefficient({index.chain, i});
}

std::optional<Scalar> CertificateRow::b(std::int64_t chain, std::int64_t position) const {
  return coefficient({chain, position});
}

const SparseVector& ShiftCertificate::vector(ChainIndex index) const {
  const auto it = vectors.find(index);
  if (it == vectors.end()) throw Error(ErrorCode::InsufficientChain, "no adapted vector at " + index.str());
  return it->second;
}

const CertificateRow* ShiftCertificate::row(ChainIndex index) const {
  const auto it = rows.find(index);
  return it == rows.end() ? nullptr : &it->second;
}

std::size_t ShiftCertificate::linear_position(ChainIndex index) const {
  const auto it = std::find(order.begin(), order.end(), index);
  if (it == order.end()) throw Error(ErrorCode::Precondition, index.str() + " is not enumerated");
  return static_cast<std::size_t>(it - order.begin()) + 1;
}

std::size_t ShiftCertificate::depth(ChainIndex index) const {
  std::map<ChainIndex, std::size_t> memo;
  // Rows only reference strictly smaller indices, so filling the memo in
  // increasing order resolves every dependency first.
  for (const auto& at : order) {
    if (index < at) break;
    const CertificateRow* r = row(at);
    if (r == nullptr) continue;
    std::size_t d = 1;
    bool complete = true;
    for (const auto& [term, value] : r->terms) {
      const auto it = memo.find(term);
      if (it == memo.end()) {
        complete = false;
        break;
      }
      d = std::max(d, it->second + 1);
    }
    if (complete) memo[at] = d;
  }
  const auto it = memo.find(index);
  if (it == memo.end()) throw Error(ErrorCode::Precondition, "certificate has no valid row chain at " + index.str());
  return it->second;
}

SparseVector ShiftCertificate::recombine(ChainIndex index) const {
  const CertificateRow* r = row(index);
  if (r == nullptr) throw Error(ErrorCode::Precondition, "no certificate row at " + index.str());
  SparseVector out;
  for (const auto& [term, value] : r->terms) out.axpy(value, vector(term));
  return out;
}

// Recognizer ----------------------------------------------------------------------------

RecognitionResult recognize_generalized_shift(const OperatorExpr& op, const AdaptedSet& set, std::size_t horizon) {
  RecognitionResult result;
  result.horizon = horizon;
  auto& cert = result.certificate;
  cert.order = set.enumerate(horizon);

  EchelonBasis prefix;
  std::vector<SparseVector> images;
  std::vector<FailureReason> outcome(cert.order.size(), FailureReason::none);
  std::vector<bool> pending(cert.order.size(), false);
  images.reserve(cert.order.size());

  for (std::size_t i = 0; i < cert.order.size(); ++i) {
    const ChainIndex index = cert.order[i];
    SparseVector x = *set.vector(index);
    images.push_back(apply(op, x));
    const auto& image = images.back();

    if (auto coeffs = prefix.expand(image)) {
      CertificateRow row{index, {}};
      for (std::size_t m = 0; m < coeffs->size(); ++m) {
        if (!(*coeffs)[m].is_zero()) row.terms.emplace_back(cert.order[m], (*coeffs)[m]);
      }
      const auto pred = immediate_predecessor(index);
      if (pred && !row.coefficient(*pred)) {
        outcome[i] = FailureReason::zero_immediate_predecessor;
      } else {
        cert.rows.emplace(index, std::move(row));
      }
    } else {
      pending[i] = true;
    }
    if (!prefix.insert(x)) {
      throw Error(ErrorCode::DependentBasis, "adapted vector " + index.str() + " depends on its predecessors");
    }
    cert.vectors.emplace(index, std::move(x));
  }

  for (std::size_t i = 0; i < cert.order.size(); ++i) {
    if (!pending[i]) continue;
    outcome[i] = prefix.contains(images[i]) ? FailureReason::successor_term : FailureReason::expansion_outside_prefix;
  }

  result.verdict = Verdict::yes;
  std::optional<std::size_t> first_no;
  std::optional<std::size_t> first_open;
  for (std::size_t i = 0; i < cert.order.size(); ++i) {
    result.outcomes.emplace_back(cert.order[i], outcome[i]);
    if (outcome[i] == FailureReason::expansion_outside_prefix) {
      if (!first_open) first_open = i;
    } else if (outcome[i] != FailureReason::none) {
      if (!first_no) first_no = i;
    }
  }
  if (first_no) {
    result.verdict = Verdict::no;
    result.first_failure = cert.order[*first_no];
    result.reason = outcome[*first_no];
  } else if (first_open) {
    result.verdict = Verdict::inconclusive;
    result.first_failure = cert.order[*first_open];
    result.reason = FailureReason::expansion_outside_prefix;
  }
  return result;
}

// Witnesses ------------------------------------------------------------------------------

std::size_t kernel_witness(const OperatorExpr& op, const ShiftCertificate& cert, ChainIndex index) {
  const std::size_t bound = cert.depth(index);
  SparseVector x = cert.vector(index);
  for (std::size_t n = 1; n <= bound; ++n) {
    x = apply(op, x);
    if (x.empty()) return n;
  }
  throw Error(ErrorCode::ExceededBound,
              index.str() + " not annihilated within certificate depth " + std::to_string(bound));
}

namespace {

using Coefficients = std::map<ChainIndex, Scalar>;

void add_scaled(Coefficients& target, const Scalar& factor, const Coefficients& source) {
  for (const auto& [index, value] : source) {
    auto [it, inserted] = target.try_emplace(index, factor * value);
    if (!inserted) {
      it->second += factor * value;
      if (it->second.is_zero()) target.erase(it);
    }
  }
}

/// S^r x_index in coordinates over the certificate basis.
Coefficients certificate_power(const ShiftCertificate& cert, ChainIndex index, std::size_t r) {
  Coefficients current{{index, Scalar::one(cert.vector(index).mode().value_or(ArithmeticMode::exact))}};
  for (std::size_t step = 0; step < r && !current.empty(); ++step) {
    Coefficients next;
    for (const auto& [at, value] : current) {
      const CertificateRow* row = cert.row(at);
      if (row == nullptr) {
        throw Error(ErrorCode::InsufficientChain, "certificate has no row at " + at.str());
      }
      for (const auto& [term, coefficient] : row->terms) {
        auto [it, inserted] = next.try_emplace(term, value * coefficient);
        if (!inserted) {
          it->second += value * coefficient;
          if (it->second.is_zero()) next.erase(it);
        }
      }
    }
    current = std::move(next);
  }
  return current;
}

}  // namespace

SparseVector hyperrange_witness(const OperatorExpr& op, const ShiftCertificate& cert, ChainIndex index,
                                std::size_t r) {
  const SparseVector& target_vector = cert.vector(index);
  if (r == 0) return target_vector;
  const ArithmeticMode mode = target_vector.mode().value_or(ArithmeticMode::exact);

  Coefficients target{{index, Scalar::one(mode)}};
  Coefficients preimage;
  std::map<ChainIndex, Coefficients> images;
  // Peel off the lexicographically largest term with the scaled vector r
  // positions deeper in its chain; what remains lies strictly lower.
  while (!target.empty()) {
    const auto [lead, gamma] = *target.rbegin();
    const ChainIndex deep{lead.chain, lead.position + static_cast<std::int64_t>(r)};
    if (cert.vectors.find(deep) == cert.vectors.end()) {
      throw Error(ErrorCode::InsufficientChain, "need " + deep.str() + " for a depth-" + std::to_string(r) +
                                                    " preimage of " + lead.str());
    }
    auto [it, inserted] = images.try_emplace(deep);
    if (inserted) it->second = certificate_power(cert, deep, r);
    const Coefficients& image = it->second;
    if (image.empty() || image.rbegin()->first != lead) {
      throw Error(ErrorCode::SingularCoefficient, "zero immediate-predecessor product below " + deep.str());
    }
    const Scalar beta = gamma / image.rbegin()->second;
    add_scaled(preimage, beta, {{deep, Scalar::one(mode)}});
    add_scaled(target, -beta, image);
  }

  SparseVector v;
  for (const auto& [at, beta] : preimage) v.axpy(beta, cert.vector(at));
  if (mode == ArithmeticMode::exact && power_apply(op, v, r) != target_vector) {
    throw Error(ErrorCode::CertificateFailure, "hyperrange preimage of " + index.str() + " does not verify");
  }
  return v;
}

// Hypothesis check -----------------------------------------------------------------------

std::size_t coordinates_exhausted(std::span<const SparseVector> vectors) {
  EchelonBasis basis;
  for (const auto& v : vectors) basis.insert(v);
  std::size_t m = 0;
  while (m < basis.size() && basis.contains(SparseVector::unit(static_cast<Coord>(m + 1)))) ++m;
  return m;
}

MullerReport muller_hypothesis_check(const OperatorExpr& op, const ShiftCertificate& cert, std::size_t probe_horizon,
                                     std::size_t r_max) {
  MullerReport report;
  report.probe_horizon = probe_horizon;
  report.r_max = r_max;
  report.recognition = Verdict::yes;
  std::vector<SparseVector> ordered;
  for (const auto& index : cert.order) ordered.push_back(cert.vector(index));
  report.coordinates_exhausted = coordinates_exhausted(ordered);

  bool any_failed = false;
  bool any_open = false;
  const std::size_t count = std::min(probe_horizon, cert.order.size());
  for (std::size_t i = 0; i < count; ++i) {
    MembershipReport member;
    member.index = cert.order[i];
    member.verdict = Verdict::yes;
    try {
      member.kernel_exponent = kernel_witness(op, cert, member.index);
    } catch (const Error& e) {
      member.verdict = Verdict::no;
      member.note = e.what();
    }
    for (std::size_t r = 1; r <= r_max && member.verdict == Verdict::yes; ++r) {
      try {
        member.hyperrange.emplace(r, hyperrange_witness(op, cert, member.index, r));
      } catch (const Error& e) {
        member.verdict = e.code() == ErrorCode::InsufficientChain ? Verdict::inconclusive : Verdict::no;
        member.note = e.what();
      }
    }
    if (member.verdict == Verdict::no) {
      any_failed = true;
      if (!report.first_failure) report.first_failure = member.index;
    }
    any_open = any_open || member.verdict == Verdict::inconclusive;
    report.members.push_back(std::move(member));
  }
  report.verdict = any_failed ? Verdict::no : (any_open ? Verdict::inconclusive : Verdict::yes);
  return report;
}

MullerReport muller_hypothesis_check(const OperatorExpr& op, const AdaptedSet& set, std::size_t horizon,
                                     std::size_t r_max, std::size_t k_max) {
  const auto recognition = recognize_generalized_shift(op, set, horizon);
  if (recognition.verdict == Verdict::yes) {
    return muller_hypothesis_check(op, recognition.certificate, recognition.certificate.order.size(), r_max);
  }
  MullerReport report;
  report.probe_horizon = horizon;
  report.r_max = r_max;
  report.recognition = recognition.verdict;
  report.first_failure = recognition.first_failure;
  std::vector<SparseVector> ordered;
  bool kernel_failure = false;
  for (const auto& index : recognition.certificate.order) {
    const auto& x = recognition.certificate.vector(index);
    ordered.push_back(x);
    MembershipReport member;
    member.index = index;
    member.kernel_exponent = generalized_kernel_exponent(op, x, k_max);
    member.verdict = member.kernel_exponent ? Verdict::inconclusive : Verdict::no;
    member.note = member.kernel_exponent ? "no certificate row" : "no kernel exponent within k_max";
    kernel_failure = kernel_failure || !member.kernel_exponent;
    report.members.push_back(std::move(member));
  }
  report.coordinates_exhausted = coordinates_exhausted(ordered);
  report.verdict = kernel_failure ? Verdict::no : recognition.verdict;
  return report;
}

// Orbits -------------------------------------------------------------------------------------

namespace {

double dense_norm(const std::vector<std::complex<double>>& x, std::size_t count, NormMode p) {
  double value = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double a = std::abs(x[i]);
    switch (p) {
      case NormMode::l1: value += a; break;
      case NormMode::l2: value += a * a; break;
      case NormMode::linf: value = std::max(value, a); break;
    }
  }
  return p == NormMode::l2 ? std::sqrt(value) : value;
}

std::vector<std::complex<double>> to_dense(const SparseVector& v, std::size_t dimension) {
  std::vector<std::complex<double>> out(dimension);
  for (const auto& [index, value] : v.entries()) {
    if (index >= 1 && static_cast<std::size_t>(index) <= dimension) out[static_cast<std::size_t>(index - 1)] = value.to_complex();
  }
  return out;
}

}  // namespace

OrbitReport orbit_visit_evidence(const OperatorExpr& op, const Scalar& lambda, const SparseVector& seed,
                                 const std::vector<OrbitTarget>& targets, const OrbitOptions& options) {
  if (lambda.is_exact()) {
    if (lambda.abs2_upper() != 1) throw Error(ErrorCode::Precondition, "lambda must be unimodular");
  } else if (std::abs(lambda.abs() - 1.0) > 1e-12) {
    throw Error(ErrorCode::Precondition, "lambda must be unimodular");
  }
  const std::size_t d = options.dimension;
  const std::size_t window = std::min(options.window, d);
  const auto view = truncate(op, d);
  std::vector<std::complex<double>> matrix(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) matrix[i * d + j] = view.matrix(i, j).to_complex();
  const std::complex<double> lam = lambda.to_complex();

  std::vector<std::vector<std::complex<double>>> centers;
  for (const auto& t : targets) centers.push_back(to_dense(t.center, d));

  OrbitReport report;
  report.first_hit.assign(targets.size(), std::nullopt);
  std::vector<std::complex<double>> x = to_dense(seed, d);
  std::vector<std::complex<double>> next(d);
  std::vector<std::complex<double>> diff(window);
  for (std::size_t n = 1; n <= options.iterations; ++n) {
    for (std::size_t i = 0; i < d; ++i) {
      std::complex<double> acc = lam * x[i];
      const std::complex<double>* row = &matrix[i * d];
      for (std::size_t j = 0; j < d; ++j) acc += row[j] * x[j];
      next[i] = acc;
    }
    x.swap(next);
    const double norm = dense_norm(x, d, options.p);
    if (!std::isfinite(norm) || norm > options.norm_cap) {
      report.overflow = true;
      report.overflow_iteration = n;
      break;
    }
    OrbitSample sample{n, norm, {}};
    for (std::size_t t = 0; t < targets.size(); ++t) {
      for (std::size_t i = 0; i < window; ++i) diff[i] = x[i] - centers[t][i];
      const double distance = dense_norm(diff, window, options.p);
      sample.distances.push_back(distance);
      if (!report.first_hit[t] && distance <= targets[t].radius) report.first_hit[t] = n;
    }
    report.samples.push_back(std::move(sample));
  }
  return report;
}

std::string orbit_csv(const OrbitReport& report) {
  std::string out = "iteration,norm,target_id,distance\n";
  char buffer[128];
  for (const auto& s : report.samples) {
    if (s.distances.empty()) {
      std::snprintf(buffer, sizeof buffer, "%zu,%.17g,,\n", s.iteration, s.norm);
      out += buffer;
      continue;
    }
    for (std::size_t t = 0; t < s.distances.size(); ++t) {
      std::snprintf(buffer, sizeof buffer, "%zu,%.17g,%zu,%.17g\n", s.iteration, s.norm, t, s.distances[t]);
      out += buffer;
    }
  }
  return out;
}

}  // namespace gshift

#include "gshift/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

namespace gshift {

std::map<std::int64_t, Rational> junction_factor_norms(const ChainFamily& family) {
  std::map<std::int64_t, Rational> out;
  for (std::size_t l = 2; l <= family.chain_count(); ++l) {
    const auto& f = family.functional(l, family.chains[l - 1].length());
    const auto& v = family.y(l - 1, 1);
    out[static_cast<std::int64_t>(l)] = dual_norm(f, family.norm).upper * vector_norm(v, family.norm).upper;
  }
  return out;
}

std::map<std::int64_t, Rational> epsilon_schedule(const std::map<std::int64_t, Rational>& factor_norms,
                                                  const Rational& eps) {
  if (sgn(eps) <= 0) throw Error(ErrorCode::Precondition, "eps must be positive");
  std::map<std::int64_t, Rational> out;
  for (const auto& [l, u] : factor_norms) {
    if (l < 2) throw Error(ErrorCode::Precondition, "junctions start at chain 2");
    if (sgn(u) <= 0) throw Error(ErrorCode::Precondition, "factor norms must be positive");
    out[l] = Rational(9, 10) * eps * pow(Rational(1, 2), l - 1) / u;
  }
  return out;
}

std::map<std::int64_t, Rational> epsilon_schedule(const ChainFamily& family, const Rational& eps) {
  return epsilon_schedule(junction_factor_norms(family), eps);
}

AdaptedSet single_chain_ordering(const ChainFamily& family) {
  std::vector<SparseVector> ordered;
  ordered.reserve(family.size());
  for (const auto& chain : family.chains) ordered.insert(ordered.end(), chain.vectors.rbegin(), chain.vectors.rend());
  return AdaptedSet::from_chains({std::move(ordered)});
}

std::int64_t single_chain_position(const ChainFamily& family, std::size_t chain, std::size_t position) {
  std::size_t before = 0;
  for (std::size_t l = 1; l < chain; ++l) before += family.chains[l - 1].length();
  return static_cast<std::int64_t>(before + family.chains[chain - 1].length() - position + 1);
}

ApproximationResult assemble_one_shift(const OperatorExpr& s, const ChainFamily& family, const Rational& eps) {
  ApproximationResult result;
  result.input = s;
  result.family = family;
  result.eps = eps;
  auto& plan = result.plan;
  if (family.size() == 0) throw Error(ErrorCode::Precondition, "empty chain family");
  const ArithmeticMode mode = family.flattened().front().mode().value_or(ArithmeticMode::exact);
  plan.epsilons = epsilon_schedule(family, eps);

  std::vector<SumTerm> terms{{Scalar::one(mode), s}};
  for (std::size_t l = 2; l <= family.chain_count(); ++l) {
    const auto key = static_cast<std::int64_t>(l);
    const std::size_t d = family.chains[l - 1].length();
    const Scalar existing = family.functional(l - 1, 1).evaluate(apply(s, family.y(l, d)));
    if (!existing.is_zero()) {
      plan.skipped.insert(key);
      result.trace.push_back("junction " + std::to_string(l) + ": skipped, coefficient " + existing.str());
      continue;
    }
    Correction c;
    c.chain = key;
    c.term = RankOne{family.functional(l, d), family.y(l - 1, 1), Scalar::from_rational(plan.epsilons.at(key), mode)};
    c.norm_bound = operator_norm_bound(OperatorExpr(c.term), family.norm).upper;
    plan.total_bound += c.norm_bound;
    terms.push_back({Scalar::one(mode), OperatorExpr(c.term)});
    result.trace.push_back("junction " + std::to_string(l) + ": eps_l = " + format_rational(plan.epsilons.at(key)));
    plan.corrections.emplace(key, std::move(c));
  }

  if (plan.corrections.empty()) {
    result.output = s;
  } else {
    // A correction can only act on coordinates in its functional's support.
    std::map<Coord, std::vector<std::size_t>> touched;
    for (std::size_t k = 1; k < terms.size(); ++k) {
      for (const auto& [coord, value] : terms[k].op.as<RankOne>()->functional.coefficients().entries()) {
        touched[coord].push_back(k);
      }
    }
    auto shared = std::make_shared<const std::map<Coord, std::vector<std::size_t>>>(std::move(touched));
    LocalityMap locality{{0}, [shared](Coord n) -> std::optional<std::vector<std::size_t>> {
                           const auto it = shared->find(n);
                           return it == shared->end() ? std::vector<std::size_t>{} : it->second;
                         }};
    result.output = OperatorExpr(Sum{std::move(terms), std::move(locality)});
  }
  result.distance_bound = plan.total_bound;
  if (!(plan.total_bound < eps)) {
    throw Error(ErrorCode::CertificateFailure, "correction bound " + format_rational(plan.total_bound) +
                                                   " is not below eps " + format_rational(eps));
  }

  result.recognition = recognize_generalized_shift(result.output, single_chain_ordering(family), family.size());
  result.trace.push_back("recognizer: " + to_string(result.recognition.verdict));
  if (result.recognition.verdict != Verdict::yes) {
    throw Error(ErrorCode::CertificateFailure,
                "assembled operator rejected at " +
                    (result.recognition.first_failure ? result.recognition.first_failure->str() : std::string("?")) +
                    " (" + to_string(result.recognition.reason) + ")");
  }
  return result;
}

}  // namespace gshift

namespace gshift {

namespace {

double norm_of(const std::map<Coord, std::complex<double>>& v, NormMode p) {
  double acc = 0.0;
  for (const auto& [n, z] : v) {
    const double a = std::abs(z);
    if (p == NormMode::l1) acc += a;
    if (p == NormMode::l2) acc += a * a;
    if (p == NormMode::linf) acc = std::max(acc, a);
  }
  return p == NormMode::l2 ? std::sqrt(acc) : acc;
}

}  // namespace

SampleCheck sample_correction_norms(const PerturbationPlan& plan, NormMode p, std::size_t samples,
                                    std::uint64_t seed) {
  SampleCheck out;
  out.samples = samples;
  std::set<Coord> coords;
  for (const auto& [l, c] : plan.corrections) {
    for (const auto& [n, value] : c.term.functional.coefficients().entries()) coords.insert(n);
    for (const auto& [n, value] : c.term.vector.entries()) coords.insert(n);
  }
  if (coords.empty()) return out;
  const double bound = to_double_up(plan.total_bound);
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };

  for (std::size_t s = 0; s < samples; ++s) {
    std::map<Coord, std::complex<double>> v;
    for (const Coord n : coords) v[n] = {uniform(), uniform()};
    std::map<Coord, std::complex<double>> image;
    for (const auto& [l, c] : plan.corrections) {
      std::complex<double> f = 0.0;
      for (const auto& [n, value] : c.term.functional.coefficients().entries()) f += value.to_complex() * v[n];
      f *= c.term.scale.to_complex();
      for (const auto& [n, value] : c.term.vector.entries()) image[n] += f * value.to_complex();
    }
    const double ratio = norm_of(image, p) / norm_of(v, p);
    out.max_ratio = std::max(out.max_ratio, ratio);
    if (ratio > bound * (1.0 + 1e-12)) out.within_bound = false;
  }
  return out;
}

}  // namespace gshift

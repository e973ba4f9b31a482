#include "gshift/chains.hpp"

#include <span>

namespace gshift {

VectorProvider standard_provider(ArithmeticMode mode) {
  return [mode](std::size_t n) -> std::optional<SparseVector> {
    return SparseVector::unit(static_cast<Coord>(n), mode);
  };
}

VectorProvider bilateral_provider(ArithmeticMode mode) {
  return [mode](std::size_t n) -> std::optional<SparseVector> {
    // 1 -> 0, 2 -> 1, 3 -> -1, 4 -> 2, ...
    const auto k = static_cast<Coord>(n / 2);
    return SparseVector::unit(n % 2 == 0 ? k : -k, mode);
  };
}

std::size_t ChainFamily::size() const {
  std::size_t total = 0;
  for (const auto& c : chains) total += c.length();
  return total;
}

const SparseVector& ChainFamily::y(std::size_t chain, std::size_t position) const {
  if (chain < 1 || chain > chains.size() || position < 1 || position > chains[chain - 1].length()) {
    throw Error(ErrorCode::Precondition, "no chain vector y^" + std::to_string(chain) + "_" + std::to_string(position));
  }
  return chains[chain - 1].vectors[position - 1];
}

const Functional& ChainFamily::functional(std::size_t chain, std::size_t position) const {
  const auto it =
      functionals.find(ChainIndex{static_cast<std::int64_t>(chain), static_cast<std::int64_t>(position)});
  if (it == functionals.end()) {
    throw Error(ErrorCode::Precondition, "no functional for " + std::to_string(chain) + "," + std::to_string(position));
  }
  return it->second;
}

std::vector<SparseVector> ChainFamily::basis_of_E(std::size_t m) const {
  std::vector<SparseVector> out;
  for (std::size_t l = 0; l < m && l < chains.size(); ++l) {
    out.insert(out.end(), chains[l].vectors.begin(), chains[l].vectors.end());
  }
  return out;
}

std::size_t chain_length(const OperatorExpr& s, const SparseVector& y, const EchelonBasis& e_prev,
                         std::size_t k_max) {
  EchelonBasis span = e_prev;
  if (!span.insert(y)) throw Error(ErrorCode::Precondition, "chain start lies in the previous span");
  SparseVector current = y;
  for (std::size_t r = 1; r <= k_max; ++r) {
    current = apply(s, current);
    if (span.contains(current)) {
      if (!e_prev.contains(current)) {
        throw Error(ErrorCode::NotNilpotentModulo,
                    "S^" + std::to_string(r) + " y returns to its own orbit outside the previous span");
      }
      return r;
    }
    span.insert(current);
  }
  throw Error(ErrorCode::NotNilpotentModulo, "orbit not absorbed within k_max = " + std::to_string(k_max));
}

namespace {

void attach_functionals(ChainFamily& family) {
  const auto flat = family.flattened();
  const auto system = biorthogonal_system(flat, family.norm);
  std::size_t i = 0;
  for (std::size_t l = 0; l < family.chains.size(); ++l) {
    for (std::size_t j = 0; j < family.chains[l].length(); ++j) {
      family.functionals.insert_or_assign(
          ChainIndex{static_cast<std::int64_t>(l + 1), static_cast<std::int64_t>(j + 1)}, system[i++]);
    }
  }
}

}  // namespace

ChainFamily build_chains(const OperatorExpr& s, const VectorProvider& xs, const ChainBuildOptions& options) {
  if (options.chains == 0) throw Error(ErrorCode::Precondition, "at least one chain is required");
  ChainFamily family;
  family.norm = options.norm;
  EchelonBasis e;
  std::size_t n = 0;

  while (family.chains.size() < options.chains) {
    std::optional<SparseVector> start;
    while (!start) {
      ++n;
      std::optional<SparseVector> x = n <= options.provider_limit ? xs(n) : std::nullopt;
      if (!x) {
        attach_functionals(family);
        throw ProviderExhausted(std::move(family), "provider exhausted after " + std::to_string(n - 1) +
                                                       " vectors with " + std::to_string(options.chains) +
                                                       " chains requested");
      }
      if (n == 1 && x->empty()) throw Error(ErrorCode::Precondition, "x_1 must be nonzero");
      if (!generalized_kernel_exponent(s, *x, options.k_max)) {
        throw Error(ErrorCode::NotInGeneralizedKernel,
                    "x_" + std::to_string(n) + " has no kernel exponent within " + std::to_string(options.k_max));
      }
      if (!e.contains(*x)) start = *x;
      family.consumed.push_back(std::move(*x));
    }
    const std::size_t d = chain_length(s, *start, e, options.k_max);
    Chain chain;
    chain.source = n;
    chain.vectors.push_back(std::move(*start));
    for (std::size_t j = 1; j < d; ++j) chain.vectors.push_back(apply(s, chain.vectors.back()));
    for (const auto& v : chain.vectors) e.insert(v);
    family.chains.push_back(std::move(chain));
  }

  attach_functionals(family);
  const auto report = check_chain_invariants(s, family);
  if (!report.all()) throw Error(ErrorCode::CertificateFailure, "chain invariants violated: " + report.first_violation);
  return family;
}

ChainInvariantReport check_chain_invariants(const OperatorExpr& s, const ChainFamily& family) {
  ChainInvariantReport report;
  auto fail = [&report](bool& flag, const std::string& what) {
    if (flag && report.first_violation.empty()) report.first_violation = what;
    flag = false;
  };

  EchelonBasis e_prev;
  for (std::size_t m = 1; m <= family.chain_count(); ++m) {
    const Chain& chain = family.chains[m - 1];
    const std::string tag = "chain " + std::to_string(m);
    for (std::size_t j = 1; j < chain.length(); ++j) {
      if (apply(s, chain.vectors[j - 1]) != chain.vectors[j]) fail(report.shift_cond, tag + " position " + std::to_string(j));
    }
    if (chain.length() == 0 || !e_prev.contains(apply(s, chain.vectors.back()))) fail(report.shift_cond2, tag);

    EchelonBasis e_m = e_prev;
    for (const auto& v : chain.vectors) {
      if (!e_m.insert(v)) fail(report.ind_cond, tag);
    }
    if (chain.source == 0 || chain.source > family.consumed.size()) {
      fail(report.use_only_xns, tag);
    } else {
      if (chain.vectors.empty() || chain.vectors.front() != family.consumed[chain.source - 1]) {
        fail(report.use_only_xns, tag);
      }
      for (std::size_t n = 1; n <= chain.source; ++n) {
        if (!e_m.contains(family.consumed[n - 1])) fail(report.useupxns, tag + " x_" + std::to_string(n));
      }
    }
    e_prev = std::move(e_m);
  }

  const auto flat = family.flattened();
  EchelonBasis all;
  for (const auto& v : flat) {
    if (!all.insert(v)) fail(report.ys_lin_indep, "family rank");
  }

  std::size_t row = 0;
  for (std::size_t l = 1; l <= family.chain_count(); ++l) {
    for (std::size_t j = 1; j <= family.chains[l - 1].length(); ++j, ++row) {
      const auto it = family.functionals.find(
          ChainIndex{static_cast<std::int64_t>(l), static_cast<std::int64_t>(j)});
      if (it == family.functionals.end()) {
        fail(report.biorthogonal, "missing functional");
        continue;
      }
      for (std::size_t col = 0; col < flat.size(); ++col) {
        const Scalar value = it->second.evaluate(flat[col]);
        const bool ok = col == row ? value == Scalar::one(value.mode()) : value.is_zero();
        if (!ok && (value.is_exact() || std::abs(value.to_complex() - std::complex<double>(col == row)) > 1e-9)) {
          fail(report.biorthogonal, "functional " + std::to_string(l) + "," + std::to_string(j));
        }
      }
    }
  }
  return report;
}

}  // namespace gshift

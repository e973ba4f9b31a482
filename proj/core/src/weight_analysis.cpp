#include "gshift/weight_analysis.hpp"

#include <cmath>

namespace gshift {

bool WindowEstimate::at_least(const Rational& c) const {
  return sup_product_abs2 >= pow(c, static_cast<std::int64_t>(2 * window));
}

std::vector<WindowEstimate> spectral_radius_estimate(const WeightSequence& weights, std::size_t max_window,
                                                     std::size_t j_horizon, std::int64_t first_j) {
  if (max_window == 0 || j_horizon == 0) throw Error(ErrorCode::Precondition, "empty window or j-horizon");
  std::vector<Rational> products(j_horizon, Rational(1));
  std::vector<WindowEstimate> out;
  out.reserve(max_window);
  for (std::size_t n = 1; n <= max_window; ++n) {
    WindowEstimate est;
    est.window = n;
    bool first = true;
    for (std::size_t k = 0; k < j_horizon; ++k) {
      const std::int64_t j = first_j + static_cast<std::int64_t>(k);
      products[k] *= weights(j + static_cast<std::int64_t>(n) - 1).abs2_upper();
      if (first || products[k] > est.sup_product_abs2) {
        est.sup_product_abs2 = products[k];
        est.argmax_j = j;
        first = false;
      }
    }
    est.mean = std::exp(log_rational(est.sup_product_abs2) / (2.0 * static_cast<double>(n)));
    if (sgn(est.sup_product_abs2) == 0) est.mean = 0.0;
    est.exact_mean = exact_root(est.sup_product_abs2, 2 * n);
    out.push_back(std::move(est));
  }
  return out;
}

std::optional<std::int64_t> first_index_below(const WeightSequence& weights, const FunctionalNormBound& norms,
                                              const Rational& threshold, std::int64_t from, std::int64_t last) {
  const Rational threshold2 = threshold * threshold;
  for (std::int64_t n = from; n <= last; ++n) {
    const Rational k = norms(n);
    if (weights(n).abs2_upper() * k * k < threshold2) return n;
  }
  return std::nullopt;
}

std::vector<std::int64_t> weight_null_subsequence(const WeightSequence& weights, const FunctionalNormBound& norms,
                                                  std::span<const Rational> thresholds, std::int64_t first,
                                                  std::int64_t last) {
  std::vector<std::int64_t> found;
  found.reserve(thresholds.size());
  std::int64_t from = first;
  for (std::size_t j = 0; j < thresholds.size(); ++j) {
    if (sgn(thresholds[j]) <= 0) throw Error(ErrorCode::Precondition, "thresholds must be strictly positive");
    const auto n = first_index_below(weights, norms, thresholds[j], from, last);
    if (!n) throw NotFoundWithinHorizon(std::move(found), j, last);
    found.push_back(*n);
    from = *n + 1;
  }
  return found;
}

}  // namespace gshift

#pragma once

#include <span>

#include "gshift/chains.hpp"
#include "gshift/mixture.hpp"
#include "gshift/perturbation.hpp"
#include "gshift/shift_theory.hpp"
#include "gshift/weight_analysis.hpp"
#include "gshift_cli/document.hpp"

namespace gshift::cli {

// Stable JSON views of library results. Rationals are "p/q" strings; a
// "_approx" sibling carries a binary64 rendering where useful.

Json rational_json(const Rational& q);
Json report_json(const ChainIndex& index);
Json report_json(const RecognitionResult& r);
Json report_json(const MullerReport& r);
Json report_json(const ChainFamily& family, const ChainInvariantReport& invariants);
Json report_json(const PerturbationPlan& plan);
Json report_json(const ApproximationResult& r);
Json report_json(const CompactCorrection& c);
Json report_json(const DensityReport& d);
Json report_json(std::span<const WindowEstimate> estimates);
Json report_json(const OrbitReport& r);

}  // namespace gshift::cli

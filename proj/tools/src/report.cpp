#include "gshift_cli/report.hpp"

#include <cmath>

namespace gshift::cli {

Json rational_json(const Rational& q) { return format_rational(q); }

namespace {

Json approx(const Rational& q) {
  const double d = q.get_d();
  return std::isfinite(d) ? Json(d) : Json(nullptr);
}

Json optional_index(const std::optional<ChainIndex>& index) {
  return index ? report_json(*index) : Json(nullptr);
}

}  // namespace

Json report_json(const ChainIndex& index) { return Json::array({index.chain, index.position}); }

Json report_json(const RecognitionResult& r) {
  Json outcomes = Json::array();
  for (const auto& [index, reason] : r.outcomes) {
    if (reason != FailureReason::none) outcomes.push_back(Json{{"index", report_json(index)}, {"reason", to_string(reason)}});
  }
  Json rows = Json::array();
  for (const auto& [index, row] : r.certificate.rows) {
    Json terms = Json::array();
    for (const auto& [at, value] : row.terms) terms.push_back(Json::array({report_json(at), to_json(value)}));
    rows.push_back(Json{{"index", report_json(index)}, {"terms", std::move(terms)}});
  }
  return Json{{"verdict", to_string(r.verdict)},
              {"first_failure", optional_index(r.first_failure)},
              {"reason", to_string(r.reason)},
              {"horizon", r.horizon},
              {"enumerated", r.certificate.order.size()},
              {"failures", std::move(outcomes)},
              {"certificate", std::move(rows)}};
}

Json report_json(const MullerReport& r) {
  Json members = Json::array();
  for (const auto& m : r.members) {
    Json witnesses = Json::object();
    for (const auto& [depth, v] : m.hyperrange) witnesses[std::to_string(depth)] = to_json(v);
    members.push_back(Json{{"index", report_json(m.index)},
                           {"kernel_exponent", m.kernel_exponent ? Json(*m.kernel_exponent) : Json(nullptr)},
                           {"witnesses", std::move(witnesses)},
                           {"verdict", to_string(m.verdict)},
                           {"note", m.note}});
  }
  return Json{{"verdict", to_string(r.verdict)},
              {"criterion_satisfied_on_horizon", r.verdict == Verdict::yes},
              {"recognition", to_string(r.recognition)},
              {"first_failure", optional_index(r.first_failure)},
              {"horizon", r.probe_horizon},
              {"r_max", r.r_max},
              {"coordinates_exhausted", r.coordinates_exhausted},
              {"members", std::move(members)}};
}

Json report_json(const ChainFamily& family, const ChainInvariantReport& invariants) {
  Json table = Json::array();
  for (std::size_t l = 0; l < family.chains.size(); ++l) {
    Json vectors = Json::array();
    for (const auto& v : family.chains[l].vectors) vectors.push_back(to_json(v));
    table.push_back(Json{{"chain", l + 1},
                         {"length", family.chains[l].length()},
                         {"source", family.chains[l].source},
                         {"vectors", std::move(vectors)}});
  }
  return Json{{"chains", std::move(table)},
              {"norm", to_string(family.norm)},
              {"invariants",
               {{"shift_cond", invariants.shift_cond},
                {"shift_cond2", invariants.shift_cond2},
                {"ind_cond", invariants.ind_cond},
                {"useupxns", invariants.useupxns},
                {"use_only_xns", invariants.use_only_xns},
                {"ys_lin_indep", invariants.ys_lin_indep},
                {"biorthogonal", invariants.biorthogonal},
                {"all", invariants.all()},
                {"first_violation", invariants.first_violation}}}};
}

Json report_json(const PerturbationPlan& plan) {
  Json epsilons = Json::object();
  for (const auto& [l, e] : plan.epsilons) epsilons[std::to_string(l)] = rational_json(e);
  Json corrections = Json::array();
  for (const auto& [l, c] : plan.corrections) {
    corrections.push_back(Json{{"chain", l},
                               {"norm_bound", rational_json(c.norm_bound)},
                               {"norm_bound_approx", approx(c.norm_bound)}});
  }
  return Json{{"epsilons", std::move(epsilons)},
              {"corrections", std::move(corrections)},
              {"skipped", Json(std::vector<std::int64_t>(plan.skipped.begin(), plan.skipped.end()))},
              {"total_bound", rational_json(plan.total_bound)},
              {"total_bound_approx", approx(plan.total_bound)}};
}

Json report_json(const ApproximationResult& r) {
  Json junctions = Json::array();
  const auto& cert = r.recognition.certificate;
  for (std::size_t l = 2; l <= r.family.chain_count(); ++l) {
    const auto pos = single_chain_position(r.family, l, r.family.chains[l - 1].length());
    const CertificateRow* row = cert.row({1, pos});
    const auto a = row ? row->a(pos - 1) : std::nullopt;
    junctions.push_back(Json{{"chain", l}, {"position", pos}, {"coefficient", a ? to_json(*a) : Json(nullptr)}});
  }
  Json chains = Json::array();
  for (std::size_t l = 0; l < r.family.chains.size(); ++l) {
    chains.push_back(Json{{"chain", l + 1}, {"length", r.family.chains[l].length()}, {"source", r.family.chains[l].source}});
  }
  return Json{{"eps", rational_json(r.eps)},
              {"chains", std::move(chains)},
              {"plan", report_json(r.plan)},
              {"distance_bound", rational_json(r.distance_bound)},
              {"distance_bound_approx", approx(r.distance_bound)},
              {"certificate",
               {{"verdict", to_string(r.recognition.verdict)},
                {"horizon", r.recognition.horizon},
                {"rows", cert.rows.size()},
                {"junction_coefficients", std::move(junctions)}}},
              {"trace", r.trace}};
}

Json report_json(const DensityReport& d) {
  Json exponents = Json::array();
  for (const auto& [n, e] : d.exponents) exponents.push_back(Json::array({n, e ? Json(*e) : Json(nullptr)}));
  return Json{{"dense_on_horizon", d.dense_on_horizon}, {"k_max", d.k_max}, {"exponents", std::move(exponents)}};
}

Json report_json(const CompactCorrection& c) {
  Json chains = Json::array();
  for (std::size_t i = 0; i < c.cuts.size(); ++i) {
    Json cuts = Json::array();
    for (std::size_t j = 0; j < c.cuts[i].size(); ++j) {
      cuts.push_back(Json{{"position", c.cuts[i][j]},
                          {"threshold", rational_json(c.thresholds[i][j])},
                          {"factor", rational_json(c.cut_norms[i][j])}});
    }
    chains.push_back(Json{{"chain", i + 1}, {"bilateral", c.spec.is_bilateral(i)}, {"cuts", std::move(cuts)}});
  }
  return Json{{"eps", rational_json(c.eps)},
              {"horizon", c.horizon},
              {"chains", std::move(chains)},
              {"norm_bound", rational_json(c.norm_bound)},
              {"norm_bound_approx", approx(c.norm_bound)},
              {"realized_bound", rational_json(c.realized_bound)},
              {"density", report_json(c.density)},
              {"exponents_match_formula", c.exponents_match_formula}};
}

Json report_json(std::span<const WindowEstimate> estimates) {
  Json out = Json::array();
  for (const auto& e : estimates) {
    out.push_back(Json{{"window", e.window},
                       {"argmax_j", e.argmax_j},
                       {"mean", e.mean},
                       {"exact_mean", e.exact_mean ? Json(format_rational(*e.exact_mean)) : Json(nullptr)}});
  }
  return out;
}

Json report_json(const OrbitReport& r) {
  Json hits = Json::array();
  for (const auto& h : r.first_hit) hits.push_back(h ? Json(*h) : Json(nullptr));
  const OrbitSample* last = r.samples.empty() ? nullptr : &r.samples.back();
  return Json{{"label", OrbitReport::kLabel},
              {"iterations_completed", r.samples.size()},
              {"first_hit", std::move(hits)},
              {"overflow", r.overflow},
              {"overflow_iteration", r.overflow_iteration ? Json(*r.overflow_iteration) : Json(nullptr)},
              {"final_norm", last ? Json(last->norm) : Json(nullptr)}};
}

}  // namespace gshift::cli

#include "gshift_cli/app.hpp"

#include "gshift_cli/report.hpp"

namespace gshift::cli {

ExitCode exit_code_for(ErrorCode code) {
  if (is_hypothesis_failure(code)) return ExitCode::hypothesis_failure;
  switch (code) {
    case ErrorCode::ProviderExhausted:
    case ErrorCode::InsufficientChain:
      return ExitCode::inconclusive;
    default:
      return ExitCode::internal;
  }
}

namespace {

ExitCode verdict_exit_code(Verdict v) {
  switch (v) {
    case Verdict::yes: return ExitCode::ok;
    case Verdict::no: return ExitCode::hypothesis_failure;
    case Verdict::inconclusive: return ExitCode::inconclusive;
  }
  return ExitCode::internal;
}

bool has_bilateral_part(const OperatorExpr& op) {
  if (const auto* s = op.as<WeightedShift>()) return s->direction == ShiftDirection::bilateral;
  if (const auto* s = op.as<Sum>()) {
    for (const auto& t : s->terms) {
      if (has_bilateral_part(t.op)) return true;
    }
  }
  return false;
}

VectorProvider provider_for(const OperatorDocument& doc, ArithmeticMode mode) {
  if (doc.mixture) return mixture_provider(*doc.mixture, mode);
  return has_bilateral_part(doc.op) ? bilateral_provider(mode) : standard_provider(mode);
}

/// A lone unit-stride weighted shift read as a one-chain mixture.
std::optional<MixtureSpec> mixture_of(const OperatorDocument& doc) {
  if (doc.mixture) return doc.mixture;
  const auto* s = doc.op.as<WeightedShift>();
  if (s == nullptr || s->stride != 1 || s->phase != 1) return std::nullopt;
  MixtureSpec spec;
  spec.norm = doc.norm;
  (s->direction == ShiftDirection::forward ? spec.forward : spec.bilateral).push_back(s->weights);
  return spec;
}

ChainFamily chains_for(const RunConfig& config, const OperatorDocument& doc) {
  ChainBuildOptions options;
  options.chains = config.chains;
  options.k_max = config.effective_k_max();
  options.norm = doc.norm;
  return build_chains(doc.op, provider_for(doc, config.mode), options);
}

Json approximation_json(const RunConfig& config, const ApproximationResult& r, NormMode p) {
  Json out = report_json(r);
  const auto check = sample_correction_norms(r.plan, p, 500, config.seed);
  out["sampled_check"] = Json{{"samples", check.samples}, {"max_ratio", check.max_ratio}, {"within_bound", check.within_bound}};
  return out;
}

ExitCode run_chains(const RunConfig& config, const OperatorDocument& doc, Json& report) {
  const auto family = chains_for(config, doc);
  const auto invariants = check_chain_invariants(doc.op, family);
  report["family"] = report_json(family, invariants);
  return invariants.all() ? ExitCode::ok : ExitCode::internal;
}

ExitCode run_perturb(const RunConfig& config, const OperatorDocument& doc, Json& report) {
  const auto family = chains_for(config, doc);
  const auto result = assemble_one_shift(doc.op, family, config.eps);
  report["approximation"] = approximation_json(config, result, doc.norm);
  return ExitCode::ok;
}

ExitCode run_approximate(const RunConfig& config, const OperatorDocument& doc, Json& report) {
  if (const auto spec = mixture_of(doc)) {
    MixtureApproximationOptions options;
    options.horizon = config.horizon;
    options.chains = config.chains;
    options.k_max = config.effective_k_max();
    const auto out = approximate_mixture_by_one_shift(*spec, config.eps, options);
    report["pipeline"] = "mixture";
    report["correction"] = report_json(out.correction);
    report["approximation"] = approximation_json(config, out.result, doc.norm);
    return ExitCode::ok;
  }
  const auto density = gk_density_report(doc.op, config.horizon, config.effective_k_max());
  report["pipeline"] = "nilpotent";
  report["density"] = report_json(density);
  if (!density.dense_on_horizon) {
    report["error"] = Json{{"code", "NotInGeneralizedKernel"}, {"message", "generalised kernel not dense on horizon"}};
    return ExitCode::hypothesis_failure;
  }
  const auto family = chains_for(config, doc);
  report["approximation"] = approximation_json(config, assemble_one_shift(doc.op, family, config.eps), doc.norm);
  return ExitCode::ok;
}

ExitCode run_verify(const RunConfig& config, const OperatorDocument& doc, Json& report) {
  const AdaptedSet set = doc.adapted_chains ? AdaptedSet::from_chains(*doc.adapted_chains) : AdaptedSet::standard_chain();
  const auto muller = muller_hypothesis_check(doc.op, set, config.horizon, config.r_max, config.effective_k_max());
  report["recognition"] = report_json(recognize_generalized_shift(doc.op, set, config.horizon));
  report["muller"] = report_json(muller);
  return verdict_exit_code(muller.verdict);
}

ExitCode run_weights(const RunConfig& config, const OperatorDocument& doc, Json& report) {
  std::vector<WeightSequence> sequences;
  if (const auto spec = mixture_of(doc)) {
    for (std::size_t c = 0; c < spec->chain_count(); ++c) sequences.push_back(spec->weights(c));
  } else {
    throw Error(ErrorCode::Precondition, "the weights command needs a weighted shift or a mixture");
  }
  std::vector<Rational> thresholds;
  for (std::size_t j = 1; j <= config.thresholds; ++j) {
    thresholds.push_back(config.eps * pow(Rational(1, 2), static_cast<std::int64_t>(j)));
  }
  ExitCode code = ExitCode::ok;
  Json out = Json::array();
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    Json entry{{"sequence", i + 1}};
    entry["spectral_radius_evidence"] = report_json(spectral_radius_estimate(sequences[i], config.window, config.horizon));
    try {
      const auto found = weight_null_subsequence(sequences[i], constant_functional_bound(doc.functional_norm_bound),
                                                  thresholds, 1, config.scan);
      entry["null_subsequence"] = Json{{"indices", found}, {"status", "found"}};
    } catch (const NotFoundWithinHorizon& e) {
      entry["null_subsequence"] = Json{{"indices", e.found()},
                                       {"status", "NotFoundWithinHorizon"},
                                       {"missing_threshold", e.missing_threshold() + 1},
                                       {"horizon", config.scan}};
      code = ExitCode::hypothesis_failure;
    }
    out.push_back(std::move(entry));
  }
  Json list = Json::array();
  for (const auto& t : thresholds) list.push_back(rational_json(t));
  report["thresholds"] = std::move(list);
  report["weights"] = std::move(out);
  return code;
}

ExitCode run_orbit(const RunConfig& config, const OperatorDocument& doc, Json& report, std::string& csv) {
  OperatorExpr op = doc.op;
  if (config.perturb) {
    const auto result = assemble_one_shift(doc.op, chains_for(config, doc), config.eps);
    report["approximation"] = report_json(result);
    op = result.output;
  }
  OrbitSpec spec = doc.orbit ? *doc.orbit : OrbitSpec{Scalar::one(config.mode), SparseVector::unit(1, config.mode), {}};
  if (spec.targets.empty()) spec.targets.push_back({spec.seed, 0.1});
  OrbitOptions options;
  options.dimension = config.dim;
  options.iterations = config.iters;
  options.window = config.window;
  options.p = doc.norm;
  const auto orbit = orbit_visit_evidence(op, spec.lambda, spec.seed, spec.targets, options);
  report["orbit"] = report_json(orbit);
  csv = orbit_csv(orbit);
  return ExitCode::ok;
}

RunOutcome run_failure(const RunConfig& config, ErrorCode code, const std::string& message) {
  RunOutcome outcome;
  outcome.code = gshift::cli::exit_code_for(code);
  outcome.diagnostics = message;
  const Json report{{"command", config.command},
                    {"error", {{"code", std::string(to_string(code))}, {"message", message}}},
                    {"exit_code", static_cast<int>(outcome.code)}};
  outcome.report = report.dump(2) + "\n";
  return outcome;
}

}  // namespace

RunOutcome run(const RunConfig& config, const OperatorDocument& document, const std::string& input_hash) {
  OperatorDocument doc = document;
  if (config.norm) {
    doc.norm = *config.norm;
    if (doc.mixture) doc.mixture->norm = *config.norm;
  }
  Json report{{"command", config.command},
              {"input_hash", input_hash},
              {"config",
               {{"eps", rational_json(config.eps)},
                {"horizon", config.horizon},
                {"k_max", config.effective_k_max()},
                {"chains", config.chains},
                {"dim", config.dim},
                {"iters", config.iters},
                {"seed", config.seed},
                {"mode", to_string(config.mode)},
                {"norm", to_string(doc.norm)}}}};
  RunOutcome outcome;
  std::string csv;
  try {
    if (sgn(config.eps) <= 0) throw Error(ErrorCode::Precondition, "eps must be positive");
    if (config.horizon == 0) throw Error(ErrorCode::Precondition, "horizon must be at least 1");
    const std::string& c = config.command;
    if (c == "chains") {
      outcome.code = run_chains(config, doc, report);
    } else if (c == "perturb") {
      outcome.code = run_perturb(config, doc, report);
    } else if (c == "approximate") {
      outcome.code = run_approximate(config, doc, report);
    } else if (c == "verify") {
      outcome.code = run_verify(config, doc, report);
    } else if (c == "weights") {
      outcome.code = run_weights(config, doc, report);
    } else if (c == "orbit") {
      outcome.code = run_orbit(config, doc, report, csv);
    } else {
      throw Error(ErrorCode::Precondition, "unknown command '" + c + "'");
    }
  } catch (const Error& e) {
    outcome.code = exit_code_for(e.code());
    outcome.diagnostics = e.what();
    report["error"] = Json{{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
  } catch (const std::exception& e) {
    outcome.code = ExitCode::internal;
    outcome.diagnostics = e.what();
    report["error"] = Json{{"code", "Internal"}, {"message", e.what()}};
  }
  report["exit_code"] = static_cast<int>(outcome.code);
  if (config.format == OutputFormat::csv && config.command == "orbit" && outcome.code == ExitCode::ok) {
    outcome.report = csv;
  } else {
    outcome.report = report.dump(2) + "\n";
  }
  return outcome;
}

RunOutcome run(const RunConfig& config, const std::string& document_text) {
  try {
    const Json json = Json::parse(document_text);
    const auto doc = parse_operator_document(json, config.mode);
    return run(config, doc, content_hash(json));
  } catch (const Json::parse_error& e) {
    return run_failure(config, ErrorCode::SchemaError, std::string("$: invalid JSON: ") + e.what());
  } catch (const Error& e) {
    return run_failure(config, e.code(), e.what());
  }
}

}  // namespace gshift::cli

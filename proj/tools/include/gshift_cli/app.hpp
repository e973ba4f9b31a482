#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "gshift_cli/document.hpp"

namespace gshift::cli {

enum class ExitCode : int { ok = 0, internal = 1, hypothesis_failure = 2, inconclusive = 3 };

enum class OutputFormat { json, csv };

struct RunConfig {
  std::string command;
  Rational eps = Rational(1, 10);
  std::size_t horizon = 30;
  std::optional<std::size_t> k_max;  // default 10 * horizon
  std::size_t chains = 4;
  std::size_t dim = 64;
  std::size_t iters = 5000;
  std::uint64_t seed = 1;
  ArithmeticMode mode = ArithmeticMode::exact;
  std::optional<NormMode> norm;  // overrides the document
  OutputFormat format = OutputFormat::json;
  std::size_t window = 8;
  std::size_t r_max = 10;
  std::size_t thresholds = 8;
  std::int64_t scan = 10000;  // weight index horizon of the weights command
  bool perturb = false;       // orbit: iterate lambda + S' instead of lambda + S

  [[nodiscard]] std::size_t effective_k_max() const { return k_max ? *k_max : 10 * horizon; }
};

struct RunOutcome {
  ExitCode code = ExitCode::ok;
  std::string report;       // JSON or CSV text
  std::string diagnostics;  // for standard error
};

/// Runs one command. Library errors become exit codes; the report is always
/// well-formed JSON (or CSV for orbit --format csv).
RunOutcome run(const RunConfig& config, const std::string& document_text);
RunOutcome run(const RunConfig& config, const OperatorDocument& document, const std::string& input_hash);

ExitCode exit_code_for(ErrorCode code);

}  // namespace gshift::cli

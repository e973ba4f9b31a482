#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "gshift_cli/app.hpp"

namespace {

std::string read_all(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gshift;
  using namespace gshift::cli;

  CLI::App app{"Approximation of operators by generalised backward shifts"};
  app.require_subcommand(1);

  RunConfig config;
  std::string document_path;
  std::string eps_text = "1/10";
  std::string mode_text = "exact";
  std::string norm_text;
  std::string format_text = "json";
  std::string out_path;
  std::size_t k_max = 0;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"chains", "build chains and check their invariants"},
      {"perturb", "perturb into a generalised backward 1-shift"},
      {"approximate", "mixture or nilpotent approximation pipeline"},
      {"verify", "recognise the shift structure and check the kernel/range hypothesis"},
      {"weights", "spectral radius evidence and null subsequences of shift weights"},
      {"orbit", "heuristic orbit metrics of lambda + S on a truncation"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("document", document_path, "operator document (JSON, '-' for stdin)")->required();
    sub->add_option("--eps", eps_text, "approximation tolerance, e.g. 1/10");
    sub->add_option("--horizon", config.horizon, "prefix length / coordinate horizon");
    sub->add_option("--kmax", k_max, "kernel exponent search bound (default 10 * horizon)");
    sub->add_option("--chains", config.chains, "number of chains L");
    sub->add_option("--dim", config.dim, "orbit truncation dimension D");
    sub->add_option("--iters", config.iters, "orbit iteration cap N");
    sub->add_option("--seed", config.seed, "seed for sampled checks");
    sub->add_option("--mode", mode_text, "arithmetic: exact or float")->check(CLI::IsMember({"exact", "float"}));
    sub->add_option("--norm", norm_text, "l1, l2 or linf (overrides the document)");
    sub->add_option("--out", out_path, "report file (default standard output)");
    sub->add_option("--format", format_text, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--window", config.window, "window length for weights and orbit distances");
    sub->add_option("--rmax", config.r_max, "largest hyperrange depth for verify");
    sub->add_option("--thresholds", config.thresholds, "number of thresholds eps*2^-j for weights");
    sub->add_option("--scan", config.scan, "last weight index scanned by weights");
    sub->add_flag("--perturb", config.perturb, "orbit: iterate lambda + S' after perturbation");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : static_cast<int>(ExitCode::internal);
  }

  config.command = app.get_subcommands().front()->get_name();
  const auto eps = parse_rational(eps_text);
  if (!eps) {
    std::cerr << "invalid --eps '" << eps_text << "'\n";
    return static_cast<int>(ExitCode::internal);
  }
  config.eps = *eps;
  if (k_max > 0) config.k_max = k_max;
  config.mode = mode_text == "float" ? ArithmeticMode::floating : ArithmeticMode::exact;
  if (!norm_text.empty()) {
    config.norm = parse_norm_mode(norm_text);
    if (!config.norm) {
      std::cerr << "invalid --norm '" << norm_text << "'\n";
      return static_cast<int>(ExitCode::internal);
    }
  }
  config.format = format_text == "csv" ? OutputFormat::csv : OutputFormat::json;

  std::string text;
  try {
    text = read_all(document_path);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return static_cast<int>(ExitCode::internal);
  }

  const RunOutcome outcome = run(config, text);
  if (!outcome.diagnostics.empty()) std::cerr << outcome.diagnostics << "\n";
  if (out_path.empty()) {
    std::cout << outcome.report;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return static_cast<int>(ExitCode::internal);
    }
    out << outcome.report;
  }
  return static_cast<int>(outcome.code);
}

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gkz/pipeline.hpp"

namespace {

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw gkz::StageError("parse", "ParseError", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int emit(const gkz::Json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path);
  if (!out) {
    std::cerr << "cannot write '" << out_path << "'\n";
    return 1;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GKZ hypergeometric rank certificates: gkz <command> <spec.json>"};
  std::string command, spec_path, out_path, fiber, gamma;
  bool no_timings = false;
  std::optional<std::int64_t> weight_bound, truncation;
  std::optional<std::uint64_t> seed;

  std::string commands;
  for (const auto& n : gkz::subcommand_names()) commands += (commands.empty() ? "" : ", ") + n;
  app.add_option("command", command, "one of: " + commands)->required();
  app.add_option("spec", spec_path, "problem file (JSON), '-' for stdin")->required();
  app.add_option("--out", out_path, "write the report here instead of stdout");
  app.add_flag("--no-timings", no_timings, "leave timings out of the report");
  app.add_option("--fiber", fiber, "comma-separated coefficients, overrides the file");
  app.add_option("--gamma", gamma, "comma-separated gamma, overrides the file");
  app.add_option("--weight-bound", weight_bound, "face-complex weight bound");
  app.add_option("--truncation", truncation, "Koszul truncation degree override");
  app.add_option("--seed", seed, "seed for drawing a fiber when none is given");
  CLI11_PARSE(app, argc, argv);

  std::string stage = "parse";
  try {
    gkz::ProblemSpec spec;
    try {
      spec = gkz::parse_problem(read_file(spec_path));
      if (!fiber.empty()) spec.fiber = gkz::parse_rational_list(fiber);
      if (!gamma.empty()) spec.gamma = gkz::parse_rational_list(gamma);
      if (weight_bound) spec.options.weight_bound = *weight_bound;
      if (truncation) spec.options.truncation = *truncation;
      if (seed) spec.options.seed = *seed;
    } catch (const gkz::StageError&) {
      throw;
    } catch (const gkz::Error& e) {
      throw gkz::StageError("parse", e);
    }
    auto result = gkz::run_subcommand(command, spec, !no_timings);
    if (emit(result.output, out_path) != 0) return 1;
    return result.exit_code;
  } catch (const gkz::StageError& e) {
    emit(gkz::error_json(e.kind(), e.stage(), e.what()), "");
    return 1;
  } catch (const gkz::Error& e) {
    emit(gkz::error_json(e.kind(), stage, e.what()), "");
    return 1;
  }
}

// toriclab: experiment runner.
//
//   toriclab norms --config interval.json --out results/
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure or a failed
// check. Failures print a JSON error record on stderr and, with --out, also
// write it to error.json.

#include "toriclab/errors.hpp"
#include "toriclab/experiment.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

using namespace toriclab;
using nlohmann::json;

namespace {

int emit_error(const json& record, const std::string& out_dir) {
  std::cerr << record.dump() << "\n";
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream(std::filesystem::path(out_dir) / "error.json") << record.dump(2) << "\n";
  }
  return record.at("exit_code").get<int>();
}

json base_record(const std::string& kind, int code, const std::string& command, const std::string& msg) {
  return {{"status", "error"}, {"kind", kind}, {"exit_code", code}, {"command", command}, {"message", msg}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical section sequences on toric varieties"};
  app.require_subcommand(1);

  std::string config_path, out_dir, fault_name;
  std::size_t resolution = 0;
  unsigned threads = 1;
  std::uint64_t seed = 1;

  const std::vector<std::pair<std::string, std::string>> commands{
      {"sections", "lattice points of N*P and vanishing orders"},
      {"ray", "section sequence along the ray and its tameness"},
      {"norms", "norm law fit"},
      {"tails", "tail law fit and comparison with the tame rule"},
      {"weak", "moment test functions against the densities"},
      {"laplace", "Laplace transform oracle and curve limits"},
      {"selftest", "invariant checks"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "experiment JSON")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "directory for CSV and markdown output");
    sub->add_option("--resolution", resolution, "quadrature nodes per axis")->check(CLI::PositiveNumber);
    sub->add_option("--threads", threads, "worker threads for quadrature")->check(CLI::Range(1u, 256u));
    sub->add_option("--seed", seed, "seed for randomized checks");
    if (name == "selftest")
      sub->add_option("--inject", fault_name, "deliberate fault: zero-weight or perturbed-hessian");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    RunOptions opt;
    if (resolution) opt.resolution = resolution;
    opt.threads = threads;
    opt.seed = seed;

    Report report;
    if (command == "laplace") {
      report = cmd_laplace(opt);
    } else if (command == "selftest") {
      report = cmd_selftest(opt, parse_fault(fault_name));
    } else {
      if (config_path.empty()) throw ValidationError("--config is required for " + command);
      const auto cfg = load_config(config_path);
      if (out_dir.empty()) out_dir = cfg.outputs;
      if (command == "sections") report = cmd_sections(cfg, opt);
      if (command == "ray") report = cmd_ray(cfg, opt);
      if (command == "norms") report = cmd_norms(cfg, opt);
      if (command == "tails") report = cmd_tails(cfg, opt);
      if (command == "weak") report = cmd_weak(cfg, opt);
    }
    if (!out_dir.empty()) write_report(report, out_dir);
    std::cout << report.summary;
    if (!report.ok) return emit_error(base_record("check", 2, command, "one or more checks failed"), out_dir);
    return 0;
  } catch (const RetryAtLargerN& e) {
    auto rec = base_record("validation", 1, command, e.what());
    rec["suggested_n"] = e.suggested_n();
    return emit_error(rec, out_dir);
  } catch (const ValidationError& e) {
    return emit_error(base_record("validation", 1, command, e.what()), out_dir);
  } catch (const NonConvergence& e) {
    auto rec = base_record("numeric", 2, command, e.what());
    rec["last_iterate"] = e.last_iterate();
    rec["gradient_norm"] = e.gradient_norm();
    return emit_error(rec, out_dir);
  } catch (const BoxTooSmall& e) {
    auto rec = base_record("numeric", 2, command, e.what());
    json box = json::array();
    for (const auto& [lo, hi] : e.suggested_box()) box.push_back({lo, hi});
    rec["suggested_box"] = box;
    return emit_error(rec, out_dir);
  } catch (const NumericError& e) {
    return emit_error(base_record("numeric", 2, command, e.what()), out_dir);
  } catch (const std::exception& e) {
    return emit_error(base_record("internal", 2, command, e.what()), out_dir);
  }
}

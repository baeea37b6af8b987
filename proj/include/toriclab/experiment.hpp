#ifndef TORICLAB_EXPERIMENT_HPP
#define TORICLAB_EXPERIMENT_HPP

#include "toriclab/config.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace toriclab {

/// A CSV table; cells are already formatted.
struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  std::string command;
  std::vector<Table> tables;
  /// markdown
  std::string summary;
  /// false when a check inside the command failed (selftest)
  bool ok = true;
};

/// Shortest round-trip decimal form; "nan"/"inf" never appear in reports
/// because every producer checks finiteness first.
std::string format_number(double x);

std::string to_csv(const Table& t);

/// Writes <name>.csv for every table and <command>.md.
void write_report(const Report& r, const std::string& dir);

struct RunOptions {
  std::optional<std::size_t> resolution;
  unsigned threads = 1;
  std::uint64_t seed = 1;
};

/// Lattice points of N·P with their vanishing orders, and the profile k_j.
Report cmd_sections(const ExperimentConfig& cfg, const RunOptions& opt = {});
/// alpha_N, deviation from N·xi, tameness and limiting support.
Report cmd_ray(const ExperimentConfig& cfg, const RunOptions& opt = {});
/// log norms with the exponential factor removed and the power-law fit.
Report cmd_norms(const ExperimentConfig& cfg, const RunOptions& opt = {});
/// D_N(t) over N_list x t_grid with log-law fits; against the tame rule when
/// the configured sequence is not tame.
Report cmd_tails(const ExperimentConfig& cfg, const RunOptions& opt = {});
/// Moment test functions against |phi_N|^2.
Report cmd_weak(const ExperimentConfig& cfg, const RunOptions& opt = {});
/// Transform identities, cut bounds and curve limits; needs no config.
Report cmd_laplace(const RunOptions& opt = {});

enum class Fault { none, zero_weight, perturbed_hessian };
Fault parse_fault(const std::string& s);

/// Runs the invariant checks; a fault deliberately breaks one of them.
Report cmd_selftest(const RunOptions& opt = {}, Fault fault = Fault::none);

}  // namespace toriclab

#endif  // TORICLAB_EXPERIMENT_HPP

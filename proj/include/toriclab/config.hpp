#ifndef TORICLAB_CONFIG_HPP
#define TORICLAB_CONFIG_HPP

#include "toriclab/lattice.hpp"
#include "toriclab/polytope.hpp"
#include "toriclab/potential.hpp"
#include "toriclab/rays.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace toriclab {

struct SequenceSpec {
  SequenceKind kind = SequenceKind::tame;
  /// offset kind only; alpha_N = tame(N) + offsets[N mod period]
  std::vector<Weight> offsets;
  std::size_t period = 0;
  friend bool operator==(const SequenceSpec&, const SequenceSpec&) = default;
};

struct QuadratureOverrides {
  std::optional<std::size_t> resolution;
  std::vector<std::pair<double, double>> box;
  friend bool operator==(const QuadratureOverrides&, const QuadratureOverrides&) = default;
};

/// One experiment, read from JSON. Rationals travel as "p/q" strings.
///
///   {"polytope": {"dim": 1, "facets": [{"normal": [1], "offset": 0}, ...]},
///    "ray": ["1/2"], "sequence": {"kind": "tame"}, "N_list": [50, 100, ...]}
///
/// The polytope may also be given as {"preset": "interval" | "simplex" |
/// "cube", "dim": m}; it is always written back as facets.
struct ExperimentConfig {
  FacetPolytope polytope = FacetPolytope::unit_interval();
  /// Lattice points of P with non-unit weights; the rest default to 1.
  std::vector<std::pair<Weight, double>> metric_weights;
  RationalPoint ray;
  SequenceSpec sequence;
  std::vector<std::int64_t> n_list;
  QuadratureOverrides quadrature;
  std::vector<double> t_grid;
  std::string outputs;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Throws ValidationError with the offending key in the message.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

MetricPotential make_potential(const ExperimentConfig& cfg);
SectionSequence make_sequence(const ExperimentConfig& cfg);
/// The tame rule along the same ray, for comparisons.
SectionSequence make_tame_sequence(const ExperimentConfig& cfg);

}  // namespace toriclab

#endif  // TORICLAB_CONFIG_HPP

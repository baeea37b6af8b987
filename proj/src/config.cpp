#include "toriclab/config.hpp"

#include "toriclab/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <sstream>

namespace toriclab {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw ValidationError("config: " + key + ": " + why);
}

const json& need(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) bad(key, "missing");
  return j.at(key);
}

std::vector<std::int64_t> int_list(const json& j, const std::string& key) {
  if (!j.is_array()) bad(key, "expected an array of integers");
  std::vector<std::int64_t> out;
  for (const auto& x : j) {
    if (!x.is_number_integer()) bad(key, "expected integers");
    out.push_back(x.get<std::int64_t>());
  }
  return out;
}

std::string rational_text(const json& x, const std::string& key) {
  if (x.is_string()) return x.get<std::string>();
  if (x.is_number_integer()) return std::to_string(x.get<std::int64_t>());
  bad(key, "rationals are written as \"p/q\" strings or integers");
}

FacetPolytope parse_polytope(const json& j) {
  if (!j.is_object()) bad("polytope", "expected an object");
  if (j.contains("preset")) {
    const auto name = j.at("preset").get<std::string>();
    const auto dim = j.contains("dim") ? j.at("dim").get<std::size_t>() : 1;
    if (name == "interval") return FacetPolytope::unit_interval();
    if (name == "simplex") return FacetPolytope::unit_simplex(dim);
    if (name == "cube") return FacetPolytope::unit_cube(dim);
    bad("polytope.preset", "unknown preset '" + name + "'");
  }
  const auto dim = need(j, "dim").get<std::size_t>();
  std::vector<Facet> facets;
  for (const auto& f : need(j, "facets")) {
    Facet facet;
    facet.normal = CoWeight(int_list(need(f, "normal"), "polytope.facets.normal"));
    facet.offset = need(f, "offset").get<std::int64_t>();
    facets.push_back(std::move(facet));
  }
  return FacetPolytope(dim, std::move(facets));
}

SequenceSpec parse_sequence(const json& j) {
  SequenceSpec s;
  if (j.is_string()) {
    s.kind = parse_sequence_kind(j.get<std::string>());
    if (s.kind == SequenceKind::offset) bad("sequence", "the offset rule needs a list of offsets");
    return s;
  }
  s.kind = parse_sequence_kind(need(j, "kind").get<std::string>());
  if (s.kind != SequenceKind::offset) return s;
  for (const auto& o : need(j, "offsets")) s.offsets.emplace_back(int_list(o, "sequence.offsets"));
  if (s.offsets.empty()) bad("sequence.offsets", "empty");
  s.period = j.contains("period") ? j.at("period").get<std::size_t>() : s.offsets.size();
  if (s.period != s.offsets.size()) bad("sequence.period", "must equal the number of offsets");
  return s;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: not valid JSON: ") + e.what());
  }
  try {
    ExperimentConfig cfg;
    cfg.polytope = parse_polytope(need(j, "polytope"));
    const auto m = cfg.polytope.dim();
    if (j.contains("metric_weights")) {
      for (const auto& w : j.at("metric_weights")) {
        Weight point(int_list(need(w, "point"), "metric_weights.point"));
        cfg.metric_weights.emplace_back(std::move(point), need(w, "weight").get<double>());
      }
    }
    std::vector<std::string> ray;
    for (const auto& x : need(j, "ray")) ray.push_back(rational_text(x, "ray"));
    cfg.ray = RationalPoint::parse(ray);
    if (cfg.ray.dim() != m) bad("ray", "dimension does not match the polytope");
    if (!cfg.polytope.contains(cfg.ray)) bad("ray", "the direction lies outside P, so no section sequence approximates it");
    cfg.sequence = j.contains("sequence") ? parse_sequence(j.at("sequence")) : SequenceSpec{};
    for (const auto& o : cfg.sequence.offsets)
      if (o.dim() != m) bad("sequence.offsets", "dimension does not match the polytope");
    cfg.n_list = int_list(need(j, "N_list"), "N_list");
    if (cfg.n_list.empty()) bad("N_list", "empty");
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
      if (cfg.n_list[i] < 1) bad("N_list", "entries must be positive");
      if (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1]) bad("N_list", "must be strictly increasing");
    }
    if (j.contains("quadrature")) {
      const auto& q = j.at("quadrature");
      if (q.contains("resolution")) cfg.quadrature.resolution = q.at("resolution").get<std::size_t>();
      if (q.contains("box")) {
        for (const auto& side : q.at("box")) {
          if (!side.is_array() || side.size() != 2) bad("quadrature.box", "sides are [lo, hi] pairs");
          cfg.quadrature.box.emplace_back(side[0].get<double>(), side[1].get<double>());
          if (!(side[0].get<double>() < side[1].get<double>())) bad("quadrature.box", "lo must be below hi");
        }
        if (cfg.quadrature.box.size() != m) bad("quadrature.box", "one side per dimension");
      }
    }
    if (j.contains("t_grid")) {
      for (const auto& t : j.at("t_grid")) {
        cfg.t_grid.push_back(t.get<double>());
        if (!(cfg.t_grid.back() > 0)) bad("t_grid", "values must be positive");
      }
    }
    if (j.contains("outputs")) cfg.outputs = j.at("outputs").get<std::string>();
    make_potential(cfg);
    return cfg;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: wrong type: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  json j;
  json facets = json::array();
  for (const auto& f : cfg.polytope.facets()) facets.push_back({{"normal", f.normal.data()}, {"offset", f.offset}});
  j["polytope"] = {{"dim", cfg.polytope.dim()}, {"facets", facets}};
  if (!cfg.metric_weights.empty()) {
    json w = json::array();
    for (const auto& [point, weight] : cfg.metric_weights) w.push_back({{"point", point.data()}, {"weight", weight}});
    j["metric_weights"] = w;
  }
  j["ray"] = cfg.ray.to_strings();
  json seq = {{"kind", to_string(cfg.sequence.kind)}};
  if (cfg.sequence.kind == SequenceKind::offset) {
    json offs = json::array();
    for (const auto& o : cfg.sequence.offsets) offs.push_back(o.data());
    seq["offsets"] = offs;
    seq["period"] = cfg.sequence.period;
  }
  j["sequence"] = seq;
  j["N_list"] = cfg.n_list;
  json quad = json::object();
  if (cfg.quadrature.resolution) quad["resolution"] = *cfg.quadrature.resolution;
  if (!cfg.quadrature.box.empty()) {
    json box = json::array();
    for (const auto& [lo, hi] : cfg.quadrature.box) box.push_back({lo, hi});
    quad["box"] = box;
  }
  if (!quad.empty()) j["quadrature"] = quad;
  if (!cfg.t_grid.empty()) j["t_grid"] = cfg.t_grid;
  if (!cfg.outputs.empty()) j["outputs"] = cfg.outputs;
  return j.dump(2);
}

MetricPotential make_potential(const ExperimentConfig& cfg) {
  if (cfg.metric_weights.empty()) return MetricPotential(cfg.polytope);
  const auto points = cfg.polytope.lattice_points(1);
  std::map<Weight, double> given;
  for (const auto& [point, weight] : cfg.metric_weights) {
    if (!cfg.polytope.contains(point, 1)) bad("metric_weights", to_string(point) + " is not a lattice point of P");
    if (!given.emplace(point, weight).second) bad("metric_weights", to_string(point) + " listed twice");
  }
  std::vector<double> weights;
  for (const auto& p : points) {
    const auto it = given.find(p);
    weights.push_back(it == given.end() ? 1.0 : it->second);
  }
  return MetricPotential(cfg.polytope, weights);
}

SectionSequence make_sequence(const ExperimentConfig& cfg) {
  switch (cfg.sequence.kind) {
    case SequenceKind::rounded:
      return SectionSequence::rounded(cfg.polytope, cfg.ray);
    case SequenceKind::tame:
      return SectionSequence::tame(cfg.polytope, cfg.ray);
    case SequenceKind::offset:
      return SectionSequence::offset(cfg.polytope, cfg.ray, cfg.sequence.offsets);
  }
  return SectionSequence::tame(cfg.polytope, cfg.ray);
}

SectionSequence make_tame_sequence(const ExperimentConfig& cfg) { return SectionSequence::tame(cfg.polytope, cfg.ray); }

}  // namespace toriclab

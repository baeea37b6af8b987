#include <doctest.h>

#include "toriclab/errors.hpp"
#include "toriclab/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace toriclab;

namespace {

const char* kInterval = R"({
  "polytope": {"preset": "interval"},
  "ray": ["1/2"],
  "sequence": {"kind": "tame"},
  "N_list": [10, 20, 40, 80, 160]
})";

const char* kSimplexOffset = R"({
  "polytope": {"dim": 2, "facets": [{"normal": [1, 0], "offset": 0}, {"normal": [0, 1], "offset": 0},
                                    {"normal": [-1, -1], "offset": 1}]},
  "metric_weights": [{"point": [1, 0], "weight": 3.5}],
  "ray": ["1/2", "0"],
  "sequence": {"kind": "offset", "offsets": [[0, 1], [0, 0]], "period": 2},
  "N_list": [4, 8, 16, 32, 64],
  "quadrature": {"resolution": 96, "box": [[-30, 30], [-30, 30]]},
  "t_grid": [0.5, 2],
  "outputs": "out/simplex"
})";

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("config parses presets and explicit facets") {
  const auto a = parse_config(kInterval);
  CHECK(a.polytope == FacetPolytope::unit_interval());
  CHECK(a.ray == RationalPoint::parse({"1/2"}));
  CHECK(a.n_list.size() == 5);
  CHECK_FALSE(a.quadrature.resolution.has_value());

  const auto b = parse_config(kSimplexOffset);
  CHECK(b.polytope.dim() == 2);
  CHECK(b.sequence.kind == SequenceKind::offset);
  CHECK(b.sequence.period == 2);
  CHECK(b.quadrature.resolution.value() == 96);
  CHECK(b.quadrature.box.size() == 2);
  CHECK(b.t_grid == std::vector<double>{0.5, 2});
  CHECK(b.outputs == "out/simplex");
}

TEST_CASE("config round trip") {
  for (const char* text : {kInterval, kSimplexOffset}) {
    const auto cfg = parse_config(text);
    const auto again = parse_config(serialize_config(cfg));
    CHECK(again == cfg);
    CHECK(serialize_config(again) == serialize_config(cfg));
  }
}

TEST_CASE("config rejects bad input") {
  const std::string base = kInterval;
  CHECK_THROWS_AS(parse_config("{"), ValidationError);
  CHECK_THROWS_AS(parse_config(replace(base, R"("ray": ["1/2"],)", "")), ValidationError);
  CHECK_THROWS_AS(parse_config(replace(base, R"(["1/2"])", R"(["3/2"])")), ValidationError);
  CHECK_THROWS_AS(parse_config(replace(base, R"(["1/2"])", R"(["1/2", "0"])")), ValidationError);
  CHECK_THROWS_AS(parse_config(replace(base, "[10, 20, 40, 80, 160]", "[10, 20, 20]")), ValidationError);
  CHECK_THROWS_AS(parse_config(replace(base, "[10, 20, 40, 80, 160]", "[0, 20]")), ValidationError);
  CHECK_THROWS_AS(parse_config(replace(base, R"("interval")", R"("prism")")), ValidationError);
  CHECK_THROWS_AS(parse_config(replace(base, R"({"kind": "tame"})", R"({"kind": "wild"})")), ValidationError);
  CHECK_THROWS_AS(parse_config(replace(base, R"(["1/2"])", "[0.5]")), ValidationError);
  const std::string simplex = kSimplexOffset;
  CHECK_THROWS_AS(parse_config(replace(simplex, R"("period": 2)", R"("period": 3)")), ValidationError);
  CHECK_THROWS_AS(parse_config(replace(simplex, "3.5", "0")), ValidationError);
  CHECK_THROWS_AS(parse_config(replace(simplex, R"("point": [1, 0])", R"("point": [1, 1])")), ValidationError);
  CHECK_THROWS_AS(parse_config(replace(simplex, "[[-30, 30], [-30, 30]]", "[[-30, 30]]")), ValidationError);
  // an unbounded polytope
  CHECK_THROWS_AS(parse_config(replace(simplex, R"({"normal": [-1, -1], "offset": 1})", R"({"normal": [-1, 0], "offset": 1})")),
                  ValidationError);
}

TEST_CASE("configured metric weights reach the potential") {
  const auto cfg = parse_config(kSimplexOffset);
  const auto pot = make_potential(cfg);
  const auto& pts = pot.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double c = std::exp(pot.log_weights()[static_cast<Eigen::Index>(i)]);
    CHECK(c == doctest::Approx(pts[i] == Weight{1, 0} ? 3.5 : 1.0));
  }
  const auto seq = make_sequence(cfg);
  CHECK(seq.alpha(8) == Weight{4, 1});
  CHECK(seq.alpha(9) == make_tame_sequence(cfg).alpha(9));
}

TEST_CASE("format_number round trips") {
  for (double x : {0.0, 1.0, -2.5, 1e-300, 0.1, 1.0 / 3, 6.02214076e23}) CHECK(std::stod(format_number(x)) == x);
  CHECK(format_number(0.5) == "0.5");
}

TEST_CASE("sections table") {
  auto cfg = parse_config(kInterval);
  cfg.n_list = {3};
  const auto r = cmd_sections(cfg);
  REQUIRE(r.tables.size() == 2);
  CHECK(r.tables[0].rows.size() == 4);
  CHECK(r.tables[1].rows[0].back() == "1/2");
  cfg.polytope = FacetPolytope::unit_simplex(2);
  cfg.ray = RationalPoint::parse({"1/2", "0"});
  cfg.n_list = {2};
  const auto s = cmd_sections(cfg);
  CHECK(s.tables[0].rows.size() == 6);
  CHECK(s.tables[1].rows[1].back() == "0");
}

TEST_CASE("ray report flags the offset rule") {
  const auto r = cmd_ray(parse_config(kSimplexOffset));
  CHECK(r.summary.find("tame on [4, 64]: no") != std::string::npos);
  const auto t = cmd_ray(parse_config(kInterval));
  CHECK(t.summary.find("tame on [10, 160]: yes") != std::string::npos);
}

TEST_CASE("norms fit on the interval") {
  const auto r = cmd_norms(parse_config(kInterval));
  const auto& fit = r.tables[1].rows.at(0);
  CHECK(std::abs(std::stod(fit[0]) + 0.5) < 0.05);
  CHECK(fit[1] == "-0.5");
  auto short_ladder = parse_config(kInterval);
  short_ladder.n_list = {10, 20};
  CHECK_THROWS_AS(cmd_norms(short_ladder), ValidationError);
}

TEST_CASE("reports are identical across thread counts") {
  const auto cfg = parse_config(kSimplexOffset);
  RunOptions one, three;
  three.threads = 3;
  for (auto cmd : {&cmd_norms, &cmd_tails, &cmd_weak}) {
    const auto a = cmd(cfg, one);
    const auto b = cmd(cfg, three);
    REQUIRE(a.tables.size() == b.tables.size());
    for (std::size_t i = 0; i < a.tables.size(); ++i) CHECK(to_csv(a.tables[i]) == to_csv(b.tables[i]));
    CHECK(a.summary == b.summary);
  }
}

TEST_CASE("tails compare against the tame rule for offset sequences") {
  const auto r = cmd_tails(parse_config(kSimplexOffset));
  const auto& t = r.tables[0];
  CHECK(t.header.back() == "holds");
  CHECK(t.rows.size() == 10);
}

TEST_CASE("write_report") {
  const auto dir = std::filesystem::temp_directory_path() / "toriclab_report_test";
  std::filesystem::remove_all(dir);
  auto cfg = parse_config(kInterval);
  cfg.n_list = {2};
  write_report(cmd_sections(cfg), dir.string());
  CHECK(slurp(dir / "sections.csv") == "N,alpha,order_0,order_1\n2,0,0,2\n2,1,1,1\n2,2,2,0\n");
  CHECK(std::filesystem::exists(dir / "profile.csv"));
  CHECK(slurp(dir / "sections.md").rfind("# Sections", 0) == 0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("selftest and its faults") {
  CHECK(cmd_selftest().ok);
  const auto broken = cmd_selftest({}, Fault::perturbed_hessian);
  CHECK_FALSE(broken.ok);
  CHECK(broken.tables[0].rows[0][1] == "FAIL");
  CHECK_THROWS_AS(cmd_selftest({}, Fault::zero_weight), ValidationError);
  CHECK(parse_fault("none") == Fault::none);
  CHECK_THROWS_AS(parse_fault("gremlins"), ValidationError);
}

TEST_CASE("laplace report passes") {
  const auto r = cmd_laplace();
  CHECK(r.ok);
  CHECK(r.tables[0].rows.size() == 27);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lorentz/cli.hpp"
#include "lorentz/oracles.hpp"

using namespace lorentz;
namespace fs = std::filesystem;

namespace {

const char* kDiamond = R"({
  "version": 1,
  "experiment": "distance",
  "domain": {"type": "Diamond", "dim": 2, "a": [-1, 0], "b": [1, 0]},
  "pairs": [[[0, 0], [0.3, 0.2]], [[-0.5, 0.1], [0.4, -0.2]]],
  "outputs": {"csv": "out.csv", "svg": "out.svg"}
})";

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out(1);
  for (char c : s) {
    if (c == sep) out.emplace_back();
    else out.back() += c;
  }
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lorentz_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config parsing is strict") {
  const ExperimentConfig c = parse_config(kDiamond);
  CHECK(c.experiment == "distance");
  CHECK(c.domain.type == "Diamond");
  CHECK(c.pairs.size() == 2);
  CHECK(c.seed == 42);
  CHECK(c.mesh.k == 64);

  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"version": 2, "experiment": "distance"})"), ConfigError);
  std::string extra = kDiamond;
  extra.insert(extra.find("\"experiment\""), "\"colour\": 1, ");
  CHECK_THROWS_AS(parse_config(extra), ConfigError);
  std::string nested = kDiamond;
  nested.insert(nested.find("\"a\":"), "\"tilt\": 2, ");
  CHECK_THROWS_AS(parse_config(nested), ConfigError);
  std::string typed = kDiamond;
  typed.replace(typed.find("\"dim\": 2"), 8, "\"dim\": \"two\"");
  CHECK_THROWS_AS(parse_config(typed), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"version": 1, "experiment": "bake", "outputs": {"csv": "a"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"version": 1, "experiment": "distance",
      "domain": {"type": "Diamond"}})"), ConfigError);
}

TEST_CASE("config round-trips through serialization") {
  ExperimentConfig c = parse_config(kDiamond);
  c.sampler.scales = {1, 3.5, 0.1};
  c.qh_h = 0.1 + 0.2;
  c.mesh.seed = 123456789012345ULL;
  const std::string s = serialize_config(c);
  const ExperimentConfig back = parse_config(s);
  CHECK(back == c);
  CHECK(serialize_config(back) == s);
}

TEST_CASE("domain descriptors") {
  DomainSpec d;
  d.type = "Diamond";
  d.a = {-1, 0};
  d.b = {1, 0};
  CHECK(make_domain(d)->name() == "Diamond");
  d.eps = 1.0;
  CHECK(make_domain(d)->name() == "StableDiamond");
  d.b = {1, 0, 0};
  CHECK_THROWS_AS(make_domain(d), DomainError);
  DomainSpec cone;
  cone.type = "ConeFuture";
  cone.dim = 3;
  CHECK(make_domain(cone)->size() == 3);
  DomainSpec bad;
  bad.type = "Torus";
  CHECK_THROWS_AS(make_domain(bad), DomainError);
}

TEST_CASE("csv rows") {
  CHECK(csv_header() == "experiment,domain,metric,kind,x,y,z,w,value,mesh,seed,wall_ms");
  ResultRow r;
  r.experiment = "distance";
  r.domain = "Diamond";
  r.metric = "markowitz";
  r.kind = "upper";
  r.points = {Event{0.5, -0.25}, Event{1, 0}};
  r.value = 0.1;
  r.mesh = "k=64, m=16";
  r.seed = 7;
  const auto cols = split(csv_line(r), ',');
  REQUIRE(cols.size() == 13);  // the quoted mesh field holds one comma
  CHECK(cols[4] == "0.5;-0.25");
  CHECK(cols[5] == "1;0");
  CHECK(cols[6].empty());
  CHECK(cols[7].empty());
  CHECK(cols[8] == "0.1");
  CHECK(cols[9] == "\"k=64");
}

TEST_CASE("distance experiment brackets the oracle") {
  const ExperimentConfig c = parse_config(kDiamond);
  const RunResult r = run_experiment(c);
  CHECK(r.exit_code == 0);
  for (size_t p = 0; p < c.pairs.size(); ++p) {
    const Event x = Vec::from(c.pairs[p][0]), y = Vec::from(c.pairs[p][1]);
    const double v = delta_diamond_2d({-1, 0}, {1, 0}, x, y);
    int seen = 0;
    for (const ResultRow& row : r.rows) {
      if (row.points.size() != 2 || !(row.points[0] == x) || !(row.points[1] == y)) continue;
      ++seen;
      if (row.kind == "exact") CHECK(row.value == doctest::Approx(v));
      if (row.kind == "upper") CHECK(row.value >= v - 1e-9);
      if (row.kind == "lower") CHECK(row.value <= v + 1e-9);
    }
    CHECK(seen == 3);
  }
  CHECK(r.svg.find("<svg") == 0);
  const RunResult again = run_experiment(c);
  REQUIRE(again.rows.size() == r.rows.size());
  for (size_t i = 0; i < r.rows.size(); ++i) CHECK(again.rows[i].value == r.rows[i].value);
}

TEST_CASE("files and exit codes") {
  const fs::path dir = scratch("files");
  const fs::path cfg = dir / "c.json";
  std::ofstream(cfg) << kDiamond;
  CHECK(run_config_file(cfg.string(), (dir / "out").string(), std::nullopt, "distance") == 0);
  const std::string csv = slurp(dir / "out" / "out.csv");
  CHECK(csv.rfind(csv_header(), 0) == 0);
  CHECK(fs::exists(dir / "out" / "out.svg"));
  CHECK(run_config_file(cfg.string(), (dir / "x").string(), std::nullopt, "compare") == 2);

  const fs::path bad = dir / "bad.json";
  std::ofstream(bad) << "{\"version\": 1,";
  CHECK(run_config_file(bad.string(), (dir / "bad").string(), std::nullopt, "") == 2);
  CHECK(!fs::exists(dir / "bad"));

  std::string broken = kDiamond;
  broken.replace(broken.find("\"b\": [1, 0]"), 11, "\"b\": [1, 0, 0]");
  const fs::path dom = dir / "dom.json";
  std::ofstream(dom) << broken;
  CHECK(run_config_file(dom.string(), (dir / "dom").string(), std::nullopt, "") == 3);

  const fs::path solver = dir / "solver.json";
  std::ofstream(solver) << R"({"version": 1, "experiment": "hyperbolicity",
      "domain": {"type": "Diamond", "a": [-1, 0], "b": [1, 0]},
      "sampler": {"scales": [1, 2], "pool": 8, "quadruples": 10, "rho_div": 0.1},
      "outputs": {"csv": "h.csv"}})";
  std::string msg;
  CHECK(run_config_file(solver.string(), (dir / "solver").string(), std::nullopt, "", &msg) == 4);
  CHECK(slurp(dir / "solver" / "h.csv").find("solver_failure") != std::string::npos);
}

TEST_CASE("seed override is deterministic") {
  const fs::path dir = scratch("seed");
  const fs::path cfg = dir / "h.json";
  std::ofstream(cfg) << R"({"version": 1, "experiment": "hyperbolicity",
      "domain": {"type": "SpacelikeSlab", "dim": 3, "h": 1},
      "sampler": {"scales": [1, 4], "pool": 8, "quadruples": 200},
      "outputs": {"csv": "h.csv"}})";
  const auto values = [&](const std::string& out, std::uint64_t seed) {
    REQUIRE(run_config_file(cfg.string(), (dir / out).string(), seed, "hyperbolicity") == 0);
    std::string s;
    for (const auto& line : split(slurp(dir / out / "h.csv"), '\n')) {
      const auto cols = split(line, ',');
      if (cols.size() >= 12) s += cols[8] + "|";
    }
    return s;
  };
  CHECK(values("a", 5) == values("b", 5));
  CHECK(values("a", 5) != values("c", 6));
}

TEST_CASE("acausality and thinness experiments") {
  ExperimentConfig c;
  c.experiment = "acausality";
  c.domain.type = "Diamond";
  c.domain.a = {-1, 0};
  c.domain.b = {1, 0};
  c.domain.eps = 1.0;
  c.outputs.csv = "a.csv";
  RunResult r = run_experiment(c);
  REQUIRE(r.exit_code == 0);
  int stable = 0;
  for (const ResultRow& row : r.rows)
    if (row.metric.rfind("stable_epsilon", 0) == 0) {
      CHECK(row.kind == "stable");
      CHECK(row.value == doctest::Approx(1.0).epsilon(1e-6));
      ++stable;
    }
  CHECK(stable == 2);

  c.experiment = "thinness";
  c.pairs = {{std::vector<double>{-0.6, 0}, std::vector<double>{0.6, 0.1}}};
  r = run_experiment(c);
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.rows[0].value > 0.0);
  CHECK(std::isfinite(r.rows[0].value));
}

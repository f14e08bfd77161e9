#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <tangentlab/errors.hpp>

#include "compare.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "experiments.hpp"
#include "stats.hpp"
#include "svg.hpp"

#include "oracles.hpp"

using namespace tangentlab;
using namespace tangentlab::diag;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("tangentlab_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("scalars, lists, comments") {
    const Config cfg = Config::parse_string(
        "# header\n"
        "experiment = kg-projection\n"
        "particle.sigma = 0.3\n"
        "field.phi_c = [1.0, -2.5]\n"
        "flag = true\n");
    CHECK(cfg.text("experiment") == "kg-projection");
    CHECK(cfg.number("particle.sigma") == 0.3);
    CHECK(cfg.list("field.phi_c") == std::vector<double>{1.0, -2.5});
    CHECK(cfg.flag_or("flag", false));
    CHECK(cfg.untouched_keys().empty());
  }

  SUBCASE("diagnics carry line numbers") {
    const Config cfg = Config::parse_string("a = 1\nb = oops\n");
    CHECK(cfg.line_of("b") == 2);
    CHECK_THROWS_AS(cfg.number("b"), ConfigError);
  }

  SUBCASE("malformed lines and duplicates") {
    CHECK_THROWS_AS(Config::parse_string("just words\n"), ConfigError);
    CHECK_THROWS_AS(Config::parse_string("a = 1\na = 2\n"), ConfigError);
  }

  SUBCASE("serialize round trip") {
    const Config cfg = Config::parse_string("b = 2\na = [1, 2]\n");
    const Config back = Config::parse_string(cfg.serialize());
    CHECK(back.list("a") == std::vector<double>{1.0, 2.0});
    CHECK(back.number("b") == 2.0);
  }
}

TEST_CASE("csv write/read round trip") {
  const fs::path dir = temp_dir("csv");
  TrajectoryRecord rec;
  rec.columns = {"t", "a", "p"};
  rec.rows = {{0.0, 1.0, -0.5}, {0.1, 0.998, -0.52}, {0.2, 1.0 / 3.0, 1e-17}};
  CsvMetadata md;
  md.add("experiment", "unit-test");
  write_csv((dir / "x.csv").string(), rec, md);

  const CsvFile file = read_csv((dir / "x.csv").string());
  CHECK(file.record.columns == rec.columns);
  REQUIRE(file.record.rows.size() == rec.rows.size());
  for (std::size_t i = 0; i < rec.rows.size(); ++i)
    for (std::size_t j = 0; j < rec.columns.size(); ++j)
      CHECK(file.record.rows[i][j] == rec.rows[i][j]);  // 17 digits: exact
  CHECK(file.metadata.at("experiment") == "unit-test");
  CHECK(file.metadata.at("schema_version") == "1");
}

TEST_CASE("compare semantics") {
  TrajectoryRecord a;
  a.columns = {"t", "x", "y"};
  for (int i = 0; i <= 10; ++i)
    a.rows.push_back({0.1 * i, std::sin(0.1 * i), std::cos(0.1 * i)});

  SUBCASE("a record matches itself exactly") {
    const CompareReport rep = compare_records(a, a, 1e-15);
    CHECK(rep.pass);
    for (const auto& c : rep.columns) CHECK(c.max_dev == 0.0);
  }

  SUBCASE("a perturbed copy fails with the column named") {
    TrajectoryRecord b = a;
    b.rows[5][2] += 1e-3;
    const CompareReport rep = compare_records(a, b, 1e-6);
    CHECK(!rep.pass);
    REQUIRE(rep.failed_columns.size() == 1);
    CHECK(rep.failed_columns[0] == "y");
  }

  SUBCASE("interpolation bridges different time grids") {
    TrajectoryRecord b;
    b.columns = {"t", "x"};
    for (int i = 0; i <= 100; ++i) b.rows.push_back({0.01 * i, std::sin(0.01 * i)});
    const CompareReport rep = compare_records(a, b, 1e-4, {"x"});
    CHECK(rep.pass);
  }

  SUBCASE("schema mismatch is an error") {
    TrajectoryRecord b;
    b.columns = {"t", "z"};
    b.rows = {{0.0, 0.0}, {1.0, 0.0}};
    CHECK_THROWS_AS(compare_records(a, b, 1.0), ConfigError);
    CHECK_THROWS_AS(compare_records(a, b, 1.0, {"x"}), ConfigError);
  }
}

TEST_CASE("svg plots are well-formed and carry the series") {
  const fs::path dir = temp_dir("svg");
  Series s1{"alpha", {0.0, 1.0, 2.0}, {0.0, 1.0, 0.5}};
  Series s2{"beta", {0.0, 1.0, 2.0}, {1.0, 0.2, 0.8}};
  write_svg_plot((dir / "p.svg").string(), {s1, s2}, {"title", "t", "y"});
  const std::string body = slurp(dir / "p.svg");
  CHECK(body.find("<svg") != std::string::npos);
  CHECK(body.find("</svg>") != std::string::npos);
  CHECK(body.find("alpha") != std::string::npos);
  CHECK(body.find("beta") != std::string::npos);
  CHECK(std::count(body.begin(), body.end(), '<') ==
        std::count(body.begin(), body.end(), '>'));
}

TEST_CASE("semicircle cdf matches the independent oracle") {
  for (double x : {-1.9, -0.5, 0.0, 0.7, 1.99})
    CHECK(semicircle_cdf(x, 2.0) == doctest::Approx(oracle::semicircle_cdf(x, 2.0)).epsilon(1e-12));
}

TEST_CASE("invalid configurations name the offending key") {
  const fs::path dir = temp_dir("badcfg");
  Config cfg = Config::parse_string(
      "experiment = coupled\n"
      "particle.sigma = -0.3\n");
  try {
    run_experiment(cfg, (dir / "out").string(), false);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("particle.sigma") != std::string::npos);
  }

  Config unknown = Config::parse_string(
      "experiment = gue-stats\n"
      "gue.n = 24\n"
      "gue.samples = 3\n"
      "gue.kick_dim = 16\n"
      "gue.kicks = 5\n"
      "totally.bogus = 1\n");
  try {
    run_experiment(unknown, (dir / "out2").string(), false);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("totally.bogus") != std::string::npos);
  }
}

TEST_CASE("experiments are reproducible from their manifests") {
  const fs::path dir = temp_dir("repro");
  Config cfg = Config::parse_string(
      "experiment = rm-walk\n"
      "rm.walkers = 3\n"
      "run.t_end = 2.0\n"
      "grid.particle.n = 96\n"
      "grid.particle.halfwidth = 8.0\n"
      "rm.subspace = 32\n");
  const ExperimentResult first = run_experiment(cfg, (dir / "a").string(), false);
  CHECK(first.checks.size() >= 1);

  Config manifest = Config::parse_file((dir / "a" / "manifest.cfg").string());
  run_experiment(manifest, (dir / "b").string(), false);

  for (const auto& name : {"ensemble.csv", "walker0_off.csv", "walker0_on.csv"}) {
    const std::string a = slurp(dir / "a" / name);
    const std::string b = slurp(dir / "b" / name);
    CHECK(a == b);
    CHECK(!a.empty());
  }

  // A different seed changes the walk output.
  Config reseeded = Config::parse_file((dir / "a" / "manifest.cfg").string());
  reseeded.set("seed", "999");
  run_experiment(reseeded, (dir / "c").string(), false);
  CHECK(slurp(dir / "a" / "walker0_off.csv") != slurp(dir / "c" / "walker0_off.csv"));
}

TEST_CASE("gue experiment reruns byte-identically") {
  const fs::path dir = temp_dir("gue_repro");
  Config cfg = Config::parse_string(
      "experiment = gue-stats\n"
      "gue.n = 32\n"
      "gue.samples = 10\n"
      "gue.kick_dim = 16\n"
      "gue.kicks = 20\n"
      "check.ks = 0.2\n");
  run_experiment(cfg, (dir / "a").string(), false);
  Config manifest = Config::parse_file((dir / "a" / "manifest.cfg").string());
  run_experiment(manifest, (dir / "b").string(), false);
  CHECK(slurp(dir / "a" / "spectrum.csv") == slurp(dir / "b" / "spectrum.csv"));
  CHECK(slurp(dir / "a" / "summary.csv") == slurp(dir / "b" / "summary.csv"));
}

TEST_CASE("shipped configurations parse and name known experiments") {
  for (const auto& name : {"kg_projection.cfg", "coupled.cfg", "width_scaling.cfg",
                           "em_mode.cfg", "rm_walk.cfg", "gue_stats.cfg"}) {
    const fs::path p = fs::path(TANGENTLAB_CONFIG_DIR) / name;
    REQUIRE(fs::exists(p));
    const Config cfg = Config::parse_file(p.string());
    CHECK(!cfg.text("experiment").empty());
  }
}

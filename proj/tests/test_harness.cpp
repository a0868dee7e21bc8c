#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "arorder/error.hpp"
#include "arorder/harness.hpp"
#include "arorder/io.hpp"
#include "support.hpp"

using namespace arorder;
using namespace testing;

namespace fs = std::filesystem;

namespace {

ExperimentConfig config_from(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

std::string csv_of(const ResultTable& rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

std::size_t count_rows(const ResultTable& rows, const std::string& ordering) {
  std::size_t k = 0;
  for (const auto& r : rows) k += r.ordering == ordering;
  return k;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("arorder_test_" + name);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("config parsing and validation") {
  const auto cfg = config_from(R"({
    "experiment": "exact_learning", "lattice_side": 3,
    "orderings": ["sequential", {"name": "mine", "file": "o.txt"}, "random:4"],
    "orders": [2, 4], "m_s": [10, 20], "trials": 3, "seed": 9,
    "tolerance": 1e-9, "lambda": 0.2, "edge_threshold": 0.4, "threads": 2})");
  CHECK(cfg.kind == ExperimentKind::exact_learning);
  CHECK(cfg.orderings.size() == 3);
  CHECK(cfg.orderings[1].file == "o.txt");
  CHECK(cfg.orders == std::vector<std::size_t>{2, 4});
  CHECK(cfg.fit.tolerance == 1e-9);
  CHECK(cfg.rise.lambda == 0.2);
  CHECK(cfg.rise.edge_threshold == 0.4);

  auto code = [](const std::string& text) {
    try {
      config_from(text);
    } catch (const Error& e) {
      return std::string(e.code());
    }
    return std::string();
  };
  CHECK(code(R"({"experiment": "nope", "orderings": ["sequential"]})") == "config");
  CHECK(code(R"({"experiment": "exact_learning", "lattice_side": 3, "orderings": ["sequential"], "trials": 0})") == "config");
  CHECK(code(R"({"experiment": "exact_learning", "lattice_side": 3, "orderings": ["sequential"], "m_s": [0]})") == "config");
  CHECK(code(R"({"experiment": "exact_learning", "lattice_side": 3, "orderings": []})") == "config");
  CHECK(code(R"({"experiment": "sample_learning", "lattice_side": 3, "orderings": ["sequential"]})") == "config");
  CHECK(code("{ not json") == "config");
}

TEST_CASE("sample learning row layout") {
  auto cfg = config_from(R"({
    "experiment": "sample_learning", "lattice_side": 4,
    "orderings": ["sequential", "checkerboard", "random:3"], "orders": [6],
    "m_l": [1000, 10000, 50000], "m_s": [10000], "trials": 2, "seed": 1})");
  const auto rows = run_experiment(cfg);
  CHECK(rows.size() == 3 * 3 * 2 + 2);
  CHECK(count_rows(rows, "baseline") == 2);
  CHECK(rows.front().ordering == "sequential");
  CHECK(rows.back().ordering == "baseline");
  for (const auto& r : rows) {
    CHECK(r.epsilon > 0.0);
    CHECK(r.experiment == "sample_learning");
  }

  cfg.trials = 1;
  cfg.m_l = {2000};
  CHECK(run_experiment(cfg).size() == 3 + 1);
}

TEST_CASE("exact learning row layout") {
  const auto cfg = config_from(R"({
    "experiment": "exact_learning", "lattice_side": 3, "orderings": ["diagonal"],
    "orders": [2, 4], "m_s": [10000, 100000], "trials": 50, "seed": 2})");
  const auto rows = run_experiment(cfg);
  CHECK(count_rows(rows, "diagonal") == 2 * 2 * 50);
  CHECK(count_rows(rows, "baseline") == 2 * 50);
}

TEST_CASE("gibbs learning requires a ferromagnet") {
  auto cfg = config_from(R"({
    "experiment": "gibbs_learning", "lattice_side": 3, "orderings": ["sequential"],
    "model": {"kind": "spin_glass", "seed": 1}, "orders": [2], "m_l": [100], "m_s": [100],
    "trials": 1, "burn_in": 10})");
  try {
    run_experiment(cfg);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.code()) == "config");
  }
  cfg.model.kind = "ferromagnet";
  CHECK(run_experiment(cfg).size() == 2);
}

TEST_CASE("dataset experiment on a synthetic counted file") {
  const fs::path dir = scratch_dir("dataset");
  const std::vector<Edge> e{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {7, 0}, {0, 4}, {2, 6}};
  const Graph g(8, e);
  const IsingModel m = make_spin_glass(g, 5, CouplingLaw::dwave_range);
  {
    std::ofstream f(dir / "data.txt");
    write_samples(f, deduplicate(sample_exact(enumerate_distribution(m), 100000, 1)), SampleFormat::counted);
    std::ofstream a(dir / "a.txt"), b(dir / "b.txt");
    write_ordering(a, random_ordering(8, 1));
    write_ordering(b, random_ordering(8, 2));
  }
  const std::string base = R"({"experiment": "dataset", "dataset": ")" + (dir / "data.txt").string() +
                           R"(", "orders": [3], "m_s": [1000, 10000, 100000], "trials": 10,
      "orderings": [{"name": "a", "file": ")" + (dir / "a.txt").string() +
                           R"("}, {"name": "b", "file": ")";
  const auto rows = run_experiment(config_from(base + (dir / "b.txt").string() + R"("}]})"));
  std::map<std::size_t, double> mean;
  for (const auto& r : rows) {
    if (r.ordering != "baseline") mean[r.m_s] += r.epsilon;
  }
  CHECK(mean[100000] < mean[10000]);
  CHECK(mean[10000] < mean[1000]);

  const auto missing = config_from(base + (dir / "missing.txt").string() + R"("}]})");
  CHECK_THROWS_AS(run_experiment(missing), Error);
}

TEST_CASE("results are deterministic across thread counts") {
  auto cfg = config_from(R"({
    "experiment": "sample_learning", "lattice_side": 3, "model": {"kind": "spin_glass", "seed": 3},
    "orderings": ["sequential", "diagonal"], "orders": [3], "m_l": [2000, 8000],
    "m_s": [5000], "trials": 3, "seed": 42})");
  const std::string one = csv_of(run_experiment(cfg));
  CHECK(one == csv_of(run_experiment(cfg)));
  cfg.threads = 3;
  CHECK(one == csv_of(run_experiment(cfg)));
  cfg.seed = 43;
  CHECK(one != csv_of(run_experiment(cfg)));
}

TEST_CASE("CSV round trip and summaries") {
  ResultTable rows{{"exact_learning", "diagonal", 2, 0, 100, 0, 0.25, true},
                   {"exact_learning", "diagonal", 2, 0, 100, 1, 0.75, false},
                   {"exact_learning", "baseline", 0, 0, 100, 0, 0.5, true}};
  const std::string text = csv_of(rows);
  CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  std::istringstream in(text);
  const auto back = read_csv(in);
  REQUIRE(back.size() == 3);
  CHECK(back[1].epsilon == 0.75);
  CHECK_FALSE(back[1].converged);

  const auto curves = summarize_curves(rows);
  REQUIRE(curves.size() == 2);
  CHECK(curves[0].ordering == "diagonal");
  CHECK(curves[0].mean == 0.5);
  CHECK(curves[0].stddev == 0.25);
  CHECK_FALSE(curves[0].all_converged);
  std::ostringstream script;
  write_gnuplot_script(script, curves, "summary.csv");
  CHECK(script.str().find("summary.csv") != std::string::npos);
}

TEST_CASE("trial seeds") {
  const auto a = trial_seed(1, ExperimentKind::sample_learning, "data", 1000, 0);
  CHECK(a == trial_seed(1, ExperimentKind::sample_learning, "data", 1000, 0));
  CHECK(a != trial_seed(1, ExperimentKind::sample_learning, "data", 1000, 1));
  CHECK(a != trial_seed(1, ExperimentKind::exact_learning, "data", 1000, 0));
  CHECK(a == (1 ^ fnv1a("sample_learning|data|1000|0")));
}

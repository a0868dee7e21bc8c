#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "arorder/graph.hpp"
#include "arorder/ising.hpp"
#include "arorder/learn.hpp"
#include "arorder/ordering.hpp"

namespace arorder {

enum class ExperimentKind { sample_learning, exact_learning, gibbs_learning, dataset };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& name);

// A named ordering: a lattice generator ("sequential", "checkerboard",
// "diagonal"), "random:<seed>", or an ordering file.
struct OrderingSpec {
  std::string name;
  std::string file;  // empty for generators
};

struct ModelSpec {
  std::string kind = "ferromagnet";  // ferromagnet | spin_glass | file
  CouplingLaw law = CouplingLaw::pm_one;
  std::uint64_t seed = 0;
  std::string path;  // kind == file
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::sample_learning;
  std::size_t lattice_side = 0;  // 0 when graph_file is used
  std::string graph_file;
  ModelSpec model;
  std::vector<OrderingSpec> orderings;
  std::vector<std::size_t> orders{6};
  std::vector<std::size_t> m_l;
  std::vector<std::size_t> m_s{100'000};
  std::size_t trials = 20;
  std::uint64_t seed = 0;
  FitOptions fit;
  RiseOptions rise;
  bool true_graph = false;  // skip structure learning and use the model graph
  std::size_t burn_in = 10'000;
  std::string reference = "auto";  // auto | exact | gibbs
  std::size_t reference_samples = 1'000'000;
  std::string dataset;  // counted sample file for ExperimentKind::dataset
  std::string dataset_format = "counted";
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  std::size_t threads = 1;
  std::string output;
};

// Parses and validates a JSON configuration; throws Error("config").
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);
// Throws Error("config") for empty or non-positive lists, zero trials and
// similar problems.
void validate(const ExperimentConfig& cfg);

struct ResultRow {
  std::string experiment;
  std::string ordering;  // "baseline" for finite-sampling reference rows
  std::size_t order = 0;
  std::size_t m_l = 0;
  std::size_t m_s = 0;
  std::size_t trial = 0;
  double epsilon = 0.0;
  bool converged = true;
};

inline constexpr const char* kCsvHeader =
    "experiment,ordering,order_O,m_l,m_s,trial,epsilon,converged";

// Rows in deterministic order: configured ordering order (baseline last),
// then O, M_l, M_s, trial.
using ResultTable = std::vector<ResultRow>;

ResultTable run_sample_learning(const ExperimentConfig& cfg);
ResultTable run_exact_learning(const ExperimentConfig& cfg);
ResultTable run_gibbs_learning(const ExperimentConfig& cfg);
ResultTable run_dataset(const ExperimentConfig& cfg);
ResultTable run_experiment(const ExperimentConfig& cfg);

void write_csv(std::ostream& out, const ResultTable& rows);
ResultTable read_csv(std::istream& in);

// Mean and standard deviation of epsilon per (ordering, O, M_l, M_s).
struct CurvePoint {
  std::string ordering;
  std::size_t order = 0;
  std::size_t m_l = 0;
  std::size_t m_s = 0;
  std::size_t trials = 0;
  double mean = 0.0;
  double stddev = 0.0;
  bool all_converged = true;
};

std::vector<CurvePoint> summarize_curves(const ResultTable& rows);

// gnuplot script drawing mean epsilon with one-standard-deviation bars
// against M_l (or M_s when every M_l is equal) from a summary CSV.
void write_gnuplot_script(std::ostream& out, const std::vector<CurvePoint>& curves,
                          const std::string& summary_path);
void write_summary_csv(std::ostream& out, const std::vector<CurvePoint>& curves);

// base ^ fnv1a("kind|label|m_l|trial"); every stochastic step of a run draws
// its seed from here.
std::uint64_t trial_seed(std::uint64_t base, ExperimentKind kind, const std::string& label,
                         std::size_t m_l, std::size_t trial);

}  // namespace arorder

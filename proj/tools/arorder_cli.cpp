// Command-line front end: every pipeline step as a subcommand, plus
// config-driven experiment runs.

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "arorder/armodel.hpp"
#include "arorder/error.hpp"
#include "arorder/gibbs.hpp"
#include "arorder/graph.hpp"
#include "arorder/harness.hpp"
#include "arorder/io.hpp"
#include "arorder/ising.hpp"
#include "arorder/learn.hpp"
#include "arorder/metrics.hpp"
#include "arorder/ordering.hpp"

using namespace arorder;
using nlohmann::json;

namespace {

// Writes to `path`, or stdout when the path is empty or "-".
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("io", "cannot write '" + path + "'");
  fn(out);
  if (!out) throw Error("io", "failed writing '" + path + "'");
}

CouplingLaw law_from(const std::string& name) {
  if (name == "pm_one") return CouplingLaw::pm_one;
  if (name == "uniform_unit") return CouplingLaw::uniform_unit;
  if (name == "dwave_range") return CouplingLaw::dwave_range;
  throw invalid_argument("unknown coupling law '" + name + "'");
}

Ordering identity_ordering(std::size_t n) {
  std::vector<NodeId> ids(n);
  for (NodeId v = 0; v < n; ++v) ids[v] = v;
  return Ordering(std::move(ids));
}

std::size_t lattice_side_of(std::size_t n) {
  const auto l = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  if (l * l != n) throw invalid_argument("this ordering kind needs a square lattice");
  return l;
}

struct OrderingArgs {
  std::string file;
  std::string kind;
  std::uint64_t seed = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--ordering", file, "Ordering file (0-based ids)");
    cmd->add_option("--ordering-kind", kind, "sequential | checkerboard | diagonal | random");
    cmd->add_option("--ordering-seed", seed, "Seed for random orderings");
  }

  Ordering resolve(std::size_t n) const {
    if (!file.empty()) return load_ordering(file, n);
    if (kind == "sequential") return identity_ordering(n);
    if (kind == "random") return random_ordering(n, seed);
    if (kind == "checkerboard") return checkerboard(lattice_side_of(n));
    if (kind == "diagonal") return diagonal(lattice_side_of(n));
    throw invalid_argument("give --ordering FILE or --ordering-kind KIND");
  }
};

json moments_json(const MomentSummary& m) {
  json mean = json::array();
  for (Eigen::Index i = 0; i < m.mean.size(); ++i) mean.push_back(m.mean(i));
  json cov = json::array();
  for (Eigen::Index i = 0; i < m.covariance.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.covariance.cols(); ++j) row.push_back(m.covariance(i, j));
    cov.push_back(std::move(row));
  }
  return {{"mean", std::move(mean)}, {"covariance", std::move(cov)}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Autoregressive Ising decompositions: build, learn, sample, compare orderings"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::size_t threads = 0;
  double tol = -1.0, lambda = -1.0, edge_threshold = -1.0;
  app.add_option("--seed", seed, "Base seed for stochastic steps");
  app.add_option("--threads", threads, "Worker threads for experiment runs");
  app.add_option("--tol", tol, "GRISE gradient tolerance");
  app.add_option("--lambda", lambda, "RISE l1 penalty (default sqrt(ln(20 n^2)/m))");
  app.add_option("--edge-threshold", edge_threshold, "RISE edge threshold");

  std::string out_path;
  auto add_out = [&](CLI::App* cmd) { cmd->add_option("-o,--output", out_path, "Output file (default stdout)"); };

  // lattice
  std::size_t side = 0;
  auto* lattice = app.add_subcommand("lattice", "Write the L x L grid graph");
  lattice->add_option("--side", side, "Lattice side L")->required();
  add_out(lattice);

  // gen-model
  std::string graph_path, model_kind = "ferromagnet", law = "pm_one";
  auto* gen_model = app.add_subcommand("gen-model", "Create an Ising model on a graph");
  gen_model->add_option("--graph", graph_path, "Graph file");
  gen_model->add_option("--side", side, "Use the L x L lattice instead of a graph file");
  gen_model->add_option("--kind", model_kind, "ferromagnet | spin_glass")->check(CLI::IsMember({"ferromagnet", "spin_glass"}));
  gen_model->add_option("--law", law, "pm_one | uniform_unit | dwave_range");
  add_out(gen_model);

  // enumerate
  std::string model_path;
  std::size_t cap = kDefaultEnumerationCap;
  bool with_probs = false;
  auto* enumerate = app.add_subcommand("enumerate", "Exact log Z and moments by enumeration");
  enumerate->add_option("--model", model_path, "Model JSON")->required();
  enumerate->add_option("--cap", cap, "Largest enumerable node count");
  enumerate->add_flag("--probabilities", with_probs, "Include the full probability table");
  add_out(enumerate);

  // sample-exact
  std::size_t count = 0;
  std::string format = "raw";
  bool dedupe = false;
  auto* sample_exact_cmd = app.add_subcommand("sample-exact", "I.i.d. samples from an enumerated model");
  sample_exact_cmd->add_option("--model", model_path, "Model JSON")->required();
  sample_exact_cmd->add_option("--count", count, "Number of samples")->required();
  sample_exact_cmd->add_option("--format", format, "raw | counted");
  sample_exact_cmd->add_flag("--dedupe", dedupe, "Merge identical rows (counted format)");
  add_out(sample_exact_cmd);

  // gibbs
  std::size_t sweeps = 0, burn_in = kDefaultBurnIn;
  bool two_chain = false;
  std::string init = "plus";
  auto* gibbs = app.add_subcommand("gibbs", "Heat-bath Gibbs samples");
  gibbs->add_option("--model", model_path, "Model JSON")->required();
  gibbs->add_option("--count", sweeps, "Recorded sweeps (total samples with --two-chain)")->required();
  gibbs->add_option("--burn-in", burn_in, "Discarded sweeps per chain");
  gibbs->add_flag("--two-chain", two_chain, "All +1 and all -1 chains, equal halves");
  gibbs->add_option("--init", init, "plus | minus (single chain)")->check(CLI::IsMember({"plus", "minus"}));
  gibbs->add_option("--format", format, "raw | counted");
  add_out(gibbs);

  // learn-structure
  std::string samples_path;
  auto* learn_structure = app.add_subcommand("learn-structure", "RISE structure learning");
  learn_structure->add_option("--samples", samples_path, "Sample file")->required();
  learn_structure->add_option("--format", format, "raw | counted");
  add_out(learn_structure);

  // ordering
  OrderingArgs ord;
  std::size_t n_nodes = 0;
  auto* ordering_cmd = app.add_subcommand("ordering", "Write a traversal ordering");
  ordering_cmd->add_option("--kind", ord.kind, "sequential | checkerboard | diagonal | random")->required();
  ordering_cmd->add_option("--side", side, "Lattice side (lattice orderings)");
  ordering_cmd->add_option("--n", n_nodes, "Node count (random/sequential on general graphs)");
  ordering_cmd->add_option("--ordering-seed", ord.seed, "Seed for random orderings");
  add_out(ordering_cmd);

  // parents
  auto* parents_cmd = app.add_subcommand("parents", "Parent sets of an ordering on a graph");
  parents_cmd->add_option("--graph", graph_path, "Graph file")->required();
  ord.attach(parents_cmd);
  add_out(parents_cmd);

  // profile
  auto* profile_cmd = app.add_subcommand("profile", "Complexity profile (d, K) of an ordering");
  profile_cmd->add_option("--graph", graph_path, "Graph file")->required();
  ord.attach(profile_cmd);
  std::vector<std::string> compare_with;
  profile_cmd->add_option("--compare", compare_with, "Other ordering files to rank against");
  add_out(profile_cmd);

  // fit
  std::size_t order = 2;
  std::size_t max_iter = FitOptions{}.max_iterations;
  auto* fit_cmd = app.add_subcommand("fit", "Fit an autoregressive model with GRISE");
  fit_cmd->add_option("--graph", graph_path, "Graph file")->required();
  ord.attach(fit_cmd);
  fit_cmd->add_option("--order", order, "Conditional order O")->required();
  fit_cmd->add_option("--samples", samples_path, "Training samples");
  fit_cmd->add_option("--format", format, "raw | counted");
  fit_cmd->add_option("--model", model_path, "Learn from the exact distribution of this model");
  fit_cmd->add_option("--max-iter", max_iter, "Newton iteration limit per node");
  add_out(fit_cmd);

  // sample-ar
  std::string ar_path;
  auto* sample_ar = app.add_subcommand("sample-ar", "Ancestral samples from a fitted model");
  sample_ar->add_option("--ar", ar_path, "AR model JSON")->required();
  sample_ar->add_option("--count", count, "Number of samples")->required();
  sample_ar->add_option("--format", format, "raw | counted");
  add_out(sample_ar);

  // eval
  std::string reference_path, reference_format = "raw";
  auto* eval = app.add_subcommand("eval", "Sampling error between samples and a reference");
  eval->add_option("--samples", samples_path, "Generated samples")->required();
  eval->add_option("--format", format, "raw | counted");
  eval->add_option("--reference", reference_path, "Reference sample file");
  eval->add_option("--reference-format", reference_format, "raw | counted");
  eval->add_option("--model", model_path, "Use exact moments of this model as reference");

  // run
  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment from a JSON config and write CSV");
  run->add_option("--config", config_path, "Experiment config JSON")->required();
  add_out(run);

  // plot
  std::string results_path, summary_path = "summary.csv";
  auto* plot = app.add_subcommand("plot", "Summary CSV and gnuplot script for a results CSV");
  plot->add_option("--results", results_path, "Results CSV from 'run'")->required();
  plot->add_option("--summary", summary_path, "Summary CSV to write");
  add_out(plot);

  CLI11_PARSE(app, argc, argv);

  try {
    RiseOptions rise_opts;
    if (lambda >= 0.0) rise_opts.lambda = lambda;
    if (edge_threshold > 0.0) rise_opts.edge_threshold = edge_threshold;
    FitOptions fit_opts;
    if (tol > 0.0) fit_opts.tolerance = tol;
    fit_opts.max_iterations = max_iter;

    if (*lattice) {
      const Graph g = build_lattice(side);
      with_output(out_path, [&](std::ostream& o) { write_graph(o, g); });
    } else if (*gen_model) {
      const Graph g = side ? build_lattice(side) : load_graph(graph_path);
      const IsingModel m = model_kind == "ferromagnet" ? make_ferromagnet(g)
                                                       : make_spin_glass(g, seed, law_from(law));
      with_output(out_path, [&](std::ostream& o) { write_model(o, m); });
    } else if (*enumerate) {
      const ExactDistribution d = enumerate_distribution(load_model(model_path), cap);
      json doc = moments_json(exact_moments(d));
      doc["n"] = d.num_nodes();
      doc["log_z"] = d.log_z();
      if (with_probs) doc["probabilities"] = d.probabilities();
      with_output(out_path, [&](std::ostream& o) { o << doc.dump(1) << '\n'; });
    } else if (*sample_exact_cmd) {
      const ExactDistribution d = enumerate_distribution(load_model(model_path));
      SampleSet s = sample_exact(d, count, seed);
      if (dedupe) s = deduplicate(s);
      with_output(out_path, [&](std::ostream& o) { write_samples(o, s, parse_sample_format(format)); });
    } else if (*gibbs) {
      const IsingModel m = load_model(model_path);
      const SampleSet s =
          two_chain ? two_chain_ferro(m, sweeps, burn_in, seed)
                    : gibbs_chain(m, Configuration(m.num_nodes(), init == "plus" ? 1 : -1),
                                  sweeps, burn_in, seed);
      with_output(out_path, [&](std::ostream& o) { write_samples(o, s, parse_sample_format(format)); });
    } else if (*learn_structure) {
      const SampleSet s = load_samples(samples_path, parse_sample_format(format));
      const RiseResult r = rise_learn_structure(s, rise_opts);
      std::cerr << "lambda " << r.lambda << ", " << r.graph.num_edges() << " edges"
                << (r.converged() ? "" : " (some nodes did not converge)") << '\n';
      with_output(out_path, [&](std::ostream& o) { write_graph(o, r.graph); });
    } else if (*ordering_cmd) {
      Ordering sigma;
      if (ord.kind == "random") {
        sigma = random_ordering(n_nodes ? n_nodes : side * side, ord.seed);
      } else if (ord.kind == "sequential") {
        sigma = n_nodes ? identity_ordering(n_nodes) : sequential(side);
      } else if (ord.kind == "checkerboard") {
        sigma = checkerboard(side);
      } else if (ord.kind == "diagonal") {
        sigma = diagonal(side);
      } else {
        throw invalid_argument("unknown ordering kind '" + ord.kind + "'");
      }
      with_output(out_path, [&](std::ostream& o) { write_ordering(o, sigma); });
    } else if (*parents_cmd) {
      const Graph g = load_graph(graph_path);
      const ParentSets par = parent_sets(g, ord.resolve(g.num_nodes()));
      with_output(out_path, [&](std::ostream& o) {
        for (std::size_t k = 0; k < g.num_nodes(); ++k) {
          const NodeId v = par.ordering()[k];
          o << v << ':';
          for (NodeId p : par[v]) o << ' ' << p;
          o << '\n';
        }
      });
    } else if (*profile_cmd) {
      const Graph g = load_graph(graph_path);
      const ComplexityProfile base = complexity_profile(g, ord.resolve(g.num_nodes()));
      auto describe = [](const ComplexityProfile& p) {
        json hist = json::object();
        for (auto [card, cnt] : p.histogram) hist[std::to_string(card)] = cnt;
        return json{{"d", p.max_cardinality}, {"K", p.max_count}, {"histogram", hist}};
      };
      json doc = describe(base);
      if (!compare_with.empty()) {
        json cmp = json::array();
        for (const auto& path : compare_with) {
          const ComplexityProfile other = complexity_profile(g, load_ordering(path, g.num_nodes()));
          const Preference pref = compare_profiles(base, other);
          json entry = describe(other);
          entry["ordering"] = path;
          entry["preference"] = pref == Preference::prefer_a   ? "prefer_this"
                                : pref == Preference::prefer_b ? "prefer_other"
                                                               : "tie";
          cmp.push_back(std::move(entry));
        }
        doc["comparisons"] = std::move(cmp);
      }
      with_output(out_path, [&](std::ostream& o) { o << doc.dump(1) << '\n'; });
    } else if (*fit_cmd) {
      const Graph g = load_graph(graph_path);
      const Ordering sigma = ord.resolve(g.num_nodes());
      ARFit fit = [&] {
        if (!model_path.empty()) {
          const ExactDistribution d = enumerate_distribution(load_model(model_path));
          if (d.num_nodes() != g.num_nodes()) throw invalid_argument("model and graph sizes differ");
          return fit_ar_model(g, sigma, order, std::cref(d), fit_opts);
        }
        if (samples_path.empty()) throw invalid_argument("give --samples or --model");
        const SampleSet s = load_samples(samples_path, parse_sample_format(format), g.num_nodes());
        return fit_ar_model(g, sigma, order, std::cref(s), fit_opts);
      }();
      fit.require_converged();
      with_output(out_path, [&](std::ostream& o) { write_ar_model(o, fit.model); });
    } else if (*sample_ar) {
      const ARModel ar = load_ar_model(ar_path);
      const SampleSet s = ancestral_sample(ar, count, seed);
      with_output(out_path, [&](std::ostream& o) { write_samples(o, s, parse_sample_format(format)); });
    } else if (*eval) {
      const SampleSet s = load_samples(samples_path, parse_sample_format(format));
      MomentSummary reference;
      if (!model_path.empty()) {
        reference = exact_moments(enumerate_distribution(load_model(model_path)));
      } else if (!reference_path.empty()) {
        reference = empirical_moments(
            load_samples(reference_path, parse_sample_format(reference_format)));
      } else {
        throw invalid_argument("give --reference or --model");
      }
      std::printf("%.12e\n", sampling_error(empirical_moments(s), reference));
    } else if (*run) {
      ExperimentConfig cfg = load_config(config_path);
      if (app.count("--seed")) cfg.seed = seed;
      if (threads) cfg.threads = threads;
      if (tol > 0.0) cfg.fit.tolerance = tol;
      if (lambda >= 0.0) cfg.rise.lambda = lambda;
      if (edge_threshold > 0.0) cfg.rise.edge_threshold = edge_threshold;
      if (!out_path.empty()) cfg.output = out_path;
      const ResultTable rows = run_experiment(cfg);
      with_output(cfg.output, [&](std::ostream& o) { write_csv(o, rows); });
    } else if (*plot) {
      std::ifstream in(results_path);
      if (!in) throw Error("io", "cannot open '" + results_path + "'");
      const auto curves = summarize_curves(read_csv(in));
      with_output(summary_path, [&](std::ostream& o) { write_summary_csv(o, curves); });
      with_output(out_path, [&](std::ostream& o) { write_gnuplot_script(o, curves, summary_path); });
    }
  } catch (const Error& e) {
    std::cerr << json{{"error", e.code()}, {"message", e.what()}}.dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "internal"}, {"message", e.what()}}.dump() << '\n';
    return 3;
  }
  return 0;
}

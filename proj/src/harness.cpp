#include "arorder/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "arorder/armodel.hpp"
#include "arorder/error.hpp"
#include "arorder/gibbs.hpp"
#include "arorder/io.hpp"
#include "arorder/rng.hpp"

namespace arorder {

using nlohmann::json;

namespace {

Error config_error(const std::string& message) { return Error("config", message); }

CouplingLaw parse_law(const std::string& name) {
  if (name == "pm_one") return CouplingLaw::pm_one;
  if (name == "uniform_unit") return CouplingLaw::uniform_unit;
  if (name == "dwave_range") return CouplingLaw::dwave_range;
  throw config_error("unknown coupling law '" + name + "'");
}

template <typename T>
void read_if(const json& doc, const char* key, T& out) {
  if (doc.contains(key) && !doc.at(key).is_null()) out = doc.at(key).get<T>();
}

void require_positive(const std::vector<std::size_t>& values, const char* what) {
  if (values.empty()) throw config_error(std::string(what) + " must not be empty");
  for (std::size_t v : values) {
    if (v == 0) throw config_error(std::string(what) + " entries must be positive");
  }
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::sample_learning: return "sample_learning";
    case ExperimentKind::exact_learning: return "exact_learning";
    case ExperimentKind::gibbs_learning: return "gibbs_learning";
    case ExperimentKind::dataset: return "dataset";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  for (auto k : {ExperimentKind::sample_learning, ExperimentKind::exact_learning,
                 ExperimentKind::gibbs_learning, ExperimentKind::dataset}) {
    if (to_string(k) == name) return k;
  }
  throw config_error("unknown experiment '" + name + "'");
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  try {
    const json doc = json::parse(in);
    cfg.kind = parse_experiment_kind(doc.at("experiment").get<std::string>());
    read_if(doc, "lattice_side", cfg.lattice_side);
    read_if(doc, "graph_file", cfg.graph_file);
    if (doc.contains("model")) {
      const auto& m = doc.at("model");
      read_if(m, "kind", cfg.model.kind);
      if (m.contains("law")) cfg.model.law = parse_law(m.at("law").get<std::string>());
      read_if(m, "seed", cfg.model.seed);
      read_if(m, "path", cfg.model.path);
    }
    if (doc.contains("orderings")) {
      for (const auto& o : doc.at("orderings")) {
        if (o.is_string()) {
          cfg.orderings.push_back({o.get<std::string>(), ""});
        } else {
          cfg.orderings.push_back({o.at("name").get<std::string>(), o.at("file").get<std::string>()});
        }
      }
    }
    read_if(doc, "orders", cfg.orders);
    read_if(doc, "m_l", cfg.m_l);
    read_if(doc, "m_s", cfg.m_s);
    read_if(doc, "trials", cfg.trials);
    read_if(doc, "seed", cfg.seed);
    read_if(doc, "tolerance", cfg.fit.tolerance);
    read_if(doc, "max_iterations", cfg.fit.max_iterations);
    read_if(doc, "lambda", cfg.rise.lambda);
    read_if(doc, "edge_threshold", cfg.rise.edge_threshold);
    read_if(doc, "rise_tolerance", cfg.rise.tolerance);
    read_if(doc, "rise_max_iterations", cfg.rise.max_iterations);
    read_if(doc, "true_graph", cfg.true_graph);
    read_if(doc, "burn_in", cfg.burn_in);
    read_if(doc, "reference", cfg.reference);
    read_if(doc, "reference_samples", cfg.reference_samples);
    read_if(doc, "dataset", cfg.dataset);
    read_if(doc, "dataset_format", cfg.dataset_format);
    read_if(doc, "enumeration_cap", cfg.enumeration_cap);
    read_if(doc, "threads", cfg.threads);
    read_if(doc, "output", cfg.output);
  } catch (const json::exception& e) {
    throw config_error(std::string("bad configuration: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("io", "cannot open '" + path + "'");
  return parse_config(in);
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.trials == 0) throw config_error("trials must be >= 1");
  require_positive(cfg.orders, "orders");
  require_positive(cfg.m_s, "m_s");
  if (cfg.kind == ExperimentKind::sample_learning || cfg.kind == ExperimentKind::gibbs_learning) {
    require_positive(cfg.m_l, "m_l");
  }
  if (cfg.orderings.empty()) throw config_error("at least one ordering is required");
  for (const auto& o : cfg.orderings) {
    if (o.name.empty() || o.name == "baseline") {
      throw config_error("ordering names must be non-empty and not 'baseline'");
    }
  }
  if (cfg.kind == ExperimentKind::dataset) {
    if (cfg.dataset.empty()) throw config_error("dataset experiments need a 'dataset' file");
  } else if (cfg.model.kind == "file") {
    if (cfg.model.path.empty()) throw config_error("model kind 'file' needs a 'path'");
  } else if (cfg.lattice_side == 0 && cfg.graph_file.empty()) {
    throw config_error("either lattice_side or graph_file is required");
  }
  if (cfg.model.kind != "ferromagnet" && cfg.model.kind != "spin_glass" &&
      cfg.model.kind != "file") {
    throw config_error("unknown model kind '" + cfg.model.kind + "'");
  }
  if (cfg.kind == ExperimentKind::gibbs_learning) {
    if (cfg.reference != "auto" && cfg.reference != "exact" && cfg.reference != "gibbs") {
      throw config_error("reference must be auto, exact or gibbs");
    }
    for (std::size_t m : cfg.m_l) {
      if (m % 2 != 0) throw config_error("two-chain training sizes must be even");
    }
    if (cfg.reference_samples == 0 || cfg.reference_samples % 2 != 0) {
      throw config_error("reference_samples must be positive and even");
    }
  }
  if (cfg.rise.edge_threshold <= 0.0) throw config_error("edge_threshold must be positive");
  if (cfg.fit.tolerance <= 0.0) throw config_error("tolerance must be positive");
}

std::uint64_t trial_seed(std::uint64_t base, ExperimentKind kind, const std::string& label,
                         std::size_t m_l, std::size_t trial) {
  const std::string key = to_string(kind) + "|" + label + "|" + std::to_string(m_l) + "|" +
                          std::to_string(trial);
  return base ^ fnv1a(key);
}

namespace {

using Job = std::function<ResultTable()>;

// Runs jobs on a small pool; results are concatenated in job order and the
// first failure (by job index) is rethrown.
ResultTable run_jobs(const std::vector<Job>& jobs, std::size_t threads) {
  std::vector<ResultTable> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        results[j] = jobs[j]();
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  };
  const std::size_t count = std::max<std::size_t>(1, std::min(threads, jobs.size()));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  ResultTable out;
  for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
  return out;
}

void sort_rows(ResultTable& rows, const ExperimentConfig& cfg) {
  auto rank = [&](const std::string& name) {
    for (std::size_t k = 0; k < cfg.orderings.size(); ++k) {
      if (cfg.orderings[k].name == name) return k;
    }
    return cfg.orderings.size();
  };
  std::stable_sort(rows.begin(), rows.end(), [&](const ResultRow& a, const ResultRow& b) {
    return std::make_tuple(rank(a.ordering), a.order, a.m_l, a.m_s, a.trial) <
           std::make_tuple(rank(b.ordering), b.order, b.m_l, b.m_s, b.trial);
  });
}

Graph base_graph(const ExperimentConfig& cfg) {
  if (cfg.model.kind == "file") return load_model(cfg.model.path).graph();
  if (!cfg.graph_file.empty()) return load_graph(cfg.graph_file);
  return build_lattice(cfg.lattice_side);
}

IsingModel make_model(const ExperimentConfig& cfg, const Graph& g, std::uint64_t seed) {
  if (cfg.model.kind == "ferromagnet") return make_ferromagnet(g);
  if (cfg.model.kind == "spin_glass") return make_spin_glass(g, seed, cfg.model.law);
  return load_model(cfg.model.path);
}

Ordering resolve_ordering(const ExperimentConfig& cfg, const OrderingSpec& spec, std::size_t n) {
  if (!spec.file.empty()) return load_ordering(spec.file, n);
  if (spec.name == "sequential") {
    std::vector<NodeId> ids(n);
    for (NodeId v = 0; v < n; ++v) ids[v] = v;
    return Ordering(std::move(ids));
  }
  if (spec.name.rfind("random:", 0) == 0) {
    std::uint64_t seed = 0;
    try {
      seed = std::stoull(spec.name.substr(7));
    } catch (const std::exception&) {
      throw config_error("bad random ordering '" + spec.name + "'");
    }
    return random_ordering(n, seed);
  }
  if (spec.name == "checkerboard" || spec.name == "diagonal") {
    if (cfg.lattice_side == 0 || cfg.lattice_side * cfg.lattice_side != n) {
      throw config_error("ordering '" + spec.name + "' needs a square lattice");
    }
    return spec.name == "checkerboard" ? checkerboard(cfg.lattice_side)
                                       : diagonal(cfg.lattice_side);
  }
  throw config_error("unknown ordering '" + spec.name + "' (give a file for custom orderings)");
}

std::vector<Ordering> resolve_orderings(const ExperimentConfig& cfg, std::size_t n) {
  std::vector<Ordering> out;
  for (const auto& spec : cfg.orderings) out.push_back(resolve_ordering(cfg, spec, n));
  return out;
}

std::string sampling_label(const std::string& ordering, std::size_t order, std::size_t m_s) {
  return ordering + "/O" + std::to_string(order) + "/Ms" + std::to_string(m_s);
}

struct LearnedStructure {
  Graph graph;
  bool converged = true;
};

LearnedStructure learn_structure(const ExperimentConfig& cfg, const SampleSet& data,
                                 const Graph& truth) {
  if (cfg.true_graph) return {truth, true};
  RiseResult rise = rise_learn_structure(data, cfg.rise);
  return {std::move(rise.graph), rise.converged()};
}

// For every ordering and order: fit on `source` over `graph`, then sample
// each M_s once with seeds derived from (label, m_l, trial).
void fit_and_score(const ExperimentConfig& cfg, const std::vector<Ordering>& orderings,
                   const Graph& graph, const DataSource& source, const MomentSummary& reference,
                   std::size_t m_l, std::size_t trial, bool structure_converged,
                   ResultTable& rows) {
  for (std::size_t k = 0; k < orderings.size(); ++k) {
    for (std::size_t order : cfg.orders) {
      const ARFit fit = fit_ar_model(graph, orderings[k], order, source, cfg.fit);
      for (std::size_t m_s : cfg.m_s) {
        const auto seed = trial_seed(cfg.seed, cfg.kind,
                                     sampling_label(cfg.orderings[k].name, order, m_s), m_l, trial);
        const SampleSet generated = ancestral_sample(fit.model, m_s, seed);
        rows.push_back({to_string(cfg.kind), cfg.orderings[k].name, order, m_l, m_s, trial,
                        sampling_error(empirical_moments(generated), reference),
                        structure_converged && fit.converged()});
      }
    }
  }
}

}  // namespace

ResultTable run_sample_learning(const ExperimentConfig& cfg) {
  validate(cfg);
  const Graph g = base_graph(cfg);
  const std::vector<Ordering> orderings = resolve_orderings(cfg, g.num_nodes());
  const bool fresh_instances = cfg.model.kind == "spin_glass";

  // A fixed model is enumerated once and shared read-only by all trials.
  std::shared_ptr<const ExactDistribution> shared;
  std::shared_ptr<const MomentSummary> shared_moments;
  if (!fresh_instances) {
    shared = std::make_shared<const ExactDistribution>(
        enumerate_distribution(make_model(cfg, g, cfg.model.seed), cfg.enumeration_cap));
    shared_moments = std::make_shared<const MomentSummary>(exact_moments(*shared));
  }

  std::vector<Job> jobs;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    jobs.push_back([&, t]() {
      std::shared_ptr<const ExactDistribution> dist = shared;
      std::shared_ptr<const MomentSummary> moments = shared_moments;
      if (fresh_instances) {
        const auto model_seed = trial_seed(cfg.model.seed, cfg.kind, "model", 0, t);
        dist = std::make_shared<const ExactDistribution>(
            enumerate_distribution(make_model(cfg, g, model_seed), cfg.enumeration_cap));
        moments = std::make_shared<const MomentSummary>(exact_moments(*dist));
      }
      ResultTable rows;
      for (std::size_t m_l : cfg.m_l) {
        const SampleSet data =
            sample_exact(*dist, m_l, trial_seed(cfg.seed, cfg.kind, "data", m_l, t));
        const LearnedStructure learned = learn_structure(cfg, data, dist->model().graph());
        fit_and_score(cfg, orderings, learned.graph, std::cref(data), *moments, m_l, t,
                      learned.converged, rows);
      }
      for (std::size_t m_s : cfg.m_s) {
        const SampleSet s = sample_exact(*dist, m_s,
                                         trial_seed(cfg.seed, cfg.kind, "baseline/Ms" +
                                                    std::to_string(m_s), 0, t));
        rows.push_back({to_string(cfg.kind), "baseline", 0, 0, m_s, t,
                        sampling_error(empirical_moments(s), *moments), true});
      }
      return rows;
    });
  }
  ResultTable rows = run_jobs(jobs, cfg.threads);
  sort_rows(rows, cfg);
  return rows;
}

ResultTable run_exact_learning(const ExperimentConfig& cfg) {
  validate(cfg);
  const Graph g = base_graph(cfg);
  const std::vector<Ordering> orderings = resolve_orderings(cfg, g.num_nodes());
  const ExactDistribution dist =
      enumerate_distribution(make_model(cfg, g, cfg.model.seed), cfg.enumeration_cap);
  const MomentSummary moments = exact_moments(dist);
  const Graph& graph = dist.model().graph();

  // Fits are deterministic; do them once, then fan out the sampling trials.
  struct Fitted {
    std::size_t ordering;
    std::size_t order;
    ARFit fit;
  };
  std::vector<Fitted> fits;
  for (std::size_t k = 0; k < orderings.size(); ++k) {
    for (std::size_t order : cfg.orders) {
      fits.push_back({k, order, fit_ar_model(graph, orderings[k], order, std::cref(dist), cfg.fit)});
    }
  }

  std::vector<Job> jobs;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    jobs.push_back([&, t]() {
      ResultTable rows;
      for (const auto& f : fits) {
        const std::string& name = cfg.orderings[f.ordering].name;
        for (std::size_t m_s : cfg.m_s) {
          const auto seed =
              trial_seed(cfg.seed, cfg.kind, sampling_label(name, f.order, m_s), 0, t);
          const SampleSet s = ancestral_sample(f.fit.model, m_s, seed);
          rows.push_back({to_string(cfg.kind), name, f.order, 0, m_s, t,
                          sampling_error(empirical_moments(s), moments), f.fit.converged()});
        }
      }
      for (std::size_t m_s : cfg.m_s) {
        const SampleSet s = sample_exact(
            dist, m_s, trial_seed(cfg.seed, cfg.kind, "baseline/Ms" + std::to_string(m_s), 0, t));
        rows.push_back({to_string(cfg.kind), "baseline", 0, 0, m_s, t,
                        sampling_error(empirical_moments(s), moments), true});
      }
      return rows;
    });
  }
  ResultTable rows = run_jobs(jobs, cfg.threads);
  sort_rows(rows, cfg);
  return rows;
}

ResultTable run_gibbs_learning(const ExperimentConfig& cfg) {
  validate(cfg);
  const Graph g = base_graph(cfg);
  const IsingModel model = make_model(cfg, g, cfg.model.seed);
  if (!is_ferromagnet(model)) {
    throw config_error("the two-chain Gibbs protocol needs a zero-field ferromagnet");
  }
  const std::vector<Ordering> orderings = resolve_orderings(cfg, g.num_nodes());

  const bool exact_reference =
      cfg.reference == "exact" ||
      (cfg.reference == "auto" && model.num_nodes() <= std::min<std::size_t>(cfg.enumeration_cap, 24));
  std::unique_ptr<ExactDistribution> dist;
  MomentSummary reference;
  if (exact_reference) {
    dist = std::make_unique<ExactDistribution>(enumerate_distribution(model, cfg.enumeration_cap));
    reference = exact_moments(*dist);
  } else {
    reference = empirical_moments(two_chain_ferro(
        model, cfg.reference_samples, cfg.burn_in,
        trial_seed(cfg.seed, cfg.kind, "reference", 0, 0)));
    // p(x) = p(-x) here. Averaging over the global flip removes the bias a
    // chain picks up when it tunnels to the other mode, which does happen on
    // small lattices.
    reference.covariance += reference.mean * reference.mean.transpose();
    reference.mean.setZero();
  }

  std::vector<Job> jobs;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    jobs.push_back([&, t]() {
      ResultTable rows;
      for (std::size_t m_l : cfg.m_l) {
        const SampleSet data = two_chain_ferro(model, m_l, cfg.burn_in,
                                               trial_seed(cfg.seed, cfg.kind, "data", m_l, t));
        const LearnedStructure learned = learn_structure(cfg, data, model.graph());
        fit_and_score(cfg, orderings, learned.graph, std::cref(data), reference, m_l, t,
                      learned.converged, rows);
      }
      for (std::size_t m_s : cfg.m_s) {
        const auto seed = trial_seed(cfg.seed, cfg.kind, "baseline/Ms" + std::to_string(m_s), 0, t);
        // Odd M_s cannot be split over two chains; round up by one.
        const SampleSet s = dist ? sample_exact(*dist, m_s, seed)
                                 : two_chain_ferro(model, m_s + m_s % 2, cfg.burn_in, seed);
        rows.push_back({to_string(cfg.kind), "baseline", 0, 0, m_s, t,
                        sampling_error(empirical_moments(s), reference), true});
      }
      return rows;
    });
  }
  ResultTable rows = run_jobs(jobs, cfg.threads);
  sort_rows(rows, cfg);
  return rows;
}

ResultTable run_dataset(const ExperimentConfig& cfg) {
  validate(cfg);
  const SampleSet data = load_samples(cfg.dataset, parse_sample_format(cfg.dataset_format));
  if (data.empty()) throw Error("parse", "dataset '" + cfg.dataset + "' has no samples");
  const std::size_t n = data.num_nodes();
  const MomentSummary reference = empirical_moments(data);
  const auto m_l = static_cast<std::size_t>(std::llround(data.total_weight()));

  Graph graph;
  bool structure_converged = true;
  if (cfg.true_graph) {
    if (cfg.graph_file.empty()) throw config_error("true_graph with a dataset needs graph_file");
    graph = load_graph(cfg.graph_file);
    if (graph.num_nodes() != n) throw config_error("graph_file size does not match the dataset");
  } else {
    RiseResult rise = rise_learn_structure(data, cfg.rise);
    structure_converged = rise.converged();
    graph = std::move(rise.graph);
  }
  const std::vector<Ordering> orderings = resolve_orderings(cfg, n);

  struct Fitted {
    std::size_t ordering;
    std::size_t order;
    ARFit fit;
  };
  std::vector<Fitted> fits;
  for (std::size_t k = 0; k < orderings.size(); ++k) {
    for (std::size_t order : cfg.orders) {
      fits.push_back({k, order, fit_ar_model(graph, orderings[k], order, std::cref(data), cfg.fit)});
    }
  }

  std::vector<Job> jobs;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    jobs.push_back([&, t]() {
      ResultTable rows;
      for (const auto& f : fits) {
        const std::string& name = cfg.orderings[f.ordering].name;
        for (std::size_t m_s : cfg.m_s) {
          const auto seed =
              trial_seed(cfg.seed, cfg.kind, sampling_label(name, f.order, m_s), m_l, t);
          const SampleSet s = ancestral_sample(f.fit.model, m_s, seed);
          rows.push_back({to_string(cfg.kind), name, f.order, m_l, m_s, t,
                          sampling_error(empirical_moments(s), reference),
                          structure_converged && f.fit.converged()});
        }
      }
      return rows;
    });
  }
  ResultTable rows = run_jobs(jobs, cfg.threads);
  sort_rows(rows, cfg);
  return rows;
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::sample_learning: return run_sample_learning(cfg);
    case ExperimentKind::exact_learning: return run_exact_learning(cfg);
    case ExperimentKind::gibbs_learning: return run_gibbs_learning(cfg);
    case ExperimentKind::dataset: return run_dataset(cfg);
  }
  throw config_error("unknown experiment kind");
}

void write_csv(std::ostream& out, const ResultTable& rows) {
  out << kCsvHeader << '\n';
  char eps[64];
  for (const auto& r : rows) {
    std::snprintf(eps, sizeof eps, "%.12e", r.epsilon);
    out << r.experiment << ',' << r.ordering << ',' << r.order << ',' << r.m_l << ','
        << r.m_s << ',' << r.trial << ',' << eps << ',' << (r.converged ? 1 : 0) << '\n';
  }
}

ResultTable read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw Error("parse", "results file must start with the header '" + std::string(kCsvHeader) + "'");
  }
  ResultTable rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8) throw Error("parse", "bad results row '" + line + "'");
    try {
      rows.push_back({cells[0], cells[1], std::stoul(cells[2]), std::stoul(cells[3]),
                      std::stoul(cells[4]), std::stoul(cells[5]), std::stod(cells[6]),
                      cells[7] == "1"});
    } catch (const std::exception&) {
      throw Error("parse", "bad results row '" + line + "'");
    }
  }
  return rows;
}

std::vector<CurvePoint> summarize_curves(const ResultTable& rows) {
  std::vector<CurvePoint> out;
  std::map<std::tuple<std::string, std::size_t, std::size_t, std::size_t>, std::size_t> slot;
  std::vector<std::vector<double>> values;
  for (const auto& r : rows) {
    const auto key = std::make_tuple(r.ordering, r.order, r.m_l, r.m_s);
    auto [it, inserted] = slot.try_emplace(key, out.size());
    if (inserted) {
      out.push_back({r.ordering, r.order, r.m_l, r.m_s, 0, 0.0, 0.0, true});
      values.emplace_back();
    }
    values[it->second].push_back(r.epsilon);
    out[it->second].all_converged = out[it->second].all_converged && r.converged;
  }
  for (std::size_t k = 0; k < out.size(); ++k) {
    const ErrorStats s = summarize(values[k]);
    out[k].trials = values[k].size();
    out[k].mean = s.mean;
    out[k].stddev = s.stddev;
  }
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<CurvePoint>& curves) {
  out << "ordering,order_O,m_l,m_s,trials,mean_epsilon,std_epsilon,all_converged\n";
  char buf[128];
  for (const auto& c : curves) {
    std::snprintf(buf, sizeof buf, "%.12e,%.12e", c.mean, c.stddev);
    out << c.ordering << ',' << c.order << ',' << c.m_l << ',' << c.m_s << ',' << c.trials
        << ',' << buf << ',' << (c.all_converged ? 1 : 0) << '\n';
  }
}

void write_gnuplot_script(std::ostream& out, const std::vector<CurvePoint>& curves,
                          const std::string& summary_path) {
  bool vary_ml = false;
  for (const auto& c : curves) {
    if (c.ordering != "baseline" && c.m_l != curves.front().m_l) vary_ml = true;
  }
  // Columns of the summary CSV: 3 = m_l, 4 = m_s, 6 = mean, 7 = std.
  const char* x_column = vary_ml ? "3" : "4";
  std::vector<std::pair<std::string, std::size_t>> series;
  for (const auto& c : curves) {
    const std::pair<std::string, std::size_t> key{c.ordering, c.order};
    if (std::find(series.begin(), series.end(), key) == series.end()) series.push_back(key);
  }
  out << "set datafile separator ','\n"
      << "set logscale xy\n"
      << "set xlabel '" << (vary_ml ? "M_l (training samples)" : "M_s (generated samples)") << "'\n"
      << "set ylabel 'sampling error'\n"
      << "set key outside\n";
  // Baseline rows do not depend on M_l; draw them as horizontal lines there.
  std::vector<std::string> plots;
  char buf[64];
  for (const auto& [name, order] : series) {
    if (vary_ml && name == "baseline") {
      for (const auto& c : curves) {
        if (c.ordering != "baseline") continue;
        std::snprintf(buf, sizeof buf, "%.12e", c.mean);
        plots.push_back(std::string(buf) + " with lines dashtype 2 title 'baseline M_s=" +
                        std::to_string(c.m_s) + "'");
      }
      continue;
    }
    plots.push_back("'" + summary_path + "' using (strcol(1) eq '" + name + "' && $2 == " +
                    std::to_string(order) + " ? $" + x_column +
                    " : 1/0):6:7 with yerrorlines title '" + name +
                    (name == "baseline" ? std::string() : " O=" + std::to_string(order)) + "'");
  }
  out << "plot \\\n";
  for (std::size_t k = 0; k < plots.size(); ++k) {
    out << "  " << plots[k] << (k + 1 == plots.size() ? "\n" : ", \\\n");
  }
}

}  // namespace arorder

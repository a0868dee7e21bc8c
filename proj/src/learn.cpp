#include "arorder/learn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "arorder/error.hpp"

namespace arorder {

namespace {

void check_parents(NodeId node, std::span<const NodeId> parents, std::size_t n) {
  if (node >= n) throw invalid_argument("node " + std::to_string(node) + " out of range");
  if (parents.size() > kMaxStatsParents) {
    throw invalid_argument("at most 24 parents are supported, got " +
                           std::to_string(parents.size()));
  }
  for (NodeId p : parents) {
    if (p == node) throw invalid_argument("parent list contains the node itself");
    if (p >= n) throw invalid_argument("parent " + std::to_string(p) + " out of range");
  }
}

SufficientStats stats_from_samples(const SampleSet& samples, NodeId node,
                                   std::span<const NodeId> parents) {
  SufficientStats st{node, {parents.begin(), parents.end()},
                     std::vector<double>(std::size_t{2} << parents.size(), 0.0), 0.0};
  const double total = samples.total_weight();
  if (!(total > 0.0)) throw invalid_argument("sample set has zero total weight");
  for (std::size_t r = 0; r < samples.size(); ++r) {
    const auto x = samples.row(r);
    std::size_t c = x[node] > 0 ? 1 : 0;
    for (std::size_t k = 0; k < parents.size(); ++k) {
      if (x[parents[k]] > 0) c |= std::size_t{2} << k;
    }
    st.table[c] += samples.weight(r);
  }
  for (double& w : st.table) w /= total;
  for (double w : st.table) st.total_weight += w;
  return st;
}

SufficientStats stats_from_exact(const ExactDistribution& d, NodeId node,
                                 std::span<const NodeId> parents) {
  std::vector<NodeId> vars{node};
  vars.insert(vars.end(), parents.begin(), parents.end());
  SufficientStats st{node, {parents.begin(), parents.end()}, marginal_table(d, vars), 0.0};
  for (double w : st.table) st.total_weight += w;
  return st;
}

// Parent patterns with positive weight, with the design matrix of basis
// monomials evaluated on them.
struct CompactStats {
  std::vector<double> w_up, w_down;
  Eigen::MatrixXd design;  // patterns x basis terms, entries +-1
};

CompactStats compact(const SufficientStats& stats, const InteractionBasis& basis) {
  if (basis.node != stats.node || basis.parents != stats.parents) {
    throw invalid_argument("basis and statistics refer to different conditionals");
  }
  CompactStats cs;
  std::vector<ParentPattern> patterns;
  const std::size_t num_patterns = stats.table.size() / 2;
  for (ParentPattern p = 0; p < num_patterns; ++p) {
    const double down = stats.table[2 * p], up = stats.table[2 * p + 1];
    if (down + up > 0.0) {
      patterns.push_back(p);
      cs.w_up.push_back(up);
      cs.w_down.push_back(down);
    }
  }
  cs.design.resize(static_cast<Eigen::Index>(patterns.size()),
                   static_cast<Eigen::Index>(basis.size()));
  for (std::size_t r = 0; r < patterns.size(); ++r) {
    const ParentPattern down = ~patterns[r];
    for (std::size_t k = 0; k < basis.size(); ++k) {
      cs.design(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) =
          (std::popcount(basis.subsets[k] & down) & 1) ? -1.0 : 1.0;
    }
  }
  return cs;
}

struct Evaluation {
  double value;
  Eigen::VectorXd gradient;
  Eigen::VectorXd curvature;  // per-pattern second derivative weights
};

double objective_at(const CompactStats& cs, const Eigen::VectorXd& theta) {
  const Eigen::VectorXd h = cs.design * theta;
  double f = 0.0;
  for (Eigen::Index r = 0; r < h.size(); ++r) {
    const auto i = static_cast<std::size_t>(r);
    if (cs.w_up[i] > 0.0) f += cs.w_up[i] * std::exp(-h(r));
    if (cs.w_down[i] > 0.0) f += cs.w_down[i] * std::exp(h(r));
  }
  return f;
}

Evaluation evaluate(const CompactStats& cs, const Eigen::VectorXd& theta) {
  const Eigen::VectorXd h = cs.design * theta;
  Evaluation ev{0.0, {}, Eigen::VectorXd(h.size())};
  Eigen::VectorXd slope(h.size());
  for (Eigen::Index r = 0; r < h.size(); ++r) {
    const auto i = static_cast<std::size_t>(r);
    const double up = cs.w_up[i] > 0.0 ? cs.w_up[i] * std::exp(-h(r)) : 0.0;
    const double down = cs.w_down[i] > 0.0 ? cs.w_down[i] * std::exp(h(r)) : 0.0;
    ev.value += up + down;
    slope(r) = down - up;
    ev.curvature(r) = up + down;
  }
  ev.gradient = cs.design.transpose() * slope;
  return ev;
}

Eigen::VectorXd to_eigen(std::span<const double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t k = 0; k < v.size(); ++k) out(static_cast<Eigen::Index>(k)) = v[k];
  return out;
}

// Bound on any single Newton step (sup-norm); keeps steps along nearly flat
// directions from overflowing the exponentials.
constexpr double kMaxStep = 8.0;

}  // namespace

SufficientStats collect_stats(const DataSource& source, NodeId node,
                              std::span<const NodeId> parents) {
  return std::visit(
      [&](const auto& ref) -> SufficientStats {
        using T = std::decay_t<decltype(ref.get())>;
        if constexpr (std::is_same_v<T, SampleSet>) {
          check_parents(node, parents, ref.get().num_nodes());
          return stats_from_samples(ref.get(), node, parents);
        } else {
          check_parents(node, parents, ref.get().num_nodes());
          return stats_from_exact(ref.get(), node, parents);
        }
      },
      source);
}

double grise_objective(const SufficientStats& stats, const InteractionBasis& basis,
                       std::span<const double> theta) {
  if (theta.size() != basis.size()) throw invalid_argument("coefficient length mismatch");
  return objective_at(compact(stats, basis), to_eigen(theta));
}

std::vector<double> grise_gradient(const SufficientStats& stats,
                                   const InteractionBasis& basis,
                                   std::span<const double> theta) {
  if (theta.size() != basis.size()) throw invalid_argument("coefficient length mismatch");
  const Eigen::VectorXd g = evaluate(compact(stats, basis), to_eigen(theta)).gradient;
  return {g.data(), g.data() + g.size()};
}

ConditionalFit grise_fit(const SufficientStats& stats, const InteractionBasis& basis,
                         const FitOptions& options, std::span<const double> start) {
  const CompactStats cs = compact(stats, basis);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(dim);
  if (!start.empty()) {
    if (start.size() != basis.size()) throw invalid_argument("start vector length mismatch");
    theta = to_eigen(start);
  }

  // The objective only sees the row space of the design matrix. With fewer
  // observed patterns than terms, Newton runs in an orthonormal basis of it.
  Eigen::MatrixXd row_basis, reduced;
  const bool use_subspace = cs.design.rows() < dim;
  if (use_subspace) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(cs.design.transpose());
    row_basis = qr.householderQ() * Eigen::MatrixXd::Identity(dim, qr.rank());
    reduced = cs.design * row_basis;
  }
  const Eigen::MatrixXd& active = use_subspace ? reduced : cs.design;

  FitReport report;
  Evaluation ev = evaluate(cs, theta);
  for (;;) {
    report.gradient_norm = dim > 0 ? ev.gradient.cwiseAbs().maxCoeff() : 0.0;
    report.objective = ev.value;
    if (report.gradient_norm <= options.tolerance) {
      report.converged = true;
      break;
    }
    if (report.iterations >= options.max_iterations) break;
    ++report.iterations;

    const Eigen::VectorXd gradient =
        use_subspace ? Eigen::VectorXd(row_basis.transpose() * ev.gradient) : ev.gradient;
    const Eigen::MatrixXd hessian =
        active.transpose() * ev.curvature.asDiagonal() * active;
    const double scale = std::max(1e-300, hessian.diagonal().maxCoeff());
    double damping = 0.0;
    Eigen::VectorXd step;
    double slope = 0.0;
    for (int attempt = 0; attempt < 40; ++attempt) {
      Eigen::MatrixXd damped = hessian;
      damped.diagonal().array() += damping;
      Eigen::LDLT<Eigen::MatrixXd> ldlt(damped);
      if (ldlt.info() == Eigen::Success) {
        step = ldlt.solve(-gradient);
        slope = gradient.dot(step);
        if (step.allFinite() && slope < 0.0) break;
      }
      damping = damping == 0.0 ? 1e-12 * scale : damping * 10.0;
      step.resize(0);
    }
    if (step.size() == 0) {
      // Fall back to steepest descent.
      step = -gradient / scale;
      slope = gradient.dot(step);
    }
    if (use_subspace) step = row_basis * step;
    const double longest = step.cwiseAbs().maxCoeff();
    if (longest > kMaxStep) {
      step *= kMaxStep / longest;
      slope *= kMaxStep / longest;
    }

    double t = 1.0;
    bool accepted = false;
    while (t > 1e-16) {
      const Eigen::VectorXd trial = theta + t * step;
      const double f = objective_at(cs, trial);
      if (std::isfinite(f) && f <= ev.value + 1e-4 * t * slope) {
        theta = trial;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) {
      // The line search cannot make progress at this precision; a point with
      // gradient this small is as good as the arithmetic allows.
      break;
    }
    ev = evaluate(cs, theta);
  }

  ConditionalFit fit{{basis, std::vector<double>(theta.data(), theta.data() + dim)}, report};
  return fit;
}

bool ARFit::converged() const {
  return std::all_of(reports.begin(), reports.end(),
                     [](const FitReport& r) { return r.converged; });
}

void ARFit::require_converged() const {
  for (NodeId v = 0; v < reports.size(); ++v) {
    if (!reports[v].converged) {
      throw Error("no_convergence",
                  "GRISE fit for node " + std::to_string(v) + " stopped after " +
                      std::to_string(reports[v].iterations) +
                      " iterations with gradient norm " +
                      std::to_string(reports[v].gradient_norm));
    }
  }
}

ARFit fit_ar_model(const Graph& g, const Ordering& sigma, std::size_t max_order,
                   const DataSource& source, const FitOptions& options) {
  if (max_order == 0) throw invalid_argument("conditional order must be >= 1");
  ParentSets parents = parent_sets(g, sigma);
  std::vector<ConditionalModel> conditionals;
  std::vector<FitReport> reports;
  conditionals.reserve(g.num_nodes());
  reports.reserve(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    const auto stats = collect_stats(source, v, parents[v]);
    const auto basis = build_basis(v, parents[v], max_order);
    auto fit = grise_fit(stats, basis, options);
    conditionals.push_back(std::move(fit.model));
    reports.push_back(fit.report);
  }
  return {ARModel(std::move(parents), std::move(conditionals)), std::move(reports)};
}

double default_rise_lambda(std::size_t n, double m) {
  const double nn = static_cast<double>(n);
  return std::sqrt(std::log(20.0 * nn * nn) / m);
}

bool RiseResult::converged() const {
  return std::all_of(reports.begin(), reports.end(),
                     [](const FitReport& r) { return r.converged; });
}

namespace {

// Coefficients are confined to this box; an unpenalized field on data that
// never shows one of the spin values would otherwise run off to infinity.
constexpr double kCoefficientCap = 25.0;

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

struct RiseProblem {
  Eigen::MatrixXd features;  // rows x n; column k is x_i x_k, column i is x_i
  Eigen::VectorXd weights;   // normalized to sum 1
  NodeId node;
  double lambda;

  double penalty(const Eigen::VectorXd& theta) const {
    return lambda * (theta.lpNorm<1>() - std::abs(theta(static_cast<Eigen::Index>(node))));
  }
  double objective(const Eigen::VectorXd& theta) const {
    const Eigen::VectorXd h = features * theta;
    return (weights.array() * (-h.array()).exp()).sum() + penalty(theta);
  }
};

// Largest entry of the minimum-norm subgradient.
double subgradient_violation(const RiseProblem& p, const Eigen::VectorXd& theta,
                             const Eigen::VectorXd& gradient) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    const double g = gradient(k);
    double v = std::abs(g);
    if (static_cast<NodeId>(k) != p.node) {
      if (theta(k) > 0.0) v = std::abs(g + p.lambda);
      else if (theta(k) < 0.0) v = std::abs(g - p.lambda);
      else v = std::max(0.0, std::abs(g) - p.lambda);
    }
    worst = std::max(worst, v);
  }
  return worst;
}

// Proximal Newton: each step minimizes the quadratic model plus the l1 term
// by cyclic coordinate descent, then backtracks on the true objective.
FitReport solve_rise_node(const RiseProblem& p, const RiseOptions& options,
                          Eigen::VectorXd& theta) {
  const Eigen::Index n = theta.size();
  const auto k_node = static_cast<Eigen::Index>(p.node);
  FitReport report;
  for (;;) {
    const Eigen::VectorXd h = p.features * theta;
    const Eigen::VectorXd r = p.weights.array() * (-h.array()).exp();
    const Eigen::VectorXd gradient = -(p.features.transpose() * r);
    report.objective = r.sum() + p.penalty(theta);
    report.gradient_norm = subgradient_violation(p, theta, gradient);
    if (report.gradient_norm <= options.tolerance) {
      report.converged = true;
      break;
    }
    if (report.iterations >= options.max_iterations) break;
    ++report.iterations;

    const Eigen::MatrixXd hessian = p.features.transpose() * r.asDiagonal() * p.features;
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n), hd = Eigen::VectorXd::Zero(n);
    for (int sweep = 0; sweep < 200; ++sweep) {
      double largest = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) {
        const double a = hessian(k, k);
        if (!(a > 0.0)) continue;
        const double b = gradient(k) + hd(k) - a * d(k);
        const double z = theta(k) - b / a;
        const double next = (k == k_node ? z : soft_threshold(z, p.lambda / a)) - theta(k);
        const double delta = next - d(k);
        if (delta != 0.0) {
          hd += delta * hessian.col(k);
          d(k) = next;
          largest = std::max(largest, std::abs(delta));
        }
      }
      if (largest <= 1e-14) break;
    }
    const double longest = d.cwiseAbs().maxCoeff();
    if (longest > 8.0) d *= 8.0 / longest;

    const double decrease = gradient.dot(d) + p.penalty(theta + d) - p.penalty(theta);
    double t = 1.0;
    bool accepted = false;
    while (t > 1e-12) {
      const Eigen::VectorXd trial =
          (theta + t * d).cwiseMax(-kCoefficientCap).cwiseMin(kCoefficientCap);
      const double f = p.objective(trial);
      if (std::isfinite(f) && f <= report.objective + 1e-4 * t * std::min(decrease, 0.0)) {
        accepted = trial != theta;
        theta = trial;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  return report;
}

}  // namespace

RiseResult rise_learn_structure(const SampleSet& raw, const RiseOptions& options) {
  if (raw.empty()) throw invalid_argument("structure learning needs at least one sample");
  const double m = raw.total_weight();
  if (!(m > 0.0)) throw invalid_argument("sample set has zero total weight");
  const SampleSet samples = deduplicate(raw);
  const std::size_t n = samples.num_nodes();
  const auto rows = static_cast<Eigen::Index>(samples.size());
  const auto nn = static_cast<Eigen::Index>(n);
  const double lambda = options.lambda >= 0.0 ? options.lambda : default_rise_lambda(n, m);

  RiseResult result;
  result.lambda = lambda;
  result.coefficients = Eigen::MatrixXd::Zero(nn, nn);
  result.reports.resize(n);

  Eigen::MatrixXd spins(rows, nn);
  Eigen::VectorXd weights(rows);
  for (Eigen::Index l = 0; l < rows; ++l) {
    const auto x = samples.row(static_cast<std::size_t>(l));
    for (Eigen::Index k = 0; k < nn; ++k) spins(l, k) = x[static_cast<std::size_t>(k)];
    weights(l) = samples.weight(static_cast<std::size_t>(l)) / m;
  }

  for (NodeId i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    RiseProblem problem{spins, weights, i, lambda};
    for (Eigen::Index k = 0; k < nn; ++k) {
      if (k != ii) problem.features.col(k).array() *= spins.col(ii).array();
    }
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(nn);
    result.reports[i] = solve_rise_node(problem, options, theta);
    result.coefficients.row(ii) = theta.transpose();
  }

  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      const double a = std::abs(result.coefficients(static_cast<Eigen::Index>(i),
                                                    static_cast<Eigen::Index>(j)));
      const double b = std::abs(result.coefficients(static_cast<Eigen::Index>(j),
                                                    static_cast<Eigen::Index>(i)));
      if (std::max(a, b) > options.edge_threshold) edges.emplace_back(i, j);
    }
  }
  result.graph = Graph(n, edges);
  return result;
}

}  // namespace arorder

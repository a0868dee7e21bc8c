#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "arorder/armodel.hpp"
#include "arorder/graph.hpp"
#include "arorder/ising.hpp"
#include "arorder/metrics.hpp"

namespace arorder {

// Weights of the joint patterns of (x_node, x_parents). Pattern index
// c = (parent pattern << 1) | (x_node == +1), with parent pattern bit k set
// iff parents[k] = +1.
struct SufficientStats {
  NodeId node = 0;
  std::vector<NodeId> parents;
  std::vector<double> table;  // 2^(d+1) entries
  double total_weight = 0.0;
};

inline constexpr std::size_t kMaxStatsParents = 24;

// Either a weighted sample set or an exact distribution.
using DataSource = std::variant<std::reference_wrapper<const SampleSet>,
                                std::reference_wrapper<const ExactDistribution>>;

// Normalized pattern frequencies (samples) or pattern marginals (exact).
// Throws if `parents` contains `node`, has more than 24 entries, or the
// sample set has zero total weight.
SufficientStats collect_stats(const DataSource& source, NodeId node,
                              std::span<const NodeId> parents);

struct FitReport {
  std::size_t iterations = 0;
  double gradient_norm = 0.0;  // sup-norm at the returned point
  double objective = 0.0;
  bool converged = false;
};

struct FitOptions {
  double tolerance = 1e-8;
  std::size_t max_iterations = 10'000;
};

// Interaction-screening objective
//   S(theta) = sum_c w_c exp(-x_node^c sum_S theta_S prod_{j in S} x_j^c)
// and its gradient, for coefficients aligned with `basis`.
double grise_objective(const SufficientStats& stats, const InteractionBasis& basis,
                       std::span<const double> theta);
std::vector<double> grise_gradient(const SufficientStats& stats,
                                   const InteractionBasis& basis,
                                   std::span<const double> theta);

struct ConditionalFit {
  ConditionalModel model;
  FitReport report;
};

// Minimizes S by damped Newton steps with a backtracking line search until
// the gradient sup-norm drops to options.tolerance. Starts from zero unless
// `start` is given. Non-convergence is reported, not thrown.
ConditionalFit grise_fit(const SufficientStats& stats, const InteractionBasis& basis,
                         const FitOptions& options = {},
                         std::span<const double> start = {});

struct ARFit {
  ARModel model;
  std::vector<FitReport> reports;  // indexed by node

  bool converged() const;
  // Throws Error("no_convergence") naming the first node that did not
  // converge.
  void require_converged() const;
};

// Parent sets, order-O bases, statistics and one GRISE fit per node.
ARFit fit_ar_model(const Graph& g, const Ordering& sigma, std::size_t max_order,
                   const DataSource& source, const FitOptions& options = {});

struct RiseOptions {
  double lambda = -1.0;          // negative selects the default below
  double edge_threshold = 0.1;
  double tolerance = 1e-8;       // on the minimum-norm subgradient
  std::size_t max_iterations = 500;
};

// sqrt(ln(20 n^2) / m)
double default_rise_lambda(std::size_t n, double m);

struct RiseResult {
  Graph graph;
  // coefficients(i, j): coupling of j in node i's regression (i != j);
  // coefficients(i, i): fitted field of node i.
  Eigen::MatrixXd coefficients;
  std::vector<FitReport> reports;
  double lambda = 0.0;

  bool converged() const;
};

// Per node i, minimizes
//   (1/m) sum_l exp(-x_i (theta_i + sum_{j != i} theta_ij x_j)) + lambda sum |theta_ij|
// by proximal Newton steps (coordinate descent on each quadratic model), with
// every coefficient kept in [-25, 25]; then keeps edge (i, j) iff
// max(|theta_ij|, |theta_ji|) > edge_threshold. m is the total sample weight.
RiseResult rise_learn_structure(const SampleSet& samples, const RiseOptions& options = {});

}  // namespace arorder

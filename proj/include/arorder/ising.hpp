#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "arorder/graph.hpp"
#include "arorder/metrics.hpp"

namespace arorder {

// Pairwise Ising model: p(x) ~ exp(sum_i h_i x_i + sum_(i,j) J_ij x_i x_j).
// couplings()[k] belongs to graph().edges()[k].
class IsingModel {
 public:
  IsingModel() = default;
  // Throws on size mismatch or non-finite parameters.
  IsingModel(Graph graph, std::vector<double> fields,
             std::vector<double> couplings);

  const Graph& graph() const { return graph_; }
  std::size_t num_nodes() const { return graph_.num_nodes(); }
  const std::vector<double>& fields() const { return fields_; }
  const std::vector<double>& couplings() const { return couplings_; }
  double coupling(NodeId a, NodeId b) const {
    return couplings_[graph_.edge_index(a, b)];
  }

  // Couplings of v to each entry of graph().neighbors(v), in the same order.
  const std::vector<double>& neighbor_couplings(NodeId v) const {
    return neighbor_couplings_[v];
  }

  friend bool operator==(const IsingModel& a, const IsingModel& b) {
    return a.graph_ == b.graph_ && a.fields_ == b.fields_ &&
           a.couplings_ == b.couplings_;
  }

 private:
  Graph graph_;
  std::vector<double> fields_;
  std::vector<double> couplings_;
  std::vector<std::vector<double>> neighbor_couplings_;
};

// Exponent of the unnormalized probability; throws on length mismatch.
double energy(const IsingModel& m, std::span<const Spin> x);

IsingModel make_ferromagnet(const Graph& g);

enum class CouplingLaw {
  pm_one,        // couplings uniform on {-1, +1}, zero fields
  uniform_unit,  // couplings uniform on [-1, 1], zero fields
  dwave_range,   // fields and couplings uniform on [-2,-0.25] U [0.25,2]
};

IsingModel make_spin_glass(const Graph& g, std::uint64_t seed, CouplingLaw law);

// True when every field is 0 and every coupling is +1.
bool is_ferromagnet(const IsingModel& m);

// Configuration index convention shared by all modules: bit k of the index
// is set iff x_k = +1.
using ConfigIndex = std::uint64_t;

Configuration config_from_index(ConfigIndex index, std::size_t n);
ConfigIndex index_from_config(std::span<const Spin> x);

inline constexpr std::size_t kDefaultEnumerationCap = 28;

// Full table of p(x) for a small model.
class ExactDistribution {
 public:
  ExactDistribution(std::shared_ptr<const IsingModel> model, double log_z,
                    std::vector<double> probabilities)
      : model_(std::move(model)),
        log_z_(log_z),
        probabilities_(std::move(probabilities)) {}

  const IsingModel& model() const { return *model_; }
  std::size_t num_nodes() const { return model_->num_nodes(); }
  double log_z() const { return log_z_; }
  const std::vector<double>& probabilities() const { return probabilities_; }
  double probability(ConfigIndex index) const { return probabilities_[index]; }

 private:
  std::shared_ptr<const IsingModel> model_;
  double log_z_;
  std::vector<double> probabilities_;
};

// Gray-code enumeration of all 2^n configurations with a log-sum-exp
// normalizer. Throws Error("enumeration_cap") when n > cap.
ExactDistribution enumerate_distribution(const IsingModel& m,
                                         std::size_t cap = kDefaultEnumerationCap);

MomentSummary exact_moments(const ExactDistribution& d);

// Marginal table over an ordered list of distinct variables: entry b is the
// probability that x_vars[k] = +1 exactly for the set bits k of b.
std::vector<double> marginal_table(const ExactDistribution& d,
                                   std::span<const NodeId> vars);

// p(x_node = +1 | x_parents = assignment) by marginalization.
double exact_conditional(const ExactDistribution& d, NodeId node,
                         std::span<const NodeId> parents,
                         std::span<const Spin> assignment);

// I.i.d. draws by inverse CDF over the probability table.
SampleSet sample_exact(const ExactDistribution& d, std::size_t count,
                       std::uint64_t seed);

}  // namespace arorder

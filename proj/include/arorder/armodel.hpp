#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "arorder/graph.hpp"
#include "arorder/metrics.hpp"
#include "arorder/ordering.hpp"

namespace arorder {

// Subset of a parent list, encoded as a bitmask over parent positions
// (bit k set <=> parents[k] is in the subset).
using SubsetMask = std::uint64_t;

inline constexpr std::size_t kMaxParents = 64;

// Monomials x_node * prod_{j in S} x_j with S ranging over parent subsets of
// size <= max_order - 1. Subsets are listed by size, then lexicographically
// by member position; subsets()[0] is always the empty set (the bias).
struct InteractionBasis {
  NodeId node = 0;
  std::vector<NodeId> parents;
  std::size_t max_order = 1;
  std::vector<SubsetMask> subsets;

  std::size_t size() const { return subsets.size(); }
  friend bool operator==(const InteractionBasis&, const InteractionBasis&) = default;
};

// Throws for max_order == 0 or more than 64 parents.
InteractionBasis build_basis(NodeId node, std::span<const NodeId> parents,
                             std::size_t max_order);

// 1 + sum_{r=1}^{min(O-1, d)} C(d, r)
std::size_t basis_size(std::size_t num_parents, std::size_t max_order);

struct ConditionalModel {
  InteractionBasis basis;
  std::vector<double> coefficients;  // aligned with basis.subsets

  friend bool operator==(const ConditionalModel&, const ConditionalModel&) = default;
};

// Parent spins packed as a bitmask aligned with basis.parents
// (bit k set <=> parents[k] = +1).
using ParentPattern = std::uint64_t;

ParentPattern pack_parents(std::span<const Spin> parent_spins);

// h = sum_S theta_S prod_{j in S} x_j for one parent assignment.
double local_field(const ConditionalModel& c, ParentPattern pattern);
// Throws unless `parent_spins` has one entry per parent.
double local_field(const ConditionalModel& c, std::span<const Spin> parent_spins);

// exp(s h) / (2 cosh h), evaluated as the logistic of 2 s h.
double conditional_prob(const ConditionalModel& c, Spin spin,
                        std::span<const Spin> parent_spins);
double spin_probability(Spin spin, double field);

class ARModel {
 public:
  // Throws if the conditionals do not match the parent sets.
  ARModel(ParentSets parents, std::vector<ConditionalModel> conditionals);

  std::size_t num_nodes() const { return conditionals_.size(); }
  const Ordering& ordering() const { return parents_.ordering(); }
  const ParentSets& parent_sets() const { return parents_; }
  const ConditionalModel& conditional(NodeId v) const { return conditionals_[v]; }
  const std::vector<ConditionalModel>& conditionals() const { return conditionals_; }

  friend bool operator==(const ARModel&, const ARModel&) = default;

 private:
  ParentSets parents_;
  std::vector<ConditionalModel> conditionals_;
};

// ARModel of order O with every coefficient set to zero.
ARModel zero_model(const ParentSets& parents, std::size_t max_order);

inline constexpr std::size_t kSampleBlock = 1 << 16;

// Ancestral sampling in ordering order. Samples are produced in blocks of
// kSampleBlock rows; block b draws from seed ^ (b + 1), so the output does
// not depend on how blocks are scheduled.
SampleSet ancestral_sample(const ARModel& ar, std::size_t count, std::uint64_t seed);

// sum_i log p(x_i | x_Par(i)) under the model.
double log_prob(const ARModel& ar, std::span<const Spin> x);

}  // namespace arorder

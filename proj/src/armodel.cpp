#include "arorder/armodel.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "arorder/error.hpp"
#include "arorder/rng.hpp"

namespace arorder {

namespace {

// Visits the size-r subsets of {0..d-1} in lexicographic order of their
// sorted members.
template <typename Visit>
void for_each_combination(std::size_t d, std::size_t r, Visit&& visit) {
  std::vector<std::size_t> idx(r);
  for (std::size_t k = 0; k < r; ++k) idx[k] = k;
  while (true) {
    SubsetMask mask = 0;
    for (std::size_t k : idx) mask |= SubsetMask{1} << k;
    visit(mask);
    // Advance the rightmost index that still has room.
    std::size_t k = r;
    while (k > 0 && idx[k - 1] == d - r + (k - 1)) --k;
    if (k == 0) return;
    ++idx[k - 1];
    for (std::size_t t = k; t < r; ++t) idx[t] = idx[t - 1] + 1;
  }
}

}  // namespace

std::size_t basis_size(std::size_t num_parents, std::size_t max_order) {
  std::size_t total = 1;
  std::size_t binom = 1;
  const std::size_t top = max_order == 0 ? 0 : std::min(max_order - 1, num_parents);
  for (std::size_t r = 1; r <= top; ++r) {
    binom = binom * (num_parents - r + 1) / r;
    total += binom;
  }
  return total;
}

InteractionBasis build_basis(NodeId node, std::span<const NodeId> parents,
                             std::size_t max_order) {
  if (max_order == 0) throw invalid_argument("conditional order must be >= 1");
  if (parents.size() > kMaxParents) {
    throw invalid_argument("at most 64 parents are supported, got " +
                           std::to_string(parents.size()));
  }
  InteractionBasis basis;
  basis.node = node;
  basis.parents.assign(parents.begin(), parents.end());
  basis.max_order = max_order;
  const std::size_t d = parents.size();
  const std::size_t top = std::min(max_order - 1, d);
  basis.subsets.reserve(basis_size(d, max_order));
  basis.subsets.push_back(0);
  for (std::size_t r = 1; r <= top; ++r) {
    for_each_combination(d, r, [&](SubsetMask m) { basis.subsets.push_back(m); });
  }
  return basis;
}

ParentPattern pack_parents(std::span<const Spin> parent_spins) {
  ParentPattern p = 0;
  for (std::size_t k = 0; k < parent_spins.size(); ++k) {
    if (parent_spins[k] > 0) p |= ParentPattern{1} << k;
  }
  return p;
}

double local_field(const ConditionalModel& c, ParentPattern pattern) {
  // prod_{j in S} x_j = (-1)^(number of members of S at -1)
  const ParentPattern down = ~pattern;
  double h = 0.0;
  const auto& subsets = c.basis.subsets;
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    h += (std::popcount(subsets[k] & down) & 1) ? -c.coefficients[k]
                                                : c.coefficients[k];
  }
  return h;
}

double local_field(const ConditionalModel& c, std::span<const Spin> parent_spins) {
  if (parent_spins.size() != c.basis.parents.size()) {
    throw invalid_argument("expected " + std::to_string(c.basis.parents.size()) +
                           " parent spins, got " + std::to_string(parent_spins.size()));
  }
  for (Spin s : parent_spins) {
    if (s != 1 && s != -1) throw invalid_argument("spins must be -1 or +1");
  }
  return local_field(c, pack_parents(parent_spins));
}

double spin_probability(Spin spin, double field) {
  return 1.0 / (1.0 + std::exp(-2.0 * spin * field));
}

double conditional_prob(const ConditionalModel& c, Spin spin,
                        std::span<const Spin> parent_spins) {
  if (spin != 1 && spin != -1) throw invalid_argument("spin must be -1 or +1");
  return spin_probability(spin, local_field(c, parent_spins));
}

ARModel::ARModel(ParentSets parents, std::vector<ConditionalModel> conditionals)
    : parents_(std::move(parents)), conditionals_(std::move(conditionals)) {
  if (conditionals_.size() != parents_.size() ||
      parents_.ordering().size() != parents_.size()) {
    throw invalid_argument("one conditional and one ordering slot per node are required");
  }
  for (NodeId v = 0; v < conditionals_.size(); ++v) {
    const auto& c = conditionals_[v];
    if (c.basis.node != v || c.basis.parents != parents_[v]) {
      throw invalid_argument("conditional of node " + std::to_string(v) +
                             " does not match its parent set");
    }
    for (NodeId p : c.basis.parents) {
      if (p >= conditionals_.size() || ordering().position(p) >= ordering().position(v)) {
        throw invalid_argument("parent " + std::to_string(p) + " of node " +
                               std::to_string(v) + " is not visited before it");
      }
    }
    if (c.coefficients.size() != c.basis.size()) {
      throw invalid_argument("conditional of node " + std::to_string(v) +
                             " has the wrong number of coefficients");
    }
    for (double t : c.coefficients) {
      if (!std::isfinite(t)) {
        throw invalid_argument("conditional of node " + std::to_string(v) +
                               " has a non-finite coefficient");
      }
    }
  }
}

ARModel zero_model(const ParentSets& parents, std::size_t max_order) {
  std::vector<ConditionalModel> conds;
  conds.reserve(parents.size());
  for (NodeId v = 0; v < parents.size(); ++v) {
    auto basis = build_basis(v, parents[v], max_order);
    const std::size_t t = basis.size();
    conds.push_back({std::move(basis), std::vector<double>(t, 0.0)});
  }
  return ARModel(parents, std::move(conds));
}

namespace {

// Parents with at most this many members get a precomputed table of
// p(+1 | pattern).
constexpr std::size_t kTableParents = 16;

struct NodeSampler {
  NodeId node;
  std::vector<NodeId> parents;
  std::vector<double> p_up;  // empty when the table would be too large
  const ConditionalModel* model;

  double probability_up(std::span<const Spin> x) const {
    ParentPattern pattern = 0;
    for (std::size_t k = 0; k < parents.size(); ++k) {
      if (x[parents[k]] > 0) pattern |= ParentPattern{1} << k;
    }
    if (!p_up.empty()) return p_up[pattern];
    return spin_probability(1, local_field(*model, pattern));
  }
};

}  // namespace

SampleSet ancestral_sample(const ARModel& ar, std::size_t count, std::uint64_t seed) {
  const std::size_t n = ar.num_nodes();
  std::vector<NodeSampler> steps;
  steps.reserve(n);
  for (NodeId v : ar.ordering().sequence()) {
    const auto& c = ar.conditional(v);
    NodeSampler s{v, c.basis.parents, {}, &c};
    if (s.parents.size() <= kTableParents) {
      s.p_up.resize(std::size_t{1} << s.parents.size());
      for (ParentPattern p = 0; p < s.p_up.size(); ++p) {
        s.p_up[p] = spin_probability(1, local_field(c, p));
      }
    }
    steps.push_back(std::move(s));
  }

  SampleSet out(n);
  out.reserve(count);
  Configuration x(n, 1);
  for (std::size_t block = 0, start = 0; start < count; ++block, start += kSampleBlock) {
    Rng rng(seed ^ (block + 1));
    const std::size_t stop = std::min(count, start + kSampleBlock);
    for (std::size_t r = start; r < stop; ++r) {
      for (const auto& s : steps) {
        x[s.node] = rng.uniform() < s.probability_up(x) ? 1 : -1;
      }
      out.add(x);
    }
  }
  return out;
}

double log_prob(const ARModel& ar, std::span<const Spin> x) {
  if (x.size() != ar.num_nodes()) {
    throw invalid_argument("configuration has " + std::to_string(x.size()) +
                           " spins, model has " + std::to_string(ar.num_nodes()));
  }
  double total = 0.0;
  for (NodeId v = 0; v < x.size(); ++v) {
    const auto& c = ar.conditional(v);
    ParentPattern pattern = 0;
    for (std::size_t k = 0; k < c.basis.parents.size(); ++k) {
      if (x[c.basis.parents[k]] > 0) pattern |= ParentPattern{1} << k;
    }
    const double z = 2.0 * x[v] * local_field(c, pattern);
    // log(1 / (1 + e^-z)) without overflow for large |z|
    total += z >= 0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
  }
  return total;
}

}  // namespace arorder

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "arorder/ordering.hpp"

namespace arorder {

using Edge = std::pair<NodeId, NodeId>;

// Undirected simple graph on nodes 0..n-1. Edges are stored canonically as
// (min, max) in sorted order; adjacency lists are sorted ascending.
class Graph {
 public:
  Graph() = default;
  // Throws on self-loops, duplicate edges or out-of-range endpoints.
  Graph(std::size_t n, std::span<const Edge> edges);

  std::size_t num_nodes() const { return adjacency_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<NodeId>& neighbors(NodeId v) const { return adjacency_[v]; }
  bool has_edge(NodeId a, NodeId b) const;
  // Index of edge {a, b} in edges(); throws if absent.
  std::size_t edge_index(NodeId a, NodeId b) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.adjacency_.size() == b.adjacency_.size() && a.edges_ == b.edges_;
  }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;
};

// L x L grid, node id = row * L + col.
Graph build_lattice(std::size_t side);

// Nodes reachable from `start` in the subgraph induced on V \ excluded,
// sorted ascending. `excluded` holds one flag per node.
std::vector<NodeId> connected_component(const Graph& g, NodeId start,
                                        const std::vector<bool>& excluded);

class ParentSets {
 public:
  ParentSets(Ordering ordering, std::vector<std::vector<NodeId>> parents)
      : ordering_(std::move(ordering)), parents_(std::move(parents)) {}

  const Ordering& ordering() const { return ordering_; }
  const std::vector<NodeId>& operator[](NodeId v) const { return parents_[v]; }
  const std::vector<std::vector<NodeId>>& all() const { return parents_; }
  std::size_t size() const { return parents_.size(); }

  friend bool operator==(const ParentSets& a, const ParentSets& b) {
    return a.ordering_ == b.ordering_ && a.parents_ == b.parents_;
  }

 private:
  Ordering ordering_;
  std::vector<std::vector<NodeId>> parents_;
};

// Screening parent sets of every node under `sigma`: the visited nodes that
// touch the connected component of sigma(i) among the not-yet-visited nodes.
// One BFS per step.
ParentSets parent_sets(const Graph& g, const Ordering& sigma);

// Same sets computed candidate by candidate: sigma(j) is a parent of sigma(i)
// iff it is reachable from sigma(i) once every other visited node is removed.
// Cubic; kept as a cross-check.
ParentSets parent_sets_naive(const Graph& g, const Ordering& sigma);

}  // namespace arorder

#include "arorder/graph.hpp"

#include <algorithm>
#include <string>

#include "arorder/error.hpp"

namespace arorder {

Graph::Graph(std::size_t n, std::span<const Edge> edges) : adjacency_(n) {
  edges_.reserve(edges.size());
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) {
      throw invalid_argument("edge (" + std::to_string(a) + ", " +
                             std::to_string(b) + ") out of range for n = " +
                             std::to_string(n));
    }
    if (a == b) throw invalid_argument("self-loop on node " + std::to_string(a));
    edges_.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end());
      dup != edges_.end()) {
    throw invalid_argument("duplicate edge (" + std::to_string(dup->first) +
                           ", " + std::to_string(dup->second) + ")");
  }
  for (auto [a, b] : edges_) {
    adjacency_[a].push_back(b);
    adjacency_[b].push_back(a);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

bool Graph::has_edge(NodeId a, NodeId b) const {
  if (a >= num_nodes() || b >= num_nodes()) return false;
  const auto& adj = adjacency_[a];
  return std::binary_search(adj.begin(), adj.end(), b);
}

std::size_t Graph::edge_index(NodeId a, NodeId b) const {
  const Edge key{std::min(a, b), std::max(a, b)};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
  if (it == edges_.end() || *it != key) {
    throw invalid_argument("no edge (" + std::to_string(a) + ", " +
                           std::to_string(b) + ")");
  }
  return static_cast<std::size_t>(it - edges_.begin());
}

Graph build_lattice(std::size_t side) {
  if (side == 0) throw invalid_argument("lattice side must be >= 1");
  std::vector<Edge> edges;
  edges.reserve(2 * side * (side - 1));
  for (std::size_t r = 0; r < side; ++r) {
    for (std::size_t c = 0; c < side; ++c) {
      const NodeId v = r * side + c;
      if (c + 1 < side) edges.emplace_back(v, v + 1);
      if (r + 1 < side) edges.emplace_back(v, v + side);
    }
  }
  return Graph(side * side, edges);
}

std::vector<NodeId> connected_component(const Graph& g, NodeId start,
                                        const std::vector<bool>& excluded) {
  if (start >= g.num_nodes()) {
    throw invalid_argument("start node " + std::to_string(start) +
                           " out of range");
  }
  if (excluded.size() != g.num_nodes()) {
    throw invalid_argument("excluded mask has wrong length");
  }
  if (excluded[start]) throw invalid_argument("start node is excluded");

  std::vector<bool> seen(g.num_nodes(), false);
  std::vector<NodeId> component{start};
  seen[start] = true;
  for (std::size_t head = 0; head < component.size(); ++head) {
    for (NodeId u : g.neighbors(component[head])) {
      if (!seen[u] && !excluded[u]) {
        seen[u] = true;
        component.push_back(u);
      }
    }
  }
  std::sort(component.begin(), component.end());
  return component;
}

namespace {

void check_compatible(const Graph& g, const Ordering& sigma) {
  if (sigma.size() != g.num_nodes()) {
    throw invalid_argument("ordering has " + std::to_string(sigma.size()) +
                           " entries but graph has " +
                           std::to_string(g.num_nodes()) + " nodes");
  }
}

}  // namespace

ParentSets parent_sets(const Graph& g, const Ordering& sigma) {
  check_compatible(g, sigma);
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<NodeId>> parents(n);
  std::vector<bool> visited(n, false);
  // Stamps avoid clearing per-step marks: a node is marked in step i iff its
  // stamp equals i + 1.
  std::vector<std::size_t> in_component(n, 0), is_parent(n, 0);
  std::vector<NodeId> queue;
  queue.reserve(n);

  for (std::size_t i = 0; i < n; ++i) {
    const NodeId v = sigma[i];
    const std::size_t stamp = i + 1;
    queue.clear();
    queue.push_back(v);
    in_component[v] = stamp;
    auto& par = parents[v];
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (NodeId u : g.neighbors(queue[head])) {
        if (visited[u]) {
          if (is_parent[u] != stamp) {
            is_parent[u] = stamp;
            par.push_back(u);
          }
        } else if (in_component[u] != stamp) {
          in_component[u] = stamp;
          queue.push_back(u);
        }
      }
    }
    std::sort(par.begin(), par.end());
    visited[v] = true;
  }
  return ParentSets(sigma, std::move(parents));
}

ParentSets parent_sets_naive(const Graph& g, const Ordering& sigma) {
  check_compatible(g, sigma);
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<NodeId>> parents(n);
  std::vector<bool> removed(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId v = sigma[i];
    for (std::size_t j = 0; j < i; ++j) {
      const NodeId candidate = sigma[j];
      removed[candidate] = false;
      const auto reach = connected_component(g, v, removed);
      if (std::binary_search(reach.begin(), reach.end(), candidate)) {
        parents[v].push_back(candidate);
      }
      removed[candidate] = true;
    }
    std::sort(parents[v].begin(), parents[v].end());
    removed[v] = true;
  }
  return ParentSets(sigma, std::move(parents));
}

}  // namespace arorder

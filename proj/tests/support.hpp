#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "arorder/graph.hpp"
#include "arorder/ising.hpp"
#include "arorder/metrics.hpp"
#include "arorder/ordering.hpp"
#include "arorder/rng.hpp"

namespace testing {

using namespace arorder;

// The five-node example graph, shifted to 0-based ids:
// 1-2, 1-3, 2-4, 3-4, 4-5.
inline Graph example_graph() {
  const std::vector<Edge> e{{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}};
  return Graph(5, e);
}

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  return Graph(n, e);
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b) e.emplace_back(a, b);
  return Graph(n, e);
}

// Random spanning tree plus each remaining pair with probability `density`.
inline Graph random_connected_graph(std::size_t n, double density, Rng& rng) {
  std::vector<Edge> e;
  std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
  for (NodeId v = 1; v < n; ++v) {
    const NodeId u = rng.below(v);
    e.emplace_back(u, v);
    used[u][v] = used[v][u] = true;
  }
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b)
      if (!used[a][b] && rng.uniform() < density) e.emplace_back(a, b);
  return Graph(n, e);
}

inline IsingModel random_model(const Graph& g, Rng& rng, double scale = 1.0) {
  std::vector<double> fields(g.num_nodes()), couplings(g.num_edges());
  for (double& f : fields) f = scale * (2.0 * rng.uniform() - 1.0);
  for (double& c : couplings) c = scale * (2.0 * rng.uniform() - 1.0);
  return IsingModel(g, fields, couplings);
}

inline double relative_difference(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace testing

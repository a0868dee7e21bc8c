#include "arorder/gibbs.hpp"

#include <cmath>
#include <string>

#include "arorder/error.hpp"
#include "arorder/rng.hpp"

namespace arorder {

namespace {

inline double local_field(const IsingModel& m, NodeId node,
                          std::span<const Spin> x) {
  const auto& nbrs = m.graph().neighbors(node);
  const auto& cpl = m.neighbor_couplings(node);
  double h = m.fields()[node];
  for (std::size_t t = 0; t < nbrs.size(); ++t) h += cpl[t] * x[nbrs[t]];
  return h;
}

}  // namespace

double heat_bath_probability(const IsingModel& m, NodeId node,
                             std::span<const Spin> x) {
  if (x.size() != m.num_nodes()) throw invalid_argument("configuration length mismatch");
  return 1.0 / (1.0 + std::exp(-2.0 * local_field(m, node, x)));
}

SampleSet gibbs_chain(const IsingModel& m, const Configuration& init,
                      std::size_t sweeps, std::size_t burn_in_sweeps,
                      std::uint64_t seed) {
  const std::size_t n = m.num_nodes();
  if (init.size() != n) {
    throw invalid_argument("initial configuration has " + std::to_string(init.size()) +
                           " spins, model has " + std::to_string(n));
  }
  for (Spin s : init) {
    if (s != 1 && s != -1) throw invalid_argument("spins must be -1 or +1");
  }
  Configuration x = init;
  SampleSet out(n);
  out.reserve(sweeps);
  Rng rng(seed);
  for (std::size_t s = 0; s < burn_in_sweeps + sweeps; ++s) {
    for (NodeId i = 0; i < n; ++i) {
      const double p_up = 1.0 / (1.0 + std::exp(-2.0 * local_field(m, i, x)));
      x[i] = rng.uniform() < p_up ? 1 : -1;
    }
    if (s >= burn_in_sweeps) out.add(x);
  }
  return out;
}

SampleSet two_chain_ferro(const IsingModel& m, std::size_t total_samples,
                          std::size_t burn_in_sweeps, std::uint64_t seed) {
  if (total_samples % 2 != 0) {
    throw invalid_argument("two-chain protocol needs an even sample count, got " +
                           std::to_string(total_samples));
  }
  const std::size_t n = m.num_nodes();
  const std::size_t half = total_samples / 2;
  SampleSet out = gibbs_chain(m, Configuration(n, 1), half, burn_in_sweeps, seed ^ 1U);
  out.append(gibbs_chain(m, Configuration(n, -1), half, burn_in_sweeps, seed ^ 2U));
  return out;
}

}  // namespace arorder

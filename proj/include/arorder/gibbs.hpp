#pragma once

#include <cstddef>
#include <cstdint>

#include "arorder/ising.hpp"
#include "arorder/metrics.hpp"

namespace arorder {

// Heat-bath Gibbs sampling with ascending sweep order. Each sweep updates
// every site once with
//   p(x_i = +1 | rest) = 1 / (1 + exp(-2 (h_i + sum_j J_ij x_j))),
// and after `burn_in_sweeps` discarded sweeps one configuration is recorded
// per sweep, `sweeps` times.
SampleSet gibbs_chain(const IsingModel& m, const Configuration& init,
                      std::size_t sweeps, std::size_t burn_in_sweeps,
                      std::uint64_t seed);

// Probability that site `node` is +1 given every other spin of `x`.
double heat_bath_probability(const IsingModel& m, NodeId node,
                             std::span<const Spin> x);

inline constexpr std::size_t kDefaultBurnIn = 10'000;

// Two chains started at all +1 (seed ^ 1) and all -1 (seed ^ 2), each
// contributing total_samples / 2 recorded sweeps; the +1 chain's block comes
// first. Throws for odd total_samples.
SampleSet two_chain_ferro(const IsingModel& m, std::size_t total_samples,
                          std::size_t burn_in_sweeps, std::uint64_t seed);

}  // namespace arorder

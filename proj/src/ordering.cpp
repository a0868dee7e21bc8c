#include "arorder/ordering.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "arorder/error.hpp"
#include "arorder/graph.hpp"
#include "arorder/rng.hpp"

namespace arorder {

Ordering::Ordering(std::vector<NodeId> sequence)
    : sequence_(std::move(sequence)),
      position_(sequence_.size(), sequence_.size()) {
  const std::size_t n = sequence_.size();
  for (std::size_t k = 0; k < n; ++k) {
    const NodeId v = sequence_[k];
    if (v >= n) {
      throw invalid_argument("ordering entry " + std::to_string(v) +
                             " out of range for n = " + std::to_string(n));
    }
    if (position_[v] != n) {
      throw invalid_argument("ordering repeats node " + std::to_string(v));
    }
    position_[v] = k;
  }
}

Ordering sequential(std::size_t side) {
  if (side == 0) throw invalid_argument("lattice side must be >= 1");
  std::vector<NodeId> seq(side * side);
  std::iota(seq.begin(), seq.end(), NodeId{0});
  return Ordering(std::move(seq));
}

Ordering checkerboard(std::size_t side) {
  if (side == 0) throw invalid_argument("lattice side must be >= 1");
  std::vector<NodeId> seq;
  seq.reserve(side * side);
  for (std::size_t parity = 0; parity < 2; ++parity) {
    for (std::size_t r = 0; r < side; ++r) {
      for (std::size_t c = 0; c < side; ++c) {
        if ((r + c) % 2 == parity) seq.push_back(r * side + c);
      }
    }
  }
  return Ordering(std::move(seq));
}

Ordering diagonal(std::size_t side) {
  if (side == 0) throw invalid_argument("lattice side must be >= 1");
  if (side % 2 == 0) {
    throw invalid_argument(
        "diagonal ordering needs an odd lattice side; supply a custom "
        "ordering for L = " + std::to_string(side));
  }
  const std::size_t L = side;
  const std::size_t center = L / 2;
  std::vector<NodeId> seq;
  seq.reserve(L * L);
  auto cell = [L](std::size_t r, std::size_t c) { return r * L + c; };

  seq.push_back(cell(center, center));
  // Distance center..1 from the middle; at distance `center` these are the
  // two corners.
  for (std::size_t dist = center; dist >= 1; --dist) {
    seq.push_back(cell(center - dist, center - dist));
    seq.push_back(cell(center + dist, center + dist));
  }

  for (std::size_t offset = 2; offset < L; offset += 2) {
    for (std::size_t r = 0; r + offset < L; ++r) seq.push_back(cell(r, r + offset));
    for (std::size_t c = 0; c + offset < L; ++c) seq.push_back(cell(c + offset, c));
  }

  for (std::size_t r = 0; r < L; ++r) {
    for (std::size_t c = 0; c < L; ++c) {
      if ((r + c) % 2 == 1) seq.push_back(cell(r, c));
    }
  }
  return Ordering(std::move(seq));
}

Ordering from_list(std::span<const NodeId> ids) {
  return Ordering(std::vector<NodeId>(ids.begin(), ids.end()));
}

Ordering random_ordering(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw invalid_argument("random ordering needs n >= 1");
  std::vector<NodeId> seq(n);
  std::iota(seq.begin(), seq.end(), NodeId{0});
  // Fisher-Yates with our own bounded draws so the result does not depend on
  // the standard library's shuffle.
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(seq[i], seq[rng.below(i + 1)]);
  }
  return Ordering(std::move(seq));
}

ComplexityProfile complexity_profile(const Graph& g, const Ordering& sigma) {
  const ParentSets par = parent_sets(g, sigma);
  ComplexityProfile profile;
  for (const auto& p : par.all()) ++profile.histogram[p.size()];
  if (!profile.histogram.empty()) {
    const auto& [d, k] = *profile.histogram.rbegin();
    profile.max_cardinality = d;
    profile.max_count = k;
  }
  return profile;
}

Preference compare_profiles(const ComplexityProfile& a,
                            const ComplexityProfile& b) {
  if (a.max_cardinality != b.max_cardinality) {
    return a.max_cardinality < b.max_cardinality ? Preference::prefer_a
                                                 : Preference::prefer_b;
  }
  if (a.max_count != b.max_count) {
    return a.max_count < b.max_count ? Preference::prefer_a
                                     : Preference::prefer_b;
  }
  return Preference::tie;
}

}  // namespace arorder

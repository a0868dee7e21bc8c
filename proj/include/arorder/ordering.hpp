#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace arorder {

using NodeId = std::size_t;

class Graph;

// A permutation of 0..n-1; sequence()[k] is the node visited at step k.
class Ordering {
 public:
  Ordering() = default;
  // Throws if `sequence` is not a permutation of 0..n-1.
  explicit Ordering(std::vector<NodeId> sequence);

  std::size_t size() const { return sequence_.size(); }
  const std::vector<NodeId>& sequence() const { return sequence_; }
  NodeId operator[](std::size_t step) const { return sequence_[step]; }
  // Step at which `node` is visited.
  std::size_t position(NodeId node) const { return position_[node]; }

  friend bool operator==(const Ordering& a, const Ordering& b) {
    return a.sequence_ == b.sequence_;
  }

 private:
  std::vector<NodeId> sequence_;
  std::vector<std::size_t> position_;
};

// Row-major traversal of an L x L lattice.
Ordering sequential(std::size_t side);

// Even-parity cells (row + col even) row-major, then odd-parity cells
// row-major.
Ordering checkerboard(std::size_t side);

// Diagonal traversal for odd L:
//   1. main diagonal, center first, then the two corners, then the remaining
//      diagonal cells by decreasing distance from the center (upper-left
//      first on ties);
//   2. the diagonals col - row = +2, -2, +4, -4, ..., each top-left to
//      bottom-right;
//   3. all odd-offset cells in row-major order.
// Throws for even L.
Ordering diagonal(std::size_t side);

Ordering from_list(std::span<const NodeId> ids);
Ordering random_ordering(std::size_t n, std::uint64_t seed);

// Parent-set cardinality summary used to rank orderings.
struct ComplexityProfile {
  std::size_t max_cardinality = 0;  // d
  std::size_t max_count = 0;        // K: conditionals whose parent set has size d
  std::map<std::size_t, std::size_t> histogram;  // cardinality -> count

  friend bool operator==(const ComplexityProfile&,
                         const ComplexityProfile&) = default;
};

ComplexityProfile complexity_profile(const Graph& g, const Ordering& sigma);

enum class Preference { prefer_a, prefer_b, tie };

// Smaller d wins; equal d falls back to smaller K.
Preference compare_profiles(const ComplexityProfile& a,
                            const ComplexityProfile& b);

}  // namespace arorder

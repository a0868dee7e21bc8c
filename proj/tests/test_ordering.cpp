#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "arorder/error.hpp"
#include "support.hpp"

using namespace arorder;
using namespace testing;

namespace {

NodeId cell(std::size_t side, std::size_t r, std::size_t c) { return r * side + c; }

bool is_permutation_of_range(const Ordering& o, std::size_t n) {
  std::vector<NodeId> s = o.sequence();
  std::sort(s.begin(), s.end());
  std::vector<NodeId> expect(n);
  std::iota(expect.begin(), expect.end(), NodeId{0});
  return s == expect;
}

}  // namespace

TEST_CASE("sequential") {
  CHECK(sequential(1).sequence() == std::vector<NodeId>{0});
  CHECK(sequential(2).sequence() == std::vector<NodeId>{0, 1, 2, 3});
  std::vector<NodeId> expect(25);
  std::iota(expect.begin(), expect.end(), NodeId{0});
  CHECK(sequential(5).sequence() == expect);
}

TEST_CASE("checkerboard") {
  CHECK(checkerboard(1).sequence() == std::vector<NodeId>{0});
  CHECK(checkerboard(2).sequence() == std::vector<NodeId>{0, 3, 1, 2});
  const Ordering o = checkerboard(5);
  for (std::size_t k = 0; k < 13; ++k) {
    const NodeId v = o[k];
    CHECK((v / 5 + v % 5) % 2 == 0);
    if (k > 0) CHECK(o[k - 1] < v);
  }
  for (std::size_t k = 13; k < 25; ++k) {
    CHECK((o[k] / 5 + o[k] % 5) % 2 == 1);
    if (k > 13) CHECK(o[k - 1] < o[k]);
  }
}

TEST_CASE("diagonal traversal reproduces the shaded cells of the 5x5 figure") {
  const Ordering o = diagonal(5);
  const std::vector<NodeId> first13{
      cell(5, 2, 2), cell(5, 0, 0), cell(5, 4, 4), cell(5, 1, 1), cell(5, 3, 3),
      cell(5, 0, 2), cell(5, 1, 3), cell(5, 2, 4), cell(5, 2, 0), cell(5, 3, 1),
      cell(5, 4, 2), cell(5, 0, 4), cell(5, 4, 0)};
  CHECK(std::vector<NodeId>(o.sequence().begin(), o.sequence().begin() + 13) == first13);
  // The rest are the odd-offset cells, row-major.
  for (std::size_t k = 13; k < 25; ++k) {
    const NodeId v = o[k];
    const auto off = static_cast<long>(v % 5) - static_cast<long>(v / 5);
    CHECK(off % 2 != 0);
    if (k > 13) CHECK(o[k - 1] < v);
  }
  CHECK(diagonal(1).sequence() == std::vector<NodeId>{0});
  CHECK_THROWS_AS(diagonal(4), Error);
}

TEST_CASE("generators emit permutations") {
  for (std::size_t side = 1; side <= 50; ++side) {
    CHECK(is_permutation_of_range(sequential(side), side * side));
    CHECK(is_permutation_of_range(checkerboard(side), side * side));
    if (side % 2 == 1) CHECK(is_permutation_of_range(diagonal(side), side * side));
  }
}

TEST_CASE("from_list and random orderings") {
  const std::vector<NodeId> ids{2, 0, 1};
  const Ordering o = from_list(ids);
  CHECK(o.sequence() == ids);
  CHECK(o.position(2) == 0);
  CHECK(o.position(1) == 2);
  const std::vector<NodeId> rep{0, 0, 1};
  CHECK_THROWS_AS(from_list(rep), Error);
  const std::vector<NodeId> gap{0, 3, 1};
  CHECK_THROWS_AS(from_list(gap), Error);

  CHECK(random_ordering(30, 5) == random_ordering(30, 5));
  CHECK_FALSE(random_ordering(30, 5) == random_ordering(30, 6));
  CHECK(is_permutation_of_range(random_ordering(30, 5), 30));
}

TEST_CASE("complexity profiles") {
  const ComplexityProfile chain = complexity_profile(path_graph(3), from_list(std::vector<NodeId>{0, 1, 2}));
  CHECK(chain.max_cardinality == 1);
  CHECK(chain.max_count == 2);
  CHECK(chain.histogram == std::map<std::size_t, std::size_t>{{0, 1}, {1, 2}});

  const ComplexityProfile k3 = complexity_profile(complete_graph(3), random_ordering(3, 1));
  CHECK(k3.max_cardinality == 2);
  CHECK(k3.max_count == 1);

  // Sequential on 5x5: d = 5, K from the literal definition.
  const Graph g = build_lattice(5);
  const ComplexityProfile seq = complexity_profile(g, sequential(5));
  CHECK(seq.max_cardinality == 5);
  const auto naive = parent_sets_naive(g, sequential(5));
  std::size_t k = 0;
  for (NodeId v = 0; v < 25; ++v) k += naive[v].size() == 5;
  CHECK(seq.max_count == k);
}

TEST_CASE("bounded cardinality of the second-phase cells") {
  for (std::size_t side : {3, 5, 7, 9}) {
    const Graph g = build_lattice(side);
    const auto cb = parent_sets(g, checkerboard(side));
    const auto dg = parent_sets(g, diagonal(side));
    for (std::size_t r = 0; r < side; ++r) {
      for (std::size_t c = 0; c < side; ++c) {
        const NodeId v = cell(side, r, c);
        if ((r + c) % 2 == 1) CHECK(cb[v].size() <= 4);
        if ((static_cast<long>(c) - static_cast<long>(r)) % 2 != 0) CHECK(dg[v].size() <= 4);
      }
    }
  }
}

TEST_CASE("profile comparison") {
  auto profile = [](std::size_t d, std::size_t k) {
    ComplexityProfile p;
    p.max_cardinality = d;
    p.max_count = k;
    return p;
  };
  CHECK(compare_profiles(profile(4, 3), profile(5, 1)) == Preference::prefer_a);
  CHECK(compare_profiles(profile(5, 1), profile(4, 3)) == Preference::prefer_b);
  CHECK(compare_profiles(profile(5, 2), profile(5, 9)) == Preference::prefer_a);
  CHECK(compare_profiles(profile(5, 2), profile(5, 2)) == Preference::tie);
}

TEST_CASE("the diagonal traversal is preferred on odd lattices") {
  for (std::size_t side : {5, 7, 9}) {
    const Graph g = build_lattice(side);
    const auto seq = complexity_profile(g, sequential(side));
    const auto diag = complexity_profile(g, diagonal(side));
    CHECK(compare_profiles(diag, seq) != Preference::prefer_b);
  }
}

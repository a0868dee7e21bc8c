#include "arorder/ising.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "arorder/error.hpp"
#include "arorder/rng.hpp"

namespace arorder {

IsingModel::IsingModel(Graph graph, std::vector<double> fields,
                       std::vector<double> couplings)
    : graph_(std::move(graph)),
      fields_(std::move(fields)),
      couplings_(std::move(couplings)) {
  if (fields_.size() != graph_.num_nodes()) {
    throw invalid_argument("expected " + std::to_string(graph_.num_nodes()) +
                           " fields, got " + std::to_string(fields_.size()));
  }
  if (couplings_.size() != graph_.num_edges()) {
    throw invalid_argument("expected " + std::to_string(graph_.num_edges()) +
                           " couplings, got " + std::to_string(couplings_.size()));
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (!std::all_of(fields_.begin(), fields_.end(), finite) ||
      !std::all_of(couplings_.begin(), couplings_.end(), finite)) {
    throw invalid_argument("model parameters must be finite");
  }
  neighbor_couplings_.resize(graph_.num_nodes());
  for (NodeId v = 0; v < graph_.num_nodes(); ++v) {
    for (NodeId u : graph_.neighbors(v)) {
      neighbor_couplings_[v].push_back(couplings_[graph_.edge_index(v, u)]);
    }
  }
}

double energy(const IsingModel& m, std::span<const Spin> x) {
  if (x.size() != m.num_nodes()) {
    throw invalid_argument("configuration length " + std::to_string(x.size()) +
                           " does not match model size " +
                           std::to_string(m.num_nodes()));
  }
  double e = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) e += m.fields()[i] * x[i];
  const auto& edges = m.graph().edges();
  for (std::size_t k = 0; k < edges.size(); ++k) {
    e += m.couplings()[k] * x[edges[k].first] * x[edges[k].second];
  }
  return e;
}

IsingModel make_ferromagnet(const Graph& g) {
  return IsingModel(g, std::vector<double>(g.num_nodes(), 0.0),
                    std::vector<double>(g.num_edges(), 1.0));
}

IsingModel make_spin_glass(const Graph& g, std::uint64_t seed, CouplingLaw law) {
  Rng rng(seed);
  auto draw = [&]() -> double {
    switch (law) {
      case CouplingLaw::pm_one:
        return (rng.next_u64() >> 63) ? 1.0 : -1.0;
      case CouplingLaw::uniform_unit:
        return 2.0 * rng.uniform() - 1.0;
      case CouplingLaw::dwave_range: {
        const double magnitude = 0.25 + 1.75 * rng.uniform();
        return (rng.next_u64() >> 63) ? magnitude : -magnitude;
      }
    }
    return 0.0;
  };
  std::vector<double> couplings(g.num_edges());
  for (double& c : couplings) c = draw();
  std::vector<double> fields(g.num_nodes(), 0.0);
  if (law == CouplingLaw::dwave_range) {
    for (double& f : fields) f = draw();
  }
  return IsingModel(g, std::move(fields), std::move(couplings));
}

bool is_ferromagnet(const IsingModel& m) {
  return std::all_of(m.fields().begin(), m.fields().end(),
                     [](double f) { return f == 0.0; }) &&
         std::all_of(m.couplings().begin(), m.couplings().end(),
                     [](double c) { return c == 1.0; });
}

Configuration config_from_index(ConfigIndex index, std::size_t n) {
  Configuration x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = ((index >> k) & 1U) ? 1 : -1;
  return x;
}

ConfigIndex index_from_config(std::span<const Spin> x) {
  ConfigIndex index = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (x[k] > 0) index |= ConfigIndex{1} << k;
  }
  return index;
}

namespace {

// Energies are updated incrementally along the Gray code and recomputed from
// scratch at the start of every block of this many steps, which bounds the
// rounding drift.
constexpr std::uint64_t kRefreshBlock = 4096;

}  // namespace

ExactDistribution enumerate_distribution(const IsingModel& m, std::size_t cap) {
  const std::size_t n = m.num_nodes();
  if (n > cap || n >= 63) {
    throw Error("enumeration_cap", "cannot enumerate 2^" + std::to_string(n) +
                                       " configurations (cap is 2^" +
                                       std::to_string(cap) + ")");
  }
  const std::uint64_t count = std::uint64_t{1} << n;
  std::vector<double> values(count);

  Configuration x(n, -1);
  double e = energy(m, x);
  double e_max = -INFINITY;
  for (std::uint64_t k = 0; k < count; ++k) {
    if (k > 0) {
      const auto b = static_cast<NodeId>(std::countr_zero(k));
      const auto& nbrs = m.graph().neighbors(b);
      const auto& cpl = m.neighbor_couplings(b);
      double local = m.fields()[b];
      for (std::size_t t = 0; t < nbrs.size(); ++t) local += cpl[t] * x[nbrs[t]];
      e -= 2.0 * x[b] * local;
      x[b] = static_cast<Spin>(-x[b]);
      if (k % kRefreshBlock == 0) e = energy(m, x);
    }
    values[k ^ (k >> 1)] = e;
    e_max = std::max(e_max, e);
  }

  // Two-level summation keeps the normalizer accurate for 2^25+ terms.
  double total = 0.0;
  for (std::uint64_t start = 0; start < count; start += kRefreshBlock) {
    const std::uint64_t stop = std::min(count, start + kRefreshBlock);
    double block = 0.0;
    for (std::uint64_t k = start; k < stop; ++k) block += std::exp(values[k] - e_max);
    total += block;
  }
  const double log_z = e_max + std::log(total);
  for (double& v : values) v = std::exp(v - log_z);

  return ExactDistribution(std::make_shared<const IsingModel>(m), log_z,
                           std::move(values));
}

namespace {

// Splits a configuration index into low and high halves so that marginal
// sums only touch small lookup tables.
struct SplitIndex {
  std::size_t low_bits;
  std::uint64_t low_size;
  std::uint64_t high_size;

  explicit SplitIndex(std::size_t n)
      : low_bits(n / 2),
        low_size(std::uint64_t{1} << (n / 2)),
        high_size(std::uint64_t{1} << (n - n / 2)) {}
};

inline double spin_of(std::uint64_t bits, std::size_t k) {
  return ((bits >> k) & 1U) ? 1.0 : -1.0;
}

}  // namespace

MomentSummary exact_moments(const ExactDistribution& d) {
  const std::size_t n = d.num_nodes();
  const SplitIndex split(n);
  const std::size_t k_low = split.low_bits;
  const auto& p = d.probabilities();

  std::vector<double> low_marginal(split.low_size, 0.0);
  std::vector<double> high_marginal(split.high_size, 0.0);
  // low_signed[h * k_low + i] = sum over low halves of p * x_i
  std::vector<double> low_signed(split.high_size * k_low, 0.0);

  for (std::uint64_t h = 0; h < split.high_size; ++h) {
    const double* row = p.data() + h * split.low_size;
    double row_sum = 0.0;
    double* signed_row = low_signed.data() + h * k_low;
    for (std::uint64_t lo = 0; lo < split.low_size; ++lo) {
      const double q = row[lo];
      row_sum += q;
      low_marginal[lo] += q;
      for (std::size_t i = 0; i < k_low; ++i) {
        signed_row[i] += ((lo >> i) & 1U) ? q : -q;
      }
    }
    high_marginal[h] = row_sum;
  }

  MomentSummary out;
  out.mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                 static_cast<Eigen::Index>(n));
  for (std::uint64_t lo = 0; lo < split.low_size; ++lo) {
    const double q = low_marginal[lo];
    for (std::size_t i = 0; i < k_low; ++i) {
      const double xi = spin_of(lo, i);
      out.mean(static_cast<Eigen::Index>(i)) += q * xi;
      for (std::size_t j = i + 1; j < k_low; ++j) {
        second(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
            q * xi * spin_of(lo, j);
      }
    }
  }
  const std::size_t k_high = n - k_low;
  for (std::uint64_t h = 0; h < split.high_size; ++h) {
    const double q = high_marginal[h];
    for (std::size_t a = 0; a < k_high; ++a) {
      const double xa = spin_of(h, a);
      const auto ia = static_cast<Eigen::Index>(k_low + a);
      out.mean(ia) += q * xa;
      for (std::size_t b = a + 1; b < k_high; ++b) {
        second(ia, static_cast<Eigen::Index>(k_low + b)) += q * xa * spin_of(h, b);
      }
      for (std::size_t i = 0; i < k_low; ++i) {
        second(static_cast<Eigen::Index>(i), ia) += xa * low_signed[h * k_low + i];
      }
    }
  }
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
    second(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < static_cast<Eigen::Index>(n); ++j) {
      second(j, i) = second(i, j);
    }
  }
  out.covariance = second - out.mean * out.mean.transpose();
  return out;
}

std::vector<double> marginal_table(const ExactDistribution& d,
                                   std::span<const NodeId> vars) {
  const std::size_t n = d.num_nodes();
  if (vars.size() > 30) throw invalid_argument("marginal over too many variables");
  std::vector<bool> seen(n, false);
  for (NodeId v : vars) {
    if (v >= n) throw invalid_argument("variable " + std::to_string(v) + " out of range");
    if (seen[v]) throw invalid_argument("variable " + std::to_string(v) + " repeated");
    seen[v] = true;
  }
  const SplitIndex split(n);
  std::vector<std::uint32_t> low_lut(split.low_size, 0), high_lut(split.high_size, 0);
  for (std::size_t k = 0; k < vars.size(); ++k) {
    const NodeId v = vars[k];
    const std::uint32_t bit = std::uint32_t{1} << k;
    if (v < split.low_bits) {
      for (std::uint64_t lo = 0; lo < split.low_size; ++lo) {
        if ((lo >> v) & 1U) low_lut[lo] |= bit;
      }
    } else {
      const std::size_t shift = v - split.low_bits;
      for (std::uint64_t h = 0; h < split.high_size; ++h) {
        if ((h >> shift) & 1U) high_lut[h] |= bit;
      }
    }
  }
  std::vector<double> table(std::size_t{1} << vars.size(), 0.0);
  const auto& p = d.probabilities();
  for (std::uint64_t h = 0; h < split.high_size; ++h) {
    const std::uint32_t hp = high_lut[h];
    const double* row = p.data() + h * split.low_size;
    for (std::uint64_t lo = 0; lo < split.low_size; ++lo) {
      table[hp | low_lut[lo]] += row[lo];
    }
  }
  return table;
}

double exact_conditional(const ExactDistribution& d, NodeId node,
                         std::span<const NodeId> parents,
                         std::span<const Spin> assignment) {
  if (assignment.size() != parents.size()) {
    throw invalid_argument("assignment has " + std::to_string(assignment.size()) +
                           " spins for " + std::to_string(parents.size()) +
                           " parents");
  }
  std::vector<NodeId> vars{node};
  vars.insert(vars.end(), parents.begin(), parents.end());
  if (std::find(parents.begin(), parents.end(), node) != parents.end()) {
    throw invalid_argument("node cannot be its own parent");
  }
  const auto table = marginal_table(d, vars);
  std::size_t pattern = 0;
  for (std::size_t k = 0; k < assignment.size(); ++k) {
    if (assignment[k] > 0) pattern |= std::size_t{1} << (k + 1);
  }
  const double up = table[pattern | 1U];
  const double down = table[pattern];
  return up / (up + down);
}

SampleSet sample_exact(const ExactDistribution& d, std::size_t count,
                       std::uint64_t seed) {
  const std::size_t n = d.num_nodes();
  SampleSet out(n);
  if (count == 0) return out;

  // Sorting the uniforms lets one pass over the cumulative table serve every
  // draw; results are written back in draw order.
  Rng rng(seed);
  std::vector<std::pair<double, std::size_t>> draws(count);
  for (std::size_t k = 0; k < count; ++k) draws[k] = {rng.uniform(), k};
  std::sort(draws.begin(), draws.end());

  const auto& p = d.probabilities();
  std::vector<ConfigIndex> picked(count);
  ConfigIndex last_positive = 0;
  double cumulative = 0.0;
  std::size_t next = 0;
  for (ConfigIndex b = 0; b < p.size() && next < count; ++b) {
    if (p[b] <= 0.0) continue;
    last_positive = b;
    cumulative += p[b];
    while (next < count && draws[next].first < cumulative) {
      picked[draws[next].second] = b;
      ++next;
    }
  }
  // Draws above the rounded total fall on the last configuration with mass.
  for (; next < count; ++next) picked[draws[next].second] = last_positive;

  out.reserve(count);
  Configuration x(n);
  for (ConfigIndex b : picked) {
    for (std::size_t k = 0; k < n; ++k) x[k] = ((b >> k) & 1U) ? 1 : -1;
    out.add(x);
  }
  return out;
}

}  // namespace arorder

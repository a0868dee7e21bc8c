#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace arorder {

using Spin = std::int8_t;
// One spin per node, each exactly -1 or +1.
using Configuration = std::vector<Spin>;

// Weighted spin configurations stored row-major. Weights default to 1 and
// carry empirical frequencies for counted datasets.
class SampleSet {
 public:
  SampleSet() = default;
  explicit SampleSet(std::size_t n) : n_(n) {}

  std::size_t num_nodes() const { return n_; }
  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }

  // Throws if the row has the wrong length, a spin outside {-1,+1} or a
  // negative or non-finite weight.
  void add(std::span<const Spin> spins, double weight = 1.0);
  void reserve(std::size_t rows) {
    spins_.reserve(rows * n_);
    weights_.reserve(rows);
  }
  // Appends every row of `other`; node counts must agree.
  void append(const SampleSet& other);

  std::span<const Spin> row(std::size_t i) const {
    return {spins_.data() + i * n_, n_};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const { return weights_; }
  double total_weight() const;

  friend bool operator==(const SampleSet&, const SampleSet&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Spin> spins_;
  std::vector<double> weights_;
};

// Merges identical rows (summing weights), keeping first-appearance order.
// Only sets with at most 64 nodes are merged; larger sets are returned as is.
SampleSet deduplicate(const SampleSet& samples);

// First two moments of a spin distribution.
struct MomentSummary {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
};

// Weighted mean and population covariance (normalized by total weight).
// Throws when the total weight is zero.
MomentSummary empirical_moments(const SampleSet& samples);

// sqrt(||mean_a - mean_b||_2 + ||cov_a - cov_b||_F)
double sampling_error(const MomentSummary& a, const MomentSummary& b);

class ExactDistribution;

struct ErrorStats {
  double mean = 0.0;
  double stddev = 0.0;  // population standard deviation across trials
};

// Error of M_s exact draws against the exact moments, over `trials`
// independent draws; trial t uses seed ^ (t + 1).
ErrorStats baseline_error(const ExactDistribution& dist, std::size_t num_samples,
                          std::size_t trials, std::uint64_t seed);

// Mean and population standard deviation of a list of values.
ErrorStats summarize(std::span<const double> values);

}  // namespace arorder

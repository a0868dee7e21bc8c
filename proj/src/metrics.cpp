#include "arorder/metrics.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include "arorder/error.hpp"
#include "arorder/ising.hpp"

namespace arorder {

void SampleSet::add(std::span<const Spin> spins, double weight) {
  if (spins.size() != n_) {
    throw invalid_argument("sample row has " + std::to_string(spins.size()) +
                           " spins, expected " + std::to_string(n_));
  }
  for (Spin s : spins) {
    if (s != 1 && s != -1) throw invalid_argument("spins must be -1 or +1");
  }
  if (!std::isfinite(weight) || weight < 0.0) {
    throw invalid_argument("sample weights must be finite and nonnegative");
  }
  spins_.insert(spins_.end(), spins.begin(), spins.end());
  weights_.push_back(weight);
}

void SampleSet::append(const SampleSet& other) {
  if (other.n_ != n_) throw invalid_argument("cannot append samples of a different size");
  spins_.insert(spins_.end(), other.spins_.begin(), other.spins_.end());
  weights_.insert(weights_.end(), other.weights_.begin(), other.weights_.end());
}

double SampleSet::total_weight() const {
  double total = 0.0;
  for (double w : weights_) total += w;
  return total;
}

SampleSet deduplicate(const SampleSet& samples) {
  const std::size_t n = samples.num_nodes();
  if (n > 64) return samples;
  std::unordered_map<std::uint64_t, std::size_t> slot;
  std::vector<std::uint64_t> keys;
  std::vector<double> weights;
  for (std::size_t r = 0; r < samples.size(); ++r) {
    const std::uint64_t key = index_from_config(samples.row(r));
    auto [it, inserted] = slot.try_emplace(key, keys.size());
    if (inserted) {
      keys.push_back(key);
      weights.push_back(samples.weight(r));
    } else {
      weights[it->second] += samples.weight(r);
    }
  }
  SampleSet out(n);
  out.reserve(keys.size());
  for (std::size_t k = 0; k < keys.size(); ++k) {
    out.add(config_from_index(keys[k], n), weights[k]);
  }
  return out;
}

MomentSummary empirical_moments(const SampleSet& raw) {
  const SampleSet samples = deduplicate(raw);
  const std::size_t n = samples.num_nodes();
  const double total = samples.total_weight();
  if (!(total > 0.0)) throw invalid_argument("sample set has zero total weight");

  const auto dim = static_cast<Eigen::Index>(n);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
  Eigen::MatrixXd outer = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd x(dim);
  for (std::size_t r = 0; r < samples.size(); ++r) {
    const double w = samples.weight(r);
    if (w == 0.0) continue;
    const auto row = samples.row(r);
    for (std::size_t i = 0; i < n; ++i) x(static_cast<Eigen::Index>(i)) = row[i];
    sum.noalias() += w * x;
    outer.selfadjointView<Eigen::Upper>().rankUpdate(x, w);
  }
  MomentSummary out;
  out.mean = sum / total;
  Eigen::MatrixXd second = outer.selfadjointView<Eigen::Upper>();
  second /= total;
  out.covariance = second - out.mean * out.mean.transpose();
  return out;
}

double sampling_error(const MomentSummary& a, const MomentSummary& b) {
  if (a.mean.size() != b.mean.size() || a.covariance.rows() != b.covariance.rows() ||
      a.covariance.cols() != b.covariance.cols() ||
      a.covariance.rows() != a.mean.size()) {
    throw invalid_argument("moment summaries have mismatched dimensions");
  }
  return std::sqrt((a.mean - b.mean).norm() + (a.covariance - b.covariance).norm());
}

ErrorStats summarize(std::span<const double> values) {
  ErrorStats s;
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(ss / static_cast<double>(values.size()));
  return s;
}

ErrorStats baseline_error(const ExactDistribution& dist, std::size_t num_samples,
                          std::size_t trials, std::uint64_t seed) {
  if (trials == 0) throw invalid_argument("baseline_error needs at least one trial");
  const MomentSummary exact = exact_moments(dist);
  std::vector<double> errors;
  errors.reserve(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    const SampleSet s = sample_exact(dist, num_samples, seed ^ (t + 1));
    errors.push_back(sampling_error(empirical_moments(s), exact));
  }
  return summarize(errors);
}

}  // namespace arorder

#include <doctest.h>

#include <cmath>

#include "arorder/error.hpp"
#include "support.hpp"

using namespace arorder;
using namespace testing;

namespace {

SampleSet from_rows(std::size_t n, std::initializer_list<std::vector<int>> rows,
                    std::initializer_list<double> weights = {}) {
  SampleSet s(n);
  auto w = weights.begin();
  for (const auto& r : rows) {
    Configuration x(r.begin(), r.end());
    s.add(x, weights.size() ? *w++ : 1.0);
  }
  return s;
}

MomentSummary summary(std::vector<double> mean, std::vector<double> cov) {
  const auto n = static_cast<Eigen::Index>(mean.size());
  MomentSummary m{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) m.mean(i) = mean[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i < n * n; ++i) m.covariance(i / n, i % n) = cov[static_cast<std::size_t>(i)];
  return m;
}

}  // namespace

TEST_CASE("sample set validation") {
  SampleSet s(2);
  const Configuration ok{1, -1}, bad{1, 0}, short_row{1};
  s.add(ok);
  CHECK_THROWS_AS(s.add(bad), Error);
  CHECK_THROWS_AS(s.add(short_row), Error);
  CHECK_THROWS_AS(s.add(ok, -1.0), Error);
  CHECK_THROWS_AS(s.add(ok, NAN), Error);
  CHECK(s.size() == 1);
  CHECK(s.total_weight() == 1.0);
}

TEST_CASE("empirical moments") {
  const auto a = empirical_moments(from_rows(2, {{1, -1}}));
  CHECK(a.mean(0) == 1.0);
  CHECK(a.mean(1) == -1.0);
  CHECK(a.covariance.cwiseAbs().maxCoeff() == 0.0);

  const auto b = empirical_moments(from_rows(2, {{1, 1}, {-1, -1}}));
  CHECK(b.mean.cwiseAbs().maxCoeff() == 0.0);
  CHECK(b.covariance(0, 1) == doctest::Approx(1.0));

  const auto c = empirical_moments(from_rows(1, {{1}, {-1}}, {3.0, 1.0}));
  CHECK(c.mean(0) == doctest::Approx(0.5));
  CHECK(c.covariance(0, 0) == doctest::Approx(0.75));

  CHECK_THROWS_AS(empirical_moments(SampleSet(2)), Error);
}

TEST_CASE("counted rows weigh the same as repeated rows") {
  Rng rng(4);
  SampleSet expanded(5), counted(5);
  for (int r = 0; r < 40; ++r) {
    Configuration x(5);
    for (auto& v : x) v = rng.uniform() < 0.3 ? Spin{-1} : Spin{1};
    const auto k = 1 + rng.below(5);
    counted.add(x, static_cast<double>(k));
    for (std::size_t j = 0; j < k; ++j) expanded.add(x);
  }
  const auto a = empirical_moments(expanded), b = empirical_moments(counted);
  CHECK((a.mean - b.mean).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((a.covariance - b.covariance).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(deduplicate(expanded).total_weight() == expanded.total_weight());
  CHECK(deduplicate(expanded).size() <= 40);
}

TEST_CASE("sampling error") {
  const auto a = summary({0.6}, {0.64});
  const auto b = summary({0.5}, {0.75});
  CHECK(sampling_error(a, b) == doctest::Approx(std::sqrt(0.21)).epsilon(1e-12));
  CHECK(sampling_error(a, b) == doctest::Approx(0.458258).epsilon(1e-6));
  CHECK(sampling_error(a, a) == 0.0);
  CHECK_THROWS_AS(sampling_error(a, summary({0, 0}, {1, 0, 0, 1})), Error);

  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> m1(3), m2(3), c1(9), c2(9);
    for (auto* v : {&m1, &m2, &c1, &c2})
      for (double& x : *v) x = 2 * rng.uniform() - 1;
    const auto x = summary(m1, c1), y = summary(m2, c2);
    CHECK(sampling_error(x, y) == sampling_error(y, x));
    CHECK(sampling_error(x, y) > 0.0);
  }
}

TEST_CASE("summaries and baseline error") {
  const std::vector<double> v{1.0, 3.0};
  const auto s = summarize(v);
  CHECK(s.mean == 2.0);
  CHECK(s.stddev == 1.0);
  CHECK(summarize(std::vector<double>{5.0}).stddev == 0.0);

  const auto one = enumerate_distribution(IsingModel(Graph(1, std::vector<Edge>{}), {0.0}, {}));
  CHECK(baseline_error(one, 1000, 1, 1).stddev == 0.0);
  const auto small = baseline_error(one, 1000, 20, 2);
  const auto large = baseline_error(one, 100000, 20, 2);
  CHECK(large.mean < small.mean);
  CHECK(baseline_error(one, 1000, 5, 7).mean == baseline_error(one, 1000, 5, 7).mean);
}

TEST_CASE("empirical moments of exact samples converge") {
  const auto d = enumerate_distribution(make_spin_glass(build_lattice(3), 5, CouplingLaw::uniform_unit));
  const auto truth = exact_moments(d);
  std::vector<double> e3, e4;
  for (std::uint64_t t = 0; t < 20; ++t) {
    e3.push_back(sampling_error(empirical_moments(sample_exact(d, 1000, 100 + t)), truth));
    e4.push_back(sampling_error(empirical_moments(sample_exact(d, 10000, 200 + t)), truth));
  }
  CHECK(summarize(e4).mean < summarize(e3).mean);
}

#include <doctest.h>

#include <cmath>

#include "arorder/error.hpp"
#include "support.hpp"

using namespace arorder;
using namespace testing;

namespace {

const double kE = std::exp(1.0);

IsingModel single_node(double field) {
  return IsingModel(Graph(1, std::vector<Edge>{}), {field}, {});
}

IsingModel two_node_ferro() {
  const std::vector<Edge> e{{0, 1}};
  return IsingModel(Graph(2, e), {0.0, 0.0}, {1.0});
}

Configuration spins(std::initializer_list<int> v) {
  Configuration x;
  for (int s : v) x.push_back(static_cast<Spin>(s));
  return x;
}

}  // namespace

TEST_CASE("model validation") {
  const Graph g = path_graph(3);
  CHECK_THROWS_AS(IsingModel(g, {0.0, 0.0}, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(IsingModel(g, {0.0, 0.0, 0.0}, {1.0}), Error);
  CHECK_THROWS_AS(IsingModel(g, {0.0, NAN, 0.0}, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(IsingModel(g, {0.0, 0.0, 0.0}, {1.0, INFINITY}), Error);
  const IsingModel m(g, {0.0, 0.0, 0.0}, {0.5, -2.0});
  CHECK(m.coupling(2, 1) == -2.0);
}

TEST_CASE("energy") {
  CHECK(energy(make_ferromagnet(build_lattice(2)), spins({1, 1, 1, 1})) == 4.0);
  CHECK(energy(single_node(0.7), spins({-1})) == doctest::Approx(-0.7));
  const IsingModel fig = make_ferromagnet(example_graph());
  CHECK(energy(fig, spins({1, 1, -1, -1, 1})) == -1.0);
  CHECK_THROWS_AS(energy(fig, spins({1, 1})), Error);
}

TEST_CASE("model generators") {
  const IsingModel ferro = make_ferromagnet(build_lattice(5));
  CHECK(ferro.couplings().size() == 40);
  for (double c : ferro.couplings()) CHECK(c == 1.0);
  for (double f : ferro.fields()) CHECK(f == 0.0);
  CHECK(is_ferromagnet(ferro));
  CHECK(make_ferromagnet(build_lattice(2)).couplings() == std::vector<double>(4, 1.0));

  const IsingModel empty = make_ferromagnet(Graph(3, std::vector<Edge>{}));
  CHECK(empty.couplings().empty());
  CHECK(empty.fields() == std::vector<double>(3, 0.0));

  const Graph g = build_lattice(6);
  const IsingModel pm = make_spin_glass(g, 17, CouplingLaw::pm_one);
  bool saw_neg = false, saw_pos = false;
  for (double c : pm.couplings()) {
    CHECK((c == 1.0 || c == -1.0));
    saw_neg |= c < 0;
    saw_pos |= c > 0;
  }
  CHECK((saw_neg && saw_pos));
  CHECK_FALSE(is_ferromagnet(pm));
  const IsingModel uu = make_spin_glass(g, 17, CouplingLaw::uniform_unit);
  for (double c : uu.couplings()) {
    CHECK(c >= -1.0);
    CHECK(c <= 1.0);
  }
  const IsingModel dw = make_spin_glass(g, 3, CouplingLaw::dwave_range);
  for (double c : dw.couplings()) CHECK((std::abs(c) >= 0.25 && std::abs(c) <= 2.0));
  for (double f : dw.fields()) CHECK((std::abs(f) >= 0.25 && std::abs(f) <= 2.0));
  CHECK(make_spin_glass(g, 17, CouplingLaw::pm_one) == pm);
  CHECK_FALSE(make_spin_glass(g, 18, CouplingLaw::pm_one) == pm);
}

TEST_CASE("configuration index convention") {
  const Configuration x = spins({1, -1, 1});
  CHECK(index_from_config(x) == 0b101);
  CHECK(config_from_index(0b101, 3) == x);
  for (ConfigIndex i = 0; i < 64; ++i) CHECK(index_from_config(config_from_index(i, 6)) == i);
}

TEST_CASE("enumeration: analytic cases") {
  const auto one = enumerate_distribution(single_node(0.0));
  CHECK(one.probability(0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(one.probability(1) == doctest::Approx(0.5).epsilon(1e-15));

  const auto two = enumerate_distribution(two_node_ferro());
  const double z = 2 * kE + 2 / kE;
  CHECK(two.log_z() == doctest::Approx(std::log(z)).epsilon(1e-14));
  CHECK(two.probability(0b00) == doctest::Approx(kE / z).epsilon(1e-14));
  CHECK(two.probability(0b11) == doctest::Approx(0.4403985389889412).epsilon(1e-14));
  CHECK(two.probability(0b01) == doctest::Approx(0.05960146101105878).epsilon(1e-13));
  CHECK(two.probability(0b10) == doctest::Approx(0.05960146101105878).epsilon(1e-13));
}

TEST_CASE("enumeration matches naive evaluation") {
  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 1 + rng.below(12);
    const Graph g = random_connected_graph(n, 0.4 * rng.uniform(), rng);
    // Integer parameters make every energy exact in floating point.
    const bool integral = t % 2 == 0;
    const IsingModel m = integral ? make_spin_glass(g, rng.next_u64(), CouplingLaw::pm_one)
                                  : random_model(g, rng, 1.5);
    const auto d = enumerate_distribution(m);
    std::vector<double> e(std::size_t{1} << n);
    double emax = -INFINITY;
    for (ConfigIndex i = 0; i < e.size(); ++i) {
      e[i] = energy(m, config_from_index(i, n));
      emax = std::max(emax, e[i]);
    }
    double z = 0.0;
    for (double v : e) z += std::exp(v - emax);
    const double log_z = emax + std::log(z);
    CHECK(d.log_z() == doctest::Approx(log_z).epsilon(1e-12));
    double total = 0.0;
    for (ConfigIndex i = 0; i < e.size(); ++i) {
      const double p = std::exp(e[i] - log_z);
      CHECK(d.probability(i) > 0.0);
      CHECK(std::abs(d.probability(i) - p) <= 1e-12);
      total += d.probability(i);
    }
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("enumeration cap") {
  const IsingModel m = make_ferromagnet(build_lattice(4));
  try {
    (void)enumerate_distribution(m, 15);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.code()) == "enumeration_cap");
  }
}

TEST_CASE("exact moments") {
  const auto one = exact_moments(enumerate_distribution(single_node(0.0)));
  CHECK(std::abs(one.mean(0)) < 1e-15);
  CHECK(one.covariance(0, 0) == doctest::Approx(1.0));

  const auto two = exact_moments(enumerate_distribution(two_node_ferro()));
  CHECK(std::abs(two.mean(0)) < 1e-15);
  CHECK(std::abs(two.mean(1)) < 1e-15);
  CHECK(two.covariance(0, 1) == doctest::Approx(std::tanh(1.0)).epsilon(1e-13));

  Rng rng(8);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 1 + rng.below(10);
    const IsingModel m = random_model(random_connected_graph(n, 0.3, rng), rng);
    const auto d = enumerate_distribution(m);
    const auto mom = exact_moments(d);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    Eigen::MatrixXd second = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                   static_cast<Eigen::Index>(n));
    for (ConfigIndex i = 0; i < (ConfigIndex{1} << n); ++i) {
      const auto x = config_from_index(i, n);
      Eigen::VectorXd v(static_cast<Eigen::Index>(n));
      for (std::size_t k = 0; k < n; ++k) v(static_cast<Eigen::Index>(k)) = x[k];
      mean += d.probability(i) * v;
      second += d.probability(i) * v * v.transpose();
    }
    const Eigen::MatrixXd cov = second - mean * mean.transpose();
    CHECK((mom.mean - mean).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((mom.covariance - cov).cwiseAbs().maxCoeff() < 1e-12);
    for (std::size_t k = 0; k < n; ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      CHECK(std::abs(mom.covariance(kk, kk) - (1.0 - mom.mean(kk) * mom.mean(kk))) < 1e-12);
    }
  }
}

TEST_CASE("marginal tables") {
  Rng rng(21);
  const IsingModel m = random_model(random_connected_graph(7, 0.4, rng), rng);
  const auto d = enumerate_distribution(m);
  const std::vector<NodeId> vars{5, 1, 3};
  const auto table = marginal_table(d, vars);
  REQUIRE(table.size() == 8);
  std::vector<double> brute(8, 0.0);
  for (ConfigIndex i = 0; i < 128; ++i) {
    std::size_t c = 0;
    for (std::size_t k = 0; k < vars.size(); ++k) c |= ((i >> vars[k]) & 1) << k;
    brute[c] += d.probability(i);
  }
  for (std::size_t c = 0; c < 8; ++c) CHECK(std::abs(table[c] - brute[c]) < 1e-14);
  const std::vector<NodeId> bad{1, 1};
  CHECK_THROWS_AS(marginal_table(d, bad), Error);
}

TEST_CASE("exact conditionals") {
  const auto one = enumerate_distribution(single_node(0.5));
  CHECK(exact_conditional(one, 0, {}, {}) == doctest::Approx(0.731059).epsilon(1e-6));

  const IsingModel chain = make_ferromagnet(path_graph(3));
  const auto d = enumerate_distribution(chain);
  const std::vector<NodeId> p1{1}, p12{1, 2};
  CHECK(exact_conditional(d, 0, p1, spins({1})) == doctest::Approx(0.880797).epsilon(1e-6));
  for (int s2 : {-1, 1}) {
    CHECK(exact_conditional(d, 0, p12, spins({1, s2})) ==
          doctest::Approx(kE / (kE + 1 / kE)).epsilon(1e-13));
  }
  // Empty parent set gives the marginal.
  const auto table = marginal_table(d, std::vector<NodeId>{2});
  CHECK(exact_conditional(d, 2, {}, {}) == doctest::Approx(table[1]).epsilon(1e-14));
}

TEST_CASE("Markov reduction: product of conditionals on parent sets is exact") {
  Rng rng(77);
  for (int t = 0; t < 25; ++t) {
    const std::size_t n = 2 + rng.below(9);
    const Graph g = random_connected_graph(n, 0.35 * rng.uniform(), rng);
    const IsingModel m = random_model(g, rng, 1.2);
    const auto d = enumerate_distribution(m);
    const Ordering sigma = random_ordering(n, rng.next_u64());
    const auto par = parent_sets(g, sigma);
    double worst = 0.0;
    for (ConfigIndex i = 0; i < (ConfigIndex{1} << n); ++i) {
      const auto x = config_from_index(i, n);
      double prod = 1.0;
      for (std::size_t k = 0; k < n; ++k) {
        const NodeId v = sigma[k];
        Configuration a;
        for (NodeId p : par[v]) a.push_back(x[p]);
        const double up = exact_conditional(d, v, par[v], a);
        prod *= x[v] > 0 ? up : 1.0 - up;
      }
      worst = std::max(worst, std::abs(prod - d.probability(i)));
    }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("exact sampling") {
  const auto one = enumerate_distribution(single_node(0.0));
  CHECK(sample_exact(one, 0, 1).empty());
  const SampleSet s = sample_exact(one, 100000, 3);
  CHECK(s.size() == 100000);
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) sum += s.row(i)[0];
  CHECK(std::abs(sum / 1e5) < 4.0 / std::sqrt(1e5));
  CHECK(sample_exact(one, 1000, 9) == sample_exact(one, 1000, 9));
  CHECK_FALSE(sample_exact(one, 1000, 9) == sample_exact(one, 1000, 10));

  // Frequencies follow the probabilities.
  const auto d = enumerate_distribution(make_ferromagnet(build_lattice(2)));
  const SampleSet big = sample_exact(d, 200000, 4);
  std::vector<double> freq(16, 0.0);
  for (std::size_t i = 0; i < big.size(); ++i) freq[index_from_config(big.row(i))] += 1.0 / 2e5;
  for (ConfigIndex i = 0; i < 16; ++i) {
    const double p = d.probability(i);
    CHECK(std::abs(freq[i] - p) < 5.0 * std::sqrt(p * (1 - p) / 2e5) + 1e-9);
  }
}

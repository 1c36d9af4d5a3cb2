#include <doctest.h>

#include <random>

#include "fkdyn/matchkit.hpp"
#include "fkdyn/measurekit.hpp"
#include "oracles.hpp"
#include "pointkey.hpp"

using namespace fkdyn;

namespace {

const MetricSystem& line() {
  static const MetricSystem sys = MetricSystem::real_line([](const Point& p) { return p; }, "real-line");
  return sys;
}

DiscreteMeasure reals(std::vector<double> pts, std::vector<double> w) {
  return make_measure(line(), std::vector<Point>(pts.begin(), pts.end()), std::move(w));
}

double prokhorov_oracle(const DiscreteMeasure& a, const DiscreteMeasure& b) {
  std::vector<std::vector<double>> d(a.size(), std::vector<double>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) d[i][j] = line().distance(a.support[i], b.support[j]);
  }
  return oracle::prokhorov_subsets(a.weights, b.weights, d);
}

DiscreteMeasure random_measure(std::mt19937_64& rng, std::size_t size) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> pts(size);
  std::vector<double> w(size);
  double total = 0.0;
  for (std::size_t i = 0; i < size; ++i) {
    pts[i] = std::round(u(rng) * 64.0) / 64.0 + static_cast<double>(i) * 1e-6;
    w[i] = 1.0 + static_cast<double>(rng() % 8);
    total += w[i];
  }
  for (auto& x : w) x /= total;
  return {std::vector<Point>(pts.begin(), pts.end()), w};
}

}  // namespace

TEST_CASE("point keys") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 200; ++t) {
    Word w(1 + rng() % 12);
    for (auto& s : w) s = static_cast<double>(rng() % 3);
    const std::size_t r = detail::least_rotation(w);
    Word best = w;
    for (std::size_t k = 0; k < w.size(); ++k) {
      Word rot(w.size());
      for (std::size_t j = 0; j < w.size(); ++j) rot[j] = w[(k + j) % w.size()];
      best = std::min(best, rot);
    }
    Word got(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) got[j] = w[(r + j) % w.size()];
    CHECK(got == best);
  }
  CHECK(detail::primitive_period({0, 1, 0, 1}) == 2);
  CHECK(detail::primitive_period({0, 1, 0}) == 3);

  detail::PointKeyer keys;
  const auto a = make_periodic_point({0, 1});
  const auto b = make_periodic_point({1, 0, 1, 0});
  const auto c = make_symbolic_point({1, 0, 1}, {0, 1});
  const auto ida = keys.id_of(a);
  CHECK(keys.id_of(b) != ida);
  CHECK(keys.id_of(SymbolicPoint{b.seq, 1}) == ida);
  CHECK(keys.id_of(c) == keys.id_of(b));
  CHECK(keys.id_of(make_symbolic_point({1, 1}, {0, 1})) != keys.id_of(b));
  CHECK(keys.id_of(Point(0.5)) == keys.id_of(Point(0.5)));
}

TEST_CASE("empirical measures") {
  const auto shift = MetricSystem::full_shift();
  const auto constant = empirical_measure(shift, PeriodicOrbit::from_word(shift, {1}).trajectory(5), 5);
  REQUIRE(constant.size() == 1);
  CHECK(constant.weights[0] == 1.0);
  const auto alt = empirical_measure(shift, PeriodicOrbit::from_word(shift, {0, 1}).trajectory(4), 4);
  REQUIRE(alt.size() == 2);
  CHECK(alt.weights[0] == 0.5);

  const std::vector<PeriodicOrbit> segs{PeriodicOrbit::from_word(shift, {0}), PeriodicOrbit::from_word(shift, {0, 1})};
  const std::vector<std::size_t> lens{4, 8};
  const auto q = assemble_quasi_orbit(segs, lens);
  const auto m = empirical_measure(shift, q.points(), 12);
  REQUIRE(m.size() == 3);
  CHECK(m.weights[0] == doctest::Approx(4.0 / 12.0));
  CHECK(m.weights[1] == doctest::Approx(4.0 / 12.0));
  CHECK(m.weights[2] == doctest::Approx(4.0 / 12.0));
  CHECK_THROWS_AS(empirical_measure(shift, q.points(), 13), Error);
}

TEST_CASE("prokhorov examples") {
  const auto mu = reals({0.0, 1.0}, {0.25, 0.75});
  CHECK(prokhorov(line(), mu, mu) == 0.0);
  CHECK(prokhorov(line(), reals({0.0}, {1.0}), reals({0.3}, {1.0})) == doctest::Approx(0.3));
  for (double w : {0.0, 0.1, 0.45, 0.9}) {
    const auto a = reals({0.0, 1.0}, {1.0, 0.0});
    const auto b = reals({0.0, 1.0}, {1.0 - w, w});
    CHECK(prokhorov(line(), a, b) == doctest::Approx(w));
    CHECK(prokhorov_oracle(a, b) == doctest::Approx(w));
  }
  CHECK_THROWS_AS(reals({0.0, 1.0}, {0.5, 0.6}), Error);
}

TEST_CASE("prokhorov matches subset oracle and metric axioms") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const auto a = random_measure(rng, 1 + rng() % 6);
    const auto b = random_measure(rng, 1 + rng() % 6);
    const auto c = random_measure(rng, 1 + rng() % 6);
    const double ab = prokhorov(line(), a, b);
    CHECK(ab == doctest::Approx(prokhorov_oracle(a, b)).epsilon(1e-12));
    CHECK(ab == prokhorov(line(), b, a));
    CHECK(prokhorov(line(), a, c) <= ab + prokhorov(line(), b, c) + 1e-12);
    CHECK(prokhorov(line(), a, a) == 0.0);
  }
}

TEST_CASE("block distributions") {
  const auto bd = block_distribution(Word{0, 1, 0, 1, 0, 1, 0, 1, 0}, 2);
  REQUIRE(bd.probs.size() == 2);
  CHECK(bd.probs.at({0, 1}) == 0.5);
  CHECK(bd.probs.at({1, 0}) == 0.5);
  const auto prod = block_distribution(ProductSpec{{0, 1}, {0.5, 0.5}}, 3);
  CHECK(prod.probs.size() == 8);
  for (const auto& [w, p] : prod.probs) CHECK(p == 0.125);

  std::mt19937_64 rng(7);
  std::bernoulli_distribution coin(0.8);
  Word stream(100000);
  for (auto& s : stream) s = coin(rng) ? 1.0 : 0.0;
  CHECK(block_distribution(stream, 1).probs.at({1}) == doctest::Approx(0.8).epsilon(0.0125));
}

TEST_CASE("transport distances") {
  for (double p : {0.1, 0.5, 0.7}) {
    for (double q : {0.2, 0.8}) {
      const auto a = block_distribution(ProductSpec{{0, 1}, {1 - p, p}}, 1);
      const auto b = block_distribution(ProductSpec{{0, 1}, {1 - q, q}}, 1);
      CHECK(std::fabs(transport_block_distance(a, b, BlockCost::Edit).value - std::fabs(p - q)) <= 1e-9);
      CHECK(std::fabs(transport_block_distance(a, b, BlockCost::Hamming).value - std::fabs(p - q)) <= 1e-9);
    }
  }
  const auto uni = block_distribution(ProductSpec{{0, 1}, {0.5, 0.5}}, 2);
  BlockDistribution point;
  point.n = 2;
  point.probs[{0, 0}] = 1.0;
  CHECK(transport_block_distance(uni, point, BlockCost::Edit).value == doctest::Approx(0.5));
  const auto self = transport_block_distance(uni, uni, BlockCost::Edit);
  CHECK(self.value == 0.0);
  for (const auto& [pair, mass] : self.plan.mass) CHECK(pair.first == pair.second);
}

TEST_CASE("transport matches min-cost flow and dominance") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng() % 6;
    auto random_bd = [&] {
      Word stream(40 + rng() % 200);
      const double bias = u(rng);
      for (auto& s : stream) s = u(rng) < bias ? 1.0 : 0.0;
      return block_distribution(stream, n);
    };
    const auto a = random_bd();
    const auto b = random_bd();
    const auto edit = transport_block_distance(a, b, BlockCost::Edit);
    const auto ham = transport_block_distance(a, b, BlockCost::Hamming);
    CHECK(edit.value <= ham.value + 1e-12);
    CHECK(edit.residual <= 1e-9);

    std::vector<double> sa;
    std::vector<double> sb;
    std::vector<Word> wa;
    std::vector<Word> wb;
    for (const auto& [w, p] : a.probs) {
      wa.push_back(w);
      sa.push_back(p);
    }
    for (const auto& [w, p] : b.probs) {
      wb.push_back(w);
      sb.push_back(p);
    }
    std::vector<double> cost(wa.size() * wb.size());
    for (std::size_t i = 0; i < wa.size(); ++i) {
      for (std::size_t j = 0; j < wb.size(); ++j) cost[i * wb.size() + j] = word_metrics(wa[i], wb[j]).edit;
    }
    CHECK(edit.value == doctest::Approx(oracle::transport_ssp(sa, sb, cost)).epsilon(1e-9));

    std::map<Word, double> rows;
    std::map<Word, double> cols;
    for (const auto& [pair, mass] : edit.plan.mass) {
      rows[pair.first] += mass;
      cols[pair.second] += mass;
    }
    for (const auto& [w, p] : a.probs) CHECK(std::fabs(rows[w] - p) <= 1e-9);
    for (const auto& [w, p] : b.probs) CHECK(std::fabs(cols[w] - p) <= 1e-9);
    CHECK((edit.value == 0.0) == (a.probs == b.probs));
  }
}

TEST_CASE("transport errors") {
  BlockDistribution a;
  a.n = 1;
  a.probs[{0}] = 0.5;
  BlockDistribution b;
  b.n = 1;
  b.probs[{0}] = 1.0;
  CHECK_THROWS_AS(transport_block_distance(a, b, BlockCost::Edit), Error);
  b.n = 2;
  CHECK_THROWS_AS(transport_block_distance(a, b, BlockCost::Edit), Error);
}

#include <doctest.h>

#include <cmath>
#include <random>

#include "fkdyn/entrokron.hpp"
#include "fkdyn/gikn.hpp"
#include "oracles.hpp"

using namespace fkdyn;

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;
const double kLog2 = std::log(2.0);

Partition halves(double w = 0.0) {
  if (w == 0.0) return interval_partition({0.5}, {0, 1});
  return interval_partition({w, 0.5 + w}, {1, 0, 1});
}

PointSeq golden_sample(std::size_t n, double x0 = 0.0) {
  return orbit_segment(MetricSystem::circle_rotation(kGolden), Point{x0}, n);
}

Word random_bits(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Word w(n);
  for (auto& s : w) s = static_cast<double>(rng() >> 63);
  return w;
}

double oracle_fbar(const Word& u, const Word& w) {
  const std::size_t l = oracle::dp_lcs_by_relation(u.size(), w.size(), [&](std::size_t i, std::size_t j) { return u[i] == w[j]; });
  return static_cast<double>(u.size() - l) / static_cast<double>(u.size());
}

// max over every binary ω of Σ{bd(u) : f̄_n(ω, u) < ε}, by the textbook table.
double oracle_max_ball(const BlockDistribution& bd, double eps) {
  const std::size_t n = bd.n;
  double best = 0.0;
  for (std::size_t code = 0; code < (std::size_t{1} << n); ++code) {
    Word w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = static_cast<double>((code >> j) & 1U);
    double m = 0.0;
    for (const auto& [u, q] : bd.probs) {
      if (oracle_fbar(w, u) < eps) m += q;
    }
    best = std::max(best, m);
  }
  return best;
}

GiknSequence standard_tower(std::size_t levels) {
  GiknConfig c;
  c.alphabet = {0, 1};
  c.seed = {0};
  c.levels = levels;
  c.weights = {{0, -1}, {1, 1}};
  for (std::size_t n = 0; n + 1 < levels; ++n) {
    c.gamma_budget.push_back(std::pow(4.0, -static_cast<double>(n)));
    c.kappa_floor.push_back(1.0 - std::pow(2.0, -static_cast<double>(n) - 1.0));
  }
  return synthesize_gikn(c);
}

}  // namespace

TEST_CASE("coding sequences") {
  const auto rot = MetricSystem::circle_rotation(0.25);
  CHECK(code_sequence(halves(), orbit_segment(rot, Point{0.0}, 4)) == Word{0, 0, 1, 1});
  const Word w = {2, 0, 1, 1, 2};
  CHECK(code_sequence(identity_partition({0, 1, 2}), stream_points(w)) == w);
  CHECK(code_sequence(trivial_partition(), stream_points(w)) == Word(5, 0.0));
  CHECK_THROWS_AS(code_sequence(identity_partition({0, 1}), stream_points(w)), Error);
}

TEST_CASE("coded block frequencies equal the partition join on the orbit") {
  const auto pts = golden_sample(5000, 0.3);
  const auto p = interval_partition({0.2, 0.55, 0.8}, {0, 1, 2, 1});
  const Word coded = code_sequence(p, pts);
  const std::size_t m = 3;
  const auto bd = block_distribution(coded, m);
  // Direct count: the label tuple (P(x_j), P(T x_j), P(T^2 x_j)) from the points.
  std::map<Word, std::size_t> direct;
  const std::size_t windows = pts.size() - m + 1;
  for (std::size_t j = 0; j < windows; ++j) {
    Word key;
    for (std::size_t i = 0; i < m; ++i) key.push_back(static_cast<double>(p(pts[j + i])));
    ++direct[key];
  }
  REQUIRE(direct.size() == bd.probs.size());
  for (const auto& [w, c] : direct) CHECK(bd.probs.at(w) == static_cast<double>(c) / static_cast<double>(windows));
}

TEST_CASE("partition distance") {
  const auto sample = golden_sample(10000, 0.1);
  CHECK(partition_distance(halves(), halves(), sample) == 0.0);
  const auto flipped = interval_partition({0.5}, {1, 0});
  CHECK(partition_distance(halves(), flipped, sample) == 1.0);
  for (double w : {0.05, 0.1, 0.2}) CHECK(std::fabs(partition_distance(halves(), halves(w), sample) - 2 * w) < 0.01);
}

TEST_CASE("faithful thickening of separated atoms") {
  std::vector<double> v;
  for (int i = 0; i < 50; ++i) v.push_back(0.1 + 0.001 * i);
  for (int i = 0; i < 50; ++i) v.push_back(0.7 + 0.001 * i);
  const auto sample = PointSeq::reals(v);
  const auto sys = MetricSystem::real_line([](const Point& p) { return p; }, "identity");
  const auto th = faithful_thicken(halves(), sys, sample, 0.05);
  CHECK(th.partition.k == 3);
  CHECK(th.distance == 0.0);
  CHECK(th.separation >= 0.7 - 0.149);
  CHECK(th.cut < th.separation / 2);
  CHECK(th.partition.boundary_margin.has_value());
  CHECK(partition_distance(halves(), th.partition, sample) == 0.0);
}

TEST_CASE("faithful thickening moves the cut off sample points") {
  const auto sys = MetricSystem::circle_rotation(kGolden);
  auto pts = golden_sample(200, 0.013).points();
  pts.emplace_back(0.5);
  pts.emplace_back(0.0);
  const PointSeq sample(pts);
  const double margin = 1e-3;
  const auto th = faithful_thicken(halves(), sys, sample, 0.1, margin);
  CHECK(th.distance < 0.1);
  CHECK(partition_distance(halves(), th.partition, sample) == doctest::Approx(th.distance));
  // No sample point sits near a hull boundary: nudging by less than the margin keeps every label.
  for (const auto& x : sample) {
    const double v = std::get<double>(x);
    for (double e : {-0.9 * margin, 0.9 * margin}) {
      double u = v + e;
      u -= std::floor(u);
      CHECK(th.partition(Point{u}) == th.partition(x));
    }
  }
}

TEST_CASE("faithful thickening with a dense sample") {
  const auto sys = MetricSystem::circle_rotation(kGolden);
  const auto sample = golden_sample(3000);
  // Every ring of width 2·10^-3 around a hull boundary holds sample points.
  try {
    (void)faithful_thicken(halves(), sys, sample, 0.01);
    FAIL("expected NoGoodCut");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoGoodCut);
  }
  const auto th = faithful_thicken(halves(), sys, sample, 1.0);
  CHECK(th.partition.k == 3);
  CHECK(th.distance < 1.0);
}

TEST_CASE("block entropy of exact product measures") {
  for (std::size_t n = 1; n <= 4; ++n) {
    ProductSpec spec;
    for (std::size_t l = 0; l < (std::size_t{1} << n); ++l) {
      spec.symbols.push_back(static_cast<double>(l));
      spec.probs.push_back(std::ldexp(1.0, -static_cast<int>(n)));
    }
    for (const auto& e : block_entropy_rate(spec, 5)) {
      CHECK(e.rate == static_cast<double>(n) * kLog2);
      CHECK(e.increment == doctest::Approx(static_cast<double>(n) * kLog2));
    }
  }
  const ProductSpec biased{{0, 1}, {0.25, 0.75}};
  const double h1 = -(0.25 * std::log(0.25) + 0.75 * std::log(0.75));
  const auto est = block_entropy_rate(biased, 4);
  for (const auto& e : est) CHECK(e.rate == doctest::Approx(h1).epsilon(1e-12));
  // Summing the exact block distribution gives the same values.
  std::vector<BlockDistribution> bds;
  for (std::size_t m = 1; m <= 4; ++m) bds.push_back(block_distribution(biased, m));
  const auto from_bd = block_entropy_rate(bds);
  for (std::size_t i = 0; i < 4; ++i) CHECK(from_bd[i].block_entropy == doctest::Approx(est[i].block_entropy));
}

TEST_CASE("block entropy of streams") {
  for (const auto& e : block_entropy_rate(Word(1000, 0.0), 6)) CHECK(e.block_entropy == 0.0);
  const Word iid = random_bits(200000, 11);
  const auto est = block_entropy_rate(iid, 10);
  for (std::size_t m = 0; m < est.size(); ++m) {
    CHECK(est[m].rate == doctest::Approx(kLog2).epsilon(0.02));
    CHECK_FALSE(est[m].undersampled);
    if (m > 0) CHECK(est[m].rate <= est[m - 1].rate + 0.02);
  }
  CHECK(block_entropy_rate(random_bits(1000, 3), 6).back().undersampled);
  // Periodic streams: H_m stops growing once m exceeds the period.
  Word per;
  for (int i = 0; i < 500; ++i) per.insert(per.end(), {0, 1, 1, 0, 1});
  const auto pe = block_entropy_rate(per, 9);
  CHECK(pe.back().block_entropy == doctest::Approx(std::log(5.0)).epsilon(1e-3));
  CHECK(std::fabs(pe.back().increment) < 1e-2);
}

TEST_CASE("f-bar between words against the textbook table") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng() % 150;
    Word u(n), w(n);
    for (auto& s : u) s = static_cast<double>(rng() % 3);
    for (auto& s : w) s = static_cast<double>(rng() % 3);
    CHECK(fbar_words(u, w) == oracle_fbar(u, w));
  }
  CHECK_THROWS_AS(fbar_words({0, 1}, {0}), Error);
}

TEST_CASE("Katok triviality") {
  BlockDistribution point;
  point.n = 6;
  point.probs[{0, 1, 0, 1, 1, 0}] = 1.0;
  for (double eps : {0.01, 0.2, 0.9}) {
    const auto k = katok_trivial(point, eps);
    CHECK(k.trivial);
    CHECK(k.ball_mass == 1.0);
    CHECK(k.beta == 0.0);
    CHECK(k.witness == point.probs.begin()->first);
  }

  const ProductSpec coin{{0, 1}, {0.5, 0.5}};
  for (std::size_t n : {6u, 8u, 10u}) {
    const auto bd = block_distribution(coin, n);
    const auto k = katok_trivial(bd, 0.2);
    CHECK(k.exhaustive);
    CHECK(k.candidates == (std::size_t{1} << n));
    CHECK_FALSE(k.trivial);
    CHECK(k.ball_mass < 0.8);
    if (n <= 8) CHECK(k.ball_mass == doctest::Approx(oracle_max_ball(bd, 0.2)));
  }

  const auto sturm = block_distribution(rotation_coding(kGolden, 0.0, 100000), 100);
  const auto ks = katok_trivial(sturm, 0.25);
  CHECK(ks.trivial);
  CHECK_FALSE(ks.exhaustive);
  CHECK(ks.consistent);
}

TEST_CASE("small beta always gives a large ball") {
  std::mt19937_64 rng(17);
  std::size_t sqrt_cases = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 4 + rng() % 20;
    // Noisy copies of one word, so that β ranges from tiny to large.
    Word base(n);
    for (auto& s : base) s = static_cast<double>(rng() & 1U);
    const double flip = static_cast<double>(rng() % 100) / 1000.0;
    Word stream;
    for (int rep = 0; rep < 60; ++rep) {
      for (double s : base) stream.push_back((static_cast<double>(rng() % 10000) / 10000.0 < flip) ? 1.0 - s : s);
    }
    const auto bd = block_distribution(stream, n);
    for (double eps : {0.1, 0.25, 0.4}) {
      const auto k = katok_trivial(bd, eps);
      CHECK(k.consistent);
      if (k.sqrt_beta) {
        ++sqrt_cases;
        CHECK(k.ball_mass >= 1.0 - eps);
        CHECK(k.sqrt_beta_mass >= 1.0 - std::sqrt(k.beta) - 1e-12);
      }
    }
  }
  CHECK(sqrt_cases > 20);
}

TEST_CASE("loosely Kronecker diagnostic") {
  for (const auto& pt : loosely_kronecker_diagnostic(Word(5000, 1.0), 0.1, {1, 10, 50})) {
    CHECK(pt.mass == 1.0);
    CHECK(pt.pass);
  }
  const auto bern = loosely_kronecker_diagnostic(random_bits(100000, 23), 0.2, {12});
  CHECK(bern[0].mass < 0.8);
  CHECK_FALSE(bern[0].pass);
  CHECK_THROWS_AS(loosely_kronecker_diagnostic(Word(100, 0.0), 0.1, {2}), Error);

  const auto tower = standard_tower(5);
  const auto lq = limit_quasi_orbit(tower, 100000);
  Word s;
  for (const auto& p : lq.orbit.points()) s.push_back(std::get<SymbolicPoint>(p).at(0));
  const auto curve = loosely_kronecker_diagnostic(s, 0.25, {32, 128, 512});
  bool any = false;
  for (const auto& pt : curve) {
    CHECK(pt.set_size <= pt.distinct_blocks);
    any = any || pt.mass > 0.75;
  }
  CHECK(any);
}

TEST_CASE("countable alphabet example") {
  double prev = INFINITY;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto ex = countable_alphabet_example(n, 256, 1);
    CHECK(ex.entropy_rate == static_cast<double>(n) * kLog2);
    for (double s : ex.sample) {
      CHECK(s > std::ldexp(1.0, -static_cast<int>(n) - 1));
      CHECK(s <= std::ldexp(1.0, -static_cast<int>(n)));
    }
    CHECK(ex.fk_to_fixed_point < prev);
    // Every shifted point lies within 2·2^-n of 0^∞.
    CHECK(ex.fk_to_fixed_point <= std::ldexp(2.0, -static_cast<int>(n)));
    prev = ex.fk_to_fixed_point;
  }
  CHECK(countable_alphabet_example(2, 128, 9).sample == countable_alphabet_example(2, 128, 9).sample);
}

#include "fkdyn/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "fkdyn/entrokron.hpp"
#include "fkdyn/ergodiag.hpp"
#include "fkdyn/gikn.hpp"
#include "fkdyn/io.hpp"
#include "fkdyn/matchkit.hpp"
#include "fkdyn/measurekit.hpp"

namespace fkdyn {

using json = nlohmann::json;

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Uniform draws from raw engine output only, so streams do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  Rng(std::uint64_t seed, const std::string& stream, std::uint64_t i) : engine_(instance_seed(seed, stream, i)) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  Symbol bit() { return static_cast<Symbol>(engine_() >> 63); }

 private:
  std::mt19937_64 engine_;
};

// Strict reader over one JSON object: every key must be read exactly once,
// and finish() rejects the rest.
class Params {
 public:
  Params(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "must be an object");
  }

  double real(const std::string& key) {
    const auto& v = get(key);
    if (!v.is_number()) fail(at(key), "must be a number");
    return v.get<double>();
  }
  std::size_t count(const std::string& key) {
    const auto& v = get(key);
    if (!v.is_number_unsigned()) fail(at(key), "must be a nonnegative integer");
    return v.get<std::size_t>();
  }
  std::vector<double> reals(const std::string& key) {
    const auto& v = get(key);
    if (!v.is_array() || v.empty()) fail(at(key), "must be a nonempty array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) fail(at(key), "must be a nonempty array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  std::vector<std::size_t> counts(const std::string& key) {
    const auto& v = get(key);
    if (!v.is_array() || v.empty()) fail(at(key), "must be a nonempty array of integers");
    std::vector<std::size_t> out;
    for (const auto& e : v) {
      if (!e.is_number_unsigned()) fail(at(key), "must be a nonempty array of integers");
      out.push_back(e.get<std::size_t>());
    }
    return out;
  }
  std::vector<Word> words(const std::string& key) {
    const auto& v = get(key);
    if (!v.is_array() || v.empty()) fail(at(key), "must be a nonempty array of words");
    std::vector<Word> out;
    for (const auto& e : v) {
      if (!e.is_string()) fail(at(key), "must be a nonempty array of words");
      out.push_back(io::parse_word(e.get<std::string>()));
    }
    return out;
  }
  Word word(const std::string& key) {
    const auto& v = get(key);
    if (!v.is_string()) fail(at(key), "must be a word string");
    return io::parse_word(v.get<std::string>());
  }
  CocycleWeights weights(const std::string& key) {
    const auto& v = get(key);
    if (!v.is_object() || v.empty()) fail(at(key), "must be an object of symbol weights");
    CocycleWeights out;
    for (const auto& [k, w] : v.items()) {
      if (!w.is_number()) fail(at(key) + "." + k, "must be a number");
      out[io::parse_word(k).at(0)] = w.get<double>();
    }
    return out;
  }

  void require(bool ok, const std::string& key, const std::string& what) const {
    if (!ok) fail(at(key), what);
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!used_.count(k)) fail(at(k), "unknown key");
    }
  }

 private:
  const json& get(const std::string& key) {
    if (!j_.contains(key)) fail(at(key), "missing");
    used_.insert(key);
    return j_.at(key);
  }
  [[nodiscard]] std::string at(const std::string& key) const { return path_ + "." + key; }
  [[noreturn]] static void fail(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::InvalidConfig, "'" + path + "' " + what);
  }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

// Long-format rows: kind,index,quantity,value.
class Table {
 public:
  void add(const std::string& kind, std::size_t index, const std::string& quantity, double value) {
    text_ += kind + "," + std::to_string(index) + "," + quantity + "," + io::format_number(value) + "\n";
  }
  void add_text(const std::string& kind, std::size_t index, const std::string& quantity, const std::string& value) {
    text_ += kind + "," + std::to_string(index) + "," + quantity + "," + value + "\n";
  }
  [[nodiscard]] std::string str() const { return "kind,index,quantity,value\n" + text_; }

 private:
  std::string text_;
};

const MetricSystem& real_line() {
  static const MetricSystem sys = MetricSystem::real_line([](const Point& p) { return p; }, "real-line");
  return sys;
}

Word random_bits(Rng& rng, std::size_t n) {
  Word w(n);
  for (auto& s : w) s = rng.bit();
  return w;
}

// Longest common subsequence by enumerating the subsequences of u.
std::size_t brute_lcs(const Word& u, const Word& w) {
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << u.size()); ++mask) {
    const auto len = static_cast<std::size_t>(std::popcount(mask));
    if (len <= best) continue;
    std::size_t j = 0;
    for (std::size_t i = 0; i < u.size() && j <= w.size(); ++i) {
      if (!((mask >> i) & 1U)) continue;
      while (j < w.size() && w[j] != u[i]) ++j;
      if (j == w.size()) {
        j = w.size() + 1;
        break;
      }
      ++j;
    }
    if (j <= w.size()) best = len;
  }
  return best;
}

ExperimentResult match_oracle(const ExperimentConfig& cfg) {
  Params p(cfg.params, "params");
  const std::size_t instances = p.count("instances");
  const std::size_t max_n = p.count("max_n");
  const double delta_max = p.real("delta_max");
  const std::size_t word_pairs = p.count("word_pairs");
  const std::size_t max_word_length = p.count("max_word_length");
  p.require(max_n >= 1 && max_n <= kBruteMaxHorizon, "max_n", "must lie in [1, " + std::to_string(kBruteMaxHorizon) + "]");
  p.require(max_word_length >= 1 && max_word_length <= 20, "max_word_length", "must lie in [1, 20]");
  p.require(delta_max > 0.0, "delta_max", "must be positive");
  p.finish();

  Table t;
  std::size_t mismatches = 0;
  std::size_t invalid = 0;
  for (std::size_t i = 0; i < instances; ++i) {
    Rng rng(cfg.seed, "match", i);
    const std::size_t n = 1 + rng.below(max_n);
    std::vector<double> xv(n);
    std::vector<double> zv(n);
    for (auto& v : xv) v = rng.uniform();
    for (auto& v : zv) v = rng.uniform();
    const double delta = 1e-3 + rng.uniform() * delta_max;
    const auto x = PointSeq::reals(xv);
    const auto z = PointSeq::reals(zv);
    const auto dp = max_match(real_line(), x, z, n, delta);
    const auto brute = max_match(real_line(), x, z, n, delta, MatchMode::Brute);
    mismatches += dp.fit() != brute.fit() ? 1 : 0;
    invalid += is_valid_match(real_line(), x, z, dp) ? 0 : 1;
    t.add("match", i, "n", static_cast<double>(n));
    t.add("match", i, "delta", delta);
    t.add("match", i, "dp_fit", static_cast<double>(dp.fit()));
    t.add("match", i, "brute_fit", static_cast<double>(brute.fit()));
  }
  std::size_t word_mismatches = 0;
  for (std::size_t i = 0; i < word_pairs; ++i) {
    Rng rng(cfg.seed, "words", i);
    const std::size_t n = 1 + rng.below(max_word_length);
    const Word u = random_bits(rng, n);
    const Word w = random_bits(rng, n);
    const double edit = word_metrics(u, w).edit;
    const std::size_t l = brute_lcs(u, w);
    const double expected = 1.0 - static_cast<double>(l) / static_cast<double>(n);
    word_mismatches += edit == expected ? 0 : 1;
    t.add("word", i, "n", static_cast<double>(n));
    t.add("word", i, "edit", edit);
    t.add("word", i, "brute_lcs", static_cast<double>(l));
  }
  ExperimentResult r;
  r.csv = t.str();
  r.checks.push_back({"match dp fit equals brute force", static_cast<double>(mismatches), 0.0, mismatches == 0});
  r.checks.push_back({"match dp is a valid match", static_cast<double>(invalid), 0.0, invalid == 0});
  r.checks.push_back({"word edit equals brute-force lcs", static_cast<double>(word_mismatches), 0.0, word_mismatches == 0});
  return r;
}

ExperimentResult pseudometric_axioms(const ExperimentConfig& cfg) {
  Params p(cfg.params, "params");
  const std::size_t triples = p.count("triples");
  const std::size_t max_period = p.count("max_period");
  const double tol = p.real("tol");
  const std::size_t fekete_pairs = p.count("fekete_pairs");
  const std::vector<double> deltas = p.reals("fekete_deltas");
  const std::size_t doublings = p.count("doublings");
  p.require(max_period >= 1, "max_period", "must be positive");
  p.require(tol > 0.0, "tol", "must be positive");
  p.require(doublings >= 1, "doublings", "must be positive");
  p.finish();

  const auto sys = MetricSystem::full_shift();
  Table t;
  std::size_t asym = 0;
  double worst = -INFINITY;
  for (std::size_t i = 0; i < triples; ++i) {
    Rng rng(cfg.seed, "triples", i);
    std::vector<PeriodicOrbit> o;
    for (int k = 0; k < 3; ++k) o.push_back(PeriodicOrbit::from_word(sys, random_bits(rng, 1 + rng.below(max_period))));
    double d[3][3] = {};
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = 0; b < 3; ++b) {
        if (a != b) d[a][b] = fk_distance(o[a], o[b], tol).value;
      }
    }
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = a + 1; b < 3; ++b) asym += d[a][b] == d[b][a] ? 0 : 1;
    }
    // d(a,c) − d(a,b) − d(b,c) over all orderings.
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = 0; b < 3; ++b) {
        for (std::size_t c = 0; c < 3; ++c) {
          if (a != b && b != c && a != c) worst = std::max(worst, d[a][c] - d[a][b] - d[b][c]);
        }
      }
    }
    t.add_text("triple", i, "words", io::format_word(o[0].word()) + " " + io::format_word(o[1].word()) + " " +
                                         io::format_word(o[2].word()));
    t.add("triple", i, "fk01", d[0][1]);
    t.add("triple", i, "fk12", d[1][2]);
    t.add("triple", i, "fk02", d[0][2]);
  }
  std::size_t increases = 0;
  std::size_t inexact = 0;
  for (std::size_t i = 0; i < fekete_pairs; ++i) {
    Rng rng(cfg.seed, "fekete", i);
    const auto a = PeriodicOrbit::from_word(sys, random_bits(rng, 1 + rng.below(max_period)));
    const auto b = PeriodicOrbit::from_word(sys, random_bits(rng, 1 + rng.below(max_period)));
    for (std::size_t k = 0; k < deltas.size(); ++k) {
      const auto g = fbar_delta_periodic(a, b, deltas[k], 1e-12, std::size_t{1} << (doublings - 1));
      inexact += g.exact_fits ? 0 : 1;
      for (std::size_t s = 0; s < g.trace.size(); ++s) {
        if (s > 0 && g.trace[s] > g.trace[s - 1]) ++increases;
        t.add("fekete", i, "delta=" + io::format_number(deltas[k]) + ";doubling=" + std::to_string(s), g.trace[s]);
      }
    }
  }
  ExperimentResult r;
  r.csv = t.str();
  r.checks.push_back({"fk symmetric", static_cast<double>(asym), 0.0, asym == 0});
  r.checks.push_back({"fk triangle excess", worst, 3 * tol, worst <= 3 * tol});
  r.checks.push_back({"fekete trace nonincreasing", static_cast<double>(increases), 0.0, increases == 0});
  r.checks.push_back({"fekete fits exact", static_cast<double>(inexact), 0.0, inexact == 0});
  return r;
}

ExperimentResult prokhorov_bound(const ExperimentConfig& cfg) {
  Params p(cfg.params, "params");
  const std::size_t pairs = p.count("pairs");
  const std::size_t n = p.count("n");
  const std::size_t max_attempts = p.count("max_attempts");
  const double noise = p.real("noise");
  p.require(n >= 2 && n <= 200, "n", "must lie in [2, 200]");
  p.require(noise >= 0.0 && noise <= 1.0, "noise", "must lie in [0, 1]");
  p.finish();

  Table t;
  std::size_t qualified = 0;
  std::size_t violations = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < max_attempts && qualified < pairs; ++i) {
    Rng rng(cfg.seed, "prokhorov", i);
    const double delta = 0.02 + 0.28 * rng.uniform();
    const double eps = 0.05 + 0.45 * rng.uniform();
    std::vector<double> xv(n);
    for (auto& v : xv) v = rng.uniform();
    // z: x jittered within δ, a few entries replaced, and one short block rotated.
    std::vector<double> zv = xv;
    for (auto& v : zv) {
      v = rng.uniform() < noise ? rng.uniform() : v + (rng.uniform() - 0.5) * delta;
    }
    const std::size_t a = rng.below(n);
    const std::size_t b = a + rng.below(n - a);
    if (b > a) std::rotate(zv.begin() + static_cast<std::ptrdiff_t>(a), zv.begin() + static_cast<std::ptrdiff_t>(a + 1),
                           zv.begin() + static_cast<std::ptrdiff_t>(b + 1));
    const auto x = PointSeq::reals(xv);
    const auto z = PointSeq::reals(zv);
    const double g = gap(real_line(), x, z, n, delta).value;
    if (!(g < eps)) continue;
    const double dp = prokhorov(real_line(), empirical_measure(real_line(), x, n), empirical_measure(real_line(), z, n));
    const double bound = std::max(delta, eps);
    violations += dp < bound ? 0 : 1;
    worst = std::max(worst, dp / bound);
    t.add("pair", qualified, "delta", delta);
    t.add("pair", qualified, "epsilon", eps);
    t.add("pair", qualified, "gap", g);
    t.add("pair", qualified, "prokhorov", dp);
    ++qualified;
  }
  ExperimentResult r;
  r.csv = t.str();
  r.checks.push_back({"qualifying pairs", static_cast<double>(qualified), static_cast<double>(pairs), qualified >= pairs});
  r.checks.push_back({"prokhorov below max(delta, epsilon)", static_cast<double>(violations), 0.0, violations == 0});
  r.checks.push_back({"worst prokhorov ratio", worst, 1.0, worst < 1.0});
  return r;
}

ExperimentResult gikn_tower(const ExperimentConfig& cfg) {
  Params p(cfg.params, "params");
  GiknConfig g;
  g.alphabet = p.word("alphabet");
  g.seed = p.word("seed_word");
  g.levels = p.count("levels");
  g.gamma_budget = p.reals("gamma_budget");
  g.kappa_floor = p.reals("kappa_floor");
  g.weights = p.weights("weights");
  g.alpha = p.real("alpha");
  const double tol = p.real("tol");
  const std::size_t limit_length = p.count("limit_length");
  const std::size_t entropy_m = p.count("entropy_m");
  const double entropy_bound = p.real("entropy_bound");
  p.require(g.levels >= 2, "levels", "must be at least 2");
  p.require(g.gamma_budget.size() + 1 >= g.levels, "gamma_budget", "needs levels − 1 entries");
  p.require(g.kappa_floor.size() + 1 >= g.levels, "kappa_floor", "needs levels − 1 entries");
  p.require(tol > 0.0, "tol", "must be positive");
  p.require(entropy_m >= 1, "entropy_m", "must be positive");
  p.finish();

  const auto gs = synthesize_gikn(g);
  Table t;
  ExperimentResult r;
  for (std::size_t n = 0; n < gs.levels.size(); ++n) {
    const auto& l = gs.levels[n];
    t.add("level", n, "length", static_cast<double>(l.word.size()));
    t.add("level", n, "chi", l.chi);
    if (n > 0) {
      t.add("level", n, "gamma", l.gamma);
      t.add("level", n, "kappa", l.kappa);
      t.add("level", n, "achieved_kappa", l.approx ? l.approx->achieved_kappa() : 0.0);
      r.checks.push_back({"good approximation " + std::to_string(n - 1) + "-" + std::to_string(n),
                          l.approx ? l.approx->achieved_kappa() : 0.0, l.kappa, l.approx.has_value()});
    }
  }
  const auto cauchy = verify_cauchy(gs, tol);
  for (const auto& e : cauchy.consecutive) {
    const std::string tag = std::to_string(e.n) + "-" + std::to_string(e.m);
    t.add("consecutive", e.n, "fk", e.fk);
    t.add("consecutive", e.n, "bound", e.bound);
    r.checks.push_back({"cauchy consecutive " + tag, e.fk, e.bound, e.pass});
  }
  for (std::size_t i = 0; i < cauchy.pairs.size(); ++i) {
    const auto& e = cauchy.pairs[i];
    const std::string tag = std::to_string(e.n) + "-" + std::to_string(e.m);
    t.add("pair", i, "fk:" + tag, e.fk);
    t.add("pair", i, "bound:" + tag, e.bound);
    r.checks.push_back({"cauchy telescoped " + tag, e.fk, e.bound, e.pass});
  }
  for (const auto& d : exponent_decay(gs)) {
    t.add("decay", d.level, "ratio", d.ratio);
    r.checks.push_back({"exponent decay " + std::to_string(d.level) + "-" + std::to_string(d.level + 1), d.ratio,
                        gs.alpha, d.pass});
  }
  const auto lq = limit_quasi_orbit(gs, limit_length);
  Word stream;
  stream.reserve(limit_length);
  for (const auto& pt : lq.orbit.points()) stream.push_back(std::get<SymbolicPoint>(pt).at(0));
  const auto est = block_entropy_rate(stream, entropy_m);
  double rise = -INFINITY;
  for (std::size_t m = 0; m < est.size(); ++m) {
    t.add("limit_entropy", est[m].m, "rate_nats", est[m].rate);
    if (m > 0) rise = std::max(rise, est[m].rate - est[m - 1].rate);
  }
  r.checks.push_back({"limit entropy rate nonincreasing", rise, 0.0, rise <= 0.0});
  r.checks.push_back({"limit entropy rate at m=" + std::to_string(entropy_m) + " (nats)", est.back().rate,
                      entropy_bound, est.back().rate < entropy_bound});
  r.csv = t.str();
  return r;
}

ExperimentResult oxtoby(const ExperimentConfig& cfg) {
  Params p(cfg.params, "params");
  const std::size_t length = p.count("length");
  const double rotation = p.real("rotation");
  const double x0 = p.real("x0");
  const double alpha = p.real("alpha");
  const std::vector<std::size_t> klist = p.counts("klist");
  const double density_bound = p.real("density_bound");
  const std::vector<std::size_t> mixture_k = p.counts("mixture_k");
  const double mixture_bound = p.real("mixture_bound");
  const std::vector<Word> cylinders = p.words("cylinders");
  p.finish();

  std::vector<std::pair<std::string, TestFunction>> family;
  family.emplace_back("coordinate", coordinate_function(1.0));
  for (const auto& c : cylinders) family.emplace_back("cylinder:" + io::format_word(c), cylinder_function(c));

  Table t;
  ExperimentResult r;
  const auto rot = stream_points(rotation_coding(rotation, x0, length));
  Word mix(length, 0.0);
  std::fill(mix.begin() + static_cast<std::ptrdiff_t>(length / 2), mix.end(), 1.0);
  const auto mixture = stream_points(mix);
  for (const auto& [label, phi] : family) {
    const auto curve = bad_segment_density(rot, phi, alpha, klist);
    for (const auto& pt : curve.points) {
      t.add("rotation:" + label, pt.k, "density", pt.density);
      r.checks.push_back({"rotation " + label + " k=" + std::to_string(pt.k), pt.density, density_bound,
                          pt.density < density_bound});
    }
  }
  // The mixture check uses the coordinate, on which the two halves differ.
  const auto curve = bad_segment_density(mixture, family.front().second, alpha, mixture_k);
  for (const auto& pt : curve.points) {
    t.add("mixture:coordinate", pt.k, "density", pt.density);
    r.checks.push_back({"mixture coordinate k=" + std::to_string(pt.k), pt.density, mixture_bound,
                        pt.density >= mixture_bound});
  }
  r.csv = t.str();
  return r;
}

ExperimentResult entropy_discontinuity(const ExperimentConfig& cfg) {
  Params p(cfg.params, "params");
  const std::vector<std::size_t> levels = p.counts("levels");
  const std::size_t sample_length = p.count("sample_length");
  for (std::size_t n : levels) p.require(n >= 1 && n <= 4, "levels", "entries must lie in [1, 4]");
  p.require(std::is_sorted(levels.begin(), levels.end()), "levels", "must be increasing");
  p.finish();

  Table t;
  ExperimentResult r;
  double prev = INFINITY;
  double rise = -INFINITY;
  for (std::size_t n : levels) {
    const auto ex = countable_alphabet_example(n, sample_length, instance_seed(cfg.seed, "countable", n));
    const double expected = static_cast<double>(n) * std::log(2.0);
    t.add("level", n, "entropy_rate_nats", ex.entropy_rate);
    t.add("level", n, "fk_to_fixed_point", ex.fk_to_fixed_point);
    r.checks.push_back({"entropy rate n=" + std::to_string(n), ex.entropy_rate, expected, ex.entropy_rate == expected});
    if (std::isfinite(prev)) rise = std::max(rise, ex.fk_to_fixed_point - prev);
    prev = ex.fk_to_fixed_point;
  }
  r.checks.push_back({"fk to fixed point strictly decreasing", rise, 0.0, rise < 0.0});
  r.csv = t.str();
  return r;
}

ExperimentResult katok_sweep(const ExperimentConfig& cfg) {
  Params p(cfg.params, "params");
  const std::vector<std::size_t> bernoulli_n = p.counts("bernoulli_n");
  const double bernoulli_epsilon = p.real("bernoulli_epsilon");
  const double bernoulli_bound = p.real("bernoulli_bound");
  const double rotation = p.real("rotation");
  const std::size_t sturmian_length = p.count("sturmian_length");
  const std::size_t sturmian_n = p.count("sturmian_n");
  const double sturmian_epsilon = p.real("sturmian_epsilon");
  const std::size_t trials = p.count("consistency_trials");
  const std::vector<double> eps_grid = p.reals("consistency_epsilons");
  for (std::size_t n : bernoulli_n) p.require(n >= 1 && n <= 12, "bernoulli_n", "entries must lie in [1, 12]");
  p.finish();

  Table t;
  ExperimentResult r;
  std::size_t violations = 0;
  std::size_t sqrt_cases = 0;
  auto record = [&](const KatokResult& k) {
    if (!k.consistent) ++violations;
    if (k.sqrt_beta) ++sqrt_cases;
  };
  const ProductSpec coin{{0, 1}, {0.5, 0.5}};
  for (std::size_t n : bernoulli_n) {
    const auto k = katok_trivial(block_distribution(coin, n), bernoulli_epsilon);
    record(k);
    t.add("bernoulli", n, "ball_mass", k.ball_mass);
    t.add("bernoulli", n, "beta", k.beta);
    t.add_text("bernoulli", n, "witness", io::format_word(k.witness));
    r.checks.push_back({"bernoulli n=" + std::to_string(n) + " exhaustive max ball mass", k.ball_mass, bernoulli_bound,
                        k.exhaustive && k.ball_mass < bernoulli_bound});
  }
  const Word sturm = rotation_coding(rotation, 0.0, sturmian_length);
  const auto ks = katok_trivial(block_distribution(sturm, sturmian_n), sturmian_epsilon);
  record(ks);
  t.add("sturmian", sturmian_n, "ball_mass", ks.ball_mass);
  t.add("sturmian", sturmian_n, "beta", ks.beta);
  t.add("sturmian", sturmian_n, "boundary_blocks", static_cast<double>(ks.boundary_blocks));
  r.checks.push_back({"sturmian n=" + std::to_string(sturmian_n) + " trivial", ks.ball_mass, 1.0 - sturmian_epsilon,
                      ks.trivial});

  // Noisy repetitions of a random word give block distributions with β from
  // near zero upward.
  for (std::size_t i = 0; i < trials; ++i) {
    Rng rng(cfg.seed, "katok", i);
    const std::size_t n = 4 + rng.below(20);
    const Word base = random_bits(rng, n);
    const double flip = 0.1 * rng.uniform();
    Word stream;
    for (int rep = 0; rep < 60; ++rep) {
      for (Symbol s : base) stream.push_back(rng.uniform() < flip ? 1.0 - s : s);
    }
    const auto bd = block_distribution(stream, n);
    for (double e : eps_grid) {
      const auto k = katok_trivial(bd, e);
      record(k);
      t.add("trial", i, "eps=" + io::format_number(e) + ";beta", k.beta);
      t.add("trial", i, "eps=" + io::format_number(e) + ";ball_mass", k.ball_mass);
    }
  }
  r.checks.push_back({"beta below eps^2 implies ball mass at least 1-eps", static_cast<double>(violations), 0.0,
                      violations == 0});
  t.add("summary", 0, "sqrt_beta_cases", static_cast<double>(sqrt_cases));
  r.csv = t.str();
  return r;
}

ExperimentResult transport_curve(const ExperimentConfig& cfg) {
  Params p(cfg.params, "params");
  const std::size_t bernoulli_pairs = p.count("bernoulli_pairs");
  const std::size_t random_pairs = p.count("random_pairs");
  const std::size_t max_n = p.count("max_n");
  const double tol = p.real("tol");
  const double curve_p = p.real("curve_p");
  const double curve_q = p.real("curve_q");
  const std::size_t curve_n_max = p.count("curve_n_max");
  p.require(max_n >= 1 && max_n <= 8, "max_n", "must lie in [1, 8]");
  p.require(curve_n_max >= 1 && curve_n_max <= 10, "curve_n_max", "must lie in [1, 10]");
  p.finish();

  Table t;
  ExperimentResult r;
  double n1_err = 0.0;
  double marg_err = 0.0;
  auto marginal_error = [](const TransportResult& tr, const BlockDistribution& a, const BlockDistribution& b) {
    std::map<Word, double> rows;
    std::map<Word, double> cols;
    for (const auto& [pair, mass] : tr.plan.mass) {
      rows[pair.first] += mass;
      cols[pair.second] += mass;
    }
    double e = 0.0;
    for (const auto& [w, q] : a.probs) e = std::max(e, std::fabs(rows[w] - q));
    for (const auto& [w, q] : b.probs) e = std::max(e, std::fabs(cols[w] - q));
    return e;
  };
  for (std::size_t i = 0; i < bernoulli_pairs; ++i) {
    Rng rng(cfg.seed, "bernoulli", i);
    const double pp = rng.uniform();
    const double qq = rng.uniform();
    const auto a = block_distribution(ProductSpec{{0, 1}, {1 - pp, pp}}, 1);
    const auto b = block_distribution(ProductSpec{{0, 1}, {1 - qq, qq}}, 1);
    for (auto cost : {BlockCost::Edit, BlockCost::Hamming}) {
      const auto tr = transport_block_distance(a, b, cost);
      n1_err = std::max(n1_err, std::fabs(tr.value - std::fabs(pp - qq)));
      marg_err = std::max(marg_err, marginal_error(tr, a, b));
    }
    t.add("bernoulli", i, "abs_diff", std::fabs(pp - qq));
  }
  std::size_t dominance = 0;
  for (std::size_t i = 0; i < random_pairs; ++i) {
    Rng rng(cfg.seed, "blocks", i);
    const std::size_t n = 1 + rng.below(max_n);
    auto random_bd = [&] {
      Word stream(40 + rng.below(200));
      const double bias = rng.uniform();
      for (auto& s : stream) s = rng.uniform() < bias ? 1.0 : 0.0;
      return block_distribution(stream, n);
    };
    const auto a = random_bd();
    const auto b = random_bd();
    const auto edit = transport_block_distance(a, b, BlockCost::Edit);
    const auto ham = transport_block_distance(a, b, BlockCost::Hamming);
    dominance += edit.value <= ham.value ? 0 : 1;
    marg_err = std::max({marg_err, marginal_error(edit, a, b), marginal_error(ham, a, b)});
    t.add("random", i, "n", static_cast<double>(n));
    t.add("random", i, "edit", edit.value);
    t.add("random", i, "hamming", ham.value);
  }
  for (std::size_t n = 1; n <= curve_n_max; ++n) {
    const auto a = block_distribution(ProductSpec{{0, 1}, {1 - curve_p, curve_p}}, n);
    const auto b = block_distribution(ProductSpec{{0, 1}, {1 - curve_q, curve_q}}, n);
    const auto edit = transport_block_distance(a, b, BlockCost::Edit);
    const auto ham = transport_block_distance(a, b, BlockCost::Hamming);
    marg_err = std::max({marg_err, marginal_error(edit, a, b), marginal_error(ham, a, b)});
    t.add("curve", n, "edit", edit.value);
    t.add("curve", n, "hamming", ham.value);
  }
  r.checks.push_back({"n=1 bernoulli transport equals |p-q|", n1_err, tol, n1_err <= tol});
  r.checks.push_back({"edit cost at most hamming cost", static_cast<double>(dominance), 0.0, dominance == 0});
  r.checks.push_back({"coupling marginals", marg_err, tol, marg_err <= tol});
  r.csv = t.str();
  return r;
}

using Runner = std::function<ExperimentResult(const ExperimentConfig&)>;

const std::map<std::string, Runner>& registry() {
  static const std::map<std::string, Runner> r = {
      {"match-oracle", match_oracle},
      {"pseudometric-axioms", pseudometric_axioms},
      {"prokhorov-bound", prokhorov_bound},
      {"gikn-tower", gikn_tower},
      {"oxtoby", oxtoby},
      {"entropy-discontinuity", entropy_discontinuity},
      {"katok-sweep", katok_sweep},
      {"transport-curve", transport_curve},
  };
  return r;
}

}  // namespace

std::uint64_t instance_seed(std::uint64_t seed, const std::string& stream, std::uint64_t i) {
  // FNV-1a of the stream name, mixed with the seed and instance index.
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : stream) h = (h ^ c) * 1099511628211ULL;
  std::uint64_t state = seed ^ h;
  splitmix64(state);
  state ^= i;
  return splitmix64(state);
}

bool ExperimentResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string ExperimentResult::summary_json(const ExperimentConfig& config) const {
  nlohmann::ordered_json checks_j = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["value"] = c.value;
    e["bound"] = c.bound;
    e["pass"] = c.pass;
    checks_j.push_back(e);
  }
  nlohmann::ordered_json s;
  s["experiment"] = config.name;
  s["seed"] = config.seed;
  s["status"] = passed() ? "pass" : "fail";
  s["entropy_unit"] = "nats";
  s["checks"] = checks_j;
  return s.dump(2) + "\n";
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
  static const std::set<std::string> known = {"name", "seed", "params", "output_dir"};
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) throw Error(ErrorCode::InvalidConfig, "'" + k + "' unknown key");
  }
  ExperimentConfig c;
  if (!j.contains("name") || !j.at("name").is_string()) throw Error(ErrorCode::InvalidConfig, "'name' missing");
  c.name = j.at("name").get<std::string>();
  if (!registry().count(c.name)) throw Error(ErrorCode::UnknownExperiment, "no experiment named '" + c.name + "'");
  if (!j.contains("seed") || !j.at("seed").is_number_unsigned()) {
    throw Error(ErrorCode::InvalidConfig, "'seed' must be a nonnegative 64-bit integer");
  }
  c.seed = j.at("seed").get<std::uint64_t>();
  if (!j.contains("params")) throw Error(ErrorCode::InvalidConfig, "'params' missing");
  c.params = j.at("params");
  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) throw Error(ErrorCode::InvalidConfig, "'output_dir' must be a string");
    c.output_dir = j.at("output_dir").get<std::string>();
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  json j;
  try {
    j = json::parse(io::read_text(path));
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidConfig, path + ": " + e.what());
  }
  return parse_config(j);
}

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : registry()) out.push_back(name);
  return out;
}

ExperimentResult evaluate_experiment(const ExperimentConfig& config) {
  const auto it = registry().find(config.name);
  if (it == registry().end()) throw Error(ErrorCode::UnknownExperiment, "no experiment named '" + config.name + "'");
  return it->second(config);
}

int run_experiment(const ExperimentConfig& config) {
  const auto res = evaluate_experiment(config);
  const std::filesystem::path dir = config.output_dir.empty() ? "." : config.output_dir;
  std::filesystem::create_directories(dir);
  io::write_text((dir / "results.csv").string(), res.csv);
  io::write_text((dir / "summary.json").string(), res.summary_json(config));
  return res.passed() ? 0 : 1;
}

}  // namespace fkdyn

#include "fkdyn/gikn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "pointkey.hpp"

namespace fkdyn {

namespace {

constexpr std::uint64_t kMod = (std::uint64_t{1} << 61) - 1;
constexpr std::uint64_t kBase = 1000003;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  std::uint64_t r = static_cast<std::uint64_t>(p >> 61) + static_cast<std::uint64_t>(p & kMod);
  if (r >= kMod) r -= kMod;
  return r;
}

std::uint64_t addmod(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  if (r >= kMod) r -= kMod;
  return r;
}

std::uint64_t submod(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kMod - b; }

// Dense symbol ids shared by both words so hashes are comparable.
struct SymbolIds {
  std::map<Symbol, std::uint64_t> ids;
  std::vector<std::uint64_t> encode(const Word& w) {
    std::vector<std::uint64_t> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
      auto [it, fresh] = ids.emplace(w[i], ids.size() + 1);
      out[i] = it->second;
    }
    return out;
  }
};

// Hashes of all cyclic windows of the given length.
std::vector<std::uint64_t> cyclic_window_hashes(const std::vector<std::uint64_t>& s, std::size_t len) {
  const std::size_t n = s.size();
  std::vector<std::uint64_t> out(n);
  std::uint64_t top = 1;
  for (std::size_t i = 1; i < len; ++i) top = mulmod(top, kBase);
  std::uint64_t h = 0;
  for (std::size_t i = 0; i < len; ++i) h = addmod(mulmod(h, kBase), s[i % n]);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = h;
    h = submod(h, mulmod(s[i], top));
    h = addmod(mulmod(h, kBase), s[(i + len) % n]);
  }
  return out;
}

void require_probability(double v, const char* what) {
  if (!(v > 0.0 && v <= 1.0)) {
    throw Error(ErrorCode::InvalidInput, std::string(what) + " must lie in (0, 1]");
  }
}

// Fibers are counted over the distinct points of Λ, its first `distinct` rotations.
GoodApproximation trim_fibers(std::size_t big, std::size_t small, std::size_t distinct,
                              const std::vector<std::int64_t>& phase, double gamma, double kappa) {
  GoodApproximation ga;
  ga.gamma = gamma;
  ga.kappa = kappa;
  ga.gamma_period = big;
  ga.lambda_period = small;
  std::vector<std::size_t> count(distinct, 0);
  for (auto r : phase) {
    if (r >= 0) ++count[static_cast<std::size_t>(r)];
  }
  ga.fiber_size = *std::min_element(count.begin(), count.end());
  ga.surjective = ga.fiber_size > 0;
  std::fill(count.begin(), count.end(), 0);
  for (std::size_t y = 0; y < big; ++y) {
    if (phase[y] < 0) continue;
    const auto r = static_cast<std::size_t>(phase[y]);
    if (count[r] == ga.fiber_size) continue;
    ++count[r];
    ga.delta_set.push_back(y);
    ga.psi.push_back(r);
  }
  return ga;
}

// Shift metric: y is shadowed by rotation r for q steps within γ iff the
// cyclic words agree on q + K − 1 symbols. Periodic runs let each run of
// rotation matches be checked against Λ once.
std::vector<std::int64_t> shift_phases(const Word& big, const Word& small, std::size_t agree) {
  const std::size_t n = big.size();
  const std::size_t q = small.size();
  const std::size_t root = detail::primitive_period(small);
  SymbolIds ids;
  const auto g = ids.encode(big);
  const auto l = ids.encode(small);

  std::vector<char> eq(n);
  for (std::size_t i = 0; i < n; ++i) eq[i] = g[i] == g[(i + q) % n];
  // run[i] = number of consecutive eq from i, capped at `need`.
  const std::size_t need = agree > 0 ? agree - 1 : 0;
  std::vector<std::size_t> run(n, 0);
  if (need > 0) {
    std::size_t cur = 0;
    for (std::size_t pass = 0; pass < need / n + 2; ++pass) {
      for (std::size_t k = n; k-- > 0;) {
        cur = eq[k] ? std::min(cur + 1, need) : 0;
        run[k] = cur;
      }
    }
  }

  std::unordered_map<std::uint64_t, std::size_t> rotation_of;
  const auto lh = cyclic_window_hashes(l, q);
  for (std::size_t r = 0; r < q; ++r) rotation_of.emplace(lh[r], r);
  const auto gh = cyclic_window_hashes(g, q);

  std::vector<std::int64_t> phase(n, -1);
  std::int64_t prev = -1;
  for (std::size_t y = 0; y < n; ++y) {
    std::int64_t r = -1;
    if (prev >= 0 && eq[y - 1]) {
      r = static_cast<std::int64_t>((static_cast<std::size_t>(prev) + 1) % q);
    } else if (auto it = rotation_of.find(gh[y]); it != rotation_of.end()) {
      bool same = true;
      for (std::size_t j = 0; j < q && same; ++j) same = g[(y + j) % n] == l[(it->second + j) % q];
      if (same) r = static_cast<std::int64_t>(it->second);
    }
    prev = r;
    // Rotations a primitive root apart are the same point; keep the lowest index.
    if (r >= 0 && run[y] >= need) phase[y] = r % static_cast<std::int64_t>(root);
  }
  return phase;
}

// Number of distinct points on the orbit.
std::size_t orbit_root(const PeriodicOrbit& orbit) {
  const auto& pts = orbit.base_block();
  for (std::size_t s = 1; s < pts.size(); ++s) {
    if (pts.size() % s == 0 && orbit.system().same_point(pts[0], pts[s])) return s;
  }
  return pts.size();
}

std::vector<std::int64_t> generic_phases(const PeriodicOrbit& big, const PeriodicOrbit& small, double gamma) {
  const auto& sys = big.system();
  const auto& gb = big.base_block();
  const auto& lb = small.base_block();
  const std::size_t n = gb.size();
  const std::size_t q = lb.size();
  std::vector<std::int64_t> phase(n, -1);
  const std::size_t root = orbit_root(small);
  for (std::size_t y = 0; y < n; ++y) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < q; ++r) {
      double worst = 0.0;
      for (std::size_t j = 0; j < q && worst < best; ++j) {
        worst = std::max(worst, sys.distance(gb[(y + j) % n], lb[(r + j) % q]));
      }
      if (worst < best) {
        best = worst;
        if (best < gamma) phase[y] = static_cast<std::int64_t>(r % root);
      }
    }
  }
  return phase;
}

GoodApproximation project_words(const Word& big, const Word& small, double gamma, double kappa,
                                std::size_t depth) {
  const std::size_t agree = shift_agreement_length(gamma, depth);
  return trim_fibers(big.size(), small.size(), detail::primitive_period(small), shift_phases(big, small, agree),
                     gamma, kappa);
}

}  // namespace

GoodApproximation best_projection(const PeriodicOrbit& gamma_orbit, const PeriodicOrbit& lambda_orbit, double gamma) {
  require_probability(gamma, "gamma");
  const auto& sys = gamma_orbit.system();
  if (sys.family() != lambda_orbit.system().family() || sys.kind() != lambda_orbit.system().kind()) {
    throw Error(ErrorCode::InvalidInput, "orbits live in different systems");
  }
  if (sys.family() == MetricFamily::ShiftStandard) {
    return project_words(gamma_orbit.word(), lambda_orbit.word(), gamma, 0.0, sys.depth());
  }
  return trim_fibers(gamma_orbit.period(), lambda_orbit.period(), orbit_root(lambda_orbit),
                     generic_phases(gamma_orbit, lambda_orbit, gamma), gamma, 0.0);
}

GoodApproximation verify_good_approximation(const PeriodicOrbit& gamma_orbit, const PeriodicOrbit& lambda_orbit,
                                            double gamma, double kappa) {
  require_probability(kappa, "kappa");
  auto ga = best_projection(gamma_orbit, lambda_orbit, gamma);
  ga.kappa = kappa;
  if (!ga.surjective || ga.achieved_kappa() < kappa) {
    throw Error(ErrorCode::NotGoodApproximation,
                "best kappa " + std::to_string(ga.achieved_kappa()) + (ga.surjective ? "" : " (psi not onto)") +
                    " below " + std::to_string(kappa));
  }
  return ga;
}

std::pair<std::size_t, std::size_t> projection_anchor(const GoodApproximation& ga) {
  if (ga.delta_set.empty()) throw Error(ErrorCode::InvalidInput, "empty projection");
  return {ga.delta_set.front(), ga.psi.front()};
}

namespace {

constexpr std::size_t kChainMaxPairs = std::size_t{1} << 25;

// Longest increasing chain through the shadowing runs (j + i, c + i), i < q,
// of every marked point, with c the anchors of phase ψ near j.
std::vector<std::pair<std::size_t, std::size_t>> run_chain(
    const std::vector<std::pair<std::size_t, std::size_t>>& marks, std::size_t q, std::size_t psi0,
    std::size_t horizon) {
  std::vector<std::pair<std::size_t, std::size_t>> cand;
  for (const auto& [j, target] : marks) {
    const std::size_t latest = j - std::min(j, (j % q + 2 * q - (target + q - psi0 % q) % q) % q);
    for (std::size_t c = latest >= q ? latest - q : latest; c <= latest + q; c += q) {
      if ((c + q - psi0 % q) % q != target % q) continue;
      for (std::size_t i = 0; i < q && j + i < horizon && c + i < horizon; ++i) cand.emplace_back(j + i, c + i);
    }
  }
  std::sort(cand.begin(), cand.end(), [](const auto& u, const auto& v) {
    return u.first != v.first ? u.first < v.first : u.second > v.second;
  });
  // Patience sorting on the z index.
  std::vector<std::size_t> tails;
  std::vector<std::size_t> tail_z;
  std::vector<std::size_t> prev(cand.size(), SIZE_MAX);
  for (std::size_t k = 0; k < cand.size(); ++k) {
    const auto pos = static_cast<std::size_t>(std::lower_bound(tail_z.begin(), tail_z.end(), cand[k].second) - tail_z.begin());
    if (pos > 0) prev[k] = tails[pos - 1];
    if (pos == tails.size()) {
      tails.push_back(k);
      tail_z.push_back(cand[k].second);
    } else {
      tails[pos] = k;
      tail_z[pos] = cand[k].second;
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t k = tails.empty() ? SIZE_MAX : tails.back(); k != SIZE_MAX; k = prev[k]) out.push_back(cand[k]);
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

Match projection_to_match(const GoodApproximation& ga, std::size_t p, std::size_t q) {
  const std::size_t big = ga.gamma_period;
  if (q == 0 || q != ga.lambda_period) {
    throw Error(ErrorCode::InvalidPeriods, "q must equal |Lambda| = " + std::to_string(ga.lambda_period));
  }
  if (p == 0 || big == 0 || p % big != 0) {
    throw Error(ErrorCode::InvalidPeriods, "p must be a positive multiple of |Gamma| = " + std::to_string(big));
  }
  const auto [y0, psi0] = projection_anchor(ga);

  // Points of Δ along the x trajectory, as (time, Λ index).
  std::vector<std::pair<std::size_t, std::size_t>> marks;
  marks.reserve(ga.delta_set.size() * (p / big));
  for (std::size_t c = 0; c < p / big; ++c) {
    for (std::size_t k = 0; k < ga.delta_set.size(); ++k) {
      marks.emplace_back((ga.delta_set[k] + big - y0) % big + c * big, ga.psi[k]);
    }
  }
  std::sort(marks.begin(), marks.end());

  Match m;
  m.n = p + q;
  m.delta = ga.gamma;
  std::size_t a = 0;
  std::size_t b = 0;
  m.pairs.emplace_back(0, 0);
  std::size_t next = 0;
  for (;;) {
    for (std::size_t i = 1; i < q; ++i) m.pairs.emplace_back(a + i, b + i);
    while (next < marks.size() && marks[next].first < a + q) ++next;
    if (next == marks.size()) break;
    const auto [t, target] = marks[next];
    // New anchor: the latest c ≤ t with z_c = ψ(x_t), where z_c is Λ[(psi0 + c) mod q].
    // It lies in (t − q, t], past b, so at most q − 1 earlier pairs are dropped.
    const std::size_t nb = t - (t % q + 2 * q - (target + q - psi0 % q) % q) % q;
    while (!m.pairs.empty() && m.pairs.back().second >= nb) m.pairs.pop_back();
    m.pairs.emplace_back(t, nb);
    a = t;
    b = nb;
  }
  // Re-anchoring can drop a matched point of Δ for every one it adds, so the
  // count can end below |Δ|·p/|Γ|. The longest chain through the same runs is then used.
  const std::size_t need = ga.delta_set.size() * (p / big);
  if (m.fit() < need && marks.size() * 3 * q <= kChainMaxPairs) {
    auto chain = run_chain(marks, q, psi0, m.n);
    if (chain.size() > m.fit()) m.pairs = std::move(chain);
  }
  return m;
}

double cocycle_exponent(const CocycleWeights& weights, const PeriodicOrbit& orbit) {
  const Word w = orbit.word();
  double s = 0.0;
  for (Symbol sym : w) {
    auto it = weights.find(sym);
    if (it == weights.end()) throw Error(ErrorCode::MissingWeight, "no weight for symbol " + std::to_string(sym));
    s += it->second;
  }
  return s / static_cast<double>(w.size());
}


namespace {

double weight_of(const CocycleWeights& weights, Symbol sym) {
  auto it = weights.find(sym);
  if (it == weights.end()) throw Error(ErrorCode::MissingWeight, "no weight for symbol " + std::to_string(sym));
  return it->second;
}

double weight_sum(const CocycleWeights& weights, const Word& w) {
  double s = 0.0;
  for (Symbol sym : w) s += weight_of(weights, sym);
  return s;
}

// |s|/len < α|prev_s|/prev_len with s ≠ 0, cross-multiplied.
bool decays(double s, std::size_t len, double prev_s, std::size_t prev_len, double alpha) {
  return s != 0.0 && std::abs(s) * static_cast<double>(prev_len) < alpha * std::abs(prev_s) * static_cast<double>(len);
}

struct Tail {
  Word word;
  double sum = 0.0;
  std::size_t changes = 0;
  bool ok = false;
};

// Copy of w^c with symbols swapped left to right, each swap pulling the total
// weight toward zero, until the exponent has decayed enough.
Tail balance_tail(const Word& w, std::size_t c, double head_sum, std::size_t total_len, double prev_s,
                  std::size_t prev_len, const std::vector<Symbol>& alphabet, const CocycleWeights& weights,
                  double alpha) {
  Tail t;
  t.word.reserve(w.size() * c);
  for (std::size_t k = 0; k < c; ++k) t.word.insert(t.word.end(), w.begin(), w.end());
  double s = head_sum + weight_sum(weights, t.word);
  for (std::size_t i = 0; i < t.word.size(); ++i) {
    if (decays(s, total_len, prev_s, prev_len, alpha)) break;
    const double wi = weight_of(weights, t.word[i]);
    if (s == 0.0 || (wi > 0) != (s > 0) || wi == 0.0) continue;
    Symbol best = t.word[i];
    double best_abs = std::abs(s);
    for (Symbol b : alphabet) {
      const double ns = s - wi + weight_of(weights, b);
      if (ns != 0.0 && std::abs(ns) < best_abs) {
        best_abs = std::abs(ns);
        best = b;
      }
    }
    if (best != t.word[i]) {
      s = s - wi + weight_of(weights, best);
      t.word[i] = best;
      ++t.changes;
    }
  }
  t.sum = s;
  t.ok = decays(s, total_len, prev_s, prev_len, alpha);
  return t;
}

GiknLevel make_level(const MetricSystem& sys, Word word, const CocycleWeights& weights) {
  GiknLevel lv{.word = {}, .orbit = PeriodicOrbit::from_word(sys, word), .approx = std::nullopt};
  lv.weight_sum = weight_sum(weights, word);
  lv.chi = lv.weight_sum / static_cast<double>(word.size());
  lv.word = std::move(word);
  return lv;
}

}  // namespace

GiknSequence synthesize_gikn(const GiknConfig& cfg) {
  if (cfg.alphabet.empty() || cfg.seed.empty() || cfg.levels == 0) {
    throw Error(ErrorCode::InvalidInput, "need an alphabet, a seed word and at least one level");
  }
  if (cfg.gamma_budget.size() + 1 < cfg.levels || cfg.kappa_floor.size() + 1 < cfg.levels) {
    throw Error(ErrorCode::InvalidInput, "budget lists need levels - 1 entries");
  }
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw Error(ErrorCode::InvalidInput, "alpha must lie in (0, 1)");
  for (Symbol a : cfg.alphabet) weight_of(cfg.weights, a);
  for (Symbol a : cfg.seed) {
    if (std::find(cfg.alphabet.begin(), cfg.alphabet.end(), a) == cfg.alphabet.end()) {
      throw Error(ErrorCode::InvalidInput, "seed symbol " + std::to_string(a) + " not in the alphabet");
    }
  }
  if (detail::primitive_period(cfg.seed) != cfg.seed.size()) {
    throw Error(ErrorCode::InvalidInput, "seed word must be primitive");
  }
  const auto sys = MetricSystem::full_shift();

  GiknSequence gs;
  gs.weights = cfg.weights;
  gs.alpha = cfg.alpha;
  gs.levels.push_back(make_level(sys, cfg.seed, cfg.weights));

  for (std::size_t n = 0; n + 1 < cfg.levels; ++n) {
    const double gamma = cfg.gamma_budget[n];
    const double kappa = cfg.kappa_floor[n];
    require_probability(gamma, "gamma budget");
    require_probability(kappa, "kappa floor");
    const GiknLevel& prev = gs.levels.back();
    const Word& w = prev.word;
    const std::size_t len = w.size();

    std::optional<GiknLevel> found;
    if (kappa >= 1.0) {
      // Full shadowing forces an empty tail.
      Word next(w);
      next.insert(next.end(), w.begin(), w.end());
      auto ga = project_words(next, w, gamma, kappa, sys.depth());
      GiknLevel lv = make_level(sys, std::move(next), cfg.weights);
      lv.repeats = 2;
      lv.approx = std::move(ga);
      found = std::move(lv);
    } else {
      if (prev.weight_sum == 0.0) {
        throw Error(ErrorCode::BudgetInfeasible,
                    "level " + std::to_string(n) + ": exponent already zero, cannot decay strictly");
      }
      double best_kappa = 0.0;
      bool any_decay = false;
      for (std::size_t c = 1; c <= cfg.max_tail_copies && !found; ++c) {
        for (std::size_t m = 1; m <= cfg.max_repeats; ++m) {
          const std::size_t total = (m + c) * len;
          Tail tail = balance_tail(w, c, static_cast<double>(m) * prev.weight_sum, total, prev.weight_sum, len,
                                   cfg.alphabet, cfg.weights, cfg.alpha);
          if (!tail.ok) break;  // more repeats only make balancing harder
          any_decay = true;
          Word next;
          next.reserve(total);
          for (std::size_t k = 0; k < m; ++k) next.insert(next.end(), w.begin(), w.end());
          next.insert(next.end(), tail.word.begin(), tail.word.end());
          if (detail::primitive_period(next) != next.size()) continue;
          auto ga = project_words(next, w, gamma, kappa, sys.depth());
          if (ga.surjective) best_kappa = std::max(best_kappa, ga.achieved_kappa());
          if (!ga.surjective || ga.achieved_kappa() < kappa) continue;
          GiknLevel lv = make_level(sys, std::move(next), cfg.weights);
          lv.repeats = m;
          lv.tail_copies = c;
          lv.tail_changes = tail.changes;
          lv.approx = std::move(ga);
          found = std::move(lv);
          break;
        }
      }
      if (!found) {
        throw Error(ErrorCode::BudgetInfeasible,
                    "level " + std::to_string(n + 1) + ": " +
                        (any_decay ? "kappa floor " + std::to_string(kappa) + " unreachable, best " +
                                         std::to_string(best_kappa)
                                   : std::string("exponent decay by alpha unreachable")));
      }
    }
    found->gamma = gamma;
    found->kappa = kappa;
    gs.levels.push_back(std::move(*found));
  }
  return gs;
}

GiknSequence tower_from_words(const std::vector<Word>& words, const std::vector<double>& gammas,
                              const std::vector<double>& kappas, const CocycleWeights& weights, double alpha) {
  if (words.empty()) throw Error(ErrorCode::InvalidInput, "empty tower");
  if (gammas.size() + 1 < words.size() || kappas.size() + 1 < words.size()) {
    throw Error(ErrorCode::InvalidInput, "budget lists need levels - 1 entries");
  }
  const auto sys = MetricSystem::full_shift();
  GiknSequence gs;
  gs.weights = weights;
  gs.alpha = alpha;
  for (std::size_t n = 0; n < words.size(); ++n) {
    GiknLevel lv = make_level(sys, words[n], weights);
    if (n > 0) {
      if (words[n].size() <= words[n - 1].size()) {
        throw Error(ErrorCode::InvalidInput, "periods must increase strictly");
      }
      lv.gamma = gammas[n - 1];
      lv.kappa = kappas[n - 1];
      lv.approx = verify_good_approximation(lv.orbit, gs.levels.back().orbit, lv.gamma, lv.kappa);
    }
    gs.levels.push_back(std::move(lv));
  }
  return gs;
}

CauchyReport verify_cauchy(const GiknSequence& gs, double tol) {
  CauchyReport rep;
  const std::size_t L = gs.levels.size();
  // step_cost[j] = γ_j + 1 − κ_j for the step j → j+1.
  std::vector<double> step_cost(L, 0.0);
  for (std::size_t j = 0; j + 1 < L; ++j) step_cost[j] = gs.levels[j + 1].gamma + 1.0 - gs.levels[j + 1].kappa;
  for (std::size_t n = 0; n < L; ++n) {
    double bound = 0.0;
    for (std::size_t m = n + 1; m < L; ++m) {
      bound += step_cost[m - 1];
      const auto fk = fk_distance(gs.levels[n].orbit, gs.levels[m].orbit, tol);
      CauchyEntry e{.n = n, .m = m, .fk = fk.value, .bound = bound, .converged = fk.converged};
      if (m == n + 1) {
        e.pass = fk.value < bound + tol;
        rep.consecutive.push_back(e);
        rep.all_pass = rep.all_pass && e.pass;
      }
      e.pass = fk.value <= bound + tol;
      rep.pairs.push_back(e);
      rep.all_pass = rep.all_pass && e.pass;
    }
  }
  return rep;
}

LimitQuasiOrbit limit_quasi_orbit(const GiknSequence& gs, std::size_t total_length) {
  if (gs.levels.empty()) throw Error(ErrorCode::InvalidInput, "empty tower");
  std::vector<PeriodicOrbit> segs;
  std::vector<std::size_t> lens;
  std::size_t used = 0;
  for (std::size_t j = 0; j < gs.levels.size(); ++j) {
    const std::size_t len = (j + 1) * gs.levels[j].orbit.period();
    if (used + len > total_length) break;
    segs.push_back(gs.levels[j].orbit);
    lens.push_back(len);
    used += len;
  }
  if (segs.empty()) {
    throw Error(ErrorCode::InvalidInput, "total length " + std::to_string(total_length) + " below the first segment");
  }
  LimitQuasiOrbit out{.orbit = QuasiOrbit(PointSeq{}, {}), .segment_lengths = lens, .density_curve = {}};
  const std::size_t per = segs.back().period();
  const std::size_t rem = total_length - used;
  lens.back() += (rem + per - 1) / per * per;
  auto full = assemble_quasi_orbit(segs, lens);
  std::vector<std::size_t> sw;
  for (auto s : full.switch_indices()) {
    if (s < total_length) sw.push_back(s);
  }
  out.orbit = QuasiOrbit(full.points().prefix(total_length), std::move(sw));
  out.segment_lengths.back() = total_length - (used - out.segment_lengths.back());
  for (std::size_t len = 1; len < total_length; len *= 2) {
    out.density_curve.emplace_back(len, out.orbit.switch_density(len));
  }
  out.density_curve.emplace_back(total_length, out.orbit.switch_density(total_length));
  return out;
}

std::set<Word> support_blocks(const GiknSequence& gs, std::size_t depth) {
  if (gs.levels.empty() || depth == 0) throw Error(ErrorCode::InvalidInput, "need levels and a positive depth");
  const std::size_t L = gs.levels.size();
  std::vector<std::set<Word>> blocks(L);
  for (std::size_t n = 0; n < L; ++n) {
    const Word& w = gs.levels[n].word;
    for (std::size_t i = 0; i < w.size(); ++i) {
      Word b(depth);
      for (std::size_t j = 0; j < depth; ++j) b[j] = w[(i + j) % w.size()];
      blocks[n].insert(std::move(b));
    }
  }
  std::set<Word> result;
  for (std::size_t k = 0; k < L; ++k) {
    std::set<Word> tail_union;
    for (std::size_t n = k; n < L; ++n) tail_union.insert(blocks[n].begin(), blocks[n].end());
    if (k == 0) {
      result = std::move(tail_union);
    } else {
      std::set<Word> keep;
      std::set_intersection(result.begin(), result.end(), tail_union.begin(), tail_union.end(),
                            std::inserter(keep, keep.end()));
      result = std::move(keep);
    }
  }
  return result;
}

std::vector<ExponentDecay> exponent_decay(const GiknSequence& gs) {
  std::vector<ExponentDecay> out;
  for (std::size_t n = 1; n < gs.levels.size(); ++n) {
    const auto& a = gs.levels[n - 1];
    const auto& b = gs.levels[n];
    ExponentDecay d{.level = n, .chi = b.chi};
    d.ratio = a.chi == 0.0 ? std::numeric_limits<double>::infinity() : std::abs(b.chi) / std::abs(a.chi);
    d.pass = std::abs(b.weight_sum) * static_cast<double>(a.word.size()) <
             gs.alpha * std::abs(a.weight_sum) * static_cast<double>(b.word.size());
    out.push_back(d);
  }
  return out;
}

double minimal_orbit_distance(const PeriodicOrbit& orbit) {
  const auto& sys = orbit.system();
  const double inf = std::numeric_limits<double>::infinity();
  if (sys.family() == MetricFamily::ShiftStandard) {
    Word w = orbit.word();
    w.resize(detail::primitive_period(w));
    const std::size_t n = w.size();
    if (n == 1) return inf;
    SymbolIds ids;
    const auto s = ids.encode(w);
    // Longest prefix shared by two distinct points, capped at the depth.
    auto shared = [&](std::size_t len) {
      const auto h = cyclic_window_hashes(s, len);
      std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
      for (std::size_t i = 0; i < n; ++i) {
        auto& bucket = seen[h[i]];
        for (std::size_t j : bucket) {
          bool same = true;
          for (std::size_t k = 0; k < len && same; ++k) same = s[(i + k) % n] == s[(j + k) % n];
          if (same) return true;
        }
        bucket.push_back(i);
      }
      return false;
    };
    std::size_t lo = 0;
    std::size_t hi = sys.depth();
    if (shared(hi)) return 0.0;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      (shared(mid) ? lo : hi) = mid;
    }
    // Distinct points agree on exactly lo symbols at best.
    return std::ldexp(1.0, -static_cast<int>(lo));
  }
  const auto& pts = orbit.base_block();
  double best = inf;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (sys.same_point(pts[i], pts[j])) continue;
      best = std::min(best, sys.distance(pts[i], pts[j]));
    }
  }
  return best;
}

std::vector<SeparationCheck> separation_condition(const GiknSequence& gs) {
  std::vector<SeparationCheck> out;
  double dmin = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n + 1 < gs.levels.size(); ++n) {
    const double d = minimal_orbit_distance(gs.levels[n].orbit);
    dmin = std::min(dmin, d);
    SeparationCheck c{.level = n + 1, .gamma = gs.levels[n + 1].gamma, .min_distance = d};
    c.threshold = dmin / (3.0 * std::ldexp(1.0, static_cast<int>(n + 1)));
    c.pass = c.gamma < c.threshold;
    out.push_back(c);
  }
  return out;
}

}  // namespace fkdyn

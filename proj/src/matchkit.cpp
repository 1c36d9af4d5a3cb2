#include "fkdyn/matchkit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>

#include "blocks.hpp"
#include "lcs.hpp"

namespace fkdyn {

namespace {

void require_horizon(const PointSeq& x, const PointSeq& z, std::size_t n, double delta) {
  if (n == 0 || x.size() < n || z.size() < n) {
    throw Error(ErrorCode::HorizonTooShort, "both sequences need at least n = " + std::to_string(n) + " points");
  }
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidInput, "delta must be positive");
}

constexpr std::size_t kAutoHorizon = std::size_t{1} << 17;
// Word updates allowed per periodic fit before falling back to a banded lower bound.
constexpr std::size_t kPeriodicWork = std::size_t{1} << 31;

bool uses_block_ids(const MetricSystem& system) {
  return system.family() == MetricFamily::ShiftStandard;
}

Match brute_match(const MetricSystem& system, const PointSeq& x, const PointSeq& z, std::size_t n,
                  double delta) {
  if (n > kBruteMaxHorizon) {
    throw Error(ErrorCode::BruteTooLarge, "brute mode supports n ≤ " + std::to_string(kBruteMaxHorizon));
  }
  std::vector<std::vector<bool>> close(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) close[i][j] = system.distance(x[i], z[j]) < delta;
  }
  // Every order-preserving bijection is a pair of equal-size index sets paired in order.
  const std::uint32_t full = (std::uint32_t{1} << n);
  std::vector<std::vector<std::uint32_t>> by_size(n + 1);
  for (std::uint32_t s = 0; s < full; ++s) by_size[static_cast<std::size_t>(std::popcount(s))].push_back(s);
  Match best{{}, n, delta};
  for (std::size_t k = n; k >= 1; --k) {
    for (std::uint32_t dom : by_size[k]) {
      for (std::uint32_t ran : by_size[k]) {
        std::uint32_t d = dom;
        std::uint32_t r = ran;
        bool ok = true;
        while (d != 0 && ok) {
          const auto i = static_cast<std::size_t>(std::countr_zero(d));
          const auto j = static_cast<std::size_t>(std::countr_zero(r));
          ok = close[i][j];
          d &= d - 1;
          r &= r - 1;
        }
        if (!ok) continue;
        d = dom;
        r = ran;
        while (d != 0) {
          best.pairs.emplace_back(std::countr_zero(d), std::countr_zero(r));
          d &= d - 1;
          r &= r - 1;
        }
        return best;
      }
    }
  }
  return best;
}

std::size_t dp_fit(const MetricSystem& system, const PointSeq& x, const PointSeq& z, std::size_t n,
                   double delta) {
  if (uses_block_ids(system)) {
    const std::size_t k = shift_agreement_length(delta, system.depth());
    if (k == 0) return n;
    detail::BlockIds ids(k);
    const auto a = detail::point_ids(x, n, ids);
    const auto b = detail::point_ids(z, n, ids);
    return detail::lcs_length_ids_certified(a, b, ids.count());
  }
  return detail::lcs_length(n, n, [&](std::size_t i, std::span<std::uint64_t> m) {
    for (std::size_t j = 0; j < n; ++j) {
      if (system.distance(x[i], z[j]) < delta) m[j / 64] |= std::uint64_t{1} << (j % 64);
    }
  });
}

std::size_t lcm_checked(std::size_t a, std::size_t b) {
  const std::size_t g = std::gcd(a, b);
  const std::size_t q = a / g;
  if (q > (std::size_t{1} << 40) / b) throw Error(ErrorCode::ProblemTooLarge, "common period too large");
  return q * b;
}

// Closeness data of a periodic pair at a fixed δ; reused across horizons.
class PeriodicPairKernel {
 public:
  PeriodicPairKernel(const PeriodicOrbit& x, const PeriodicOrbit& z, double delta,
                     std::size_t max_work = kPeriodicWork)
      : x_(x), z_(z), delta_(delta), max_work_(max_work) {
    const auto& sys = x.system();
    if (uses_block_ids(sys)) {
      block_k_ = shift_agreement_length(delta, sys.depth());
      if (block_k_ > 0) {
        detail::BlockIds ids(block_k_);
        xid_ = detail::rotation_ids(x, ids);
        zid_ = detail::rotation_ids(z, ids);
        id_count_ = ids.count();
      }
    } else {
      const std::size_t p = x.period();
      const std::size_t q = z.period();
      if (p * q > (std::size_t{1} << 28)) throw Error(ErrorCode::ProblemTooLarge, "closeness table too large");
      close_.assign(p * q, 0);
      for (std::size_t r = 0; r < p; ++r) {
        for (std::size_t s = 0; s < q; ++s) {
          close_[r * q + s] = sys.distance(x.base_block()[r], z.base_block()[s]) < delta ? 1 : 0;
        }
      }
    }
  }

  /// Maximal fit at the horizon; `exact` is cleared when the work cap made it a lower bound.
  std::size_t fit(std::size_t horizon, bool& exact) const {
    exact = true;
    const std::size_t p = x_.period();
    const std::size_t q = z_.period();
    if (uses_block_ids(x_.system())) {
      if (block_k_ == 0) return horizon;
      std::vector<std::int32_t> a(horizon);
      std::vector<std::int32_t> b(horizon);
      for (std::size_t i = 0; i < horizon; ++i) {
        a[i] = xid_[i % p];
        b[i] = zid_[i % q];
      }
      const bool x_constant = std::all_of(xid_.begin(), xid_.end(), [&](auto v) { return v == xid_[0]; });
      if (x_constant) return static_cast<std::size_t>(std::count(b.begin(), b.end(), xid_[0]));
      const bool z_constant = std::all_of(zid_.begin(), zid_.end(), [&](auto v) { return v == zid_[0]; });
      if (z_constant) return static_cast<std::size_t>(std::count(a.begin(), a.end(), zid_[0]));
      // The band that settled a shorter horizon is a good start for a longer one.
      return detail::lcs_length_ids_certified(a, b, id_count_, band_hint_, max_work_, &exact, &band_hint_);
    }
    // Row masks depend only on the row residue mod p.
    const std::size_t nw = detail::words_for(horizon);
    std::map<std::size_t, detail::Bits> cache;
    const bool cache_rows = p * nw <= (std::size_t{1} << 24);
    auto build = [&](std::size_t r, std::span<std::uint64_t> m) {
      for (std::size_t j = 0; j < horizon; ++j) {
        if (close_[r * q + j % q] != 0) m[j / 64] |= std::uint64_t{1} << (j % 64);
      }
    };
    return detail::lcs_length(horizon, horizon, [&](std::size_t i, std::span<std::uint64_t> m) {
      const std::size_t r = i % p;
      if (!cache_rows) {
        build(r, m);
        return;
      }
      auto it = cache.find(r);
      if (it == cache.end()) {
        detail::Bits bits(nw, 0);
        build(r, bits);
        it = cache.emplace(r, std::move(bits)).first;
      }
      std::copy(it->second.begin(), it->second.end(), m.begin());
    });
  }

  [[nodiscard]] double delta() const noexcept { return delta_; }

 private:
  const PeriodicOrbit& x_;
  const PeriodicOrbit& z_;
  double delta_;
  std::size_t max_work_;
  mutable std::size_t band_hint_ = 256;
  std::size_t block_k_ = 0;
  std::vector<std::int32_t> xid_;
  std::vector<std::int32_t> zid_;
  std::int32_t id_count_ = 0;
  std::vector<std::uint8_t> close_;
};

void require_same_system(const PeriodicOrbit& x, const PeriodicOrbit& z) {
  if (x.system().description() != z.system().description() || x.system().family() != z.system().family()) {
    throw Error(ErrorCode::InvalidInput, "periodic orbits live in different systems");
  }
}

GapValue fekete_sweep(const PeriodicOrbit& x, const PeriodicOrbit& z, double delta, double tol,
                      std::size_t n_max) {
  require_same_system(x, z);
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidInput, "tol must be positive");
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidInput, "delta must be positive");
  const std::size_t common = lcm_checked(x.period(), z.period());
  const PeriodicPairKernel kernel(x, z, delta);
  GapValue out;
  out.delta = delta;
  out.certified = Certification::UpperBound;
  out.converged = false;
  for (std::size_t mult = 1; mult <= std::max<std::size_t>(n_max, 1); mult *= 2) {
    const std::size_t horizon = mult * common;
    bool exact = true;
    const std::size_t fit = kernel.fit(horizon, exact);
    out.exact_fits = out.exact_fits && exact;
    const double sample = 1.0 - static_cast<double>(fit) / static_cast<double>(horizon);
    // Every entry bounds f̄_δ from above, so the running minimum does too.
    const double value = out.trace.empty() ? sample : std::min(sample, out.value);
    const bool stable = !out.trace.empty() && std::fabs(out.trace.back() - value) < tol;
    out.trace.push_back(sample);
    out.value = value;
    out.fit = sample == value ? fit : out.fit;
    out.n = sample == value ? horizon : out.n;
    if (fit == horizon) {
      out.certified = Certification::Exact;
      out.converged = true;
      break;
    }
    if (stable) {
      out.converged = true;
      break;
    }
  }
  return out;
}

template <class Predicate>
FkResult bisect(double hi, double tol, Predicate&& pred) {
  FkResult res;
  res.lo = 0.0;
  res.hi = hi;
  bool converged = true;
  auto eval = [&](double d) {
    ++res.gap_evaluations;
    auto [holds, conv] = pred(d);
    converged = converged && conv;
    return holds;
  };
  if (!eval(hi)) {
    res.lo = hi;
    res.value = hi;
    res.converged = converged;
    return res;
  }
  while (res.hi - res.lo > tol) {
    const double mid = 0.5 * (res.lo + res.hi);
    if (eval(mid)) {
      res.hi = mid;
    } else {
      res.lo = mid;
    }
  }
  res.value = 0.5 * (res.lo + res.hi);
  res.converged = converged;
  return res;
}

}  // namespace

Match max_match(const MetricSystem& system, const PointSeq& x, const PointSeq& z, std::size_t n,
                double delta, MatchMode mode) {
  if (mode == MatchMode::Brute && n > kBruteMaxHorizon) {
    throw Error(ErrorCode::BruteTooLarge, "brute mode supports n ≤ " + std::to_string(kBruteMaxHorizon));
  }
  require_horizon(x, z, n, delta);
  if (mode == MatchMode::Brute) return brute_match(system, x, z, n, delta);
  Match m{{}, n, delta};
  if (uses_block_ids(system)) {
    const std::size_t k = shift_agreement_length(delta, system.depth());
    if (k == 0) {
      for (std::size_t i = 0; i < n; ++i) m.pairs.emplace_back(i, i);
      return m;
    }
    detail::BlockIds ids(k);
    const auto a = detail::point_ids(x, n, ids);
    const auto b = detail::point_ids(z, n, ids);
    m.pairs = detail::lcs_pairs(n, n, [&](std::size_t i, std::size_t j) { return a[i] == b[j]; });
    return m;
  }
  m.pairs = detail::lcs_pairs(n, n, [&](std::size_t i, std::size_t j) {
    return system.distance(x[i], z[j]) < delta;
  });
  return m;
}

GapValue gap(const MetricSystem& system, const PointSeq& x, const PointSeq& z, std::size_t n,
             double delta) {
  require_horizon(x, z, n, delta);
  const std::size_t fit = dp_fit(system, x, z, n, delta);
  GapValue g;
  g.fit = fit;
  g.n = n;
  g.delta = delta;
  g.value = 1.0 - static_cast<double>(fit) / static_cast<double>(n);
  g.certified = Certification::Exact;
  return g;
}

bool is_valid_match(const MetricSystem& system, const PointSeq& x, const PointSeq& z, const Match& m) {
  if (x.size() < m.n || z.size() < m.n) return false;
  for (std::size_t k = 0; k < m.pairs.size(); ++k) {
    const auto [i, j] = m.pairs[k];
    if (i >= m.n || j >= m.n) return false;
    if (k > 0 && (i <= m.pairs[k - 1].first || j <= m.pairs[k - 1].second)) return false;
    if (!(system.distance(x[i], z[j]) < m.delta)) return false;
  }
  return true;
}

std::size_t periodic_fit(const PeriodicOrbit& x, const PeriodicOrbit& z, std::size_t horizon, double delta) {
  require_same_system(x, z);
  bool exact = true;
  return PeriodicPairKernel(x, z, delta, SIZE_MAX).fit(horizon, exact);
}

GapValue fbar_delta_periodic(const PeriodicOrbit& x, const PeriodicOrbit& z, double delta, double tol,
                             std::size_t n_max) {
  return fekete_sweep(x, z, delta, tol, n_max);
}

FkResult fk_distance(const PeriodicOrbit& x, const PeriodicOrbit& z, double tol, std::size_t n_max) {
  require_same_system(x, z);
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidInput, "tol must be positive");
  const auto& sys = x.system();
  // Gap estimates approach f̄_δ like C/n, so the sweep runs finer than the
  // bracket and, by default, out to horizons of about 2^17.
  const double sweep_tol = tol / 4;
  const std::size_t common = lcm_checked(x.period(), z.period());
  if (n_max == 0) {
    n_max = 2;
    while (n_max * common < kAutoHorizon) n_max *= 2;
  }
  if (uses_block_ids(sys)) {
    // f̄_δ is constant on each (2^-k, 2^-(k-1)], where δ-closeness means
    // agreement on k symbols. The predicate f̄_δ < δ holds on that interval
    // from max(2^-k, f̄) on, so the infimum is found by scanning k upward
    // until the predicate fails on a whole interval.
    FkResult res;
    res.value = 1.0;
    bool converged = true;
    const std::size_t depth = sys.depth();
    for (std::size_t k = 1; k <= depth; ++k) {
      const double upper = std::ldexp(1.0, 1 - static_cast<int>(k));
      const double lower = k == depth ? 0.0 : std::ldexp(1.0, -static_cast<int>(k));
      const double mid = 0.5 * (lower + upper);
      ++res.gap_evaluations;
      if (k < depth) {
        // A narrow-band fit over one common period bounds f̄_δ from above; when
        // that is already below the interval the exact sweep cannot change the outcome.
        bool exact = true;
        const std::size_t fit = PeriodicPairKernel(x, z, mid, 0).fit(common, exact);
        if (1.0 - static_cast<double>(fit) / static_cast<double>(common) < lower) {
          res.value = lower;
          continue;
        }
      }
      const auto g = fekete_sweep(x, z, mid, sweep_tol, n_max);
      if (!(g.value < upper)) break;
      converged = converged && g.converged;
      res.value = std::max(lower, g.value);
      if (g.value >= lower) break;
    }
    res.lo = res.value;
    res.hi = res.value;
    res.converged = converged;
    return res;
  }
  double hi = 0.0;
  if (sys.diameter()) {
    hi = *sys.diameter();
  } else {
    for (const auto& a : x.base_block()) {
      for (const auto& b : z.base_block()) hi = std::max(hi, sys.distance(a, b));
    }
    hi += tol;
  }
  return bisect(hi, tol, [&](double d) -> std::pair<bool, bool> {
    const auto g = fekete_sweep(x, z, d, sweep_tol, n_max);
    return {g.value < d, g.converged};
  });
}

FkResult fk_finite(const MetricSystem& system, const PointSeq& x, const PointSeq& z, std::size_t n,
                   double tol) {
  require_horizon(x, z, n, 1.0);
  double hi = 0.0;
  if (system.diameter()) {
    hi = *system.diameter();
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) hi = std::max(hi, system.distance(x[i], z[j]));
    }
    hi += tol;
  }
  return bisect(hi, tol, [&](double d) -> std::pair<bool, bool> {
    return {gap(system, x, z, n, d).value < d, true};
  });
}

std::size_t word_lcs(const Word& u, const Word& w) {
  Word joined(u);
  joined.insert(joined.end(), w.begin(), w.end());
  std::int32_t count = 0;
  const auto ids = detail::dense_ids(joined, count);
  const std::span<const std::int32_t> all(ids);
  return detail::lcs_length_ids(all.first(u.size()), all.subspan(u.size()), count);
}

WordDistances word_metrics(const Word& u, const Word& w) {
  if (u.size() != w.size()) throw Error(ErrorCode::LengthMismatch, "words must have equal length");
  if (u.empty()) throw Error(ErrorCode::LengthMismatch, "words must be nonempty");
  const auto n = static_cast<double>(u.size());
  std::size_t agree = 0;
  for (std::size_t j = 0; j < u.size(); ++j) agree += u[j] == w[j] ? 1 : 0;
  // Both as 1 − count/n so that edit ≤ hamming survives rounding.
  return {1.0 - static_cast<double>(agree) / n, 1.0 - static_cast<double>(word_lcs(u, w)) / n};
}

double fhat_estimate(const Word& u, const Word& w) {
  if (u.size() != w.size() || u.empty()) throw Error(ErrorCode::LengthMismatch, "words must have equal length");
  // Smallest k/n such that a common subsequence of density ≥ 1 − k/n exists in both words.
  return 1.0 - static_cast<double>(word_lcs(u, w)) / static_cast<double>(u.size());
}

BesicovitchValue besicovitch(const MetricSystem& system, const PointSeq& x, const PointSeq& z,
                             std::size_t n) {
  require_horizon(x, z, n, 1.0);
  std::vector<double> d(n);
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = system.distance(x[j], z[j]);
    sum += d[j];
  }
  std::sort(d.begin(), d.end());
  // On (d[k−1], d[k]] exactly n − k distances are ≥ δ; the admissible set there is δ > (n − k)/n.
  const auto nn = static_cast<double>(n);
  double best = d.back();
  for (std::size_t k = 0; k < n; ++k) {
    const double left = k == 0 ? 0.0 : d[k - 1];
    const double frac = static_cast<double>(n - k) / nn;
    if (frac < d[k]) {
      best = std::max(left, frac);
      break;
    }
  }
  return {sum / nn, best};
}

Match compose_matches(const Match& first, const Match& second) {
  if (first.n != second.n) throw Error(ErrorCode::HorizonMismatch, "matches must share the horizon n");
  std::vector<std::ptrdiff_t> second_at(first.n, -1);
  for (const auto& [j, k] : second.pairs) second_at[j] = static_cast<std::ptrdiff_t>(k);
  Match out{{}, first.n, first.delta + second.delta};
  for (const auto& [i, j] : first.pairs) {
    if (second_at[j] >= 0) out.pairs.emplace_back(i, static_cast<std::size_t>(second_at[j]));
  }
  return out;
}

}  // namespace fkdyn

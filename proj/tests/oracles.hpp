#pragma once

// Slow reference implementations used as test oracles.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <algorithm>
#include <vector>

namespace oracle {

/// Largest order-preserving pairing of δ-close reals, by exhaustive recursion.
inline std::size_t brute_fit(const std::vector<double>& x, const std::vector<double>& z, double delta,
                             std::size_t i = 0, std::size_t j = 0) {
  if (i == x.size() || j == z.size()) return 0;
  std::size_t best = brute_fit(x, z, delta, i + 1, j);
  for (std::size_t k = j; k < z.size(); ++k) {
    if (std::fabs(x[i] - z[k]) < delta) {
      const std::size_t v = 1 + brute_fit(x, z, delta, i + 1, k + 1);
      if (v > best) best = v;
    }
  }
  return best;
}

inline bool is_subsequence(const std::vector<double>& s, const std::vector<double>& w) {
  std::size_t k = 0;
  for (double c : w) {
    if (k < s.size() && s[k] == c) ++k;
  }
  return k == s.size();
}

/// LCS by enumerating every subsequence of u.
inline std::size_t brute_lcs(const std::vector<double>& u, const std::vector<double>& w) {
  std::size_t best = 0;
  const std::uint32_t full = std::uint32_t{1} << u.size();
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    std::vector<double> s;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if ((mask >> i) & 1U) s.push_back(u[i]);
    }
    if (s.size() > best && is_subsequence(s, w)) best = s.size();
  }
  return best;
}

/// Textbook two-row LCS table over an arbitrary relation.
inline std::size_t dp_lcs_by_relation(std::size_t rows, std::size_t cols,
                                      const std::function<bool(std::size_t, std::size_t)>& rel) {
  std::vector<std::size_t> prev(cols + 1, 0);
  std::vector<std::size_t> cur(cols + 1, 0);
  for (std::size_t i = 1; i <= rows; ++i) {
    for (std::size_t j = 1; j <= cols; ++j) {
      std::size_t v = prev[j] > cur[j - 1] ? prev[j] : cur[j - 1];
      if (rel(i - 1, j - 1) && prev[j - 1] + 1 > v) v = prev[j - 1] + 1;
      cur[j] = v;
    }
    std::swap(prev, cur);
  }
  return prev[cols];
}

/// Smallest δ on the 1e−3 grid with |{j : |x_j − z_j| ≥ δ}|/n < δ.
inline double besicovitch_grid(const std::vector<double>& x, const std::vector<double>& z) {
  const auto n = static_cast<double>(x.size());
  for (int k = 1; k <= 1000000; ++k) {
    const double delta = k * 1e-3;
    std::size_t far = 0;
    for (std::size_t j = 0; j < x.size(); ++j) far += std::fabs(x[j] - z[j]) >= delta ? 1 : 0;
    if (static_cast<double>(far) / n < delta) return delta;
  }
  return INFINITY;
}

}  // namespace oracle

namespace oracle {

/// Prokhorov distance from the definition: for each interval between distance
/// levels, the worst deficit μ(B) − ν(B^ε) over all subsets B of μ's support.
inline double prokhorov_subsets(const std::vector<double>& mu, const std::vector<double>& nu,
                                const std::vector<std::vector<double>>& dist) {
  std::vector<double> levels{0.0};
  for (const auto& row : dist) levels.insert(levels.end(), row.begin(), row.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  const std::size_t m = mu.size();
  for (std::size_t l = 0; l < levels.size(); ++l) {
    double worst = 0.0;
    for (std::uint32_t s = 1; s < (std::uint32_t{1} << m); ++s) {
      double mass = 0.0;
      std::vector<char> hull(nu.size(), 0);
      for (std::size_t i = 0; i < m; ++i) {
        if (((s >> i) & 1U) == 0) continue;
        mass += mu[i];
        for (std::size_t j = 0; j < nu.size(); ++j) {
          if (dist[i][j] <= levels[l]) hull[j] = 1;
        }
      }
      double covered = 0.0;
      for (std::size_t j = 0; j < nu.size(); ++j) covered += hull[j] != 0 ? nu[j] : 0.0;
      worst = std::max(worst, mass - covered);
    }
    if (l + 1 == levels.size() || worst <= levels[l + 1]) return std::max(levels[l], worst);
  }
  return 1.0;
}

/// Min-cost transport by successive shortest paths with Bellman–Ford.
inline double transport_ssp(const std::vector<double>& a, const std::vector<double>& b,
                            const std::vector<double>& cost) {
  const std::size_t m = a.size();
  const std::size_t k = b.size();
  std::vector<double> flow(m * k, 0.0);
  std::vector<double> ra(a);
  std::vector<double> rb(b);
  double value = 0.0;
  for (int guard = 0; guard < 100000; ++guard) {
    // Nodes: rows 0..m−1, columns m..m+k−1; sources are rows with supply left.
    const std::size_t nodes = m + k;
    std::vector<double> d(nodes, INFINITY);
    std::vector<std::ptrdiff_t> pred(nodes, -1);
    for (std::size_t i = 0; i < m; ++i) {
      if (ra[i] > 1e-15) d[i] = 0.0;
    }
    for (std::size_t it = 0; it < nodes; ++it) {
      bool changed = false;
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
          const double c = cost[i * k + j];
          if (d[i] + c < d[m + j] - 1e-15) {
            d[m + j] = d[i] + c;
            pred[m + j] = static_cast<std::ptrdiff_t>(i);
            changed = true;
          }
          if (flow[i * k + j] > 1e-15 && d[m + j] - c < d[i] - 1e-15) {
            d[i] = d[m + j] - c;
            pred[i] = static_cast<std::ptrdiff_t>(m + j);
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    std::size_t best = nodes;
    for (std::size_t j = 0; j < k; ++j) {
      if (rb[j] > 1e-15 && d[m + j] < INFINITY && (best == nodes || d[m + j] < d[best])) best = m + j;
    }
    if (best == nodes) break;
    double push = rb[best - m];
    std::size_t node = best;
    while (pred[node] >= 0) {
      const auto p = static_cast<std::size_t>(pred[node]);
      if (node < m) push = std::min(push, flow[node * k + (p - m)]);
      node = p;
    }
    push = std::min(push, ra[node]);
    rb[best - m] -= push;
    ra[node] -= push;
    node = best;
    while (pred[node] >= 0) {
      const auto p = static_cast<std::size_t>(pred[node]);
      if (node >= m) {
        flow[p * k + (node - m)] += push;
        value += push * cost[p * k + (node - m)];
      } else {
        flow[node * k + (p - m)] -= push;
        value -= push * cost[node * k + (p - m)];
      }
      node = p;
    }
  }
  return value;
}

/// Standard shift distance between σ^a u^∞ and σ^b w^∞, truncated at depth.
inline double cyclic_shift_distance(const std::vector<double>& u, std::size_t a, const std::vector<double>& w,
                                    std::size_t b, std::size_t depth = 64) {
  for (std::size_t j = 0; j < depth; ++j) {
    if (u[(a + j) % u.size()] != w[(b + j) % w.size()]) return std::ldexp(1.0, -static_cast<int>(j));
  }
  return 0.0;
}

/// For each point y of big^∞'s orbit, the lowest-index point of small^∞'s orbit
/// minimizing max_{j<|small|} ρ(σ^j y, σ^j λ), or -1 if that minimum is not < γ.
inline std::vector<long> shadow_phases(const std::vector<double>& big, const std::vector<double>& small,
                                       double gamma) {
  std::vector<long> out(big.size(), -1);
  for (std::size_t y = 0; y < big.size(); ++y) {
    double best = 2.0;
    long arg = -1;
    for (std::size_t r = 0; r < small.size(); ++r) {
      double worst = 0.0;
      for (std::size_t j = 0; j < small.size(); ++j) {
        worst = std::max(worst, cyclic_shift_distance(big, y + j, small, r + j));
      }
      if (worst < best) {
        best = worst;
        arg = static_cast<long>(r);
      }
    }
    if (best < gamma) out[y] = arg;
  }
  return out;
}

}  // namespace oracle

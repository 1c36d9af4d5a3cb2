#include "fkdyn/measurekit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "fkdyn/matchkit.hpp"
#include "pointkey.hpp"

namespace fkdyn {

namespace {

constexpr double kWeightTol = 1e-12;
constexpr std::size_t kMaxPairTable = std::size_t{25} * 1000 * 1000;

double kahan_sum(const std::vector<double>& v) {
  double s = 0.0;
  double c = 0.0;
  for (double x : v) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

// Dinic on a bipartite source → left → right → sink network.
class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t nodes) : head_(nodes, -1), level_(nodes), iter_(nodes) {}

  void add_edge(std::size_t u, std::size_t v, double cap) {
    edges_.push_back({v, head_[u], cap});
    head_[u] = static_cast<std::ptrdiff_t>(edges_.size() - 1);
    edges_.push_back({u, head_[v], 0.0});
    head_[v] = static_cast<std::ptrdiff_t>(edges_.size() - 1);
  }

  /// Nodes reachable from s in the residual graph.
  std::vector<char> source_side(std::size_t s) const {
    std::vector<char> seen(head_.size(), 0);
    std::vector<std::size_t> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (auto e = head_[u]; e != -1; e = edges_[static_cast<std::size_t>(e)].next) {
        const auto& ed = edges_[static_cast<std::size_t>(e)];
        if (ed.cap > kEps && seen[ed.to] == 0) {
          seen[ed.to] = 1;
          stack.push_back(ed.to);
        }
      }
    }
    return seen;
  }

  double max_flow(std::size_t s, std::size_t t) {
    double total = 0.0;
    while (bfs(s, t)) {
      for (std::size_t i = 0; i < head_.size(); ++i) iter_[i] = head_[i];
      while (true) {
        const double f = dfs(s, t, std::numeric_limits<double>::infinity());
        if (f <= kEps) break;
        total += f;
      }
    }
    return total;
  }

 private:
  static constexpr double kEps = 1e-15;
  struct Edge {
    std::size_t to;
    std::ptrdiff_t next;
    double cap;
  };

  bool bfs(std::size_t s, std::size_t t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::queue<std::size_t> q;
    level_[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (auto e = head_[u]; e != -1; e = edges_[static_cast<std::size_t>(e)].next) {
        const auto& ed = edges_[static_cast<std::size_t>(e)];
        if (ed.cap > kEps && level_[ed.to] < 0) {
          level_[ed.to] = level_[u] + 1;
          q.push(ed.to);
        }
      }
    }
    return level_[t] >= 0;
  }

  double dfs(std::size_t u, std::size_t t, double f) {
    if (u == t) return f;
    for (auto& e = iter_[u]; e != -1; e = edges_[static_cast<std::size_t>(e)].next) {
      auto& ed = edges_[static_cast<std::size_t>(e)];
      if (ed.cap > kEps && level_[ed.to] == level_[u] + 1) {
        const double d = dfs(ed.to, t, std::min(f, ed.cap));
        if (d > kEps) {
          ed.cap -= d;
          edges_[static_cast<std::size_t>(e) ^ 1U].cap += d;
          return d;
        }
      }
    }
    return 0.0;
  }

  std::vector<std::ptrdiff_t> head_;
  std::vector<int> level_;
  std::vector<std::ptrdiff_t> iter_;
  std::vector<Edge> edges_;
};

}  // namespace

DiscreteMeasure make_measure(const MetricSystem& system, std::vector<Point> support, std::vector<double> weights) {
  (void)system;
  if (support.size() != weights.size() || support.empty()) {
    throw Error(ErrorCode::InvalidInput, "support and weights must be nonempty and of equal size");
  }
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::InfeasibleMarginals, "weights must be nonnegative");
  }
  if (std::fabs(kahan_sum(weights) - 1.0) > kWeightTol) {
    throw Error(ErrorCode::InfeasibleMarginals, "weights must sum to 1");
  }
  detail::PointKeyer keys;
  for (const auto& p : support) {
    if (keys.id_of(p) != keys.count() - 1) throw Error(ErrorCode::InvalidInput, "support points must be distinct");
  }
  return {std::move(support), std::move(weights)};
}

DiscreteMeasure empirical_measure(const MetricSystem& system, const PointSeq& x, std::size_t n) {
  (void)system;
  if (n == 0 || x.size() < n) throw Error(ErrorCode::HorizonTooShort, "sequence shorter than n");
  detail::PointKeyer keys;
  DiscreteMeasure m;
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = static_cast<std::size_t>(keys.id_of(x[i]));
    if (id == counts.size()) {
      counts.push_back(0);
      m.support.push_back(x[i]);
    }
    ++counts[id];
  }
  m.weights.reserve(counts.size());
  for (auto c : counts) m.weights.push_back(static_cast<double>(c) / static_cast<double>(n));
  return m;
}

namespace {

// Prokhorov distance with μ on the left of the flow network.
double prokhorov_oriented(const std::vector<double>& dist, const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                          bool transposed) {
  const std::size_t m = mu.size();
  const std::size_t k = nu.size();
  auto d = [&](std::size_t i, std::size_t j) { return transposed ? dist[j * m + i] : dist[i * k + j]; };
  std::vector<double> levels(dist);
  levels.push_back(0.0);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  // 1 − F(l), where F(l) is the largest mass a coupling can put on pairs at
  // distance ≤ levels[l]. Read off the minimum cut as μ(B) − ν(N(B)), which
  // avoids accumulating the flow's rounding.
  auto deficit_at = [&](std::size_t l) {
    FlowNetwork net(m + k + 2);
    const std::size_t s = m + k;
    const std::size_t t = m + k + 1;
    for (std::size_t i = 0; i < m; ++i) net.add_edge(s, i, mu.weights[i]);
    for (std::size_t j = 0; j < k; ++j) net.add_edge(m + j, t, nu.weights[j]);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (d(i, j) <= levels[l]) net.add_edge(i, m + j, std::numeric_limits<double>::infinity());
      }
    }
    net.max_flow(s, t);
    const auto side = net.source_side(s);
    double deficit = 0.0;
    for (std::size_t i = 0; i < m; ++i) deficit += side[i] != 0 ? mu.weights[i] : 0.0;
    for (std::size_t j = 0; j < k; ++j) deficit -= side[m + j] != 0 ? nu.weights[j] : 0.0;
    return deficit < 1e-12 ? 0.0 : deficit;
  };
  // On (levels[l], levels[l+1]] the edge set {ρ < ε} is {ρ ≤ levels[l]}, and
  // D_P ≤ ε there iff 1 − F(l) ≤ ε. The first interval meeting that condition
  // holds the infimum; the condition is monotone in l.
  auto feasible = [&](std::size_t l, double deficit) {
    return l + 1 == levels.size() || deficit <= levels[l + 1];
  };
  std::size_t lo = 0;
  std::size_t hi = levels.size() - 1;
  double hi_deficit = deficit_at(hi);
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const double deficit = deficit_at(mid);
    if (feasible(mid, deficit)) {
      hi = mid;
      hi_deficit = deficit;
    } else {
      lo = mid + 1;
    }
  }
  return std::max(levels[hi], hi_deficit);
}

}  // namespace

double prokhorov(const MetricSystem& system, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const std::size_t m = mu.size();
  const std::size_t k = nu.size();
  if (m > kProkhorovMaxSupport || k > kProkhorovMaxSupport || m * k > kMaxPairTable) {
    throw Error(ErrorCode::SupportTooLarge, "supports of size " + std::to_string(m) + " and " + std::to_string(k));
  }
  if (m == 0 || k == 0) throw Error(ErrorCode::InvalidInput, "empty measure");
  std::vector<double> dist(m * k);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) dist[i * k + j] = system.distance(mu.support[i], nu.support[j]);
  }
  // Both orientations agree in exact arithmetic; taking the larger makes the
  // floating-point result symmetric.
  return std::max(prokhorov_oriented(dist, mu, nu, false), prokhorov_oriented(dist, nu, mu, true));
}

BlockDistribution block_distribution(const Word& stream, std::size_t n) {
  if (n == 0 || stream.size() < n) throw Error(ErrorCode::HorizonTooShort, "stream shorter than block length");
  BlockDistribution bd;
  bd.n = n;
  const std::size_t windows = stream.size() - n + 1;
  bd.short_stream = n < 60 && static_cast<double>(stream.size()) < 10.0 * std::ldexp(1.0, static_cast<int>(n));
  std::map<Word, std::size_t> counts;
  Word w(n);
  for (std::size_t i = 0; i < windows; ++i) {
    std::copy(stream.begin() + static_cast<std::ptrdiff_t>(i), stream.begin() + static_cast<std::ptrdiff_t>(i + n),
              w.begin());
    ++counts[w];
  }
  for (auto& [word, c] : counts) bd.probs.emplace(word, static_cast<double>(c) / static_cast<double>(windows));
  return bd;
}

BlockDistribution block_distribution(const ProductSpec& spec, std::size_t n) {
  if (spec.symbols.empty() || spec.symbols.size() != spec.probs.size()) {
    throw Error(ErrorCode::InvalidInput, "product spec needs one probability per symbol");
  }
  if (std::fabs(kahan_sum(spec.probs) - 1.0) > kWeightTol) {
    throw Error(ErrorCode::InfeasibleMarginals, "product spec probabilities must sum to 1");
  }
  if (n == 0) throw Error(ErrorCode::InvalidInput, "block length must be positive");
  const double blocks = std::pow(static_cast<double>(spec.symbols.size()), static_cast<double>(n));
  if (blocks > static_cast<double>(kTransportMaxEntries)) {
    throw Error(ErrorCode::ProblemTooLarge, "too many blocks in the product distribution");
  }
  BlockDistribution bd;
  bd.n = n;
  const std::size_t a = spec.symbols.size();
  std::vector<std::size_t> digit(n, 0);
  Word w(n, spec.symbols[0]);
  while (true) {
    double p = 1.0;
    for (std::size_t j = 0; j < n; ++j) p *= spec.probs[digit[j]];
    if (p > 0.0) bd.probs[w] += p;
    std::size_t j = n;
    while (j > 0) {
      --j;
      if (++digit[j] < a) {
        w[j] = spec.symbols[digit[j]];
        break;
      }
      digit[j] = 0;
      w[j] = spec.symbols[0];
      if (j == 0) return bd;
    }
  }
}

TransportResult transport_matrix(const std::vector<double>& supply, const std::vector<double>& demand,
                                 const std::vector<double>& cost) {
  const std::size_t m = supply.size();
  const std::size_t k = demand.size();
  if (m == 0 || k == 0 || cost.size() != m * k) throw Error(ErrorCode::InvalidInput, "cost matrix shape");
  if (m * k > kTransportMaxEntries) throw Error(ErrorCode::ProblemTooLarge, "more than 10^7 cost entries");
  for (double v : supply) {
    if (!(v >= 0.0)) throw Error(ErrorCode::InfeasibleMarginals, "negative supply");
  }
  for (double v : demand) {
    if (!(v >= 0.0)) throw Error(ErrorCode::InfeasibleMarginals, "negative demand");
  }
  const double ssum = kahan_sum(supply);
  const double dsum = kahan_sum(demand);
  if (std::fabs(ssum - 1.0) > 1e-9 || std::fabs(dsum - 1.0) > 1e-9) {
    throw Error(ErrorCode::InfeasibleMarginals, "marginals must each sum to 1");
  }

  // Basis: m + k − 1 cells forming a spanning tree on rows ∪ columns.
  std::vector<double> flow(m * k, 0.0);
  std::vector<char> basic(m * k, 0);
  {
    std::vector<double> a(supply);
    std::vector<double> b(demand);
    std::size_t i = 0;
    std::size_t j = 0;
    while (true) {
      const double x = std::min(a[i], b[j]);
      flow[i * k + j] = x;
      basic[i * k + j] = 1;
      a[i] -= x;
      b[j] -= x;
      if (i + 1 == m && j + 1 == k) break;
      if (j + 1 == k || (i + 1 < m && a[i] <= b[j])) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  std::vector<double> u(m);
  std::vector<double> v(k);
  std::vector<std::vector<std::size_t>> row_cells(m);
  std::vector<std::vector<std::size_t>> col_cells(k);
  auto rebuild = [&] {
    for (auto& r : row_cells) r.clear();
    for (auto& c : col_cells) c.clear();
    for (std::size_t c = 0; c < m * k; ++c) {
      if (basic[c] != 0) {
        row_cells[c / k].push_back(c);
        col_cells[c % k].push_back(c);
      }
    }
  };
  auto duals = [&] {
    std::vector<char> seen_r(m, 0);
    std::vector<char> seen_c(k, 0);
    std::vector<std::ptrdiff_t> stack{0};  // nonnegative: row, negative: column −(j+1)
    u[0] = 0.0;
    seen_r[0] = 1;
    while (!stack.empty()) {
      const auto node = stack.back();
      stack.pop_back();
      if (node >= 0) {
        const auto i = static_cast<std::size_t>(node);
        for (auto c : row_cells[i]) {
          const std::size_t j = c % k;
          if (seen_c[j] == 0) {
            seen_c[j] = 1;
            v[j] = cost[c] - u[i];
            stack.push_back(-static_cast<std::ptrdiff_t>(j) - 1);
          }
        }
      } else {
        const auto j = static_cast<std::size_t>(-node - 1);
        for (auto c : col_cells[j]) {
          const std::size_t i = c / k;
          if (seen_r[i] == 0) {
            seen_r[i] = 1;
            u[i] = cost[c] - v[j];
            stack.push_back(static_cast<std::ptrdiff_t>(i));
          }
        }
      }
    }
  };
  // Path in the basis tree from row r to column c, as an ordered list of cells.
  auto tree_path = [&](std::size_t r, std::size_t c) {
    const std::size_t nodes = m + k;
    std::vector<std::size_t> via(nodes, std::numeric_limits<std::size_t>::max());
    std::vector<char> seen(nodes, 0);
    std::vector<std::size_t> queue{r};
    seen[r] = 1;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const std::size_t node = queue[q];
      const auto& cells = node < m ? row_cells[node] : col_cells[node - m];
      for (auto cell : cells) {
        const std::size_t other = node < m ? m + cell % k : cell / k;
        if (seen[other] == 0) {
          seen[other] = 1;
          via[other] = cell;
          queue.push_back(other);
        }
      }
    }
    std::vector<std::size_t> path;
    std::size_t node = m + c;
    while (node != r) {
      const std::size_t cell = via[node];
      path.push_back(cell);
      node = node < m ? m + cell % k : cell / k;
    }
    std::reverse(path.begin(), path.end());
    return path;
  };

  TransportResult res;
  const double scale = std::max(1.0, *std::max_element(cost.begin(), cost.end()));
  const double opt_tol = 1e-12 * scale;
  const std::size_t bland_after = 50 * (m + k);
  rebuild();
  while (true) {
    duals();
    std::size_t enter = m * k;
    double best = -opt_tol;
    for (std::size_t c = 0; c < m * k; ++c) {
      if (basic[c] != 0) continue;
      const double r = cost[c] - u[c / k] - v[c % k];
      if (res.pivots >= bland_after) {
        if (r < -opt_tol) {
          enter = c;
          break;
        }
      } else if (r < best) {
        best = r;
        enter = c;
      }
    }
    if (enter == m * k) break;
    // Cycle: entering cell (+), then the tree path from its column back to its row
    // alternates −, +, −, …
    const std::size_t er = enter / k;
    const std::size_t ec = enter % k;
    auto path = tree_path(er, ec);  // row er → … → column ec
    std::reverse(path.begin(), path.end());
    double theta = std::numeric_limits<double>::infinity();
    std::size_t leave = m * k;
    for (std::size_t t = 0; t < path.size(); t += 2) {
      const std::size_t cell = path[t];
      if (flow[cell] < theta || (flow[cell] == theta && cell < leave)) {
        theta = flow[cell];
        leave = cell;
      }
    }
    for (std::size_t t = 0; t < path.size(); ++t) flow[path[t]] += t % 2 == 0 ? -theta : theta;
    flow[enter] = theta;
    flow[leave] = 0.0;
    basic[leave] = 0;
    basic[enter] = 1;
    rebuild();
    ++res.pivots;
  }

  // Certificate: primal feasibility and dual feasibility; basic cells are tight by construction.
  double residual = 0.0;
  double value = 0.0;
  std::vector<double> rows(m, 0.0);
  std::vector<double> cols(k, 0.0);
  for (std::size_t c = 0; c < m * k; ++c) {
    if (flow[c] < 0.0) {
      residual = std::max(residual, -flow[c]);
      flow[c] = 0.0;
    }
    rows[c / k] += flow[c];
    cols[c % k] += flow[c];
    value += flow[c] * cost[c];
    residual = std::max(residual, -(cost[c] - u[c / k] - v[c % k]));
  }
  for (std::size_t i = 0; i < m; ++i) residual = std::max(residual, std::fabs(rows[i] - supply[i]));
  for (std::size_t j = 0; j < k; ++j) residual = std::max(residual, std::fabs(cols[j] - demand[j]));
  res.value = value;
  res.residual = residual;
  res.plan.mass.clear();
  // Callers map flat cells back to their own labels.
  res.flat_plan = std::move(flow);
  return res;
}

TransportResult transport_block_distance(const BlockDistribution& mu, const BlockDistribution& nu, BlockCost cost) {
  if (mu.n != nu.n) throw Error(ErrorCode::HorizonMismatch, "block distributions of different lengths");
  std::vector<const Word*> rows;
  std::vector<const Word*> cols;
  std::vector<double> supply;
  std::vector<double> demand;
  for (const auto& [w, p] : mu.probs) {
    rows.push_back(&w);
    supply.push_back(p);
  }
  for (const auto& [w, p] : nu.probs) {
    cols.push_back(&w);
    demand.push_back(p);
  }
  if (rows.size() * cols.size() > kTransportMaxEntries) {
    throw Error(ErrorCode::ProblemTooLarge, "more than 10^7 cost entries");
  }
  std::vector<double> c(rows.size() * cols.size());
  std::vector<double> ham(rows.size() * cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const auto d = word_metrics(*rows[i], *cols[j]);
      c[i * cols.size() + j] = cost == BlockCost::Edit ? d.edit : d.hamming;
      ham[i * cols.size() + j] = d.hamming;
    }
  }
  auto res = transport_matrix(supply, demand, c);
  if (cost == BlockCost::Edit) {
    // the Hamming plan is feasible here and pointwise no dearer
    const auto h = transport_matrix(supply, demand, ham);
    double v = 0.0;
    for (std::size_t cell = 0; cell < c.size(); ++cell) v += h.flat_plan[cell] * c[cell];
    if (v < res.value) {
      res.flat_plan = h.flat_plan;
      res.value = v;
      res.residual = std::max(res.residual, h.residual);
    }
  }
  if (res.residual > 1e-9) {
    throw Error(ErrorCode::InfeasibleMarginals, "transport certificate residual " + std::to_string(res.residual));
  }
  res.plan.n = mu.n;
  for (std::size_t cell = 0; cell < res.flat_plan.size(); ++cell) {
    if (res.flat_plan[cell] > 0.0) {
      res.plan.mass.emplace(std::pair{*rows[cell / cols.size()], *cols[cell % cols.size()]}, res.flat_plan[cell]);
    }
  }
  return res;
}

}  // namespace fkdyn

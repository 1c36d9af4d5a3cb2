#include "fkdyn/ergodiag.hpp"

#include <algorithm>
#include <cmath>

namespace fkdyn {

namespace {

Symbol first_symbol(const Point& p) {
  if (const auto* s = std::get_if<SymbolicPoint>(&p)) return s->at(0);
  throw Error(ErrorCode::InvalidInput, "test function needs a symbolic point");
}

// Prefix sums of φ along the sequence, accumulated in long double.
std::vector<long double> prefix_sums(const TestFunction& phi, const PointSeq& seq, std::size_t len) {
  std::vector<long double> s(len + 1, 0.0L);
  for (std::size_t j = 0; j < len; ++j) s[j + 1] = s[j] + static_cast<long double>(phi(seq[j]));
  return s;
}

double window_average(const std::vector<long double>& s, std::size_t start, std::size_t k) {
  return static_cast<double>((s[start + k] - s[start]) / static_cast<long double>(k));
}

}  // namespace

TestFunction coordinate_function(double bound) {
  if (!(bound > 0.0)) throw Error(ErrorCode::InvalidInput, "coordinate bound must be positive");
  TestFunction f;
  f.kind = TestKind::Coordinate;
  f.label = "coordinate";
  f.sup_norm = bound;
  f.eval = [](const Point& p) {
    if (const auto* v = std::get_if<double>(&p)) return *v;
    return first_symbol(p);
  };
  f.modulus = [bound](const MetricSystem& sys, double delta) {
    switch (sys.family()) {
      case MetricFamily::ShiftStandard:
        return shift_agreement_length(delta, sys.depth()) >= 1 ? 0.0 : 2 * bound;
      case MetricFamily::WeightedL1Product:
      case MetricFamily::AbsDiff:
        return std::min(delta, 2 * bound);
      default:
        return 2 * bound;
    }
  };
  return f;
}

TestFunction symbol_weight_function(std::map<Symbol, double> weights) {
  if (weights.empty()) throw Error(ErrorCode::InvalidInput, "no weights");
  double lo = weights.begin()->second;
  double hi = lo;
  double sup = 0.0;
  double min_gap = INFINITY;
  for (auto it = weights.begin(); it != weights.end(); ++it) {
    lo = std::min(lo, it->second);
    hi = std::max(hi, it->second);
    sup = std::max(sup, std::fabs(it->second));
    if (auto nx = std::next(it); nx != weights.end()) min_gap = std::min(min_gap, nx->first - it->first);
  }
  TestFunction f;
  f.kind = TestKind::SymbolWeight;
  f.label = "symbol-weight";
  f.sup_norm = sup;
  f.eval = [weights](const Point& p) {
    const auto it = weights.find(first_symbol(p));
    if (it == weights.end()) throw Error(ErrorCode::MissingWeight, "no weight for symbol " + std::to_string(first_symbol(p)));
    return it->second;
  };
  const double span = hi - lo;
  f.modulus = [span, min_gap](const MetricSystem& sys, double delta) {
    if (sys.family() == MetricFamily::ShiftStandard) {
      return shift_agreement_length(delta, sys.depth()) >= 1 ? 0.0 : span;
    }
    // ρ ≥ |ω_0 − ω'_0| here, so distinct leading symbols are at least min_gap apart.
    if (sys.family() == MetricFamily::WeightedL1Product && delta <= min_gap) return 0.0;
    return span;
  };
  return f;
}

TestFunction cylinder_function(Word c) {
  if (c.empty()) throw Error(ErrorCode::InvalidInput, "empty cylinder word");
  const std::size_t m = c.size();
  TestFunction f;
  f.kind = TestKind::CylinderSmoothed;
  f.label = "cylinder";
  f.sup_norm = 1.0;
  f.eval = [c](const Point& p) {
    const auto* s = std::get_if<SymbolicPoint>(&p);
    if (s == nullptr) throw Error(ErrorCode::InvalidInput, "test function needs a symbolic point");
    std::size_t j = 0;
    while (j < c.size() && s->at(j) == c[j]) ++j;
    return static_cast<double>(j) / static_cast<double>(c.size());
  };
  f.modulus = [m](const MetricSystem& sys, double delta) {
    if (sys.family() != MetricFamily::ShiftStandard) return 1.0;
    // Points agreeing on K symbols have equal prefixes with c below K.
    const std::size_t agree = shift_agreement_length(delta, sys.depth());
    return agree >= m ? 0.0 : static_cast<double>(m - agree) / static_cast<double>(m);
  };
  return f;
}

std::vector<std::pair<double, double>> modulus_table(const TestFunction& phi, const MetricSystem& system,
                                                     std::size_t j_max) {
  std::vector<std::pair<double, double>> out;
  for (std::size_t j = 0; j <= j_max; ++j) {
    const double d = std::ldexp(1.0, -static_cast<int>(j));
    out.emplace_back(d, phi.modulus(system, d));
  }
  return out;
}

double birkhoff_average(const TestFunction& phi, const PointSeq& seq, std::size_t k, std::size_t offset) {
  if (k == 0) throw Error(ErrorCode::InvalidInput, "k must be positive");
  if (offset + k > seq.size()) {
    throw Error(ErrorCode::HorizonTooShort, "need " + std::to_string(offset + k) + " points, have " +
                                                std::to_string(seq.size()));
  }
  long double s = 0.0L;
  for (std::size_t j = offset; j < offset + k; ++j) s += static_cast<long double>(phi(seq[j]));
  return static_cast<double>(s / static_cast<long double>(k));
}

BadSegmentCurve bad_segment_density(const PointSeq& seq, const TestFunction& phi, double alpha,
                                    const std::vector<std::size_t>& k_list) {
  if (k_list.empty()) throw Error(ErrorCode::InvalidInput, "empty k list");
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidInput, "alpha must be positive");
  const std::size_t len = seq.size();
  const std::size_t kmax = *std::max_element(k_list.begin(), k_list.end());
  if (std::find(k_list.begin(), k_list.end(), std::size_t{0}) != k_list.end()) {
    throw Error(ErrorCode::InvalidInput, "k must be positive");
  }
  if (len < 10 * kmax) {
    throw Error(ErrorCode::HorizonTooShort,
                "length " + std::to_string(len) + " below 10·k = " + std::to_string(10 * kmax));
  }
  const auto s = prefix_sums(phi, seq, len);
  BadSegmentCurve out;
  out.alpha = alpha;
  out.phi_star = window_average(s, 0, len);
  for (std::size_t k : k_list) {
    BadSegmentPoint pt;
    pt.k = k;
    pt.windows = len - k + 1;
    for (std::size_t l = 0; l + k <= len; ++l) {
      if (std::fabs(window_average(s, l, k) - out.phi_star) > alpha) ++pt.bad;
    }
    pt.density = static_cast<double>(pt.bad) / static_cast<double>(pt.windows);
    out.points.push_back(pt);
  }
  return out;
}

MatchedDeviation matched_average_deviation(const MetricSystem& system, const PointSeq& x, const QuasiOrbit& z,
                                           const TestFunction& phi, std::size_t k, double delta, std::size_t n) {
  if (k == 0 || k >= n) throw Error(ErrorCode::InvalidInput, "need 0 < k < n");
  if (x.size() < n || z.size() + 1 < n + k) {
    throw Error(ErrorCode::HorizonTooShort, "x needs n points and z needs n + k − 1");
  }
  MatchedDeviation out;
  out.match = max_match(system, x, z.points(), n, delta);
  const std::size_t fit = out.match.fit();
  if (!(1.0 - static_cast<double>(fit) / static_cast<double>(n) < delta)) {
    throw Error(ErrorCode::NoAdequateMatch, "gap " + std::to_string(1.0 - static_cast<double>(fit) / static_cast<double>(n)) +
                                                " is not below delta " + std::to_string(delta));
  }

  // Prefix counts of positions outside D(π), outside R(π), and of switches in z.
  std::vector<std::size_t> pi(n, SIZE_MAX);
  std::vector<char> in_range(n + k, 0);
  for (const auto& [i, j] : out.match.pairs) {
    pi[i] = j;
    in_range[j] = 1;
  }
  std::vector<std::size_t> not_dom(n + k + 1, 0);
  std::vector<std::size_t> not_rng(n + k + 1, 0);
  for (std::size_t t = 0; t < n + k; ++t) {
    not_dom[t + 1] = not_dom[t] + ((t < n && pi[t] != SIZE_MAX) ? 0 : 1);
    not_rng[t + 1] = not_rng[t] + (in_range[t] != 0 ? 0 : 1);
  }
  std::vector<std::size_t> switches(n + k + 1, 0);
  {
    std::vector<char> is_switch(n + k, 0);
    for (auto s : z.switch_indices()) {
      if (s < n + k) is_switch[s] = 1;
    }
    for (std::size_t t = 0; t < n + k; ++t) switches[t + 1] = switches[t] + static_cast<std::size_t>(is_switch[t]);
  }

  const double root = std::sqrt(delta);
  const double thresh = root * static_cast<double>(k);
  const auto sx = prefix_sums(phi, x, n);
  const auto sz = prefix_sums(phi, z.points(), n + k - 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (pi[j] == SIZE_MAX) continue;
    const std::size_t pj = pi[j];
    // A_Z: some T(z_{π(j)+i}) ≠ z_{π(j)+i+1}, i.e. a switch in (π(j), π(j)+k].
    const bool bad_z = switches[std::min(pj + k + 1, n + k)] - switches[pj + 1] > 0;
    if (bad_z) ++out.a_switch;
    if (j + k >= n) continue;
    const bool bad_r = static_cast<double>(not_rng[pj + k] - not_rng[pj]) >= thresh;
    const bool bad_d = static_cast<double>(not_dom[j + k] - not_dom[j]) >= thresh;
    out.a_range += bad_r ? 1 : 0;
    out.a_domain += bad_d ? 1 : 0;
    if (bad_z || bad_r || bad_d) continue;
    ++out.a_size;
    out.deviation = std::max(out.deviation, std::fabs(window_average(sx, j, k) - window_average(sz, pj, k)));
  }
  out.epsilon = phi.modulus(system, delta);
  out.bound = out.epsilon + 4 * root * phi.sup_norm;
  out.size_bound = static_cast<double>(n) * (1 - 2 * root - 2 * delta) - static_cast<double>(k);
  out.within_bound = out.deviation <= out.bound;
  out.size_ok = static_cast<double>(out.a_size) > out.size_bound;
  return out;
}

}  // namespace fkdyn

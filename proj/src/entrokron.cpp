#include "fkdyn/entrokron.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <unordered_map>

#include "fkdyn/matchkit.hpp"

namespace fkdyn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Σ p log2 p collected per distinct p, so powers of two give exact bit counts.
double entropy_bits(const std::vector<double>& probs) {
  std::map<double, std::size_t> groups;
  for (double p : probs) {
    if (p > 0.0) ++groups[p];
  }
  long double h = 0.0L;
  for (const auto& [p, c] : groups) {
    h -= static_cast<long double>(c) * static_cast<long double>(p) * static_cast<long double>(std::log2(p));
  }
  return static_cast<double>(h);
}

EntropyEstimate make_estimate(std::size_t m, double bits, double prev_bits, bool undersampled) {
  EntropyEstimate e;
  e.m = m;
  e.block_entropy = bits * std::numbers::ln2;
  e.rate = (bits / static_cast<double>(m)) * std::numbers::ln2;
  e.increment = (bits - prev_bits) * std::numbers::ln2;
  e.undersampled = undersampled;
  return e;
}

// Dense symbol ids shared by every word of one computation.
class SymbolIndex {
 public:
  void add(std::span<const Symbol> w) {
    for (Symbol s : w) ids_.emplace(s, 0);
  }
  void freeze() {
    std::int32_t next = 0;
    for (auto& [s, id] : ids_) id = next++;
  }
  [[nodiscard]] std::int32_t id(Symbol s) const { return ids_.at(s); }
  [[nodiscard]] std::size_t size() const { return ids_.size(); }
  [[nodiscard]] std::vector<Symbol> symbols() const {
    std::vector<Symbol> out;
    for (const auto& [s, id] : ids_) out.push_back(s);
    return out;
  }
  [[nodiscard]] std::vector<std::int32_t> encode(std::span<const Symbol> w) const {
    std::vector<std::int32_t> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = id(w[i]);
    return out;
  }

 private:
  std::map<Symbol, std::int32_t> ids_;
};

// Per-symbol column masks of one word, for bit-parallel LCS against it.
class ColumnWord {
 public:
  ColumnWord(std::span<const std::int32_t> w, std::size_t alphabet)
      : n_(w.size()), words_((w.size() + 63) / 64), masks_(alphabet * words_, 0) {
    for (std::size_t j = 0; j < n_; ++j) {
      masks_[static_cast<std::size_t>(w[j]) * words_ + j / 64] |= std::uint64_t{1} << (j % 64);
    }
  }

  [[nodiscard]] std::size_t lcs(std::span<const std::int32_t> row, std::vector<std::uint64_t>& v) const {
    v.assign(words_, ~std::uint64_t{0});
    for (std::int32_t a : row) {
      const std::uint64_t* m = &masks_[static_cast<std::size_t>(a) * words_];
      std::uint64_t carry = 0;
      for (std::size_t t = 0; t < words_; ++t) {
        const std::uint64_t u = v[t] & m[t];
        const std::uint64_t s1 = v[t] + u;
        const std::uint64_t c1 = s1 < v[t] ? 1 : 0;
        const std::uint64_t s2 = s1 + carry;
        const std::uint64_t c2 = s2 < s1 ? 1 : 0;
        v[t] = s2 | (v[t] & ~m[t]);
        carry = c1 | c2;
      }
    }
    std::size_t ones = 0;
    for (std::size_t t = 0; t < words_; ++t) {
      std::uint64_t x = v[t];
      if (t + 1 == words_ && n_ % 64 != 0) x &= (std::uint64_t{1} << (n_ % 64)) - 1;
      ones += static_cast<std::size_t>(std::popcount(x));
    }
    return n_ - ones;
  }

 private:
  std::size_t n_;
  std::size_t words_;
  std::vector<std::uint64_t> masks_;
};

struct Block {
  std::vector<std::int32_t> ids;
  double prob = 0.0;
};

// Support blocks sorted by probability (descending), ties kept in input order.
void rank(std::vector<Block>& support) {
  std::stable_sort(support.begin(), support.end(), [](const Block& a, const Block& b) { return a.prob > b.prob; });
}

std::vector<std::int32_t> modal_block(const std::vector<Block>& support, std::size_t n, std::size_t alphabet) {
  std::vector<std::int32_t> out(n, 0);
  std::vector<double> mass(alphabet);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(mass.begin(), mass.end(), 0.0);
    for (const auto& b : support) mass[static_cast<std::size_t>(b.ids[j])] += b.prob;
    out[j] = static_cast<std::int32_t>(std::max_element(mass.begin(), mass.end()) - mass.begin());
  }
  return out;
}

struct BallScan {
  std::vector<double> fbar;  // per support block
  double mass = 0.0;
  double beta = 0.0;
  std::size_t boundary = 0;
};

BallScan scan_ball(const std::vector<std::int32_t>& witness, const std::vector<Block>& support, std::size_t alphabet,
                   double epsilon) {
  const ColumnWord col(witness, alphabet);
  const double n = static_cast<double>(witness.size());
  BallScan out;
  out.fbar.resize(support.size());
  std::vector<std::uint64_t> v;
  long double mass = 0.0L;
  long double beta = 0.0L;
  for (std::size_t i = 0; i < support.size(); ++i) {
    const double f = (n - static_cast<double>(col.lcs(support[i].ids, v))) / n;
    out.fbar[i] = f;
    if (f < epsilon) mass += support[i].prob;
    if (f == epsilon) ++out.boundary;
    beta += static_cast<long double>(support[i].prob) * f;
  }
  out.mass = static_cast<double>(mass);
  out.beta = static_cast<double>(beta);
  return out;
}

struct WitnessSearch {
  std::vector<std::int32_t> witness;
  BallScan scan;
  bool exhaustive = false;
  std::size_t candidates = 0;
};

WitnessSearch find_witness(const std::vector<Block>& support, std::size_t n, std::size_t alphabet, double epsilon,
                           std::size_t max_candidates) {
  std::vector<std::vector<std::int32_t>> cands;
  WitnessSearch out;
  if (alphabet <= 2 && n <= 12) {
    out.exhaustive = true;
    const std::size_t total = std::size_t{1} << (alphabet == 2 ? n : 0);
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<std::int32_t> w(n, 0);
      for (std::size_t j = 0; j < n && alphabet == 2; ++j) w[j] = static_cast<std::int32_t>((code >> (n - 1 - j)) & 1U);
      cands.push_back(std::move(w));
    }
  } else {
    for (std::size_t i = 0; i < support.size() && i < max_candidates; ++i) cands.push_back(support[i].ids);
    auto modal = modal_block(support, n, alphabet);
    if (std::find(cands.begin(), cands.end(), modal) == cands.end()) cands.push_back(std::move(modal));
  }
  out.candidates = cands.size();
  bool have = false;
  for (auto& c : cands) {
    auto scan = scan_ball(c, support, alphabet, epsilon);
    if (!have || scan.mass > out.scan.mass || (scan.mass == out.scan.mass && scan.beta < out.scan.beta)) {
      out.witness = c;
      out.scan = std::move(scan);
      have = true;
    }
  }
  return out;
}

Word decode(const std::vector<std::int32_t>& ids, const std::vector<Symbol>& symbols) {
  Word w(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) w[i] = symbols[static_cast<std::size_t>(ids[i])];
  return w;
}

// Distinct n-blocks of an id stream in order of first occurrence, with
// window frequencies. Rolling hash mod 2^61 − 1, verified by comparison.
std::vector<Block> stream_blocks(const std::vector<std::int32_t>& s, std::size_t n) {
  constexpr std::uint64_t kMod = (std::uint64_t{1} << 61) - 1;
  constexpr std::uint64_t kBase = 1000003;
  auto mul = [](std::uint64_t a, std::uint64_t b) {
    const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
    std::uint64_t r = static_cast<std::uint64_t>(p & kMod) + static_cast<std::uint64_t>(p >> 61);
    return r >= kMod ? r - kMod : r;
  };
  const std::size_t windows = s.size() - n + 1;
  std::uint64_t top = 1;
  for (std::size_t i = 1; i < n; ++i) top = mul(top, kBase);
  std::uint64_t h = 0;
  for (std::size_t i = 0; i < n; ++i) h = (mul(h, kBase) + static_cast<std::uint64_t>(s[i]) + 1) % kMod;

  std::unordered_map<std::uint64_t, std::vector<std::size_t>> by_hash;  // hash -> block indices
  std::vector<std::size_t> first;
  std::vector<std::size_t> count;
  for (std::size_t i = 0; i < windows; ++i) {
    if (i > 0) {
      h = (h + kMod - mul(top, static_cast<std::uint64_t>(s[i - 1]) + 1)) % kMod;
      h = (mul(h, kBase) + static_cast<std::uint64_t>(s[i + n - 1]) + 1) % kMod;
    }
    auto& bucket = by_hash[h];
    bool found = false;
    for (std::size_t b : bucket) {
      if (std::equal(s.begin() + static_cast<std::ptrdiff_t>(first[b]),
                     s.begin() + static_cast<std::ptrdiff_t>(first[b] + n), s.begin() + static_cast<std::ptrdiff_t>(i))) {
        ++count[b];
        found = true;
        break;
      }
    }
    if (!found) {
      bucket.push_back(first.size());
      first.push_back(i);
      count.push_back(1);
    }
  }
  std::vector<Block> out(first.size());
  for (std::size_t b = 0; b < first.size(); ++b) {
    out[b].ids.assign(s.begin() + static_cast<std::ptrdiff_t>(first[b]),
                      s.begin() + static_cast<std::ptrdiff_t>(first[b] + n));
    out[b].prob = static_cast<double>(count[b]) / static_cast<double>(windows);
  }
  return out;
}

}  // namespace

Partition identity_partition(std::vector<Symbol> alphabet) {
  std::sort(alphabet.begin(), alphabet.end());
  alphabet.erase(std::unique(alphabet.begin(), alphabet.end()), alphabet.end());
  if (alphabet.empty()) throw Error(ErrorCode::InvalidInput, "empty alphabet");
  Partition p;
  p.k = alphabet.size();
  p.label = "identity";
  p.classify = [alphabet](const Point& x) -> std::size_t {
    const auto* s = std::get_if<SymbolicPoint>(&x);
    if (s == nullptr) throw Error(ErrorCode::InvalidInput, "identity partition needs symbolic points");
    const auto it = std::lower_bound(alphabet.begin(), alphabet.end(), s->at(0));
    if (it == alphabet.end() || *it != s->at(0)) {
      throw Error(ErrorCode::InvalidInput, "symbol " + std::to_string(s->at(0)) + " outside the alphabet");
    }
    return static_cast<std::size_t>(it - alphabet.begin());
  };
  return p;
}

Partition trivial_partition() {
  Partition p;
  p.k = 1;
  p.label = "trivial";
  p.classify = [](const Point&) -> std::size_t { return 0; };
  return p;
}

Partition interval_partition(std::vector<double> cuts, std::vector<std::size_t> labels) {
  if (labels.size() != cuts.size() + 1) throw Error(ErrorCode::InvalidInput, "need one label per interval");
  if (!std::is_sorted(cuts.begin(), cuts.end())) throw Error(ErrorCode::InvalidInput, "cuts must be sorted");
  Partition p;
  p.k = *std::max_element(labels.begin(), labels.end()) + 1;
  p.label = "intervals";
  p.classify = [cuts, labels](const Point& x) -> std::size_t {
    const auto* v = std::get_if<double>(&x);
    if (v == nullptr) throw Error(ErrorCode::InvalidInput, "interval partition needs real points");
    return labels[static_cast<std::size_t>(std::upper_bound(cuts.begin(), cuts.end(), *v) - cuts.begin())];
  };
  return p;
}

Word code_sequence(const Partition& partition, const PointSeq& seq) {
  Word out;
  out.reserve(seq.size());
  for (const auto& x : seq) out.push_back(static_cast<Symbol>(partition(x)));
  return out;
}

double partition_distance(const Partition& p, const Partition& q, const PointSeq& sample) {
  if (sample.empty()) throw Error(ErrorCode::InvalidInput, "empty sample");
  std::size_t differ = 0;
  for (const auto& x : sample) differ += p(x) != q(x) ? 1 : 0;
  return static_cast<double>(differ) / static_cast<double>(sample.size());
}

Thickening faithful_thicken(const Partition& p, const MetricSystem& system, const PointSeq& sample, double delta,
                            double margin, std::size_t grid) {
  if (sample.empty()) throw Error(ErrorCode::InvalidInput, "empty sample");
  if (!(delta > 0.0)) throw Error(ErrorCode::InvalidInput, "delta must be positive");
  if (grid == 0) throw Error(ErrorCode::InvalidInput, "empty cut grid");
  const std::size_t n = sample.size();
  const std::size_t k = p.k;
  std::vector<std::size_t> lab(n);
  for (std::size_t i = 0; i < n; ++i) lab[i] = p(sample[i]);

  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = system.distance(sample[i], sample[j]);
  }
  // s[i]: distance from x_i to the nearest sample point of another atom.
  std::vector<double> s(n, kInf);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (lab[j] != lab[i]) s[i] = std::min(s[i], d[i * n + j]);
    }
  }

  // Core radii: dropping points with s ≤ r costs at most δ/2 of the sample.
  std::vector<double> sorted = s;
  std::sort(sorted.begin(), sorted.end());
  const auto budget = static_cast<std::size_t>(std::max(0.0, std::ceil(delta * static_cast<double>(n) / 2) - 1));
  std::vector<double> radii;
  for (std::size_t t = std::min(budget, n); t > 0; t /= 2) {
    // Largest value whose ties keep the dropped count within t.
    std::size_t u = t;
    while (u > 0 && u < n && sorted[u - 1] == sorted[u]) --u;
    if (u > 0 && std::isfinite(sorted[u - 1])) radii.push_back(sorted[u - 1]);
  }
  radii.push_back(0.0);
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  Thickening out;
  for (double r : radii) {
    std::vector<std::vector<std::size_t>> core(k);
    for (std::size_t i = 0; i < n; ++i) {
      if (s[i] > r) core[lab[i]].push_back(i);
    }
    // dist(x_i, Q_a) and the least distance between distinct cores.
    std::vector<double> dq(n * k, kInf);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t j : core[a]) dq[i * k + a] = std::min(dq[i * k + a], d[i * n + j]);
      }
    }
    double sep = kInf;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t i : core[a]) {
        for (std::size_t b = 0; b < k; ++b) {
          if (b != a) sep = std::min(sep, dq[i * k + b]);
        }
      }
    }
    if (!(sep > 0.0)) continue;
    double top = sep / 2;
    if (!std::isfinite(top)) {
      top = 0.0;
      for (double v : dq) {
        if (std::isfinite(v)) top = std::max(top, v);
      }
      top = 2 * top + 2 * margin + 1.0;
    }
    for (std::size_t g = grid; g > 0; --g) {
      const double c = top * static_cast<double>(g) / static_cast<double>(grid + 1);
      ++out.cuts_tried;
      bool clear = true;
      std::size_t differ = 0;
      for (std::size_t i = 0; i < n && clear; ++i) {
        std::size_t atom = k;
        for (std::size_t a = 0; a < k; ++a) {
          const double v = dq[i * k + a];
          if (std::fabs(v - c) <= margin) clear = false;
          if (v <= c) atom = a;
        }
        differ += atom != lab[i] ? 1 : 0;
      }
      if (!clear) continue;
      const double dist = static_cast<double>(differ) / static_cast<double>(n);
      if (!(dist < delta)) continue;

      std::vector<std::vector<Point>> core_pts(k);
      for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t j : core[a]) core_pts[a].push_back(sample[j]);
      }
      Partition rp;
      rp.k = k + 1;
      rp.boundary_margin = c;
      rp.label = p.label + "-hull";
      rp.classify = [system, core_pts, c, k](const Point& x) -> std::size_t {
        for (std::size_t a = 0; a < k; ++a) {
          for (const auto& q : core_pts[a]) {
            if (system.distance(x, q) <= c) return a;
          }
        }
        return k;
      };
      out.partition = std::move(rp);
      out.cut = c;
      out.core_radius = r;
      out.separation = sep;
      out.distance = dist;
      return out;
    }
  }
  if (delta >= 1.0) {
    // Any partition is within δ; keep P with an empty extra atom.
    Partition rp = p;
    rp.k = k + 1;
    rp.label = p.label + "-hull";
    out.partition = std::move(rp);
    return out;
  }
  throw Error(ErrorCode::NoGoodCut, "every cut in the grid has sample points within " + std::to_string(margin) +
                                        " of a hull boundary or leaves d_1 ≥ delta");
}

double shannon_entropy(const std::vector<double>& probs) { return entropy_bits(probs) * std::numbers::ln2; }

std::vector<EntropyEstimate> block_entropy_rate(const std::vector<BlockDistribution>& dists) {
  std::vector<EntropyEstimate> out;
  double prev = 0.0;
  for (const auto& bd : dists) {
    std::vector<double> probs;
    probs.reserve(bd.probs.size());
    for (const auto& [w, q] : bd.probs) probs.push_back(q);
    const double bits = entropy_bits(probs);
    out.push_back(make_estimate(bd.n, bits, prev, bd.short_stream));
    prev = bits;
  }
  return out;
}

std::vector<EntropyEstimate> block_entropy_rate(const Word& stream, std::size_t m_max) {
  if (m_max == 0) throw Error(ErrorCode::InvalidInput, "m_max must be positive");
  if (stream.size() < m_max) throw Error(ErrorCode::HorizonTooShort, "stream shorter than m_max");
  SymbolIndex idx;
  idx.add(stream);
  idx.freeze();
  const auto ids = idx.encode(stream);
  const double a = static_cast<double>(std::max<std::size_t>(idx.size(), 2));
  std::vector<EntropyEstimate> out;
  double prev = 0.0;
  for (std::size_t m = 1; m <= m_max; ++m) {
    const auto blocks = stream_blocks(ids, m);
    std::vector<double> probs;
    probs.reserve(blocks.size());
    for (const auto& b : blocks) probs.push_back(b.prob);
    const double bits = entropy_bits(probs);
    const bool under = static_cast<double>(stream.size()) < 50.0 * std::pow(a, static_cast<double>(m));
    out.push_back(make_estimate(m, bits, prev, under));
    prev = bits;
  }
  return out;
}

std::vector<EntropyEstimate> block_entropy_rate(const ProductSpec& spec, std::size_t m_max) {
  if (m_max == 0) throw Error(ErrorCode::InvalidInput, "m_max must be positive");
  (void)block_distribution(spec, 1);  // validates the spec
  // H_m = m·H_1 for a product measure.
  const double h1 = entropy_bits(spec.probs);
  std::vector<EntropyEstimate> out;
  for (std::size_t m = 1; m <= m_max; ++m) {
    const double bits = static_cast<double>(m) * h1;
    out.push_back(make_estimate(m, bits, static_cast<double>(m - 1) * h1, false));
  }
  return out;
}

double fbar_words(const Word& u, const Word& w) {
  if (u.size() != w.size()) throw Error(ErrorCode::LengthMismatch, "words differ in length");
  if (u.empty()) return 0.0;
  SymbolIndex idx;
  idx.add(u);
  idx.add(w);
  idx.freeze();
  const ColumnWord col(idx.encode(w), idx.size());
  std::vector<std::uint64_t> v;
  const double n = static_cast<double>(u.size());
  return (n - static_cast<double>(col.lcs(idx.encode(u), v))) / n;
}

KatokResult katok_trivial(const BlockDistribution& bd, double epsilon, std::size_t max_candidates) {
  if (bd.probs.empty()) throw Error(ErrorCode::InvalidInput, "empty block distribution");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidInput, "epsilon must be positive");
  const std::size_t n = bd.n;
  SymbolIndex idx;
  for (const auto& [w, q] : bd.probs) {
    if (w.size() != n) throw Error(ErrorCode::LengthMismatch, "block length differs from n");
    idx.add(w);
  }
  idx.freeze();
  std::vector<Block> support;
  for (const auto& [w, q] : bd.probs) {
    if (q > 0.0) support.push_back({idx.encode(w), q});
  }
  rank(support);
  const auto search = find_witness(support, n, idx.size(), epsilon, max_candidates);

  KatokResult out;
  out.witness = decode(search.witness, idx.symbols());
  out.ball_mass = search.scan.mass;
  out.beta = search.scan.beta;
  out.trivial = out.ball_mass >= 1.0 - epsilon;
  out.exhaustive = search.exhaustive;
  out.candidates = search.candidates;
  out.boundary_blocks = search.scan.boundary;
  out.sqrt_beta = out.beta < epsilon * epsilon;
  const double root = std::sqrt(out.beta);
  long double m = 0.0L;
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (search.scan.fbar[i] < root) m += support[i].prob;
  }
  out.sqrt_beta_mass = static_cast<double>(m);
  out.consistent = !out.sqrt_beta || out.ball_mass >= 1.0 - epsilon;
  return out;
}

std::vector<KroneckerPoint> loosely_kronecker_diagnostic(const Word& stream, double epsilon,
                                                         const std::vector<std::size_t>& n_list) {
  if (n_list.empty()) throw Error(ErrorCode::InvalidInput, "empty n list");
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidInput, "epsilon must be positive");
  const std::size_t nmax = *std::max_element(n_list.begin(), n_list.end());
  if (stream.size() < 100 * nmax) {
    throw Error(ErrorCode::HorizonTooShort,
                "stream length " + std::to_string(stream.size()) + " below 100·n = " + std::to_string(100 * nmax));
  }
  SymbolIndex idx;
  idx.add(stream);
  idx.freeze();
  const auto ids = idx.encode(stream);
  const std::size_t alphabet = idx.size();
  // Pairwise checks in the greedy extension stop after this many LCS word updates.
  constexpr double kExtensionWork = 4e9;

  std::vector<KroneckerPoint> out;
  for (std::size_t n : n_list) {
    if (n == 0) throw Error(ErrorCode::InvalidInput, "n must be positive");
    auto support = stream_blocks(ids, n);
    rank(support);
    // The ε/2-ball around the witness is pairwise ε-close by the triangle inequality.
    const auto search = find_witness(support, n, alphabet, epsilon / 2, 16);
    std::vector<std::size_t> members;
    std::vector<std::size_t> fringe;
    for (std::size_t i = 0; i < support.size(); ++i) {
      const double f = search.scan.fbar[i];
      if (f < epsilon / 2) {
        members.push_back(i);
      } else if (f < epsilon) {
        fringe.push_back(i);
      }
    }
    const double per_pair = static_cast<double>(n) * static_cast<double>((n + 63) / 64);
    double work = 0.0;
    std::vector<std::uint64_t> v;
    const double nn = static_cast<double>(n);
    for (std::size_t i : fringe) {
      if (work + per_pair * static_cast<double>(members.size()) > kExtensionWork) break;
      work += per_pair * static_cast<double>(members.size());
      const ColumnWord col(support[i].ids, alphabet);
      bool ok = true;
      for (std::size_t j : members) {
        if (!((nn - static_cast<double>(col.lcs(support[j].ids, v))) / nn < epsilon)) {
          ok = false;
          break;
        }
      }
      if (ok) members.push_back(i);
    }
    KroneckerPoint pt;
    pt.n = n;
    long double mass = 0.0L;
    std::sort(members.begin(), members.end());
    for (std::size_t i : members) mass += support[i].prob;
    pt.mass = static_cast<double>(mass);
    pt.pass = pt.mass > 1.0 - epsilon;
    pt.set_size = members.size();
    pt.distinct_blocks = support.size();
    pt.witness = decode(search.witness, idx.symbols());
    out.push_back(std::move(pt));
  }
  return out;
}

CountableExample countable_alphabet_example(std::size_t n, std::size_t sample_len, std::uint64_t seed) {
  if (n > 4) throw Error(ErrorCode::InvalidInput, "n must be at most 4");
  if (sample_len == 0) throw Error(ErrorCode::InvalidInput, "sample length must be positive");
  CountableExample out;
  out.n = n;
  const std::size_t slice = std::size_t{1} << n;
  ProductSpec spec;
  for (std::size_t l = slice; l < 2 * slice; ++l) {
    spec.symbols.push_back(1.0 / static_cast<double>(l));
    spec.probs.push_back(1.0 / static_cast<double>(slice));
  }
  out.entropy_rate = block_entropy_rate(spec, 1).front().rate;

  std::mt19937_64 rng(seed);
  out.sample.resize(sample_len);
  for (auto& s : out.sample) {
    const std::uint64_t r = n == 0 ? 0 : rng() >> (64 - n);
    s = 1.0 / static_cast<double>(slice + r);
  }
  const auto sys = MetricSystem::countable_product();
  const auto x = PeriodicOrbit::from_word(sys, out.sample);
  const auto zero = PeriodicOrbit::from_word(sys, {0.0});
  out.fk_to_fixed_point = fk_distance(x, zero, 1e-4, 4).value;
  return out;
}

}  // namespace fkdyn

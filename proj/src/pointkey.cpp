#include "pointkey.hpp"

#include <bit>

namespace fkdyn::detail {

std::size_t primitive_period(const Word& w) {
  const std::size_t n = w.size();
  std::vector<std::size_t> fail(n + 1, 0);
  for (std::size_t i = 1, k = 0; i < n; ++i) {
    while (k > 0 && w[i] != w[k]) k = fail[k];
    if (w[i] == w[k]) ++k;
    fail[i + 1] = k;
  }
  const std::size_t p = n - fail[n];
  return n % p == 0 ? p : n;
}

std::size_t least_rotation(const Word& w) {
  // Booth's algorithm over w·w.
  const auto n = static_cast<std::ptrdiff_t>(w.size());
  auto at = [&](std::ptrdiff_t i) { return w[static_cast<std::size_t>(i % n)]; };
  std::vector<std::ptrdiff_t> f(static_cast<std::size_t>(2 * n), -1);
  std::ptrdiff_t k = 0;
  for (std::ptrdiff_t j = 1; j < 2 * n; ++j) {
    const double sj = at(j);
    std::ptrdiff_t i = f[static_cast<std::size_t>(j - k - 1)];
    while (i != -1 && sj != at(k + i + 1)) {
      if (sj < at(k + i + 1)) k = j - i - 1;
      i = f[static_cast<std::size_t>(i)];
    }
    if (sj != at(k + i + 1)) {
      if (sj < at(k)) k = j;
      f[static_cast<std::size_t>(j - k)] = -1;
    } else {
      f[static_cast<std::size_t>(j - k)] = i + 1;
    }
  }
  return static_cast<std::size_t>(k % n);
}

const PointKeyer::SeqInfo& PointKeyer::info_for(const SymbolSeq* seq) {
  auto it = seqs_.find(seq);
  if (it != seqs_.end()) return it->second;
  SeqInfo info;
  // Shrink the preperiod while the prefix already follows the cycle.
  const std::size_t c = seq->cycle_size();
  std::size_t e = seq->prefix_size();
  while (e > 0 && seq->prefix()[e - 1] == seq->cycle()[(c - (seq->prefix_size() - e + 1) % c) % c]) --e;
  info.preperiod = e;
  {
    const std::size_t p = primitive_period(seq->cycle());
    Word root(seq->cycle().begin(), seq->cycle().begin() + static_cast<std::ptrdiff_t>(p));
    info.root = p;
    info.offset = least_rotation(root);
    Word canon(p);
    for (std::size_t j = 0; j < p; ++j) canon[j] = root[(info.offset + j) % p];
    auto [cit, fresh] = classes_.emplace(std::move(canon), static_cast<std::int32_t>(classes_.size()));
    info.rotation_class = cit->second;
  }
  return seqs_.emplace(seq, info).first->second;
}

std::int32_t PointKeyer::fallback_id(const SymbolicPoint& p) {
  std::uint64_t h = 1469598103934665603ULL;
  for (std::size_t j = 0; j < 64; ++j) h = (h ^ std::bit_cast<std::uint64_t>(p.at(j) + 0.0)) * 1099511628211ULL;
  auto& bucket = others_[h];
  for (const auto& [q, id] : bucket) {
    if (same_sequence(p, q)) return id;
  }
  bucket.emplace_back(p, next_);
  return next_++;
}

std::int32_t PointKeyer::id_of(const Point& p) {
  if (const auto* d = std::get_if<double>(&p)) {
    auto [it, fresh] = reals_.emplace(*d + 0.0, next_);
    if (fresh) ++next_;
    return it->second;
  }
  const auto& s = std::get<SymbolicPoint>(p);
  const auto& info = info_for(s.seq.get());
  if (s.shift < info.preperiod) return fallback_id(s);
  const std::size_t start = (s.shift + s.seq->cycle_size() - s.seq->prefix_size() % s.seq->cycle_size());
  const std::size_t phase = (start % info.root + info.root - info.offset) % info.root;
  auto [it, fresh] = periodic_.emplace(std::pair{info.rotation_class, phase}, next_);
  if (fresh) ++next_;
  return it->second;
}

}  // namespace fkdyn::detail

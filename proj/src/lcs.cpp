#include "lcs.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace fkdyn::detail {

namespace {

// One row update over words [w0, w1]; returns the carry out of word w1.
inline std::uint64_t update_words(std::uint64_t* v, const std::uint64_t* m, std::size_t w0,
                                  std::size_t w1, std::uint64_t carry) {
  for (std::size_t w = w0; w <= w1; ++w) {
    const std::uint64_t vw = v[w];
    const std::uint64_t u = vw & m[w];
    const std::uint64_t s1 = vw + u;
    const std::uint64_t c1 = s1 < vw ? 1 : 0;
    const std::uint64_t s2 = s1 + carry;
    const std::uint64_t c2 = s2 < s1 ? 1 : 0;
    v[w] = s2 | (vw & ~m[w]);
    carry = c1 | c2;
  }
  return carry;
}

std::size_t count_zero_prefix(const Bits& v, std::size_t cols) {
  std::size_t ones = 0;
  const std::size_t full = cols / 64;
  for (std::size_t w = 0; w < full; ++w) ones += static_cast<std::size_t>(std::popcount(v[w]));
  const std::size_t rem = cols % 64;
  if (rem != 0) {
    const std::uint64_t mask = (std::uint64_t{1} << rem) - 1;
    ones += static_cast<std::size_t>(std::popcount(v[full] & mask));
  }
  return cols - ones;
}

void run_rows(std::size_t rows, std::size_t cols, const RowMaskFn& row_mask, Bits& v) {
  const std::size_t nw = words_for(cols);
  v.assign(nw, ~std::uint64_t{0});
  if (nw == 0) return;
  Bits m(nw);
  for (std::size_t i = 0; i < rows; ++i) {
    std::fill(m.begin(), m.end(), 0);
    row_mask(i, m);
    update_words(v.data(), m.data(), 0, nw - 1, 0);
  }
}

}  // namespace

IdColumns::IdColumns(std::span<const std::int32_t> column_ids, std::int32_t id_count)
    : cols_(column_ids.size()),
      dense_slot_(static_cast<std::size_t>(id_count), -1),
      positions_(static_cast<std::size_t>(id_count)) {
  std::vector<std::size_t> freq(static_cast<std::size_t>(id_count), 0);
  for (auto id : column_ids) ++freq[static_cast<std::size_t>(id)];
  const std::size_t threshold = std::max<std::size_t>(cols_ / 64, 64);
  const std::size_t nw = words_for(cols_);
  for (std::int32_t id = 0; id < id_count; ++id) {
    if (freq[static_cast<std::size_t>(id)] >= threshold) {
      dense_slot_[static_cast<std::size_t>(id)] = static_cast<std::int32_t>(dense_.size());
      dense_.emplace_back(nw, 0);
    } else {
      positions_[static_cast<std::size_t>(id)].reserve(freq[static_cast<std::size_t>(id)]);
    }
  }
  for (std::size_t j = 0; j < cols_; ++j) {
    const auto id = static_cast<std::size_t>(column_ids[j]);
    if (dense_slot_[id] >= 0) {
      dense_[static_cast<std::size_t>(dense_slot_[id])][j / 64] |= std::uint64_t{1} << (j % 64);
    } else {
      positions_[id].push_back(static_cast<std::uint32_t>(j));
    }
  }
}

void IdColumns::fill(std::int32_t id, std::span<std::uint64_t> mask) const {
  if (id < 0 || static_cast<std::size_t>(id) >= dense_slot_.size()) return;
  const auto slot = dense_slot_[static_cast<std::size_t>(id)];
  if (slot >= 0) {
    const auto& d = dense_[static_cast<std::size_t>(slot)];
    std::copy(d.begin(), d.end(), mask.begin());
    return;
  }
  for (auto j : positions_[static_cast<std::size_t>(id)]) mask[j / 64] |= std::uint64_t{1} << (j % 64);
}

void IdColumns::fill_range(std::int32_t id, std::size_t lo, std::size_t hi,
                           std::span<std::uint64_t> mask) const {
  if (lo >= hi || id < 0 || static_cast<std::size_t>(id) >= dense_slot_.size()) return;
  const auto slot = dense_slot_[static_cast<std::size_t>(id)];
  if (slot >= 0) {
    const auto& d = dense_[static_cast<std::size_t>(slot)];
    const std::size_t w0 = lo / 64;
    const std::size_t w1 = (hi - 1) / 64;
    for (std::size_t w = w0; w <= w1; ++w) {
      std::uint64_t bits = d[w];
      if (w == w0) bits &= ~std::uint64_t{0} << (lo % 64);
      if (w == w1 && hi % 64 != 0) bits &= (std::uint64_t{1} << (hi % 64)) - 1;
      mask[w] |= bits;
    }
    return;
  }
  const auto& pos = positions_[static_cast<std::size_t>(id)];
  auto it = std::lower_bound(pos.begin(), pos.end(), static_cast<std::uint32_t>(lo));
  for (; it != pos.end() && *it < hi; ++it) mask[*it / 64] |= std::uint64_t{1} << (*it % 64);
}

std::size_t lcs_length(std::size_t rows, std::size_t cols, const RowMaskFn& row_mask) {
  if (rows == 0 || cols == 0) return 0;
  Bits v;
  run_rows(rows, cols, row_mask, v);
  return count_zero_prefix(v, cols);
}

std::vector<std::uint32_t> lcs_last_row(std::size_t rows, std::size_t cols, const RowMaskFn& row_mask) {
  std::vector<std::uint32_t> out(cols + 1, 0);
  if (rows == 0 || cols == 0) return out;
  Bits v;
  run_rows(rows, cols, row_mask, v);
  std::uint32_t acc = 0;
  for (std::size_t j = 0; j < cols; ++j) {
    if (((v[j / 64] >> (j % 64)) & 1U) == 0) ++acc;
    out[j + 1] = acc;
  }
  return out;
}

std::size_t lcs_length_ids(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
                           std::int32_t id_count) {
  if (a.empty() || b.empty()) return 0;
  const IdColumns index(b, id_count);
  return lcs_length(a.size(), b.size(), [&](std::size_t i, std::span<std::uint64_t> m) {
    index.fill(a[i], m);
  });
}

std::size_t lcs_length_ids_banded(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
                                  std::int32_t id_count, std::size_t band) {
  const std::size_t n = std::min(a.size(), b.size());
  if (n == 0) return 0;
  if (band + 1 >= n) return lcs_length_ids(a.first(n), b.first(n), id_count);
  const IdColumns index(b.first(n), id_count);
  const std::size_t nw = words_for(n);
  Bits v(nw, ~std::uint64_t{0});
  Bits m(nw, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i > band ? i - band : 0;
    const std::size_t hi = std::min(n, i + band + 1);
    const std::size_t w0 = lo / 64;
    const std::size_t w1 = (hi - 1) / 64;
    std::fill(m.begin() + static_cast<std::ptrdiff_t>(w0), m.begin() + static_cast<std::ptrdiff_t>(w1) + 1, 0);
    index.fill_range(a[i], lo, hi, m);
    std::uint64_t carry = update_words(v.data(), m.data(), w0, w1, 0);
    // Outside the band M = 0, so a word changes only through the incoming carry.
    // Words right of the band stay all ones, and a carry leaves those unchanged.
    for (std::size_t w = w1 + 1; carry != 0 && w < nw; ++w) {
      const std::uint64_t vw = v[w];
      if (vw == ~std::uint64_t{0}) break;
      const std::uint64_t s = vw + 1;
      carry = s == 0 ? 1 : 0;
      v[w] = s | vw;
    }
  }
  return count_zero_prefix(v, n);
}

std::size_t lcs_length_ids_certified(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
                                     std::int32_t id_count, std::size_t initial_band, std::size_t max_work,
                                     bool* exact, std::size_t* band_out) {
  const std::size_t n = std::min(a.size(), b.size());
  std::size_t band = std::max<std::size_t>(initial_band, 1);
  if (exact != nullptr) *exact = true;
  std::size_t fit = 0;
  while (true) {
    if (band + 1 >= n && n * words_for(n) <= max_work) return lcs_length_ids(a.first(n), b.first(n), id_count);
    const std::size_t w = n * (2 * band / 64 + 2);
    if (fit > 0 && w > max_work) {
      // Band-restricted optimum: a valid common subsequence, possibly short of the maximum.
      if (exact != nullptr) *exact = false;
      if (band_out != nullptr) *band_out = band / 2;
      return fit;
    }
    fit = lcs_length_ids_banded(a, b, id_count, band);
    if (band_out != nullptr) *band_out = band;
    // A common subsequence through a cell with |i − j| > band has at most n − band − 1 pairs.
    if (fit + band >= n) return fit;
    band *= 2;
  }
}

namespace {

using Related = std::function<bool(std::size_t, std::size_t)>;
using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

void small_dp(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1, const Related& rel,
              Pairs& out) {
  const std::size_t r = i1 - i0;
  const std::size_t c = j1 - j0;
  std::vector<std::uint32_t> t((r + 1) * (c + 1), 0);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint32_t& { return t[i * (c + 1) + j]; };
  for (std::size_t i = 1; i <= r; ++i) {
    for (std::size_t j = 1; j <= c; ++j) {
      std::uint32_t best = std::max(at(i - 1, j), at(i, j - 1));
      if (rel(i0 + i - 1, j0 + j - 1)) best = std::max(best, at(i - 1, j - 1) + 1);
      at(i, j) = best;
    }
  }
  Pairs rev;
  std::size_t i = r;
  std::size_t j = c;
  while (i > 0 && j > 0) {
    if (at(i, j) == at(i - 1, j)) {
      --i;
    } else if (at(i, j) == at(i, j - 1)) {
      --j;
    } else {
      rev.emplace_back(i0 + i - 1, j0 + j - 1);
      --i;
      --j;
    }
  }
  out.insert(out.end(), rev.rbegin(), rev.rend());
}

void hirschberg(std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1, const Related& rel,
                Pairs& out) {
  const std::size_t r = i1 - i0;
  const std::size_t c = j1 - j0;
  if (r == 0 || c == 0) return;
  if (r * c <= (std::size_t{1} << 16) || r == 1) {
    small_dp(i0, i1, j0, j1, rel, out);
    return;
  }
  const std::size_t mid = i0 + r / 2;
  const auto fwd = lcs_last_row(mid - i0, c, [&](std::size_t i, std::span<std::uint64_t> m) {
    for (std::size_t k = 0; k < c; ++k) {
      if (rel(i0 + i, j0 + k)) m[k / 64] |= std::uint64_t{1} << (k % 64);
    }
  });
  const auto bwd = lcs_last_row(i1 - mid, c, [&](std::size_t i, std::span<std::uint64_t> m) {
    const std::size_t row = i1 - 1 - i;
    for (std::size_t k = 0; k < c; ++k) {
      if (rel(row, j1 - 1 - k)) m[k / 64] |= std::uint64_t{1} << (k % 64);
    }
  });
  std::size_t split = 0;
  std::uint32_t best = 0;
  for (std::size_t s = 0; s <= c; ++s) {
    const std::uint32_t v = fwd[s] + bwd[c - s];
    if (v > best || s == 0) {
      best = v;
      split = s;
    }
  }
  hirschberg(i0, mid, j0, j0 + split, rel, out);
  hirschberg(mid, i1, j0 + split, j1, rel, out);
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> lcs_pairs(std::size_t rows, std::size_t cols,
                                                           const Related& related) {
  Pairs out;
  hirschberg(0, rows, 0, cols, related, out);
  return out;
}

std::vector<std::int32_t> dense_ids(std::span<const double> symbols, std::int32_t& id_count) {
  std::map<double, std::int32_t> index;
  for (double s : symbols) index.emplace(s, 0);
  std::int32_t next = 0;
  for (auto& [_, id] : index) id = next++;
  std::vector<std::int32_t> out;
  out.reserve(symbols.size());
  for (double s : symbols) out.push_back(index.at(s));
  id_count = next;
  return out;
}

}  // namespace fkdyn::detail

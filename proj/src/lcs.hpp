#pragma once

// Bit-parallel longest-common-subsequence kernels over an arbitrary match
// relation. Row i of the relation is supplied as a bitmask over columns.
//
// The row update V' = (V + (V & M)) | (V & ~M) tracks the LCS row differences
// with a zero bit at every column where the row value increases; it is valid
// for any 0/1 relation, not only for symbol equality.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace fkdyn::detail {

using Bits = std::vector<std::uint64_t>;

inline std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

/// Fills mask (words_for(cols) words, zeroed by the caller) for row i.
using RowMaskFn = std::function<void(std::size_t row, std::span<std::uint64_t> mask)>;

/// Index of equal-id columns of an integer sequence, with dense masks for
/// frequent ids and position lists for rare ones.
class IdColumns {
 public:
  IdColumns(std::span<const std::int32_t> column_ids, std::int32_t id_count);

  void fill(std::int32_t id, std::span<std::uint64_t> mask) const;
  /// Sets bits for `id` restricted to columns [lo, hi).
  void fill_range(std::int32_t id, std::size_t lo, std::size_t hi, std::span<std::uint64_t> mask) const;
  [[nodiscard]] std::size_t columns() const noexcept { return cols_; }

 private:
  std::size_t cols_;
  std::vector<std::int32_t> dense_slot_;  // id -> slot in dense_, or -1
  std::vector<Bits> dense_;
  std::vector<std::vector<std::uint32_t>> positions_;  // id -> sorted columns
};

/// LCS length of a rows×cols relation.
std::size_t lcs_length(std::size_t rows, std::size_t cols, const RowMaskFn& row_mask);

/// Prefix LCS values L[j] = LCS(rows, first j columns), j = 0..cols.
std::vector<std::uint32_t> lcs_last_row(std::size_t rows, std::size_t cols, const RowMaskFn& row_mask);

/// LCS length of integer sequences under id equality.
std::size_t lcs_length_ids(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
                           std::int32_t id_count);

/// Square n×n id-equality LCS restricted to |i − j| ≤ band. Returns the
/// restricted optimum; it equals the unrestricted one whenever it is ≥ n − band.
std::size_t lcs_length_ids_banded(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
                                  std::int32_t id_count, std::size_t band);

/// Square LCS by widening the band until the certificate holds. When the next
/// band would exceed max_work word updates, returns the last banded value (a
/// lower bound) and clears *exact. *band_out receives the band of the returned value.
std::size_t lcs_length_ids_certified(std::span<const std::int32_t> a, std::span<const std::int32_t> b,
                                     std::int32_t id_count, std::size_t initial_band = 256,
                                     std::size_t max_work = SIZE_MAX, bool* exact = nullptr,
                                     std::size_t* band_out = nullptr);

/// Maximal order-preserving pairing (i, j) under `related`, Hirschberg recursion
/// with bit-parallel passes: O(rows·cols/64) time, O(rows + cols) memory.
std::vector<std::pair<std::size_t, std::size_t>> lcs_pairs(
    std::size_t rows, std::size_t cols, const std::function<bool(std::size_t, std::size_t)>& related);

/// Maps symbol values to dense ids 0..k−1 in sorted order.
std::vector<std::int32_t> dense_ids(std::span<const double> symbols, std::int32_t& id_count);

}  // namespace fkdyn::detail

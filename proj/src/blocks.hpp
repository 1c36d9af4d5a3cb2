#pragma once

// Exact ids for the leading K-blocks of symbolic points. Under the standard
// shift metric two points are δ-close exactly when their K-blocks agree, with
// K = shift_agreement_length(δ, depth).

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "fkdyn/seqcore.hpp"

namespace fkdyn::detail {

class BlockIds {
 public:
  explicit BlockIds(std::size_t block_length) : k_(block_length) {}

  std::int32_t id_of(const SymbolicPoint& p);
  [[nodiscard]] std::int32_t count() const noexcept { return static_cast<std::int32_t>(reps_.size()); }

 private:
  std::size_t k_;
  std::unordered_map<std::uint64_t, std::vector<std::int32_t>> buckets_;
  std::vector<SymbolicPoint> reps_;
};

/// K-block ids of the rotations of a periodic orbit's base block.
std::vector<std::int32_t> rotation_ids(const PeriodicOrbit& orbit, BlockIds& ids);

/// K-block ids of the first n points of a symbolic sequence.
std::vector<std::int32_t> point_ids(const PointSeq& seq, std::size_t n, BlockIds& ids);

}  // namespace fkdyn::detail

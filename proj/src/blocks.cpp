#include "blocks.hpp"

#include <bit>

namespace fkdyn::detail {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  return h * 0xff51afd7ed558ccdULL;
}

}  // namespace

std::int32_t BlockIds::id_of(const SymbolicPoint& p) {
  std::uint64_t h = 0x84222325cbf29ce4ULL;
  for (std::size_t j = 0; j < k_; ++j) h = mix(h, std::bit_cast<std::uint64_t>(p.at(j) + 0.0));
  auto& bucket = buckets_[h];
  for (std::int32_t id : bucket) {
    const auto& rep = reps_[static_cast<std::size_t>(id)];
    bool equal = true;
    for (std::size_t j = 0; j < k_ && equal; ++j) equal = rep.at(j) == p.at(j);
    if (equal) return id;
  }
  const auto id = static_cast<std::int32_t>(reps_.size());
  reps_.push_back(p);
  bucket.push_back(id);
  return id;
}

std::vector<std::int32_t> rotation_ids(const PeriodicOrbit& orbit, BlockIds& ids) {
  std::vector<std::int32_t> out;
  out.reserve(orbit.period());
  for (const auto& p : orbit.base_block()) out.push_back(ids.id_of(std::get<SymbolicPoint>(p)));
  return out;
}

std::vector<std::int32_t> point_ids(const PointSeq& seq, std::size_t n, BlockIds& ids) {
  std::vector<std::int32_t> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(ids.id_of(std::get<SymbolicPoint>(seq[i])));
  return out;
}

}  // namespace fkdyn::detail

#pragma once

// Dense ids for points up to exact equality: symbolic points compare as
// sequences, reals by value.

#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "fkdyn/seqcore.hpp"

namespace fkdyn::detail {

class PointKeyer {
 public:
  std::int32_t id_of(const Point& p);
  [[nodiscard]] std::int32_t count() const noexcept { return next_; }

 private:
  struct SeqInfo {
    std::size_t preperiod = 0;         // points shifted at least this far are periodic
    std::int32_t rotation_class = -1;
    std::size_t root = 0;              // primitive period of the cycle
    std::size_t offset = 0;            // start of the least rotation of the root
  };

  const SeqInfo& info_for(const SymbolSeq* seq);
  std::int32_t fallback_id(const SymbolicPoint& p);

  std::int32_t next_ = 0;
  std::map<double, std::int32_t> reals_;
  std::unordered_map<const SymbolSeq*, SeqInfo> seqs_;
  std::map<Word, std::int32_t> classes_;
  std::map<std::pair<std::int32_t, std::size_t>, std::int32_t> periodic_;
  std::unordered_map<std::uint64_t, std::vector<std::pair<SymbolicPoint, std::int32_t>>> others_;
};

/// Smallest p dividing |w| with w = (w[0..p))^{|w|/p}.
std::size_t primitive_period(const Word& w);

/// Start index of the lexicographically least rotation.
std::size_t least_rotation(const Word& w);

}  // namespace fkdyn::detail

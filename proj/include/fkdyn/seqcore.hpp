#pragma once

// Metric systems, points, orbit segments, periodic orbits and quasi-orbits.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fkdyn/error.hpp"

namespace fkdyn {

/// Symbols are stored as doubles so that the countable alphabet {0} ∪ {1/k}
/// and finite alphabets {0,1,...} share one representation.
using Symbol = double;
using Word = std::vector<Symbol>;

/// An eventually periodic one-sided sequence prefix · cycle^∞.
class SymbolSeq {
 public:
  SymbolSeq(Word prefix, Word cycle);
  static SymbolSeq periodic(Word cycle) { return SymbolSeq({}, std::move(cycle)); }

  [[nodiscard]] Symbol at(std::size_t j) const noexcept {
    if (j < prefix_.size()) return prefix_[j];
    return cycle_[(j - prefix_.size()) % cycle_.size()];
  }
  [[nodiscard]] std::size_t prefix_size() const noexcept { return prefix_.size(); }
  [[nodiscard]] std::size_t cycle_size() const noexcept { return cycle_.size(); }
  [[nodiscard]] const Word& prefix() const noexcept { return prefix_; }
  [[nodiscard]] const Word& cycle() const noexcept { return cycle_; }

 private:
  Word prefix_;
  Word cycle_;
};

/// σ^shift applied to a shared eventually periodic sequence.
struct SymbolicPoint {
  std::shared_ptr<const SymbolSeq> seq;
  std::size_t shift = 0;

  [[nodiscard]] Symbol at(std::size_t j) const noexcept { return seq->at(shift + j); }
};

using Point = std::variant<double, SymbolicPoint>;

SymbolicPoint make_symbolic_point(Word prefix, Word cycle);
SymbolicPoint make_periodic_point(Word cycle);

enum class PointKind { Symbolic, Real, Circle };

enum class MetricFamily {
  ShiftStandard,      // 2^-min{j : ω_j ≠ ω'_j}, truncated at depth D
  WeightedL1Product,  // Σ_j 2^-j |ω_j − ω'_j| over j < D
  AbsDiff,            // |a − b| on the real line
  CircleArc,          // min(|a − b|, 1 − |a − b|) on ℝ/ℤ
  Custom,
};

/// (X, ρ, T) together with the information the fast paths need.
class MetricSystem {
 public:
  using MetricFn = std::function<double(const Point&, const Point&)>;
  using MapFn = std::function<Point(const Point&)>;

  static MetricSystem full_shift(std::size_t depth = 64);
  static MetricSystem countable_product(std::size_t depth = 64);
  static MetricSystem circle_rotation(double alpha);
  static MetricSystem real_line(MapFn map, std::string label);
  static MetricSystem custom(PointKind kind, MetricFn metric, MapFn map, std::string label,
                             std::optional<double> diameter = std::nullopt);

  [[nodiscard]] double distance(const Point& a, const Point& b) const { return metric_(a, b); }
  [[nodiscard]] Point map(const Point& p) const { return map_(p); }

  /// Exact equality for symbolic points, 1e-12 closeness otherwise.
  [[nodiscard]] bool same_point(const Point& a, const Point& b) const;

  [[nodiscard]] PointKind kind() const noexcept { return kind_; }
  [[nodiscard]] MetricFamily family() const noexcept { return family_; }
  [[nodiscard]] std::size_t depth() const noexcept { return depth_; }
  [[nodiscard]] const std::string& description() const noexcept { return label_; }
  [[nodiscard]] std::optional<double> diameter() const noexcept { return diameter_; }
  [[nodiscard]] std::optional<double> rotation() const noexcept { return rotation_; }

 private:
  MetricSystem() = default;

  PointKind kind_ = PointKind::Real;
  MetricFamily family_ = MetricFamily::Custom;
  std::size_t depth_ = 64;
  std::string label_;
  std::optional<double> diameter_;
  std::optional<double> rotation_;
  MetricFn metric_;
  MapFn map_;
};

/// Result of the standard shift metric with the truncation flag.
struct ShiftDistance {
  double value = 0.0;
  bool truncated = false;  // sequences agree on the first `depth` symbols
};

ShiftDistance shift_metric(const SymbolicPoint& a, const SymbolicPoint& b, std::size_t depth = 64);

/// Exact equality of eventually periodic sequences (Fine–Wilf bound).
bool same_sequence(const SymbolicPoint& a, const SymbolicPoint& b);

/// Number of leading symbols that must agree for the standard shift metric to be < delta.
std::size_t shift_agreement_length(double delta, std::size_t depth);

class PointSeq {
 public:
  PointSeq() = default;
  explicit PointSeq(std::vector<Point> points);
  static PointSeq reals(std::span<const double> values);

  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
  [[nodiscard]] bool empty() const noexcept { return points_.empty(); }
  [[nodiscard]] const Point& operator[](std::size_t i) const { return points_[i]; }
  [[nodiscard]] const std::vector<Point>& points() const noexcept { return points_; }
  [[nodiscard]] auto begin() const noexcept { return points_.begin(); }
  [[nodiscard]] auto end() const noexcept { return points_.end(); }

  [[nodiscard]] PointSeq prefix(std::size_t n) const;
  [[nodiscard]] PointSeq concat(const PointSeq& other) const;

 private:
  std::vector<Point> points_;
};

class PeriodicOrbit {
 public:
  PeriodicOrbit(MetricSystem system, PointSeq base_block);

  /// Symbolic orbit of w^∞ in a shift system.
  static PeriodicOrbit from_word(const MetricSystem& system, const Word& word);

  [[nodiscard]] std::size_t period() const noexcept { return block_.size(); }
  [[nodiscard]] const PointSeq& base_block() const noexcept { return block_; }
  [[nodiscard]] const MetricSystem& system() const noexcept { return system_; }

  /// The symbols ω_0 … ω_{N−1} of the first point; symbolic orbits only.
  [[nodiscard]] Word word() const;

  /// Trajectory of base_block[0] of the given length.
  [[nodiscard]] PointSeq trajectory(std::size_t length, std::size_t start = 0) const;

  /// Orbit with base block rotated to start at base_block[k].
  [[nodiscard]] PeriodicOrbit rotated(std::size_t k) const;

 private:
  MetricSystem system_;
  PointSeq block_;
};

class QuasiOrbit {
 public:
  QuasiOrbit(PointSeq points, std::vector<std::size_t> switch_indices);

  [[nodiscard]] const PointSeq& points() const noexcept { return points_; }
  [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }

  /// Sorted indices s with points[s] ≠ T(points[s−1]) (segment starts).
  [[nodiscard]] const std::vector<std::size_t>& switch_indices() const noexcept {
    return switches_;
  }

  /// |{s ∈ S : s < m}| / m.
  [[nodiscard]] double switch_density(std::size_t prefix_length) const;

  /// Checks the defining invariant against the system map.
  [[nodiscard]] bool is_consistent(const MetricSystem& system) const;

 private:
  PointSeq points_;
  std::vector<std::size_t> switches_;
};

PointSeq orbit_segment(const MetricSystem& system, const Point& start, std::size_t n);

/// The shifts σ^j(stream), j < |stream|, of the stream continued by its last symbol.
PointSeq stream_points(const Word& stream);

/// Rotation coding ω_j = 1 if frac(x0 + jα) ∈ [1 − α, 1), else 0 (Sturmian for irrational α).
Word rotation_coding(double alpha, double x0, std::size_t length);

PeriodicOrbit periodic_orbit(const MetricSystem& system, const PointSeq& seed_block);

QuasiOrbit assemble_quasi_orbit(std::span<const PeriodicOrbit> segments,
                                std::span<const std::size_t> lengths);

}  // namespace fkdyn

#pragma once

// Birkhoff averages, Oxtoby bad-segment densities and the deviation of
// k-block averages along a match.

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fkdyn/matchkit.hpp"
#include "fkdyn/seqcore.hpp"

namespace fkdyn {

enum class TestKind { Coordinate, CylinderSmoothed, SymbolWeight };

/// A continuous test function with its sup norm and modulus of continuity.
struct TestFunction {
  TestKind kind = TestKind::Coordinate;
  std::string label;
  double sup_norm = 0.0;
  std::function<double(const Point&)> eval;
  /// sup |φ(y) − φ(y')| over ρ(y, y') < δ in the given system.
  std::function<double(const MetricSystem&, double)> modulus;

  double operator()(const Point& p) const { return eval(p); }
};

/// ω ↦ ω_0 on symbolic points, x ↦ x on the real line; `bound` is sup |φ|.
TestFunction coordinate_function(double bound);

/// ω ↦ weight(ω_0).
TestFunction symbol_weight_function(std::map<Symbol, double> weights);

/// ω ↦ (length of the common prefix of ω and c) / |c|, a Lipschitz stand-in
/// for the indicator of the cylinder [c].
TestFunction cylinder_function(Word c);

/// (2^-j, modulus at 2^-j) for j = 0..j_max.
std::vector<std::pair<double, double>> modulus_table(const TestFunction& phi, const MetricSystem& system,
                                                     std::size_t j_max);

/// (1/k) Σ_{j=offset}^{offset+k−1} φ(points[j]).
double birkhoff_average(const TestFunction& phi, const PointSeq& seq, std::size_t k, std::size_t offset = 0);

struct BadSegmentPoint {
  std::size_t k = 0;
  double density = 0.0;
  std::size_t bad = 0;
  std::size_t windows = 0;
};

struct BadSegmentCurve {
  double phi_star = 0.0;  // full-prefix average
  double alpha = 0.0;
  std::vector<BadSegmentPoint> points;
};

/// Fraction of ℓ ∈ [0, length − k] with |A_k(φ, σ^ℓ seq) − φ*| > α, per k.
BadSegmentCurve bad_segment_density(const PointSeq& seq, const TestFunction& phi, double alpha,
                                    const std::vector<std::size_t>& k_list);

struct MatchedDeviation {
  Match match;
  double deviation = 0.0;   // max over ℓ ∈ A of |A_k(φ, T^ℓ x) − A_k(φ, σ^{π(ℓ)} z)|
  double epsilon = 0.0;     // modulus of φ at δ
  double bound = 0.0;       // ε + 4√δ‖φ‖∞
  double size_bound = 0.0;  // n(1 − 2√δ − 2δ) − k
  std::size_t a_size = 0;
  std::size_t a_switch = 0;  // A_Z
  std::size_t a_range = 0;   // A_R
  std::size_t a_domain = 0;  // A_D
  bool within_bound = false;
  bool size_ok = false;
};

/// Maximal (n,δ)-match of x with z and the windows on which k-averages along
/// it provably stay close.
MatchedDeviation matched_average_deviation(const MetricSystem& system, const PointSeq& x, const QuasiOrbit& z,
                                           const TestFunction& phi, std::size_t k, double delta, std::size_t n);

}  // namespace fkdyn

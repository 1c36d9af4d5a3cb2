#pragma once

// (n,δ)-matches, gaps, f̄_δ for periodic pairs, the Feldman–Katok distance,
// the Besicovitch pseudometric and word metrics.

#include <cstddef>
#include <utility>
#include <vector>

#include "fkdyn/seqcore.hpp"

namespace fkdyn {

/// Order-preserving partial bijection pairing δ-close points of two segments.
struct Match {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t n = 0;
  double delta = 0.0;

  [[nodiscard]] std::size_t fit() const noexcept { return pairs.size(); }
};

enum class MatchMode { Dp, Brute };

enum class Certification { Exact, UpperBound };

struct GapValue {
  double value = 1.0;
  std::size_t n = 0;
  double delta = 0.0;
  Certification certified = Certification::Exact;
  std::size_t fit = 0;
  /// False when a doubling sweep hit its limit before stabilizing.
  bool converged = true;
  /// False when some fit came from a band-restricted search (a lower bound on
  /// the fit, so value is still an upper bound on f̄_δ).
  bool exact_fits = true;
  /// f̄_{nN,δ} along the doublings n = 1, 2, 4, … (periodic pairs only).
  std::vector<double> trace;
};

/// Largest brute-force horizon.
inline constexpr std::size_t kBruteMaxHorizon = 12;

Match max_match(const MetricSystem& system, const PointSeq& x, const PointSeq& z, std::size_t n,
                double delta, MatchMode mode = MatchMode::Dp);

GapValue gap(const MetricSystem& system, const PointSeq& x, const PointSeq& z, std::size_t n,
             double delta);

/// Checks order preservation, index ranges, strict δ-closeness and the fit.
bool is_valid_match(const MetricSystem& system, const PointSeq& x, const PointSeq& z, const Match& m);

/// Maximal fit of an (H,δ)-match between the trajectories of two periodic orbits.
std::size_t periodic_fit(const PeriodicOrbit& x, const PeriodicOrbit& z, std::size_t horizon,
                         double delta);

GapValue fbar_delta_periodic(const PeriodicOrbit& x, const PeriodicOrbit& z, double delta, double tol,
                             std::size_t n_max = 64);

struct FkResult {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  bool converged = true;
  std::size_t gap_evaluations = 0;
};

/// inf{δ : f̄_δ(x, z) < δ}. Under the standard shift metric f̄_δ is a step
/// function of δ and the infimum is located exactly at its breakpoints;
/// otherwise by bisection to tol. n_max = 0 doubles out to horizons near 2^17.
FkResult fk_distance(const PeriodicOrbit& x, const PeriodicOrbit& z, double tol, std::size_t n_max = 0);

/// inf{δ : f̄_{n,δ}(x, z) < δ} over the first n points, bracketed to tol.
FkResult fk_finite(const MetricSystem& system, const PointSeq& x, const PointSeq& z, std::size_t n,
                   double tol);

struct WordDistances {
  double hamming = 0.0;
  double edit = 0.0;
};

WordDistances word_metrics(const Word& u, const Word& w);

/// Length of the longest common subsequence of two words.
std::size_t word_lcs(const Word& u, const Word& w);

struct BesicovitchValue {
  double db = 0.0;
  double db_prime = 0.0;
};

BesicovitchValue besicovitch(const MetricSystem& system, const PointSeq& x, const PointSeq& z,
                             std::size_t n);

double fhat_estimate(const Word& u, const Word& w);

/// π2 ∘ π1 restricted to π1⁻¹(D(π2) ∩ R(π1)); an (n, δ1 + δ2)-match.
Match compose_matches(const Match& first, const Match& second);

}  // namespace fkdyn

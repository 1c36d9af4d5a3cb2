#pragma once

// Good approximations between periodic orbits, the projection-to-match
// construction, synthesis of GIKN towers over full shifts and their checks.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fkdyn/matchkit.hpp"
#include "fkdyn/seqcore.hpp"

namespace fkdyn {

/// A (γ,κ)-projection ψ: Δ → Λ from orbit Γ onto orbit Λ, by base-block index.
struct GoodApproximation {
  double gamma = 0.0;
  double kappa = 0.0;
  std::size_t gamma_period = 0;   // |Γ|
  std::size_t lambda_period = 0;  // |Λ|
  std::vector<std::size_t> delta_set;  // sorted indices into Γ
  std::vector<std::size_t> psi;        // Λ index for each delta_set entry
  std::size_t fiber_size = 0;
  bool surjective = false;

  /// |Δ|/|Γ| after trimming fibers.
  [[nodiscard]] double achieved_kappa() const noexcept {
    return gamma_period == 0 ? 0.0 : static_cast<double>(delta_set.size()) / static_cast<double>(gamma_period);
  }
};

/// Greedy projection at shadowing constant γ: every y whose best Λ-point shadows
/// it for |Λ| steps within γ, with fibers trimmed to the smallest fiber.
GoodApproximation best_projection(const PeriodicOrbit& gamma_orbit, const PeriodicOrbit& lambda_orbit, double gamma);

/// best_projection, accepted when ψ is onto and |Δ|/|Γ| ≥ κ.
/// Throws NotGoodApproximation with the best achievable κ otherwise.
GoodApproximation verify_good_approximation(const PeriodicOrbit& gamma_orbit, const PeriodicOrbit& lambda_orbit,
                                            double gamma, double kappa);

/// The (p+q, γ)-match between the trajectory of Γ from delta_set[0] and the
/// trajectory of Λ from psi[0], built by extending runs of length q and
/// re-anchoring at each unmatched point of Δ.
Match projection_to_match(const GoodApproximation& ga, std::size_t p, std::size_t q);

/// Starting indices (into Γ and Λ) of the trajectories projection_to_match pairs.
std::pair<std::size_t, std::size_t> projection_anchor(const GoodApproximation& ga);

using CocycleWeights = std::map<Symbol, double>;

/// Mean of the weights over the orbit's base block.
double cocycle_exponent(const CocycleWeights& weights, const PeriodicOrbit& orbit);

struct GiknConfig {
  std::vector<Symbol> alphabet;
  Word seed;
  std::size_t levels = 1;
  std::vector<double> gamma_budget;  // γ_n for the step Γ_n → Γ_{n+1}, n = 0, 1, …
  std::vector<double> kappa_floor;   // κ_n for the same step
  CocycleWeights weights;
  double alpha = 0.5;
  std::size_t max_tail_copies = 64;
  std::size_t max_repeats = 4096;
};

struct GiknLevel {
  Word word;
  PeriodicOrbit orbit;
  double chi = 0.0;
  double weight_sum = 0.0;
  /// Step from the previous level: budgets, verified projection and word shape.
  double gamma = 0.0;
  double kappa = 0.0;
  std::optional<GoodApproximation> approx;
  std::size_t repeats = 0;
  std::size_t tail_copies = 0;
  std::size_t tail_changes = 0;
};

struct GiknSequence {
  std::vector<GiknLevel> levels;
  CocycleWeights weights;
  double alpha = 0.5;
};

/// Builds w_{n+1} = w_n^m · t with t a modified copy of w_n^c.
GiknSequence synthesize_gikn(const GiknConfig& config);

/// Rebuilds a tower from stored words and budgets, re-verifying every step.
GiknSequence tower_from_words(const std::vector<Word>& words, const std::vector<double>& gammas,
                              const std::vector<double>& kappas, const CocycleWeights& weights, double alpha);

struct CauchyEntry {
  std::size_t n = 0;
  std::size_t m = 0;
  double fk = 0.0;
  double bound = 0.0;
  bool converged = true;
  bool pass = false;
};

struct CauchyReport {
  std::vector<CauchyEntry> consecutive;  // fk(Γ_n, Γ_{n+1}) < γ_n + (1 − κ_n) + tol
  std::vector<CauchyEntry> pairs;        // fk(Γ_n, Γ_m) ≤ Σ_{j=n}^{m−1} (γ_j + 1 − κ_j) + tol
  bool all_pass = true;
};

CauchyReport verify_cauchy(const GiknSequence& gs, double tol);

struct LimitQuasiOrbit {
  QuasiOrbit orbit;
  std::vector<std::size_t> segment_lengths;
  /// (prefix length 2^k, switch density) up to the total length.
  std::vector<std::pair<std::size_t, double>> density_curve;
};

/// Segments j·|Γ_j| (j = 1, 2, … over levels), the last stretched to total_length.
LimitQuasiOrbit limit_quasi_orbit(const GiknSequence& gs, std::size_t total_length);

/// ⋂_k ⋃_{n≥k} (depth-blocks of Γ_n) over the available levels.
std::set<Word> support_blocks(const GiknSequence& gs, std::size_t depth);

struct ExponentDecay {
  std::size_t level = 0;
  double chi = 0.0;
  double ratio = 0.0;  // |χ_{n+1}| / |χ_n|
  bool pass = false;
};

/// |χ_{n+1}| < α|χ_n| per step, compared exactly on weight sums.
std::vector<ExponentDecay> exponent_decay(const GiknSequence& gs);

struct SeparationCheck {
  std::size_t level = 0;
  double gamma = 0.0;
  double min_distance = 0.0;  // d_n, minimal distance between distinct points of Γ_n
  double threshold = 0.0;     // min_{i≤n} d_i / (3·2^n)
  bool pass = false;
};

/// γ_n < min_{1≤i≤n} d_i / (3·2^n) per level, levels counted from 1.
std::vector<SeparationCheck> separation_condition(const GiknSequence& gs);

/// Minimal distance between distinct points of a periodic orbit.
double minimal_orbit_distance(const PeriodicOrbit& orbit);

}  // namespace fkdyn

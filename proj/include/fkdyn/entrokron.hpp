#pragma once

// Partitions and coding, block entropy, Katok (n,ε)-triviality and the
// loosely Kronecker diagnostic, plus the countable-alphabet entropy example.
// Entropies are in nats.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fkdyn/measurekit.hpp"
#include "fkdyn/seqcore.hpp"

namespace fkdyn {

struct Partition {
  std::size_t k = 1;
  std::function<std::size_t(const Point&)> classify;
  std::optional<double> boundary_margin;  // hull radius c of a thickened partition
  std::string label;

  std::size_t operator()(const Point& p) const { return classify(p); }
};

/// Atom = index of the leading symbol in the sorted alphabet.
Partition identity_partition(std::vector<Symbol> alphabet);

/// Single-atom partition.
Partition trivial_partition();

/// Real or circle points: interval i is [cuts[i−1], cuts[i]) with cuts[−1] = −∞;
/// labels[i] is its atom. labels has cuts.size() + 1 entries.
Partition interval_partition(std::vector<double> cuts, std::vector<std::size_t> labels);

/// Pointwise labels P(x_j) as symbols.
Word code_sequence(const Partition& partition, const PointSeq& seq);

/// Fraction of sample points labelled differently by P and Q.
double partition_distance(const Partition& p, const Partition& q, const PointSeq& sample);

struct Thickening {
  Partition partition;      // k + 1 atoms; atom k collects points outside every hull
  double cut = 0.0;         // hull radius c
  double core_radius = 0.0; // core points lie farther than this from other atoms
  double separation = 0.0;  // least distance between cores of distinct atoms
  double distance = 0.0;    // empirical d_1(P, R)
  std::size_t cuts_tried = 0;
};

/// Hull partition R^c around sample cores of the atoms of P, with c taken from
/// a grid so that no sample point lies within `margin` of a hull boundary and
/// the empirical d_1(P, R) < delta. Throws NoGoodCut otherwise.
Thickening faithful_thicken(const Partition& p, const MetricSystem& system, const PointSeq& sample, double delta,
                            double margin = 1e-3, std::size_t grid = 64);

struct EntropyEstimate {
  std::size_t m = 0;
  double block_entropy = 0.0;  // H_m
  double rate = 0.0;           // H_m / m
  double increment = 0.0;      // H_m − H_{m−1}
  bool undersampled = false;   // stream shorter than 50·|A|^m
};

std::vector<EntropyEstimate> block_entropy_rate(const Word& stream, std::size_t m_max);
std::vector<EntropyEstimate> block_entropy_rate(const ProductSpec& spec, std::size_t m_max);
/// One estimate per distribution, m taken from each.
std::vector<EntropyEstimate> block_entropy_rate(const std::vector<BlockDistribution>& dists);

/// −Σ p log p.
double shannon_entropy(const std::vector<double>& probs);

/// f̄_n(u, w) = 1 − LCS(u, w)/n for words of equal length n.
double fbar_words(const Word& u, const Word& w);

struct KatokResult {
  bool trivial = false;
  Word witness;
  double ball_mass = 0.0;   // Σ{bd(u) : f̄_n(ω, u) < ε}
  double beta = 0.0;        // Σ bd(u)·f̄_n(ω, u)
  bool sqrt_beta = false;   // β < ε², so (n, √β)-trivial
  double sqrt_beta_mass = 0.0;  // ball mass at radius √β
  bool consistent = true;   // β < ε² ⇒ ball_mass ≥ 1 − ε
  bool exhaustive = false;  // every word of the alphabet was a candidate
  std::size_t boundary_blocks = 0;  // support blocks with f̄_n(ω, u) = ε exactly
  std::size_t candidates = 0;
};

/// Witness search over the support ranked by probability plus the positional
/// modal block; exhaustive over all words for binary alphabets with n ≤ 12.
KatokResult katok_trivial(const BlockDistribution& bd, double epsilon, std::size_t max_candidates = 16);

struct KroneckerPoint {
  std::size_t n = 0;
  double mass = 0.0;
  bool pass = false;  // mass > 1 − ε
  std::size_t set_size = 0;
  std::size_t distinct_blocks = 0;
  Word witness;
};

/// For each n, a set of observed n-blocks with pairwise f̄_n < ε grown from the
/// Katok witness, and its empirical mass.
std::vector<KroneckerPoint> loosely_kronecker_diagnostic(const Word& stream, double epsilon,
                                                         const std::vector<std::size_t>& n_list);

struct CountableExample {
  std::size_t n = 0;
  double entropy_rate = 0.0;
  double fk_to_fixed_point = 0.0;
  Word sample;
};

/// Symbols 1/ℓ, 2^n ≤ ℓ < 2^{n+1}, uniform and i.i.d.; the sampled word is closed
/// into a periodic orbit of the weighted product shift and compared with 0^∞.
CountableExample countable_alphabet_example(std::size_t n, std::size_t sample_len, std::uint64_t seed = 1);

}  // namespace fkdyn

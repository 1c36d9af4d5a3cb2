#pragma once

// Finitely supported measures, the Prokhorov metric, n-block distributions
// and optimal transport between them.

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fkdyn/seqcore.hpp"

namespace fkdyn {

struct DiscreteMeasure {
  std::vector<Point> support;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const noexcept { return support.size(); }
};

/// Validates weights (nonnegative, summing to 1 within 1e-12) and support distinctness.
DiscreteMeasure make_measure(const MetricSystem& system, std::vector<Point> support, std::vector<double> weights);

/// Uniform measure on the first n points, exact duplicates merged in first-seen order.
DiscreteMeasure empirical_measure(const MetricSystem& system, const PointSeq& x, std::size_t n);

inline constexpr std::size_t kProkhorovMaxSupport = 10000;

/// Exact Prokhorov distance between finitely supported measures.
double prokhorov(const MetricSystem& system, const DiscreteMeasure& mu, const DiscreteMeasure& nu);

struct BlockDistribution {
  std::size_t n = 0;
  std::map<Word, double> probs;
  /// Set when an empirical estimate used fewer than 10·2^n windows.
  bool short_stream = false;
};

/// i.i.d. marginal over a finite alphabet.
struct ProductSpec {
  std::vector<Symbol> symbols;
  std::vector<double> probs;
};

/// Sliding-window n-block frequencies of a stream.
BlockDistribution block_distribution(const Word& stream, std::size_t n);

/// Exact n-block probabilities of the product measure.
BlockDistribution block_distribution(const ProductSpec& spec, std::size_t n);

struct Coupling {
  std::size_t n = 0;
  std::map<std::pair<Word, Word>, double> mass;
};

enum class BlockCost { Edit, Hamming };

struct TransportResult {
  double value = 0.0;
  Coupling plan;
  /// max of marginal error, negative reduced cost and basic-cell slack.
  double residual = 0.0;
  std::size_t pivots = 0;
  /// Row-major cell masses of the optimal plan.
  std::vector<double> flat_plan;
};

inline constexpr std::size_t kTransportMaxEntries = 10000000;

TransportResult transport_block_distance(const BlockDistribution& mu, const BlockDistribution& nu,
                                         BlockCost cost);

/// Transportation problem on an explicit cost matrix (row-major, rows × cols).
TransportResult transport_matrix(const std::vector<double>& supply, const std::vector<double>& demand,
                                 const std::vector<double>& cost);

}  // namespace fkdyn

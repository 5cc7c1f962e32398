#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "conet/cooccur.hpp"
#include "conet/graph.hpp"
#include "conet/metrics.hpp"

namespace conet {

/// What the swap budget (multiplier * |E|) counts.
enum class SwapCounting {
  /// Only applied swaps; rejected attempts retry.
  accepted,
  /// Every attempt, applied or not.
  attempts,
};

/// How the four endpoints of two chosen edges (u1,u2), (u3,u4) are rewired.
enum class PairingRule {
  /// (u1,u4),(u2,u3) or (u1,u3),(u2,u4) with equal probability.
  uniform,
  /// Always (u1,u4),(u2,u3).
  cross,
};

struct NullModelConfig {
  unsigned swap_rounds_multiplier = 10;
  unsigned replicate_count = 100;
  std::uint64_t master_seed = 0;
  unsigned max_attempts_per_round = 100;
  SwapCounting counting = SwapCounting::accepted;
  PairingRule pairing = PairingRule::uniform;
  /// Worker threads for the ensemble; results do not depend on it.
  unsigned threads = 1;

  /// Throws std::invalid_argument when a count is zero.
  void validate() const;
};

using Rng = std::mt19937_64;

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);
/// Independent stream for one replicate, a pure function of both arguments.
Rng replicate_stream(std::uint64_t master_seed, std::uint64_t replicate_index);

/// One swap attempt: picks two distinct edges uniformly and rewires them when
/// they share no endpoint and the new pairs are absent. Returns whether the
/// swap was applied. Throws std::invalid_argument below two edges.
bool double_edge_swap_round(Graph& g, Rng& rng, PairingRule pairing = PairingRule::uniform);

/// Applies a specific rewiring of edges at `first` and `second` if legal.
/// Exposed for tests; `double_edge_swap_round` is the randomized driver.
bool try_swap(Graph& g, std::size_t first, std::size_t second, bool cross_pairing);

struct NullReplicate {
  Graph graph;
  std::size_t attempts = 0;
  std::size_t accepted = 0;
  /// Acceptance budget ran out; `graph` is then the unmodified source.
  bool saturated = false;
};

/// Randomized copy of `source` with the same degree sequence. Throws
/// std::invalid_argument when the source has fewer than two edges.
NullReplicate generate_null(const Graph& source, const NullModelConfig& config,
                            std::uint64_t replicate_index);

struct NullEnsembleResult {
  WindowLabel label;
  std::vector<double> clustering;
  double mean = 0.0;
  /// Sample standard deviation (0 for a single replicate).
  double sd = 0.0;
  std::size_t attempts = 0;
  std::size_t accepted = 0;
  std::size_t saturated = 0;
};

NullEnsembleResult null_clustering_baseline(const Graph& source, const NullModelConfig& config,
                                            WindowLabel label = {},
                                            LowDegreeRule rule = LowDegreeRule::count_as_zero);

}  // namespace conet

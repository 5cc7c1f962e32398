#include "conet/nullmodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace conet {

void NullModelConfig::validate() const {
  if (swap_rounds_multiplier == 0 || replicate_count == 0 || max_attempts_per_round == 0) {
    throw std::invalid_argument("null model counts must be >= 1");
  }
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng replicate_stream(std::uint64_t master_seed, std::uint64_t replicate_index) {
  const std::uint64_t a = mix64(master_seed);
  const std::uint64_t b = mix64(a ^ mix64(replicate_index + 0x632be59bd9b4e019ULL));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

bool try_swap(Graph& g, std::size_t first, std::size_t second, bool cross_pairing) {
  if (first == second) return false;
  const auto [a, b] = g.edges().at(first);
  const auto [c, d] = g.edges().at(second);
  if (a == c || a == d || b == c || b == d) return false;
  const NodeIndex x1 = a, y1 = cross_pairing ? d : c;
  const NodeIndex x2 = b, y2 = cross_pairing ? c : d;
  if (g.has_edge(x1, y1) || g.has_edge(x2, y2)) return false;
  g.replace_edge(first, x1, y1);
  g.replace_edge(second, x2, y2);
  return true;
}

bool double_edge_swap_round(Graph& g, Rng& rng, PairingRule pairing) {
  const auto m = g.edge_count();
  if (m < 2) throw std::invalid_argument("double-edge swap needs at least two edges");
  std::uniform_int_distribution<std::size_t> pick_first(0, m - 1);
  std::uniform_int_distribution<std::size_t> pick_second(0, m - 2);
  const auto i = pick_first(rng);
  auto j = pick_second(rng);
  if (j >= i) ++j;
  bool cross = true;
  if (pairing == PairingRule::uniform) cross = std::bernoulli_distribution(0.5)(rng);
  return try_swap(g, i, j, cross);
}

NullReplicate generate_null(const Graph& source, const NullModelConfig& config,
                            std::uint64_t replicate_index) {
  config.validate();
  if (source.edge_count() < 2) {
    throw std::invalid_argument("null model needs a graph with at least two edges");
  }
  auto rng = replicate_stream(config.master_seed, replicate_index);
  NullReplicate out{source, 0, 0, false};
  const std::size_t rounds = static_cast<std::size_t>(config.swap_rounds_multiplier) * source.edge_count();

  if (config.counting == SwapCounting::attempts) {
    for (; out.attempts < rounds; ++out.attempts) {
      if (double_edge_swap_round(out.graph, rng, config.pairing)) ++out.accepted;
    }
    return out;
  }

  const std::size_t budget = rounds * config.max_attempts_per_round;
  while (out.accepted < rounds) {
    if (out.attempts == budget) {
      out.graph = source;
      out.saturated = true;
      return out;
    }
    ++out.attempts;
    if (double_edge_swap_round(out.graph, rng, config.pairing)) ++out.accepted;
  }
  return out;
}

NullEnsembleResult null_clustering_baseline(const Graph& source, const NullModelConfig& config,
                                            WindowLabel label, LowDegreeRule rule) {
  config.validate();
  const std::size_t count = config.replicate_count;
  std::vector<NullReplicate> stats(count);
  std::vector<double> values(count);

  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t r = begin; r < count; r += stride) {
      auto rep = generate_null(source, config, r);
      values[r] = average_clustering(rep.graph, rule);
      rep.graph = Graph{};
      stats[r] = std::move(rep);
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(config.threads, 1, count);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work, t, workers);
  }

  NullEnsembleResult res;
  res.label = label;
  res.clustering = std::move(values);
  for (const auto& s : stats) {
    res.attempts += s.attempts;
    res.accepted += s.accepted;
    res.saturated += s.saturated ? 1 : 0;
  }
  double sum = 0.0;
  for (double v : res.clustering) sum += v;
  res.mean = sum / static_cast<double>(count);
  if (count > 1) {
    double ss = 0.0;
    for (double v : res.clustering) ss += (v - res.mean) * (v - res.mean);
    res.sd = std::sqrt(ss / static_cast<double>(count - 1));
  }
  return res;
}

}  // namespace conet

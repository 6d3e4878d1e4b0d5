#include "awlab/walker.hpp"

#include <cmath>

#include "awlab/error.hpp"
#include "awlab/parallel.hpp"
#include "awlab/rng.hpp"

namespace awlab {
namespace {

__extension__ using Wide = unsigned __int128;

// Cumulative neighbour weights for inverse-CDF steps.
class StepTable {
 public:
  explicit StepTable(const WeightedGraph& g) : g_(g), offsets_(g.size() + 1) {
    for (Vertex v = 0; v < g.size(); ++v) {
      offsets_[v] = cumulative_.size();
      double acc = 0.0;
      for (const auto& nb : g.neighbors(v)) {
        acc += nb.weight;
        cumulative_.push_back(acc);
      }
    }
    offsets_[g.size()] = cumulative_.size();
  }

  std::size_t step_index(Vertex x, Stream& rng) const {
    const std::size_t begin = offsets_[x], end = offsets_[x + 1];
    const double target = rng.uniform() * cumulative_[end - 1];
    for (std::size_t i = begin; i < end; ++i)
      if (target < cumulative_[i]) return i - begin;
    return end - 1 - begin;
  }

  Vertex step(Vertex x, Stream& rng) const { return g_.neighbors(x)[step_index(x, rng)].to; }

 private:
  const WeightedGraph& g_;
  std::vector<std::size_t> offsets_;
  std::vector<double> cumulative_;
};

struct Outcome {
  std::uint64_t value = 0;
  bool truncated = false;
};

EstimateReport summarize(const std::vector<Outcome>& outcomes, const WalkOptions& options) {
  std::uint64_t sum = 0;
  Wide sum_sq = 0;
  std::size_t truncated = 0;
  for (const auto& o : outcomes) {
    sum += o.value;
    sum_sq += static_cast<Wide>(o.value) * o.value;
    truncated += o.truncated ? 1 : 0;
  }
  EstimateReport r;
  r.trials = outcomes.size();
  r.truncated = truncated;
  r.horizon = options.horizon;
  r.seed = options.seed;
  const auto n = static_cast<Wide>(r.trials);
  r.mean = static_cast<double>(sum) / static_cast<double>(r.trials);
  if (r.trials > 1) {
    const Wide spread = n * sum_sq - static_cast<Wide>(sum) * sum;
    const long double var = static_cast<long double>(spread) / (static_cast<long double>(r.trials) * (r.trials - 1));
    r.se = static_cast<double>(std::sqrt(var / static_cast<long double>(r.trials)));
  }
  if (static_cast<double>(truncated) > options.max_truncated_fraction * static_cast<double>(r.trials))
    throw Error(Errc::ExcessiveTruncation, std::to_string(truncated) + " of " + std::to_string(r.trials) +
                                               " walks reached the horizon");
  return r;
}

void check_walk(const WeightedGraph& g, const Region& a, const WalkOptions& options) {
  if (options.trials == 0 || options.horizon == 0)
    throw Error(Errc::InvalidArgument, "trials and horizon must be positive");
  if (!a.contains(g.root())) throw Error(Errc::RootNotInRegion, "walk root is not in the region");
}

}  // namespace

EstimateReport simulate_exit(const WeightedGraph& g, const Region& a, const WalkOptions& options) {
  check_walk(g, a, options);
  const StepTable table(g);
  std::vector<Outcome> outcomes(options.trials);
  parallel_for(options.trials, options.threads, [&](std::size_t trial) {
    Stream rng(options.seed, trial);
    Vertex x = g.root();
    std::uint64_t t = 0;
    while (a.contains(x)) {
      if (t == options.horizon) {
        outcomes[trial] = {t, true};
        return;
      }
      x = table.step(x, rng);
      ++t;
    }
    outcomes[trial] = {t, false};
  });
  return summarize(outcomes, options);
}

EstimateReport simulate_occupation(const WeightedGraph& g, const Region& a, const WalkOptions& options) {
  check_walk(g, a, options);
  const StepTable table(g);
  std::vector<Outcome> outcomes(options.trials);
  parallel_for(options.trials, options.threads, [&](std::size_t trial) {
    Stream rng(options.seed, trial);
    Vertex x = g.root();
    std::uint64_t visits = 0;
    for (std::uint64_t t = 0; t < options.horizon; ++t) {
      if (g.is_frame(x)) {
        outcomes[trial] = {visits, false};
        return;
      }
      if (a.contains(x)) ++visits;
      x = table.step(x, rng);
    }
    outcomes[trial] = {visits, !g.is_frame(x)};
  });
  return summarize(outcomes, options);
}

std::vector<double> simulate_displacement(const WeightedGraph& g, std::uint64_t steps, std::size_t trials,
                                          std::uint64_t seed, unsigned threads) {
  std::vector<double> out(trials, 0.0);
  if (steps == 0) return out;
  const auto dist = hop_distances(g, g.root());
  const StepTable table(g);
  parallel_for(trials, threads, [&](std::size_t trial) {
    Stream rng(seed, trial);
    Vertex x = g.root();
    for (std::uint64_t t = 0; t < steps && !g.is_frame(x); ++t) x = table.step(x, rng);
    out[trial] = static_cast<double>(dist[x]) / static_cast<double>(steps);
  });
  return out;
}

std::vector<double> simulate_tree_displacement(int q, std::uint64_t steps, std::size_t trials, std::uint64_t seed,
                                               unsigned threads) {
  if (q < 2) throw Error(Errc::InvalidArgument, "tree degree must be at least 2");
  std::vector<double> out(trials, 0.0);
  if (steps == 0) return out;
  const auto degree = static_cast<std::uint64_t>(q);
  parallel_for(trials, threads, [&](std::size_t trial) {
    Stream rng(seed, trial);
    // path[k] = which child was taken at depth k; the root has q children,
    // every other vertex has a parent and q - 1 children
    std::vector<std::uint32_t> path;
    for (std::uint64_t t = 0; t < steps; ++t) {
      const auto pick = rng.below(degree);
      if (path.empty())
        path.push_back(static_cast<std::uint32_t>(pick));
      else if (pick == 0)
        path.pop_back();
      else
        path.push_back(static_cast<std::uint32_t>(pick - 1));
    }
    out[trial] = static_cast<double>(path.size()) / static_cast<double>(steps);
  });
  return out;
}

WeightedGraph regular_tree(int q, int depth) {
  if (q < 2 || depth < 1) throw Error(Errc::InvalidArgument, "regular tree needs q >= 2 and depth >= 1");
  std::vector<EdgeSpec> edges;
  std::vector<Label> frame;
  std::vector<Label> layer{0};
  Label next = 1;
  for (int level = 0; level < depth; ++level) {
    std::vector<Label> children;
    for (Label parent : layer) {
      const int count = level == 0 ? q : q - 1;
      for (int c = 0; c < count; ++c) {
        edges.push_back({parent, next, 1.0});
        children.push_back(next++);
      }
    }
    layer = std::move(children);
  }
  frame = layer;
  return build_graph(edges, 0, frame);
}

std::vector<double> empirical_step_law(const WeightedGraph& g, Vertex x, std::size_t draws, std::uint64_t seed) {
  const StepTable table(g);
  std::vector<double> freq(g.neighbors(x).size(), 0.0);
  Stream rng(seed, 0);
  for (std::size_t i = 0; i < draws; ++i) freq[table.step_index(x, rng)] += 1.0;
  for (auto& f : freq) f /= static_cast<double>(draws);
  return freq;
}

}  // namespace awlab

#include "awlab/isoperimetry.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <optional>

#include "awlab/error.hpp"
#include "awlab/parallel.hpp"
#include "awlab/rng.hpp"

namespace awlab {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Incremental ratios only pick candidates; the winner is decided on ratios
// recomputed with a fixed summation order, compared as (ratio, labels).
constexpr double kCandidateSlack = 1e-9;

struct ExactSet {
  double ratio = kInf;
  double measure = 0.0;
  double boundary = 0.0;
  std::vector<Vertex> members;  // sorted
};

ExactSet evaluate_exact(const WeightedGraph& g, const ProfileFunction& f, std::vector<Vertex> members,
                        const std::vector<char>& in_set, char in_value) {
  std::sort(members.begin(), members.end());
  ExactSet out;
  for (Vertex x : members) {
    out.measure += g.measure(x);
    for (const auto& nb : g.neighbors(x))
      if (in_set[nb.to] != in_value) out.boundary += nb.weight;
  }
  out.ratio = out.boundary / f(out.measure);
  out.members = std::move(members);
  return out;
}

bool precedes(const ExactSet& a, const ExactSet& b) {
  if (a.ratio != b.ratio) return a.ratio < b.ratio;
  return a.members < b.members;  // vertex order is label order
}

struct Tracker {
  ExactSet best;
  std::uint64_t examined = 0;
  std::size_t min_size = std::numeric_limits<std::size_t>::max(), max_size = 0;
  double min_measure = kInf, max_measure = 0.0;

  void count(std::size_t size, double measure) {
    ++examined;
    min_size = std::min(min_size, size);
    max_size = std::max(max_size, size);
    min_measure = std::min(min_measure, measure);
    max_measure = std::max(max_measure, measure);
  }
  bool candidate(double ratio) const { return ratio <= best.ratio * (1.0 + kCandidateSlack) + 1e-300; }
  void offer(ExactSet&& s) {
    if (best.members.empty() || precedes(s, best)) best = std::move(s);
  }
  void merge(Tracker&& other) {
    examined += other.examined;
    min_size = std::min(min_size, other.min_size);
    max_size = std::max(max_size, other.max_size);
    min_measure = std::min(min_measure, other.min_measure);
    max_measure = std::max(max_measure, other.max_measure);
    if (!other.best.members.empty()) offer(std::move(other.best));
  }
};

IsoReport to_report(const WeightedGraph& g, IsoMethod method, const Tracker& t) {
  IsoReport r;
  r.method = method;
  r.constant = t.best.ratio;
  r.witness_measure = t.best.measure;
  r.witness_boundary = t.best.boundary;
  r.witness.reserve(t.best.members.size());
  for (Vertex v : t.best.members) r.witness.push_back(g.label(v));
  r.examined = t.examined;
  if (t.examined > 0) {
    r.min_size = t.min_size;
    r.max_size = t.max_size;
    r.min_measure = t.min_measure;
    r.max_measure = t.max_measure;
  }
  return r;
}

// mu(v, S) and mu(v, v) for the incremental boundary update
//   mu(d(S + v)) = mu(dS) + m(v) - mu(v, v) - 2 mu(v, S).
template <class InSet>
double boundary_after_adding(const WeightedGraph& g, Vertex v, double bd, InSet&& in_set) {
  double loop = 0.0, to_set = 0.0;
  for (const auto& nb : g.neighbors(v)) {
    if (nb.to == v)
      loop = nb.weight;
    else if (in_set(nb.to))
      to_set += nb.weight;
  }
  return bd + g.measure(v) - loop - 2.0 * to_set;
}

enum : char { kFree = 0, kIn = 1, kCandidate = 2, kExcluded = 3 };

class Enumerator {
 public:
  Enumerator(const WeightedGraph& g, const ProfileFunction& f, std::size_t max_vertices, std::uint64_t budget,
             std::atomic<std::uint64_t>& visited)
      : g_(g), f_(f), max_vertices_(max_vertices), budget_(budget), visited_(visited), status_(g.size(), kFree) {}

  Tracker tracker;

  void add(Vertex v, double bd, double m, std::vector<Vertex>& ext_tail) {
    const double nbd = boundary_after_adding(g_, v, bd, [&](Vertex y) { return status_[y] == kIn; });
    status_[v] = kIn;
    set_.push_back(v);
    const std::size_t base = ext_tail.size();
    for (const auto& nb : g_.neighbors(v)) {
      if (status_[nb.to] != kFree || g_.is_frame(nb.to)) continue;
      status_[nb.to] = kCandidate;
      ext_tail.push_back(nb.to);
    }
    const std::vector<Vertex> added(ext_tail.begin() + static_cast<std::ptrdiff_t>(base), ext_tail.end());
    expand(ext_tail, nbd, m + g_.measure(v));
    for (Vertex w : added) status_[w] = kFree;
    set_.pop_back();
    status_[v] = kExcluded;
  }

  void expand(const std::vector<Vertex>& ext, double bd, double m) {
    visit(bd, m);
    if (set_.size() >= max_vertices_) return;
    for (std::size_t i = 0; i < ext.size(); ++i) {
      std::vector<Vertex> next(ext.begin() + static_cast<std::ptrdiff_t>(i) + 1, ext.end());
      add(ext[i], bd, m, next);
    }
    for (Vertex v : ext) status_[v] = kCandidate;
  }

  void visit(double bd, double m) {
    if (visited_.fetch_add(1, std::memory_order_relaxed) + 1 > budget_)
      throw Error(Errc::BudgetExceeded, "connected-set enumeration exceeded its budget");
    tracker.count(set_.size(), m);
    const double ratio = bd / f_(m);
    if (tracker.candidate(ratio)) tracker.offer(evaluate_exact(g_, f_, set_, status_, kIn));
  }

  std::vector<char>& status() { return status_; }
  std::vector<Vertex>& set() { return set_; }

 private:
  const WeightedGraph& g_;
  const ProfileFunction& f_;
  std::size_t max_vertices_;
  std::uint64_t budget_;
  std::atomic<std::uint64_t>& visited_;
  std::vector<char> status_;
  std::vector<Vertex> set_;
};

// Random connected growth from the root. Frontier weights live in a Fenwick
// tree indexed by vertex; members keep weight zero.
class Grower {
 public:
  explicit Grower(const WeightedGraph& g) : g_(g), tree_(g.size() + 1), weight_(g.size()), in_(g.size()) {}

  const std::vector<Vertex>& members() const { return members_; }
  const std::vector<char>& in_set() const { return in_; }

  // visit(bd, m) is called for every prefix, the root set included.
  template <class Visit>
  void run(Stream& rng, Growth growth, double max_measure, std::size_t max_vertices, Visit&& visit) {
    reset();
    double bd = 0.0, m = 0.0;
    Vertex v = g_.root();
    for (;;) {
      bd = boundary_after_adding(g_, v, bd, [&](Vertex y) { return in_[y] != 0; });
      m += g_.measure(v);
      insert(v, growth);
      visit(bd, m);
      if (max_vertices != 0 && members_.size() >= max_vertices) break;
      if (!(total_ > 0.0)) break;
      const auto next = pick(rng);
      if (!next) break;
      if (max_measure > 0.0 && m + g_.measure(*next) > max_measure) break;
      v = *next;
    }
  }

 private:
  void reset() {
    for (Vertex v : touched_) {
      weight_[v] = 0.0;
      in_[v] = 0;
    }
    std::fill(tree_.begin(), tree_.end(), 0.0);
    touched_.clear();
    frontier_.clear();
    members_.clear();
    total_ = 0.0;
  }

  void update(Vertex v, double delta) {
    for (std::size_t i = v + 1; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  }

  void set_weight(Vertex v, double w) {
    if (weight_[v] == 0.0 && w > 0.0) frontier_.push_back(v);
    update(v, w - weight_[v]);
    total_ += w - weight_[v];
    weight_[v] = w;
    touched_.push_back(v);
  }

  void insert(Vertex v, Growth growth) {
    in_[v] = 1;
    touched_.push_back(v);
    members_.push_back(v);
    if (weight_[v] != 0.0) set_weight(v, 0.0);
    for (const auto& nb : g_.neighbors(v)) {
      if (nb.to == v || in_[nb.to] || g_.is_frame(nb.to)) continue;
      set_weight(nb.to, growth == Growth::Weighted ? weight_[nb.to] + nb.weight : 1.0);
    }
  }

  std::optional<Vertex> pick(Stream& rng) {
    const double target = rng.uniform() * total_;
    std::size_t pos = 0;
    double rest = target;
    std::size_t step = 1;
    while (step * 2 < tree_.size()) step *= 2;
    for (; step > 0; step /= 2) {
      if (pos + step < tree_.size() && tree_[pos + step] <= rest) {
        pos += step;
        rest -= tree_[pos];
      }
    }
    if (pos < weight_.size() && weight_[pos] > 0.0) return static_cast<Vertex>(pos);
    // rounding drift in the tree; fall back to a scan of the frontier
    double acc = 0.0;
    std::optional<Vertex> last;
    for (Vertex f : frontier_) {
      if (weight_[f] <= 0.0) continue;
      last = f;
      acc += weight_[f];
      if (acc > target) return f;
    }
    return last;
  }

  const WeightedGraph& g_;
  std::vector<double> tree_;
  std::vector<double> weight_;
  std::vector<char> in_;
  std::vector<Vertex> touched_, frontier_, members_;
  double total_ = 0.0;
};

}  // namespace

const char* to_string(IsoMethod method) noexcept {
  switch (method) {
    case IsoMethod::Exhaustive: return "exhaustive";
    case IsoMethod::LevelSet: return "levelset";
    case IsoMethod::Sampled: return "sampled";
  }
  return "unknown";
}

double iso_ratio(const WeightedGraph& g, const ProfileFunction& f, const Region& a) {
  std::vector<char> mask(g.size(), 0);
  for (Vertex v : a.members()) mask[v] = 1;
  return evaluate_exact(g, f, a.members(), mask, 1).ratio;
}

IsoReport cis_exhaustive(const WeightedGraph& g, const ProfileFunction& f, std::size_t max_vertices,
                         std::uint64_t budget, unsigned threads) {
  if (max_vertices == 0) throw Error(Errc::InvalidArgument, "max_vertices must be at least 1");
  const Vertex root = g.root();
  std::atomic<std::uint64_t> visited{0};

  std::vector<Vertex> first;
  for (const auto& nb : g.neighbors(root))
    if (nb.to != root && !g.is_frame(nb.to)) first.push_back(nb.to);

  Enumerator top(g, f, max_vertices, budget, visited);
  top.status()[root] = kIn;
  top.set().push_back(root);
  const double root_bd = boundary_after_adding(g, root, 0.0, [](Vertex) { return false; });
  top.visit(root_bd, g.measure(root));

  std::vector<Tracker> branches(max_vertices > 1 ? first.size() : 0);
  parallel_for(branches.size(), threads, [&](std::size_t i) {
    Enumerator e(g, f, max_vertices, budget, visited);
    e.status()[root] = kIn;
    e.set().push_back(root);
    for (std::size_t j = 0; j < first.size(); ++j) e.status()[first[j]] = j < i ? kExcluded : kCandidate;
    std::vector<Vertex> tail(first.begin() + static_cast<std::ptrdiff_t>(i) + 1, first.end());
    e.add(first[i], root_bd, g.measure(root), tail);
    branches[i] = std::move(e.tracker);
  });
  Tracker total = std::move(top.tracker);
  for (auto& b : branches) total.merge(std::move(b));
  return to_report(g, IsoMethod::Exhaustive, total);
}

IsoReport cis_levelsets(const WeightedGraph& g, const GreenField& gf, const ProfileFunction& f) {
  const auto levels = snap_levels(gf.values());
  std::vector<Vertex> order(gf.region().members());
  std::sort(order.begin(), order.end(), [&](Vertex l, Vertex r) {
    return levels[l] != levels[r] ? levels[l] > levels[r] : l < r;
  });
  std::vector<char> in(g.size(), 0);
  Tracker t;
  double bd = 0.0, m = 0.0;
  std::size_t best_prefix = 0;
  double best_ratio = kInf;
  for (std::size_t i = 0; i < order.size();) {
    const double level = levels[order[i]];
    if (!(level > 0.0)) break;
    for (; i < order.size() && levels[order[i]] == level; ++i) {
      bd = boundary_after_adding(g, order[i], bd, [&](Vertex y) { return in[y] != 0; });
      m += g.measure(order[i]);
      in[order[i]] = 1;
    }
    t.count(i, m);
    const double ratio = bd / f(m);
    if (ratio < best_ratio) {
      best_ratio = ratio;
      best_prefix = i;
    }
  }
  if (best_prefix > 0) {
    std::vector<char> mask(g.size(), 0);
    for (std::size_t k = 0; k < best_prefix; ++k) mask[order[k]] = 1;
    t.best = evaluate_exact(g, f, std::vector<Vertex>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best_prefix)),
                            mask, 1);
  }
  return to_report(g, IsoMethod::LevelSet, t);
}

IsoReport cis_sampled(const WeightedGraph& g, const ProfileFunction& f, const SamplingOptions& options) {
  if (options.samples == 0) throw Error(Errc::InvalidArgument, "samples must be at least 1");
  if (options.max_measure > 0.0 && g.measure(g.root()) > options.max_measure)
    throw Error(Errc::InvalidArgument, "root measure exceeds the sampling cap");
  const std::size_t blocks = std::min<std::size_t>(options.samples, resolve_threads(options.threads));
  std::vector<Tracker> results(blocks);
  parallel_for(blocks, options.threads, [&](std::size_t b) {
    Grower grower(g);
    Tracker& t = results[b];
    for (std::size_t s = options.samples * b / blocks; s < options.samples * (b + 1) / blocks; ++s) {
      Stream rng(options.seed, s);
      grower.run(rng, options.growth, options.max_measure, options.max_vertices, [&](double bd, double m) {
        t.count(grower.members().size(), m);
        const double ratio = bd / f(m);
        if (t.candidate(ratio)) t.offer(evaluate_exact(g, f, grower.members(), grower.in_set(), 1));
      });
    }
  });
  Tracker total;
  for (auto& r : results) total.merge(std::move(r));
  IsoReport report = to_report(g, IsoMethod::Sampled, total);
  report.samples = options.samples;
  report.seed = options.seed;
  return report;
}

BetacReport verify_betac(const WeightedGraph& env_graph, double d, double beta0, double n0,
                         const BetacOptions& options) {
  if (!(d > 0.0) || !(n0 > 0.0)) throw Error(Errc::InvalidArgument, "verify_betac needs d > 0 and N0 > 0");
  const double cap = options.max_measure > 0.0 ? options.max_measure : 8.0 * n0;
  const double exponent = 1.0 - 1.0 / d;
  struct Partial {
    std::uint64_t large = 0, count = 0;
    std::vector<BetacViolation> kept;
    double min_ratio = kInf, small_min = kInf;
  };
  const std::size_t blocks = std::max<std::size_t>(1, std::min<std::size_t>(options.samples, resolve_threads(options.threads)));
  std::vector<Partial> parts(blocks);
  parallel_for(blocks, options.threads, [&](std::size_t b) {
    Grower grower(env_graph);
    Partial& p = parts[b];
    for (std::size_t s = options.samples * b / blocks; s < options.samples * (b + 1) / blocks; ++s) {
      Stream rng(options.seed, s);
      grower.run(rng, options.growth, cap, 0, [&](double bd, double m) {
        if (m < n0) {
          p.small_min = std::min(p.small_min, bd);
          return;
        }
        ++p.large;
        const double ratio = bd / std::pow(m, exponent);
        p.min_ratio = std::min(p.min_ratio, ratio);
        if (ratio < beta0) {
          ++p.count;
          if (p.kept.size() < options.keep_violations) p.kept.push_back({s, grower.members().size(), m, bd, ratio});
        }
      });
    }
  });
  BetacReport report;
  report.samples = options.samples;
  report.seed = options.seed;
  report.min_ratio = kInf;
  report.small_set_min_boundary = kInf;
  for (auto& p : parts) {
    report.large_sets += p.large;
    report.violation_count += p.count;
    report.min_ratio = std::min(report.min_ratio, p.min_ratio);
    report.small_set_min_boundary = std::min(report.small_set_min_boundary, p.small_min);
    for (auto& v : p.kept)
      if (report.violations.size() < options.keep_violations) report.violations.push_back(v);
  }
  return report;
}

}  // namespace awlab

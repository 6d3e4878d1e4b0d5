#pragma once

// Reference computations that share no code path with the library: dense
// Gaussian elimination in long double, bitmask enumeration, closed formulas
// and exact dynamic programming.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "awlab/graph.hpp"
#include "awlab/profile_function.hpp"

namespace oracle {

using awlab::EdgeSpec;
using awlab::Label;
using awlab::Region;
using awlab::Vertex;
using awlab::WeightedGraph;

/// Solves M x = b in place with partial pivoting.
inline std::vector<long double> dense_solve(std::vector<std::vector<long double>> m, std::vector<long double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
    std::swap(m[col], m[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const long double factor = m[r][col] / m[col][col];
      if (factor == 0.0L) continue;
      for (std::size_t k = col; k < n; ++k) m[r][k] -= factor * m[col][k];
      b[r] -= factor * b[col];
    }
  }
  std::vector<long double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    long double acc = b[i];
    for (std::size_t k = i + 1; k < n; ++k) acc -= m[i][k] * x[k];
    x[i] = acc / m[i][i];
  }
  return x;
}

/// I - P^A restricted to the members of A, in member order.
inline std::vector<std::vector<long double>> killed_generator(const WeightedGraph& g, const Region& a) {
  const auto& mem = a.members();
  const std::size_t n = mem.size();
  std::vector<std::vector<long double>> m(n, std::vector<long double>(n, 0.0L));
  for (std::size_t i = 0; i < n; ++i) {
    m[i][i] = 1.0L;
    for (std::size_t j = 0; j < n; ++j) m[i][j] -= static_cast<long double>(g.kernel(mem[i], mem[j])) / g.measure(mem[i]);
  }
  return m;
}

/// E_x tau_A for every member x: the fundamental matrix applied to ones.
inline std::vector<long double> exit_times(const WeightedGraph& g, const Region& a) {
  return dense_solve(killed_generator(g, a), std::vector<long double>(a.size(), 1.0L));
}

/// E_o tau_A from the fundamental-matrix solve.
inline double exit_time_at_root(const WeightedGraph& g, const Region& a) {
  const auto t = exit_times(g, a);
  const auto& mem = a.members();
  const auto it = std::find(mem.begin(), mem.end(), g.root());
  return static_cast<double>(t[static_cast<std::size_t>(it - mem.begin())]);
}

/// G^A(x) = N(o, x) / m(x) with N = (I - P^A)^{-1}, indexed by graph vertex.
inline std::vector<double> green_column(const WeightedGraph& g, const Region& a) {
  auto m = killed_generator(g, a);
  const std::size_t n = m.size();
  std::vector<std::vector<long double>> t(n, std::vector<long double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t[i][j] = m[j][i];
  const auto& mem = a.members();
  std::vector<long double> e(n, 0.0L);
  e[static_cast<std::size_t>(std::find(mem.begin(), mem.end(), g.root()) - mem.begin())] = 1.0L;
  const auto row = dense_solve(t, e);
  std::vector<double> out(g.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) out[mem[i]] = static_cast<double>(row[i] / g.measure(mem[i]));
  return out;
}

/// Integer segment {lo..hi} with unit weights and frame {lo - 1, hi + 1}.
inline WeightedGraph segment(Label lo, Label hi, Label root) {
  std::vector<EdgeSpec> edges;
  for (Label x = lo - 1; x <= hi; ++x) edges.push_back({x, x + 1, 1.0});
  const std::vector<Label> frame{lo - 1, hi + 1};
  return awlab::build_graph(edges, root, frame);
}

/// Gambler's ruin: walk on {0..n-1} killed at -1 and n, started at x.
inline double gamblers_ruin(long n, long x) { return static_cast<double>((x + 1) * (n - x)); }

/// Random connected weighted graph on `n` labels 0..n-1 (root 0) plus
/// `frame` extra frame vertices attached to random interior vertices. A
/// random spanning tree keeps it connected; `extra` random edges are added,
/// some of them self-loops and duplicates.
inline WeightedGraph random_graph(std::uint64_t seed, int n, int extra, int frame, bool integer_weights = false) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> w(0.1, 2.0);
  std::uniform_int_distribution<int> wi(1, 4);
  auto weight = [&] { return integer_weights ? static_cast<double>(wi(rng)) : w(rng); };
  std::vector<EdgeSpec> edges;
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> parent(0, v - 1);
    edges.push_back({parent(rng), v, weight()});
  }
  std::uniform_int_distribution<int> any(0, n - 1);
  for (int k = 0; k < extra; ++k) edges.push_back({any(rng), any(rng), weight()});
  std::vector<Label> frame_labels;
  for (int f = 0; f < frame; ++f) {
    const Label label = n + f;
    frame_labels.push_back(label);
    edges.push_back({any(rng), label, weight()});
  }
  return awlab::build_graph(edges, 0, frame_labels);
}

/// Minimum of mu(dA) / F(m(A)) over every connected root-containing subset
/// of the non-frame vertices with at most max_size members (bitmask scan;
/// at most 22 non-frame vertices).
struct BruteIso {
  double constant = std::numeric_limits<double>::infinity();
  std::vector<Label> witness;
  std::uint64_t sets = 0;
};

inline BruteIso brute_force_iso(const WeightedGraph& g, const awlab::ProfileFunction& f, std::size_t max_size) {
  const auto interior = g.interior();
  const std::size_t n = interior.size();
  const auto root_pos = static_cast<std::size_t>(std::find(interior.begin(), interior.end(), g.root()) - interior.begin());
  BruteIso out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    if (!(mask >> root_pos & 1)) continue;
    if (static_cast<std::size_t>(__builtin_popcountll(mask)) > max_size) continue;
    std::vector<Vertex> members;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) members.push_back(interior[i]);
    std::vector<char> in(g.size(), 0);
    for (Vertex v : members) in[v] = 1;
    std::vector<Vertex> stack{g.root()};
    std::vector<char> seen(g.size(), 0);
    seen[g.root()] = 1;
    std::size_t reached = 0;
    while (!stack.empty()) {
      const Vertex x = stack.back();
      stack.pop_back();
      ++reached;
      for (const auto& nb : g.neighbors(x))
        if (in[nb.to] && !seen[nb.to]) {
          seen[nb.to] = 1;
          stack.push_back(nb.to);
        }
    }
    if (reached != members.size()) continue;
    ++out.sets;
    double boundary = 0.0, measure = 0.0;
    for (Vertex x : members) {
      measure += g.measure(x);
      for (const auto& nb : g.neighbors(x))
        if (!in[nb.to]) boundary += nb.weight;
    }
    const double ratio = boundary / f(measure);
    if (ratio < out.constant) {
      out.constant = ratio;
      out.witness.clear();
      for (Vertex v : members) out.witness.push_back(g.label(v));
    }
  }
  return out;
}

/// E[d(o, X_n)] / n for the simple walk on the q-regular tree, by exact
/// dynamic programming on the depth (a birth-death chain).
inline double tree_speed(int q, int steps) {
  std::vector<long double> p(static_cast<std::size_t>(steps) + 2, 0.0L), next(p.size());
  p[0] = 1.0L;
  const long double up = 1.0L / q, down = static_cast<long double>(q - 1) / q;
  for (int t = 0; t < steps; ++t) {
    std::fill(next.begin(), next.end(), 0.0L);
    next[1] += p[0];
    for (std::size_t k = 1; k + 1 < p.size(); ++k) {
      next[k - 1] += up * p[k];
      next[k + 1] += down * p[k];
    }
    p.swap(next);
  }
  long double mean = 0.0L;
  for (std::size_t k = 0; k < p.size(); ++k) mean += static_cast<long double>(k) * p[k];
  return static_cast<double>(mean / steps);
}

}  // namespace oracle

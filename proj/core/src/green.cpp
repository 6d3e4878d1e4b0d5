#include "awlab/green.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "awlab/error.hpp"

namespace awlab {
namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;

double max_residual(const WeightedGraph& g, const Region& a, const std::vector<int>& pos, const SparseMatrix& k,
                    const Eigen::VectorXd& h, const Eigen::VectorXd& b) {
  const Eigen::VectorXd r = k * h - b;
  double worst = 0.0;
  for (Vertex x : a.members()) worst = std::max(worst, std::abs(r[pos[x]]) / g.measure(x));
  return worst;
}

}  // namespace

GreenField green_killed(const WeightedGraph& g, const Region& a, const GreenOptions& options) {
  if (!a.contains(g.root())) throw Error(Errc::RootNotInRegion, "region does not contain the root");
  if (!a.connected()) throw Error(Errc::NotConnected, "region is not connected");
  if (boundary_measure(g, a) <= 0.0) throw Error(Errc::NoExit, "region has no boundary; the walk never leaves");

  const auto& members = a.members();
  const auto n = static_cast<Eigen::Index>(members.size());
  std::vector<int> pos(g.size(), -1);
  for (std::size_t i = 0; i < members.size(); ++i) pos[members[i]] = static_cast<int>(i);

  std::vector<Eigen::Triplet<double>> triplets;
  for (Vertex x : members) {
    const int i = pos[x];
    double diag = g.measure(x);
    for (const auto& nb : g.neighbors(x)) {
      if (nb.to == x) {
        diag -= nb.weight;
      } else if (pos[nb.to] >= 0) {
        triplets.emplace_back(i, pos[nb.to], -nb.weight);
      }
    }
    triplets.emplace_back(i, i, diag);
  }
  SparseMatrix k(n, n);
  k.setFromTriplets(triplets.begin(), triplets.end());
  k.makeCompressed();

  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b[pos[g.root()]] = 1.0;
  Eigen::VectorXd h;
  double residual = 0.0;

  GreenField gf;
  if (members.size() <= options.direct_limit) {
    gf.solver_ = SolverKind::Direct;
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(k);
    if (ldlt.info() != Eigen::Success) throw Error(Errc::SolverFailed, "sparse factorization failed");
    h = ldlt.solve(b);
    residual = max_residual(g, a, pos, k, h, b);
    for (int round = 0; round < 3 && residual > options.tol; ++round) {
      h += ldlt.solve(b - k * h);
      residual = max_residual(g, a, pos, k, h, b);
    }
  } else {
    gf.solver_ = SolverKind::ConjugateGradient;
    double min_measure = g.measure(members.front());
    for (Vertex x : members) min_measure = std::min(min_measure, g.measure(x));
    Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
    cg.setMaxIterations(20 * n + 100);
    double cg_tol = std::max(options.tol * min_measure * 0.5, 1e-15);
    cg.setTolerance(cg_tol);
    cg.compute(k);
    h = cg.solve(b);
    residual = max_residual(g, a, pos, k, h, b);
    for (int round = 0; round < 4 && residual > options.tol; ++round) {
      cg_tol = std::max(cg_tol * 1e-2, 1e-16);
      cg.setTolerance(cg_tol);
      h = cg.solveWithGuess(b, h);
      residual = max_residual(g, a, pos, k, h, b);
    }
  }
  if (!(residual <= options.tol))
    throw Error(Errc::SolverFailed, "residual " + std::to_string(residual) + " above tolerance");

  gf.region_ = a;
  gf.root_ = g.root();
  gf.residual_ = residual;
  gf.values_.assign(g.size(), 0.0);
  for (Vertex x : members) gf.values_[x] = h[pos[x]];
  return gf;
}

double harmonic_residual(const WeightedGraph& g, const GreenField& gf) {
  double worst = 0.0;
  for (Vertex x : gf.region().members()) {
    if (x == gf.root()) continue;
    double avg = 0.0;
    for (const auto& nb : g.neighbors(x)) avg += nb.weight * gf.value(nb.to);
    worst = std::max(worst, std::abs(gf.value(x) - avg / g.measure(x)));
  }
  return worst;
}

double flow_through(const WeightedGraph& g, const GreenField& gf, const Region& b) {
  double flow = 0.0;
  for (Vertex x : b.members()) {
    if (!gf.region().contains(x)) throw Error(Errc::RegionNotContained, "B must be a subset of A");
    for (const auto& nb : g.neighbors(x))
      if (!b.contains(nb.to)) flow += nb.weight * (gf.value(x) - gf.value(nb.to));
  }
  return flow;
}

Region level_set(const WeightedGraph& g, const GreenField& gf, double s) {
  const double threshold = s - kLevelTieTolerance * gf.at_root();
  std::vector<Vertex> members;
  for (Vertex x : gf.region().members())
    if (gf.value(x) >= threshold) members.push_back(x);
  return Region::from_vertices(g, std::move(members));
}

double exit_time_exact(const WeightedGraph& g, const GreenField& gf) {
  double total = 0.0;
  for (Vertex x : gf.region().members()) total += g.measure(x) * gf.value(x);
  return total;
}

std::vector<double> snap_levels(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  if (out.empty()) return out;
  std::vector<std::size_t> order(out.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return out[l] > out[r]; });
  const double tol = kLevelTieTolerance * std::abs(out[order.front()]);
  double representative = out[order.front()];
  double previous = representative;
  for (std::size_t idx : order) {
    const double v = out[idx];
    if (v == 0.0) break;  // values outside the region stay exactly zero
    if (previous - v > tol) representative = v;
    previous = v;
    out[idx] = representative;
  }
  return out;
}

LevelSetAudit audit_level_sets(const WeightedGraph& g, const GreenField& gf) {
  const auto levels = snap_levels(gf.values());
  std::vector<Vertex> order(gf.region().members());
  std::sort(order.begin(), order.end(), [&](Vertex l, Vertex r) {
    return levels[l] != levels[r] ? levels[l] > levels[r] : l < r;
  });

  std::vector<Vertex> parent(g.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<char> added(g.size(), 0);
  auto find = [&](Vertex v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };

  LevelSetAudit audit;
  std::size_t components = 0;
  bool root_added = false;
  for (std::size_t i = 0; i < order.size();) {
    const double level = levels[order[i]];
    std::size_t j = i;
    for (; j < order.size() && levels[order[j]] == level; ++j) {
      const Vertex x = order[j];
      added[x] = 1;
      ++components;
      if (x == gf.root()) root_added = true;
      for (const auto& nb : g.neighbors(x)) {
        if (!added[nb.to] || nb.to == x) continue;
        const Vertex rx = find(x), ry = find(nb.to);
        if (rx != ry) {
          parent[rx] = ry;
          --components;
        }
      }
    }
    ++audit.level_sets;
    if (components != 1) ++audit.disconnected;
    if (!root_added) ++audit.missing_root;
    i = j;
  }
  return audit;
}

std::vector<OccupationPoint> occupation_truncated(const GraphFamily& family, std::span<const Label> a,
                                                  std::span<const int> radii, const GreenOptions& options) {
  std::vector<OccupationPoint> out;
  for (int radius : radii) {
    if (a.empty()) {
      out.push_back({radius, 0.0});
      continue;
    }
    const WeightedGraph g = family(radius);
    std::vector<Vertex> members;
    for (Label l : a) {
      auto v = g.find(l);
      if (!v || g.is_frame(*v))
        throw Error(Errc::RegionNotContained, "box of radius " + std::to_string(radius) + " does not contain the region");
      members.push_back(*v);
    }
    const GreenField gf = green_killed(g, Region::interior(g), options);
    double value = 0.0;
    for (Vertex x : members) value += g.measure(x) * gf.value(x);
    out.push_back({radius, value});
  }
  return out;
}

void write_green_csv(std::ostream& out, const WeightedGraph& g, const GreenField& gf) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(region_hash(g, gf.region())));
  out << "# region_hash=" << buf << " root=" << g.label(gf.root());
  std::snprintf(buf, sizeof buf, "%.3e", gf.residual());
  out << " residual=" << buf << '\n';
  out << "vertex,G\n";
  for (Vertex x : gf.region().members()) {
    std::snprintf(buf, sizeof buf, "%.17g", gf.value(x));
    out << g.label(x) << ',' << buf << '\n';
  }
}

}  // namespace awlab

#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "awlab/graph.hpp"

namespace awlab {

enum class SolverKind { Direct, ConjugateGradient };

struct GreenOptions {
  double tol = 1e-10;               // max-norm residual of (I - P^A) G - delta_o / m(o)
  std::size_t direct_limit = 5000;  // region size up to which a sparse factorization is used
};

/// Root column of the killed Green function: G^A(x) = G^A(o, x), the expected
/// number of visits to x before leaving A divided by m(x). Zero outside A.
class GreenField {
 public:
  const Region& region() const noexcept { return region_; }
  Vertex root() const noexcept { return root_; }
  double value(Vertex v) const { return values_[v]; }
  /// One entry per graph vertex.
  std::span<const double> values() const noexcept { return values_; }
  double at_root() const { return values_[root_]; }
  double residual() const noexcept { return residual_; }
  SolverKind solver() const noexcept { return solver_; }

 private:
  friend GreenField green_killed(const WeightedGraph&, const Region&, const GreenOptions&);

  Region region_;
  std::vector<double> values_;
  Vertex root_ = 0;
  double residual_ = 0.0;
  SolverKind solver_ = SolverKind::Direct;
};

/// Solves (diag(m) - mu|_A) G = delta_o, which is the killed equation
/// (I - P^A) G = delta_o / m(o) multiplied through by m.
/// Throws RootNotInRegion, NotConnected, NoExit, SolverFailed.
GreenField green_killed(const WeightedGraph& g, const Region& a, const GreenOptions& options = {});

/// max over x in A \ {o} of |G(x) - sum_y p(x,y) G(y)|.
double harmonic_residual(const WeightedGraph& g, const GreenField& gf);

/// sum over x in B, y not in B of mu(x,y) (G(x) - G(y)); equals 1 when the
/// root is in B and 0 otherwise. Throws RegionNotContained unless B is in A.
double flow_through(const WeightedGraph& g, const GreenField& gf, const Region& b);

/// Relative tolerance used when comparing Green values (ties and level-set
/// membership), in units of G(o).
inline constexpr double kLevelTieTolerance = 1e-12;

/// {x in A : G(x) >= s}, membership compared with kLevelTieTolerance slack.
Region level_set(const WeightedGraph& g, const GreenField& gf, double s);

/// E_o(tau_A) = sum_{x in A} m(x) G^A(x).
double exit_time_exact(const WeightedGraph& g, const GreenField& gf);

/// Green values with clusters closer than kLevelTieTolerance * max merged
/// onto the cluster maximum. Exact ties that floating point splits apart are
/// rejoined this way before piecewise-linear profiles are assembled.
std::vector<double> snap_levels(std::span<const double> values);

struct LevelSetAudit {
  std::size_t level_sets = 0;
  std::size_t disconnected = 0;
  std::size_t missing_root = 0;
  bool ok() const noexcept { return disconnected == 0 && missing_root == 0; }
};

/// Checks every distinct level set of gf at once (union-find sweep in
/// decreasing G order).
LevelSetAudit audit_level_sets(const WeightedGraph& g, const GreenField& gf);

struct OccupationPoint {
  int radius = 0;
  double value = 0.0;
};

using GraphFamily = std::function<WeightedGraph(int radius)>;

/// sum_{x in A} m(x) G^{B_R}(x) for each box B_R of the family, where B_R is
/// the interior of family(R). Values are nondecreasing in R and converge to
/// E_o(l_A) when the walk is transient.
std::vector<OccupationPoint> occupation_truncated(const GraphFamily& family, std::span<const Label> a,
                                                  std::span<const int> radii, const GreenOptions& options = {});

/// CSV "vertex,G" sorted by vertex label, preceded by a comment header.
void write_green_csv(std::ostream& out, const WeightedGraph& g, const GreenField& gf);

}  // namespace awlab

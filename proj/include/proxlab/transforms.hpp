#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "proxlab/function_model.hpp"
#include "proxlab/grid.hpp"

namespace proxlab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const noexcept { return hi - lo; }
  bool contains(double x, double slack = 0.0) const noexcept {
    return x >= lo - slack && x <= hi + slack;
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// a*I + b*J (Minkowski), a, b >= 0.
Interval minkowski(double a, const Interval& i, double b, const Interval& j);
/// Hausdorff distance between two intervals.
double hausdorff(const Interval& a, const Interval& b);

/// One connected group of near-optimal grid nodes.
///
/// When the nodes tied with the best value (up to rounding) span more than
/// three nodes on some axis the group is a plateau and lo/hi is the bounding
/// box of the tied nodes. Otherwise it is a single minimizer: the
/// representative is the vertex of a parabola fitted through the best node
/// and its neighbours (the node itself next to a kink) and lo == hi ==
/// representative.
struct Cluster {
  Point representative;
  Point lo;
  Point hi;
  std::size_t nodes = 0;
  bool touches_edge = false;
};

/// Set-valued result of a prox computation.
struct MinimizerSet {
  std::vector<Cluster> clusters;  // sorted lexicographically by representative
  ExtReal attained_value = ExtReal::infinity();
  double tolerance = 0.0;

  std::vector<Point> points() const;
  bool single_valued() const noexcept;
  bool touches_edge() const noexcept;
  /// [min lo, max hi]; 1-D only.
  Interval hull() const;
};

/// Hausdorff distance between finite point sets (Euclidean).
double hausdorff(const std::vector<Point>& a, const std::vector<Point>& b);

/// Grid-objective tolerance used for set-valued argmins: max(1e-9, h^2/lam).
double cluster_tolerance(const GridSpec& spec, double lam);

/// e_lam f(x) = min over nodes w of f(w) + |w - x|^2 / (2 lam), at every node.
/// Requires 0 < lam < f.threshold() (LambdaAboveThreshold).
GridFunction moreau_envelope(const GridFunction& f, double lam);

/// All nodes w whose envelope objective at x is within cluster_tolerance of
/// the minimum, clustered.
MinimizerSet prox_map(const GridFunction& f, double lam, const Point& x);
MinimizerSet prox_map_at(const GridFunction& f, double lam, std::size_t node);

/// Clustered nodes within tol of min f.
MinimizerSet grid_argmin(const GridFunction& f, double tol);

/// h_lam f = -e_lam(-e_lam f).
GridFunction proximal_hull(const GridFunction& f, double lam);

/// e_{lam,mu} f = -e_mu(-e_lam f), 0 < mu < lam < threshold.
GridFunction lasry_lions(const GridFunction& f, double lam, double mu);

/// Building blocks without parameter validation, for composing transforms
/// whose intermediate thresholds are only known to be >= lam.
namespace kernels {
/// min_j f_j + |x_i - x_j|^2/(2 lam).
GridFunction inf_envelope(const GridFunction& f, double lam);
/// max_j g_j - |x_i - x_j|^2/(2 lam) = -e_lam(-g); g must be finite.
GridFunction sup_envelope(const GridFunction& g, double lam);

struct Term {
  const GridFunction* f;
  double weight;
};

/// Nodes per grid cell used by sup_of_envelopes: 4 in 1-D, 2 in 2-D.
std::size_t default_refinement(const GridSpec& spec);

/// phi(x_i) = max over y of [sum_k w_k e_lam f_k(y)] - |x_i - y|^2/(2 mu).
///
/// y ranges over the grid refined `refine` times per axis; e_lam f_k(y) is
/// the exact scan over the nodes of f_k. Restricting y to the nodes only
/// reaches slopes x_j/mu, which leaves a staircase in the result when the
/// shifted function is weakly convex. Every node is also a y, so phi >= the
/// weighted envelopes on the grid, and h(hf) = hf and e(hf) = ef stay exact.
/// A node is flagged when its maximizer y sits on the box edge or when some
/// e_lam f_k(y) had an edge or flagged minimizer.
GridFunction sup_of_envelopes(std::span<const Term> terms, double lam, double mu,
                              std::size_t refine);
}  // namespace kernels

enum class ConjugateMethod { naive, linear_time };

/// f*(s) = max over nodes x of <s, x> - f(x), evaluated on the dual grid.
GridFunction discrete_conjugate(const GridFunction& f, const GridSpec& dual,
                                ConjugateMethod method = ConjugateMethod::naive);

/// Slope range of adjacent difference quotients per axis, padded by 10%.
/// points == 0 keeps the primal node count.
GridSpec default_dual_grid(const GridFunction& f, std::size_t points = 0);

/// Closed convex hull of f restricted to the box, via the biconjugate.
/// 1-D: exact (the conjugate is evaluated at its own breakpoints).
/// 2-D: biconjugate over default_dual_grid(f, 2n-1), +inf outside conv dom f.
GridFunction convex_hull_grid(const GridFunction& f);

struct InfConvolution {
  GridFunction value;                  // flags mark boundary-affected nodes
  std::vector<std::uint8_t> attained;  // a finite minimizing w was found
  std::vector<std::size_t> witness;    // flat index of the minimizing w
  std::vector<std::size_t> partner;    // flat index of x - w
};

/// (f box g)(x) = min over nodes w with x - w on the grid of f(x - w) + g(w).
/// The grid must contain the origin as a node (GridMismatch otherwise).
InfConvolution inf_convolution(const GridFunction& f, const GridFunction& g);

struct ConvexityReport {
  bool convex = true;
  double worst_second_difference = 0.0;  // most negative, scaled by nothing
  double tolerance = 0.0;
  /// Chord witness (left, middle, right) on the worst line; empty when convex.
  std::vector<Point> witness;
  double witness_gap = 0.0;  // how far the middle point sits above the chord
};

/// Is f + coefficient*|x|^2 convex along grid lines (and diagonals in 2-D)?
ConvexityReport convexity_check(const GridFunction& f, double coefficient);

/// f + |x|^2/(2 lam) convex on the grid.
ConvexityReport is_lambda_proximal(const GridFunction& f, double lam);

/// {w : x in w + mu d_L f(w)} for a continuous piecewise polynomial; exact
/// root solving per piece, one-sided derivatives at breakpoints.
MinimizerSet resolvent_1d(const Piecewise1D& f, double mu, double x);

/// (x - conv Prox_mu f(x)) / mu as an interval (1-D).
Interval clarke_subdiff_envelope(const GridFunction& f, double mu, const Point& x);
/// Generators of the same set in any dimension.
std::vector<Point> clarke_subdiff_envelope_points(const GridFunction& f, double mu, const Point& x);

struct LipschitzProbe {
  double kappa = 0.0;
  bool consistent = false;
  std::string reason;
};

/// Estimates the Lipschitz constant of Prox_mu f from a grid selection and
/// checks that f + (kappa-1)/(2 mu kappa)|x|^2 is convex. Returns
/// consistent == false with a reason when the prox is set-valued.
LipschitzProbe prox_lipschitz_probe(const GridFunction& f, double mu);

}  // namespace proxlab

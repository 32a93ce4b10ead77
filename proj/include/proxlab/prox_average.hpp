#pragma once

#include <optional>
#include <vector>

#include "proxlab/grid.hpp"
#include "proxlab/transforms.hpp"

namespace proxlab {

struct AverageParams {
  double alpha = 0.5;
  double mu = 0.0;
  double threshold_bar = kInf;  // min of the inputs' thresholds

  /// Params for f and g; threshold_bar taken from their recorded thresholds.
  static AverageParams for_inputs(const GridFunction& f, const GridFunction& g, double alpha,
                                  double mu);
  /// Throws MuAboveThreshold / std::invalid_argument.
  void validate() const;
};

enum class AverageRoute { definition, infconv };

struct AverageResult {
  GridFunction phi;
  AverageRoute route = AverageRoute::definition;
  double alpha = 0.0;
  double mu = 0.0;
  std::span<const std::uint8_t> exactness_flags() const noexcept { return phi.flags(); }
};

/// phi = -e_mu(-alpha e_mu f - (1 - alpha) e_mu g). The result is checked to
/// be mu-proximal on the grid (std::logic_error otherwise).
AverageResult proximal_average(const GridFunction& f, const GridFunction& g,
                               const AverageParams& p);

/// Same function through the epi-sum of the convexified shifted inputs:
/// [alpha F(./alpha) box (1-alpha) G(./(1-alpha))] - |x|^2/(2 mu) with
/// F = conv(f + |.|^2/(2 mu)). Needs 0 < alpha < 1 (AlphaEndpoint) and the
/// origin on the grid. Nodes whose minimization touched the box edge are
/// flagged.
AverageResult proximal_average_infconv(const GridFunction& f, const GridFunction& g,
                                       const AverageParams& p);

struct AverageProx {
  MinimizerSet prox;                     // prox_map(phi, mu, x)
  std::vector<Point> combination;        // alpha p + (1-alpha) q over cluster corners
  std::optional<Interval> combination_hull;  // 1-D: alpha conv Prox f + (1-alpha) conv Prox g
  bool touches_edge = false;             // any of the three prox sets reached the box edge
};

AverageProx prox_of_average(const GridFunction& f, const GridFunction& g, const AverageParams& p,
                            const Point& x);

/// One average per alpha (definition route); alphas sorted in [0, 1].
std::vector<AverageResult> alpha_sweep(const GridFunction& f, const GridFunction& g, double mu,
                                       const std::vector<double>& alphas);
/// One average per mu; mus ascending in (0, threshold_bar).
std::vector<AverageResult> mu_sweep(const GridFunction& f, const GridFunction& g, double alpha,
                                    const std::vector<double>& mus);

}  // namespace proxlab

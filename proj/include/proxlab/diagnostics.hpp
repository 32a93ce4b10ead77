#pragma once

#include <string>
#include <vector>

#include "proxlab/function_model.hpp"
#include "proxlab/grid.hpp"
#include "proxlab/prox_average.hpp"

namespace proxlab::diag {

/// One verification result. passed <=> max_violation <= tolerance_used,
/// except for checks whose outcome is a set comparison (see the check).
struct CheckReport {
  std::string check_id;
  std::string context;  // fixtures and parameters
  bool passed = false;
  double max_violation = 0.0;
  Point witness;  // grid point, or parameter values for sweeps
  double tolerance_used = 0.0;
  std::size_t nodes_excluded = 0;
  std::string note;  // "proxy" for grid stand-ins of limit statements
};

/// One JSON object per line: check_id, passed, max_violation, witness,
/// tolerance_used, nodes_excluded, context, note.
std::string to_json_line(const CheckReport& r);

/// Inequalities that hold exactly on the grid use this absolute slack.
inline constexpr double kSlack = 1e-9;

/// Envelope grid error c*h for this grid and mu: the largest deviation of
/// the grid envelope of q_a from its closed form, over a*mu in
/// {-0.5, 0, 1, 3} (objective curvatures 1/(2 mu) .. 4/mu), non-flagged
/// nodes only. In 2-D the panel is q_{aI}.
double envelope_grid_error(const GridSpec& spec, double mu);

// ------------------------------------------------------------ the checks

/// e_mu phi = alpha e_mu f + (1-alpha) e_mu g on non-flagged nodes, 2x grid error.
CheckReport check_envelope_identity(const GridFunction& f, const GridFunction& g,
                                    const AverageParams& p);

/// alpha e f + (1-alpha) e g <= phi <= alpha h f + (1-alpha) h g <= alpha f + (1-alpha) g,
/// every node, slack kSlack.
CheckReport check_sandwich(const GridFunction& f, const GridFunction& g, const AverageParams& p);

/// conv Prox phi(x) vs alpha conv Prox f(x) + (1-alpha) conv Prox g(x),
/// Hausdorff <= h. Points whose prox sets reach the box edge are skipped.
CheckReport check_prox_combination(const GridFunction& f, const GridFunction& g,
                                   const AverageParams& p, const std::vector<Point>& xs);

/// phi_{mu2} <= phi_{mu1} + kSlack for consecutive mus (ascending).
CheckReport check_mu_monotonicity(const GridFunction& f, const GridFunction& g, double alpha,
                                  const std::vector<double>& mus);

/// phi at alpha = 0 and 1 equals h_mu g and h_mu f.
CheckReport check_alpha_endpoints(const GridFunction& f, const GridFunction& g, double mu);

/// |phi_a - phi_b| <= |a - b| * |e_mu f - e_mu g| on every node, consecutive alphas.
/// Uniform-on-grid proxy for epi-continuity in alpha.
CheckReport check_alpha_continuity(const GridFunction& f, const GridFunction& g, double mu,
                                   const std::vector<double>& alphas);

/// Along mus (descending), max |phi_mu - (alpha f + (1-alpha) g)| over
/// non-flagged nodes decreases strictly, ends <= bound, and phi_mu stays below
/// the combination. Proxy for the mu -> 0 limit.
CheckReport check_mu_zero_limit(const GridFunction& f, const GridFunction& g, double alpha,
                                const std::vector<double>& mus, double bound);

/// min phi = min [alpha e f + (1-alpha) e g]; when argmin f and argmin g meet,
/// and 0 < alpha < 1, also min phi = alpha min f + (1-alpha) min g and
/// argmin phi = their intersection.
CheckReport check_infimum_formulas(const GridFunction& f, const GridFunction& g,
                                   const AverageParams& p);

/// argmin(phi + q/2mu) vs the Minkowski combination of the convexified
/// argmins of f + q/2mu and g + q/2mu (Hausdorff <= h), and additivity of the
/// infima (2x grid error).
CheckReport check_shifted_argmin(const GridFunction& f, const GridFunction& g,
                                 const AverageParams& p);

/// argmin(f1 box f2) = argmin f1 + argmin f2 (Hausdorff <= h), inf additive (kSlack).
CheckReport check_infconv_minimizer_lemma(const GridFunction& f1, const GridFunction& f2);

/// With psi = |x| + beta below min(f, g) on the grid: phi >= e_mu psi
/// (closed form) and (phi - beta)/|x| >= 1/2 on the outer 10% of nodes.
CheckReport check_coercivity_preservation(const GridFunction& f, const GridFunction& g,
                                          const AverageParams& p);

/// 1-D. At each x in xs the one-sided grid slopes of e_mu phi match
/// (x - conv Prox phi(x))/mu within max(C, 1/mu) h. At every interior
/// non-flagged node the one-sided slopes of phi differ by at most C h
/// (differentiability); max_violation is the largest jump / h.
CheckReport check_subdifferential(const AverageResult& phi, const std::vector<Point>& xs,
                                  double slope_constant);

/// Slope constant for check_subdifferential when f is smooth and mu-proximal
/// with L-Lipschitz gradient: max((L + 1/mu)/alpha - 1/mu, 1/mu).
double lipschitz_gradient_bound(double lipschitz_f, double alpha, double mu);

/// max |second difference| / h^2 of phi over interior non-flagged nodes is
/// at most lipschitz_gradient_bound (times 1 + 1e-6).
CheckReport check_lipschitz_gradient(const GridFunction& f, const GridFunction& g,
                                     const AverageParams& p, double lipschitz_f);

/// Compares e_lam, h_lam, e_{lam,mu}, Prox_lam and the convex hull of f and g.
/// passed when the outcome (all equal or not) matches expect_equal.
CheckReport check_envelope_equivalences(const GridFunction& f, const GridFunction& g, double lam,
                                        double mu, bool expect_equal);

/// Prox_mu f(x) (grid) lies inside the resolvent set (within h), and equals it
/// when f is mu-proximal on the grid. note records a strict containment.
CheckReport check_prox_vs_resolvent(const Piecewise1D& f, const GridSpec& spec, double mu,
                                    const std::vector<double>& xs);

// ------------------------------------------------------------- the suite

struct FixturePair {
  std::string name;
  GridFunction f;
  GridFunction g;
};

/// Every check id, in report order.
const std::vector<std::string>& check_ids();

/// Runs the paired checks over each pair with mus x alphas; mu values of the
/// form k * threshold_bar are passed as negative k (see builtin_suite).
struct SuiteParams {
  std::vector<double> mus{0.1, 0.25, -0.45};
  std::vector<double> alphas{0.0, 0.3, 0.5, 0.7, 1.0};
  std::vector<Point> prox_points;  // empty: 21 points across the middle half of the box
};

std::vector<CheckReport> run_all(const std::vector<FixturePair>& pairs, const SuiteParams& params);

/// Built-in fixture matrix covering every check id at least once (throws
/// std::logic_error otherwise). Reports are ordered by check id.
std::vector<CheckReport> builtin_suite();

}  // namespace proxlab::diag

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace proxlab::quad {

/// Closed-form transforms of q_A(x) = 1/2 <x, A x> for symmetric A.
///
/// Every matrix returned here is symmetric by construction: inverses go
/// through a symmetric eigen-decomposition rather than LU.

struct QuadResult {
  Eigen::MatrixXd matrix;
  std::string scale_note;
};

double min_eigenvalue(const Eigen::MatrixXd& a);

/// 1 / max{0, -lambda_min(A)}; +inf iff A is positive semidefinite.
double threshold(const Eigen::MatrixXd& a);

/// Inverse of a symmetric matrix with all eigenvalues > 0 (else SingularMatrix).
Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& a);

/// e_mu q_A = q_M with M = mu^{-1} [Id - (mu A + Id)^{-1}].
QuadResult moreau(const Eigen::MatrixXd& a, double mu);

/// Prox_mu q_A = (mu A + Id)^{-1}.
QuadResult prox(const Eigen::MatrixXd& a, double mu);

struct AverageMatrices {
  Eigen::MatrixXd a3;    // [alpha P1 + (1-alpha) P2]^{-1} - Id
  Eigen::MatrixXd phi;   // the average is q_phi, phi = a3 / mu
  Eigen::MatrixXd prox;  // alpha P1 + (1-alpha) P2, P_i = (mu A_i + Id)^{-1}
};

/// Proximal average of q_{A1}, q_{A2}. Requires 0 < mu < min thresholds
/// (MuAboveThreshold) and alpha in [0, 1].
AverageMatrices prox_average(const Eigen::MatrixXd& a1, const Eigen::MatrixXd& a2, double alpha,
                             double mu);

struct ConvergenceRow {
  double mu;
  double error;  // max-abs entry of phi(mu) - limit
};

struct Limits {
  Eigen::MatrixXd mu_to_zero;                          // alpha A1 + (1-alpha) A2
  std::optional<Eigen::MatrixXd> mu_to_infinity;       // (alpha A1^{-1} + (1-alpha) A2^{-1})^{-1}
  double threshold_bar = 0.0;                          // min of the two thresholds
  std::optional<Eigen::MatrixXd> near_threshold;       // phi at mu = (1 - 1e-3) threshold_bar
  std::vector<ConvergenceRow> table;                   // mu in {1e-1..1e-4} * scale
  bool linear_convergence = false;                     // error/mu bounded and settling
};

/// Limit records. When require_infinity is set and either matrix is not
/// positive definite, throws NotPositiveDefinite; otherwise the mu -> inf
/// record is simply omitted in that case.
Limits limits(const Eigen::MatrixXd& a1, const Eigen::MatrixXd& a2, double alpha,
              bool require_infinity = false);

/// Smallest eigenvalue of (upper - lower) >= -1e-10 * scale, i.e. q_lower <= q_upper.
bool form_leq(const Eigen::MatrixXd& lower, const Eigen::MatrixXd& upper);

}  // namespace proxlab::quad

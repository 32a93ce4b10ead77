#include "proxlab/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "proxlab/errors.hpp"
#include "proxlab/function_model.hpp"

namespace proxlab::quad {

namespace {

void require_symmetric(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw std::invalid_argument("quadratic: matrix must be square and nonempty");
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

Eigen::MatrixXd identity_like(const Eigen::MatrixXd& a) {
  return Eigen::MatrixXd::Identity(a.rows(), a.cols());
}

void require_mu(double mu, double bound, const char* what) {
  if (!(mu > 0.0)) throw MuAboveThreshold(std::string(what) + ": mu must be positive");
  if (!(mu < bound))
    throw MuAboveThreshold(std::string(what) + ": mu = " + format_double(mu) +
                           " is not below the prox-threshold " + format_double(bound));
}

}  // namespace

double min_eigenvalue(const Eigen::MatrixXd& a) {
  require_symmetric(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double threshold(const Eigen::MatrixXd& a) {
  const double lmin = min_eigenvalue(a);
  const double neg = std::max(0.0, -lmin);
  return neg == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / neg;
}

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& a) {
  require_symmetric(a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrize(a));
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  if (ev.minCoeff() <= 1e-14 * scale)
    throw SingularMatrix("spd_inverse: matrix is singular or indefinite");
  const Eigen::MatrixXd& v = es.eigenvectors();
  Eigen::MatrixXd inv = v * ev.cwiseInverse().asDiagonal() * v.transpose();
  return symmetrize(inv);
}

QuadResult prox(const Eigen::MatrixXd& a, double mu) {
  require_mu(mu, threshold(a), "quad prox");
  return {spd_inverse(mu * symmetrize(a) + identity_like(a)),
          "linear map x -> M x; no mu factor"};
}

QuadResult moreau(const Eigen::MatrixXd& a, double mu) {
  const Eigen::MatrixXd p = prox(a, mu).matrix;
  return {symmetrize((identity_like(a) - p) / mu),
          "envelope is q_M with M = mu^{-1}[Id - (mu A + Id)^{-1}]"};
}

AverageMatrices prox_average(const Eigen::MatrixXd& a1, const Eigen::MatrixXd& a2, double alpha,
                             double mu) {
  require_symmetric(a1);
  require_symmetric(a2);
  if (a1.rows() != a2.rows()) throw GridMismatch("quad prox_average: matrix sizes differ");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
  require_mu(mu, std::min(threshold(a1), threshold(a2)), "quad prox_average");
  const Eigen::MatrixXd p1 = spd_inverse(mu * symmetrize(a1) + identity_like(a1));
  const Eigen::MatrixXd p2 = spd_inverse(mu * symmetrize(a2) + identity_like(a2));
  AverageMatrices r;
  r.prox = symmetrize(alpha * p1 + (1.0 - alpha) * p2);
  r.a3 = symmetrize(spd_inverse(r.prox) - identity_like(a1));
  r.phi = r.a3 / mu;
  return r;
}

Limits limits(const Eigen::MatrixXd& a1, const Eigen::MatrixXd& a2, double alpha,
              bool require_infinity) {
  Limits l;
  l.mu_to_zero = symmetrize(alpha * a1 + (1.0 - alpha) * a2);
  l.threshold_bar = std::min(threshold(a1), threshold(a2));

  const bool pd = min_eigenvalue(a1) > 0.0 && min_eigenvalue(a2) > 0.0;
  if (pd) {
    l.mu_to_infinity = spd_inverse(alpha * spd_inverse(a1) + (1.0 - alpha) * spd_inverse(a2));
  } else if (require_infinity) {
    throw NotPositiveDefinite("mu -> inf limit needs both matrices positive definite");
  }
  if (std::isfinite(l.threshold_bar))
    l.near_threshold = prox_average(a1, a2, alpha, (1.0 - 1e-3) * l.threshold_bar).phi;

  const double scale = std::isfinite(l.threshold_bar) ? std::min(1.0, 0.5 * l.threshold_bar) : 1.0;
  for (double m : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double mu = m * scale;
    const Eigen::MatrixXd phi = prox_average(a1, a2, alpha, mu).phi;
    l.table.push_back({mu, (phi - l.mu_to_zero).cwiseAbs().maxCoeff()});
  }
  // Linear in mu: error/mu stays bounded and the last two rates agree to 10%.
  const double r3 = l.table[2].error / l.table[2].mu;
  const double r4 = l.table[3].error / l.table[3].mu;
  const double tiny = 1e-9 * std::max(1.0, l.mu_to_zero.cwiseAbs().maxCoeff());
  l.linear_convergence =
      l.table[3].error <= tiny || std::abs(r3 - r4) <= 0.1 * std::max(r3, r4);
  return l;
}

bool form_leq(const Eigen::MatrixXd& lower, const Eigen::MatrixXd& upper) {
  const Eigen::MatrixXd d = symmetrize(upper - lower);
  const double scale = std::max({1.0, lower.cwiseAbs().maxCoeff(), upper.cwiseAbs().maxCoeff()});
  return min_eigenvalue(d) >= -1e-10 * scale;
}

}  // namespace proxlab::quad

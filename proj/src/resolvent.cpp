#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "proxlab/transforms.hpp"

namespace proxlab {

namespace {

constexpr double kRootTol = 1e-9;

// Real roots of c0 + c1 t + ... (ascending), refined by Newton steps.
std::vector<double> real_roots(std::vector<double> c) {
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  const std::size_t d = c.size() - 1;
  std::vector<double> roots;
  if (d == 0) return roots;
  if (d == 1) return {-c[0] / c[1]};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 1; i < d; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < d; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 1)) = -c[i] / c[d];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  const Polynomial p(c);
  const Polynomial dp = p.derivative();
  double scale = 0.0;
  for (double t : c) scale = std::max(scale, std::abs(t));
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const std::complex<double> z = es.eigenvalues()(i);
    if (std::abs(z.imag()) > 1e-6 * std::max(1.0, std::abs(z))) continue;
    double t = z.real();
    for (int it = 0; it < 8; ++it) {
      const double g = dp(t);
      if (g == 0.0) break;
      t -= p(t) / g;
    }
    if (std::abs(p(t)) <= 1e-9 * scale * std::max(1.0, std::pow(std::abs(t), static_cast<double>(d))))
      roots.push_back(t);
  }
  return roots;
}

void require_continuous(const Piecewise1D& f) {
  for (const auto& p : f.pieces())
    if (!p) throw std::invalid_argument("resolvent_1d: pieces must be finite (locally Lipschitz f)");
  for (std::size_t k = 0; k < f.breakpoints().size(); ++k) {
    const double l = f.left_limit(k).value(), r = f.right_limit(k).value();
    const double tol = 1e-12 * std::max(1.0, std::abs(l));
    if (std::abs(l - r) > tol || (f.point_values()[k] && *f.point_values()[k] < std::min(l, r) - tol))
      throw std::invalid_argument("resolvent_1d: f must be continuous");
  }
}

void add_point(std::vector<Cluster>& out, double w) {
  for (const Cluster& c : out)
    if (w >= c.lo[0] - kRootTol && w <= c.hi[0] + kRootTol) return;
  out.push_back({{w}, {w}, {w}, 1, false});
}

}  // namespace

MinimizerSet resolvent_1d(const Piecewise1D& f, double mu, double x) {
  if (!(mu > 0.0)) throw std::invalid_argument("resolvent_1d: mu must be positive");
  require_continuous(f);
  const std::vector<double>& b = f.breakpoints();
  std::vector<Cluster> out;

  // Breakpoints: x - b in mu * d_L f(b).
  for (std::size_t k = 0; k < b.size(); ++k) {
    const double dl = f.pieces()[k]->derivative()(b[k]);
    const double dr = f.pieces()[k + 1]->derivative()(b[k]);
    const double t = x - b[k];
    const double slack = kRootTol * std::max(1.0, std::abs(t));
    bool hit;
    if (dl <= dr) hit = t >= mu * dl - slack && t <= mu * dr + slack;
    else hit = std::abs(t - mu * dl) <= slack || std::abs(t - mu * dr) <= slack;
    if (hit) add_point(out, b[k]);
  }

  // Smooth parts: w + mu p'(w) - x = 0 inside each open piece.
  for (std::size_t k = 0; k < f.pieces().size(); ++k) {
    const double lo = k == 0 ? -kInf : b[k - 1];
    const double hi = k == b.size() ? kInf : b[k];
    std::vector<double> c = f.pieces()[k]->derivative().coefficients();
    for (double& t : c) t *= mu;
    c.resize(std::max<std::size_t>(c.size(), 2), 0.0);
    c[0] -= x;
    c[1] += 1.0;
    double scale = 0.0;
    for (double t : c) scale = std::max(scale, std::abs(t));
    if (scale <= 1e-14 * std::max(1.0, std::abs(x))) {
      if (!std::isfinite(lo) || !std::isfinite(hi))
        throw std::invalid_argument("resolvent_1d: resolvent contains an unbounded interval");
      out.erase(std::remove_if(out.begin(), out.end(),
                               [&](const Cluster& cl) { return cl.lo[0] >= lo && cl.hi[0] <= hi; }),
                out.end());
      out.push_back({{lo}, {lo}, {hi}, 0, false});
      continue;
    }
    for (double w : real_roots(c))
      if (w > lo && w < hi) add_point(out, w);
  }

  MinimizerSet ms;
  ms.tolerance = kRootTol;
  std::sort(out.begin(), out.end(),
            [](const Cluster& a, const Cluster& c) { return a.representative < c.representative; });
  ms.clusters = std::move(out);
  for (const Cluster& c : ms.clusters)
    ms.attained_value = min(ms.attained_value,
                            f(c.representative[0]) + ExtReal(0.5 / mu * (c.representative[0] - x) *
                                                             (c.representative[0] - x)));
  return ms;
}

}  // namespace proxlab

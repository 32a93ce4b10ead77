#include <cmath>

#include "doctest.h"

#include "proxlab/errors.hpp"
#include "proxlab/function_model.hpp"
#include "proxlab/prox_average.hpp"

using namespace proxlab;

namespace {

const GridSpec kLine = GridSpec::line(-3.0, 3.0, 601);

GridFunction s(const FunctionDescriptor& d) { return sample_to_grid(d, kLine); }

}  // namespace

TEST_SUITE("prox_average") {

TEST_CASE("average of two quadratics matches q with a3/mu") {
  const GridFunction q2 = s(fixtures::scalar_quadratic(2.0)), q1 = s(fixtures::scalar_quadratic(1.0));
  const AverageResult r = proximal_average(q2, q1, AverageParams::for_inputs(q2, q1, 0.5, 1.0));
  // prox slopes 1/3, 1/2 -> 5/12; phi = q_{7/5}
  for (std::size_t i = 0; i < kLine.size(); ++i) {
    if (r.phi.flagged(i)) continue;
    const double x = kLine.coord(i, 0);
    CHECK(std::abs(r.phi[i].value() - 0.7 * x * x) <= 1e-3);
  }
  const AverageProx p = prox_of_average(q2, q1, AverageParams::for_inputs(q2, q1, 0.5, 1.0), {1.0});
  REQUIRE(p.prox.single_valued());
  CHECK(p.prox.clusters[0].representative[0] == doctest::Approx(5.0 / 12.0).epsilon(0.01));
  REQUIRE(p.combination_hull);
  CHECK(p.combination_hull->lo == doctest::Approx(5.0 / 12.0).epsilon(0.01));
}

TEST_CASE("alpha endpoints are the proximal hulls") {
  const GridFunction f = s(fixtures::fk(0.5)), g = s(fixtures::double_well());
  const AverageResult a0 = proximal_average(f, g, AverageParams::for_inputs(f, g, 0.0, 0.4));
  const AverageResult a1 = proximal_average(f, g, AverageParams::for_inputs(f, g, 1.0, 0.4));
  const GridFunction hg = proximal_hull(g, 0.4), hf = proximal_hull(f, 0.4);
  for (std::size_t i = 0; i < kLine.size(); ++i) {
    CHECK(a0.phi[i].value() == hg[i].value());
    CHECK(a1.phi[i].value() == hf[i].value());
  }
}

TEST_CASE("the result is mu-proximal and carries the threshold") {
  const GridFunction f = s(fixtures::fk(0.3)), g = s(fixtures::fk(0.7));
  const AverageResult r = proximal_average(f, g, AverageParams::for_inputs(f, g, 0.3, 0.25));
  CHECK(is_lambda_proximal(r.phi, 0.25).convex);
  CHECK(r.route == AverageRoute::definition);
  CHECK(std::isinf(r.phi.threshold()));
}

TEST_CASE("parameter validation") {
  const GridFunction qm = s(fixtures::scalar_quadratic(-1.0)), q = s(fixtures::scalar_quadratic(1.0));
  CHECK_THROWS_AS(proximal_average(qm, q, AverageParams::for_inputs(qm, q, 0.5, 1.0)), MuAboveThreshold);
  CHECK_THROWS_AS(proximal_average(qm, q, AverageParams::for_inputs(qm, q, 1.5, 0.5)), std::invalid_argument);
  CHECK_THROWS_AS(proximal_average_infconv(qm, q, AverageParams::for_inputs(qm, q, 1.0, 0.5)), AlphaEndpoint);
  const GridFunction other = sample_to_grid(fixtures::zero(), GridSpec::line(-3, 3, 11));
  CHECK_THROWS_AS(proximal_average(q, other, AverageParams::for_inputs(q, other, 0.5, 0.5)), GridMismatch);
}

TEST_CASE("definition and inf-convolution routes agree away from flagged nodes") {
  const GridFunction f = s(fixtures::fk(0.3)), g = s(fixtures::scalar_quadratic(1.0));
  const AverageParams p = AverageParams::for_inputs(f, g, 0.4, 0.25);
  const AverageResult a = proximal_average(f, g, p), b = proximal_average_infconv(f, g, p);
  double worst = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < kLine.size(); ++i) {
    if (a.phi.flagged(i) || b.phi.flagged(i)) continue;
    ++used;
    worst = std::max(worst, std::abs(a.phi[i].value() - b.phi[i].value()));
  }
  CHECK(used > 300);
  CHECK(worst <= 2e-3);
}

TEST_CASE("prox of the average of fk pair at 0 is the full interval") {
  const GridFunction f = s(fixtures::fk(0.3)), g = s(fixtures::fk(0.7));
  const AverageProx p = prox_of_average(f, g, AverageParams::for_inputs(f, g, 0.5, 0.5), {0.0});
  const Interval h = p.prox.hull();
  CHECK(h.lo == doctest::Approx(-1.0).epsilon(0.01));
  CHECK(h.hi == doctest::Approx(1.0).epsilon(0.01));
  CHECK(hausdorff(h, *p.combination_hull) <= kLine.max_spacing());
}

TEST_CASE("sweeps are ordered and validated") {
  const GridFunction f = s(fixtures::fk(0.3)), g = s(fixtures::double_well());
  const auto rs = alpha_sweep(f, g, 0.25, {0.0, 0.5, 1.0});
  CHECK(rs.size() == 3);
  CHECK(rs[1].alpha == 0.5);
  CHECK_THROWS_AS(alpha_sweep(f, g, 0.25, {0.5, 0.0}), std::invalid_argument);
  const auto ms = mu_sweep(f, g, 0.5, {0.1, 0.2});
  // decreasing in mu
  for (std::size_t i = 0; i < kLine.size(); ++i) CHECK(ms[1].phi[i].value() <= ms[0].phi[i].value() + 1e-9);
}

TEST_CASE("2-D average of quadratics") {
  const GridSpec plane = GridSpec::plane({-2, 2, 21}, {-2, 2, 21});
  Eigen::MatrixXd a1(2, 2), a2(2, 2);
  a1 << 2.0, 0.0, 0.0, 1.0;
  a2 << 1.0, 0.5, 0.5, 1.0;
  const GridFunction f = sample_to_grid(fixtures::quadratic(a1), plane);
  const GridFunction g = sample_to_grid(fixtures::quadratic(a2), plane);
  const double mu = 0.5;
  const AverageResult r = proximal_average(f, g, AverageParams::for_inputs(f, g, 0.5, mu));
  // oracle: phi = q_M, M = ([a P1 + (1-a) P2]^{-1} - Id) / mu, P_i = (mu A_i + Id)^{-1}
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  const Eigen::MatrixXd p = 0.5 * (mu * a1 + id).inverse() + 0.5 * (mu * a2 + id).inverse();
  const Eigen::MatrixXd m = (p.inverse() - id) / mu;
  for (std::size_t i = 0; i < plane.size(); ++i) {
    const double x = plane.coord(i, 0), y = plane.coord(i, 1);
    if (std::max(std::abs(x), std::abs(y)) > 1.0 + 1e-12) continue;
    const Eigen::Vector2d v(x, y);
    CHECK(std::abs(r.phi[i].value() - 0.5 * v.dot(m * v)) <= 0.05);
  }
}

}  // TEST_SUITE

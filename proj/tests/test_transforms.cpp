#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"

#include "proxlab/errors.hpp"
#include "proxlab/function_model.hpp"
#include "proxlab/transforms.hpp"

using namespace proxlab;

namespace {

// Brute-force envelope straight from the definition.
std::vector<double> naive_envelope(const GridFunction& f, double lam) {
  const GridSpec& s = f.spec();
  std::vector<double> out(s.size(), kInf);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (f[j].is_infinite()) continue;
      double d = 0.0;
      for (std::size_t k = 0; k < s.dim(); ++k) d += std::pow(s.coord(i, k) - s.coord(j, k), 2);
      out[i] = std::min(out[i], f[j].value() + d / (2.0 * lam));
    }
  return out;
}

// Lower convex hull by Andrew's monotone chain, evaluated at the nodes.
std::vector<double> monotone_chain_hull(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<std::size_t> h;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isinf(y[i])) continue;
    while (h.size() >= 2) {
      const std::size_t a = h[h.size() - 2], b = h.back();
      const double cross = (x[b] - x[a]) * (y[i] - y[a]) - (y[b] - y[a]) * (x[i] - x[a]);
      if (cross <= 0.0) h.pop_back();
      else break;
    }
    h.push_back(i);
  }
  std::vector<double> out(x.size(), kInf);
  for (std::size_t k = 0; k + 1 < h.size(); ++k)
    for (std::size_t i = h[k]; i <= h[k + 1]; ++i) {
      const double t = (x[i] - x[h[k]]) / (x[h[k + 1]] - x[h[k]]);
      out[i] = (1 - t) * y[h[k]] + t * y[h[k + 1]];
    }
  if (h.size() == 1) out[h[0]] = y[h[0]];
  return out;
}

GridFunction line_fn(const FunctionDescriptor& d, std::size_t n = 601, double r = 3.0) {
  return sample_to_grid(d, GridSpec::line(-r, r, n));
}

}  // namespace

TEST_SUITE("transforms") {

TEST_CASE("envelope equals the brute-force scan, 1-D and 2-D") {
  const GridFunction f = line_fn(fixtures::fk(0.5), 121);
  const auto e = moreau_envelope(f, 0.5);
  const auto oracle = naive_envelope(f, 0.5);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(e[i].value() == doctest::Approx(oracle[i]).epsilon(1e-14));

  Eigen::MatrixXd a(2, 2);
  a << 1.0, 0.5, 0.5, -0.5;
  const GridSpec plane = GridSpec::plane({-2, 2, 21}, {-2, 2, 17});
  const GridFunction q = sample_to_grid(fixtures::quadratic(a), plane);
  const auto e2 = moreau_envelope(q, 0.3);
  const auto o2 = naive_envelope(q, 0.3);
  for (std::size_t i = 0; i < q.size(); ++i) CHECK(e2[i].value() == doctest::Approx(o2[i]).epsilon(1e-14));
}

TEST_CASE("envelope of fk at lambda 1/2 follows the closed form") {
  const GridFunction f = line_fn(fixtures::fk(0.3), 1201);
  const auto e = moreau_envelope(f, 0.5);
  const double h = f.spec().axis(0).spacing();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = f.spec().coord(i, 0);
    const double exact = std::abs(x) >= 1.0 ? 0.0 : (1.0 - std::abs(x)) * (1.0 - std::abs(x));
    CHECK(std::abs(e[i].value() - exact) <= 2 * h * h);
  }
}

TEST_CASE("lambda at or above the threshold is rejected") {
  const GridFunction q = line_fn(fixtures::scalar_quadratic(-2.0), 61);
  CHECK_THROWS_AS(moreau_envelope(q, 0.5), LambdaAboveThreshold);
  CHECK_NOTHROW(moreau_envelope(q, 0.49));
  CHECK_THROWS_AS(lasry_lions(q, 0.3, 0.4), ParameterOrder);
}

TEST_CASE("prox map: two-point set of fk at 0 and single points elsewhere") {
  const GridFunction f = line_fn(fixtures::fk(0.5), 601);
  const MinimizerSet p0 = prox_map(f, 0.5, {0.0});
  REQUIRE(p0.clusters.size() == 2);
  CHECK(p0.clusters[0].representative[0] == doctest::Approx(-1.0));
  CHECK(p0.clusters[1].representative[0] == doctest::Approx(1.0));
  CHECK(prox_map(f, 0.5, {0.4}).points() == std::vector<Point>{{1.0}});
  CHECK(prox_map(f, 0.5, {-2.0}).points() == std::vector<Point>{{-2.0}});
}

TEST_CASE("prox of a quadratic lands between nodes at the parabola vertex") {
  const GridFunction q = line_fn(fixtures::scalar_quadratic(1.0), 601);
  const MinimizerSet p = prox_map(q, 0.7, {1.003});
  REQUIRE(p.single_valued());
  CHECK(p.clusters[0].representative[0] == doctest::Approx(1.003 / 1.7).epsilon(1e-6));
}

TEST_CASE("plateau argmin is reported as an interval") {
  const GridFunction f = line_fn(fixtures::indicator_interval(-1.0, 1.0), 601);
  const MinimizerSet m = grid_argmin(f, 1e-9);
  REQUIRE(m.clusters.size() == 1);
  CHECK(m.hull().lo == doctest::Approx(-1.0));
  CHECK(m.hull().hi == doctest::Approx(1.0));
}

TEST_CASE("proximal hull: fixed on proximal functions, below f, idempotent") {
  const GridFunction fk = line_fn(fixtures::fk(0.5), 301);
  // fk(0.5) is 1/3-proximal
  const GridFunction h = proximal_hull(fk, 0.25);
  for (std::size_t i = 0; i < fk.size(); ++i) CHECK(h[i].value() == doctest::Approx(fk[i].value()).epsilon(1e-12));
  // not 1/2-proximal: the hull sits strictly below near 0
  const GridFunction h2 = proximal_hull(fk, 0.5);
  const std::size_t mid = 150;
  CHECK(h2[mid].value() < fk[mid].value() - 0.1);
  for (std::size_t i = 0; i < fk.size(); ++i) CHECK(h2[i].value() <= fk[i].value() + 1e-12);
  const GridFunction hh = proximal_hull(h2, 0.5);
  for (std::size_t i = 0; i < fk.size(); ++i) CHECK(hh[i].value() == doctest::Approx(h2[i].value()).epsilon(1e-12));
  // e(hf) = ef
  const GridFunction e1 = moreau_envelope(fk, 0.5), e2 = moreau_envelope(h2, 0.5);
  for (std::size_t i = 0; i < fk.size(); ++i) CHECK(e1[i].value() == doctest::Approx(e2[i].value()).epsilon(1e-12));
}

TEST_CASE("Lasry-Lions envelope lies between e_lam f and f") {
  const GridFunction f = line_fn(fixtures::double_well(), 301);
  const GridFunction ll = lasry_lions(f, 0.4, 0.2);
  const GridFunction e = moreau_envelope(f, 0.4);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(ll[i].value() >= e[i].value() - 1e-12);
    CHECK(ll[i].value() <= f[i].value() + 1e-12);
  }
}

TEST_CASE("convex hull agrees with the monotone chain") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const GridSpec line = GridSpec::line(-2.0, 2.0, 81);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < line.size(); ++i) {
      x.push_back(line.coord(i, 0));
      y.push_back(x.back() * x.back() * 0.3 + u(rng));
    }
    if (rep == 4) y[0] = y[80] = kInf;
    const GridFunction f = make_grid_function(line, y);
    const GridFunction c = convex_hull_grid(f);
    const auto oracle = monotone_chain_hull(x, y);
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (std::isinf(oracle[i])) {
        CHECK(c[i].is_infinite());
      } else {
        CHECK(c[i].value() == doctest::Approx(oracle[i]).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("conjugate: linear-time and naive routes agree, and q_1 is self-conjugate") {
  const GridFunction q = line_fn(fixtures::scalar_quadratic(1.0), 401, 2.0);
  const GridSpec dual = GridSpec::line(-1.5, 1.5, 31);
  const GridFunction a = discrete_conjugate(q, dual, ConjugateMethod::naive);
  const GridFunction b = discrete_conjugate(q, dual, ConjugateMethod::linear_time);
  const double h = q.spec().axis(0).spacing();
  for (std::size_t i = 0; i < dual.size(); ++i) {
    CHECK(a[i].value() == doctest::Approx(b[i].value()).epsilon(1e-12));
    const double s = dual.coord(i, 0);
    CHECK(std::abs(a[i].value() - 0.5 * s * s) <= h * h);
  }
}

TEST_CASE("2-D convex hull of a nonconvex function lies below it and is convex on lines") {
  const GridSpec plane = GridSpec::plane({-2, 2, 21}, {-2, 2, 21});
  std::vector<double> v;
  for (std::size_t i = 0; i < plane.size(); ++i) {
    const double x = plane.coord(i, 0), y = plane.coord(i, 1);
    v.push_back(std::min((x - 1) * (x - 1), (x + 1) * (x + 1)) + y * y);
  }
  const GridFunction f = make_grid_function(plane, v);
  const GridFunction c = convex_hull_grid(f);
  for (std::size_t i = 0; i < plane.size(); ++i) CHECK(c[i].value() <= f[i].value() + 1e-9);
  CHECK(convexity_check(c, 0.0).convex);
  // the hull fills in the double well along x with y = 0
  CHECK(c[plane.flatten(10, 10)].value() == doctest::Approx(0.0).epsilon(0.05));
}

TEST_CASE("inf-convolution matches the brute force and reports witnesses") {
  const GridSpec line = GridSpec::line(-2.0, 2.0, 41);
  const GridFunction f = sample_to_grid(fixtures::scalar_quadratic(1.0), line);
  const GridFunction g = sample_to_grid(fixtures::indicator_interval(-0.5, 0.5), line);
  const InfConvolution ic = inf_convolution(f, g);
  for (std::size_t x = 0; x < line.size(); ++x) {
    double best = kInf;
    for (std::size_t w = 0; w < line.size(); ++w) {
      const double d = line.coord(x, 0) - line.coord(w, 0);
      if (g[w].is_infinite() || std::abs(d) > 2.0 + 1e-12) continue;
      best = std::min(best, 0.5 * d * d);
    }
    CHECK(ic.value[x].value() == doctest::Approx(best).epsilon(1e-12));
  }
  CHECK_THROWS_AS(inf_convolution(sample_to_grid(fixtures::zero(), GridSpec::line(0.05, 1, 5)),
                                  sample_to_grid(fixtures::zero(), GridSpec::line(0.05, 1, 5))),
                  GridMismatch);
}

TEST_CASE("proximality check finds the chord witness") {
  const GridFunction fk = line_fn(fixtures::fk(0.5), 601);
  const ConvexityReport bad = is_lambda_proximal(fk, 0.5);
  CHECK_FALSE(bad.convex);
  CHECK(bad.witness.size() == 3);
  CHECK(is_lambda_proximal(fk, 0.33).convex);
}

TEST_CASE("resolvent of fk contains the prox and is larger at mu = 1/2") {
  const Piecewise1D f = resolve_builtin({"fk", 0.5, 0.0});
  const MinimizerSet r = resolvent_1d(f, 0.5, 0.25);
  // (Id + mu dL f)^{-1}(x): -1, -x/eps, 1 for |x| <= eps
  std::vector<double> got;
  for (const Cluster& c : r.clusters) got.push_back(c.representative[0]);
  REQUIRE(got.size() == 3);
  CHECK(got[0] == doctest::Approx(-1.0));
  CHECK(got[1] == doctest::Approx(-0.5));
  CHECK(got[2] == doctest::Approx(1.0));
  // prox is the single point 1
  const GridFunction g = line_fn(fixtures::fk(0.5), 601);
  CHECK(prox_map(g, 0.5, {0.25}).points() == std::vector<Point>{{1.0}});
  // outside [-eps, eps] the resolvent is single valued
  const MinimizerSet r2 = resolvent_1d(f, 0.5, 0.8);
  REQUIRE(r2.clusters.size() == 1);
  CHECK(r2.clusters[0].representative[0] == doctest::Approx(1.0));
}

TEST_CASE("resolvent of a quadratic is the linear solve") {
  const Piecewise1D q({}, {Polynomial({0.0, 0.0, 1.5})});
  const MinimizerSet r = resolvent_1d(q, 0.4, 2.0);
  REQUIRE(r.clusters.size() == 1);
  CHECK(r.clusters[0].representative[0] == doctest::Approx(2.0 / (1.0 + 0.4 * 3.0)));
  CHECK_THROWS_AS(resolvent_1d(resolve_builtin({"indicator_point", 0.5, 0.0}), 0.5, 0.0),
                  std::invalid_argument);
}

TEST_CASE("Clarke subdifferential of the envelope is (x - conv Prox)/mu") {
  const GridFunction f = line_fn(fixtures::fk(0.5), 601);
  const Interval i = clarke_subdiff_envelope(f, 0.5, {0.0});
  CHECK(i.lo == doctest::Approx(-2.0));
  CHECK(i.hi == doctest::Approx(2.0));
}

TEST_CASE("Lipschitz probe of a proximal function") {
  const GridFunction f = line_fn(fixtures::fk(0.5), 601);
  const LipschitzProbe p = prox_lipschitz_probe(f, 0.25);
  CHECK(p.consistent);
  CHECK(p.kappa == doctest::Approx(4.0).epsilon(0.05));
  CHECK_FALSE(prox_lipschitz_probe(f, 0.5).consistent);
}

}  // TEST_SUITE

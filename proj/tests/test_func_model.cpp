#include <cmath>

#include "doctest.h"

#include "proxlab/errors.hpp"
#include "proxlab/function_model.hpp"

using namespace proxlab;

TEST_SUITE("func_model") {

TEST_CASE("polynomial evaluation and derivative") {
  const Polynomial p({1.0, -2.0, 0.0, 3.0});
  CHECK(p(2.0) == doctest::Approx(1.0 - 4.0 + 24.0));
  CHECK(p.derivative()(2.0) == doctest::Approx(-2.0 + 36.0));
  CHECK(p.degree() == 3);
  CHECK_THROWS_AS(Polynomial({0, 0, 0, 0, 0, 1}), DegreeTooHigh);
}

TEST_CASE("fk fixture values and lower semicontinuity at breakpoints") {
  const Piecewise1D f = resolve_builtin({"fk", 0.5, 0.0});
  for (double x : {-2.0, -1.0, -0.3, 0.0, 0.7, 1.0, 2.5}) {
    const double expect = std::max(0.0, 1.5 * (1.0 - x * x));
    CHECK(f(x).value() == doctest::Approx(expect));
  }
  // indicator of a point: +inf off the point, 0 on it
  const Piecewise1D ind = resolve_builtin({"indicator_point", 0.5, 0.25});
  CHECK(ind(0.25).value() == 0.0);
  CHECK(ind(0.3).is_infinite());
}

TEST_CASE("section10 fixture matches its formula") {
  const Piecewise1D g = resolve_builtin({"section10_g"});
  auto oracle = [](double x) {
    if (x > 1.0 || x <= -1.0) return 0.0;
    if (x > 0.0) return -x * (x - 1.0) - x * x + 1.0;
    return -x * (x + 1.0) - x * x + 1.0;
  };
  for (double x = -1.5; x <= 1.5; x += 0.125) CHECK(g(x).value() == doctest::Approx(oracle(x)));
}

TEST_CASE("prox thresholds") {
  CHECK(prox_threshold(fixtures::fk(0.3)).value == kInf);
  CHECK(prox_threshold(fixtures::scalar_quadratic(-2.0)).value == doctest::Approx(0.5));
  CHECK(prox_threshold(fixtures::neg_half_sq()).value == doctest::Approx(1.0));
  Eigen::MatrixXd a(2, 2);
  a << 1.0, 0.0, 0.0, -4.0;
  CHECK(prox_threshold(fixtures::quadratic(a)).value == doctest::Approx(0.25));
  // cubic tail decreasing to -inf
  const FunctionDescriptor cubic{Piecewise1D({}, {Polynomial({0, 0, 0, 1})}), std::nullopt};
  CHECK_THROWS_AS(prox_threshold(cubic), NotProxBounded);
  // a declared value can only lower the threshold
  FunctionDescriptor q = fixtures::scalar_quadratic(1.0);
  q.declared_threshold = 3.0;
  CHECK(prox_threshold(q).value == doctest::Approx(3.0));
}

TEST_CASE("descriptor parsing and round trip") {
  const char* text =
      "kind: piecewise1d\n"
      "breakpoints: [-1, 1]\n"
      "pieces: [inf, [0, 0, 1], inf]\n"
      "declared_threshold: auto\n";
  const FunctionDescriptor d = parse_descriptor(text);
  CHECK(d.kind() == "piecewise1d");
  CHECK(evaluate(d, {0.5}).value() == doctest::Approx(0.25));
  CHECK(evaluate(d, {1.5}).is_infinite());
  CHECK(parse_descriptor(serialize_descriptor(d)) == d);

  const FunctionDescriptor b = parse_descriptor("kind: builtin\nname: fk\neps: 0.7\n");
  CHECK(parse_descriptor(serialize_descriptor(b)) == b);
  const FunctionDescriptor q = parse_descriptor("kind: quadratic\nA: [[2, 1], [1, 3]]\n");
  CHECK(q.dim() == 2);
  CHECK(evaluate(q, {1.0, 1.0}).value() == doctest::Approx(3.5));
  CHECK(parse_descriptor(serialize_descriptor(q)) == q);
}

TEST_CASE("descriptor errors carry positions") {
  CHECK_THROWS_AS(parse_descriptor("kind: builtin\nname: nope\n"), UnknownBuiltin);
  CHECK_THROWS_AS(parse_descriptor("kind: piecewise1d\npieces: [[1,2,3,4,5,6]]\n"), DegreeTooHigh);
  try {
    parse_descriptor("kind: quadratic\nA: [[1, x]]\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_descriptor("kind: wrong\n"), ParseError);
}

TEST_CASE("sampling records the threshold and rejects all-infinite functions") {
  const GridSpec line = GridSpec::line(-3.0, 3.0, 61);
  const GridFunction q = sample_to_grid(fixtures::scalar_quadratic(-1.0), line);
  CHECK(q.threshold() == doctest::Approx(1.0));
  CHECK_FALSE(q.threshold_is_heuristic());
  CHECK_THROWS_AS(sample_to_grid(fixtures::indicator_point(0.05), line), AllInfinite);
  // on the grid the point is a node
  CHECK(sample_to_grid(fixtures::indicator_point(0.0), line).flagged_count() == 0);
}

TEST_CASE("sampled functions interpolate and carry a heuristic threshold") {
  const GridSpec line = GridSpec::line(0.0, 1.0, 3);
  const GridFunction s = make_grid_function(line, std::vector<double>{0.0, 1.0, 4.0});
  const FunctionDescriptor d{SampledFunction{s}, std::nullopt};
  CHECK(evaluate(d, {0.25}).value() == doctest::Approx(0.5));
  CHECK(evaluate(d, {1.5}).is_infinite());
  CHECK(prox_threshold(d).heuristic);
}

TEST_CASE("format_double is shortest round trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(kInf) == "inf");
  const double v = 1.0 / 3.0;
  CHECK(std::stod(format_double(v)) == v);
}

}  // TEST_SUITE

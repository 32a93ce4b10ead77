#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "json.hpp"

#include "proxlab/diagnostics.hpp"
#include "proxlab/function_model.hpp"

using namespace proxlab;

namespace {

const GridSpec kLine = GridSpec::line(-3.0, 3.0, 601);

GridFunction s(const FunctionDescriptor& d, const std::string& name) { return sample_to_grid(d, kLine, name); }

}  // namespace

TEST_SUITE("diagnostics") {

TEST_CASE("report serializes to one JSON object with the schema fields") {
  diag::CheckReport r;
  r.check_id = "sandwich";
  r.passed = true;
  r.max_violation = 0.25;
  r.witness = {1.0};
  r.tolerance_used = kInf;
  const std::string line = diag::to_json_line(r);
  CHECK(line.find('\n') == std::string::npos);
  const auto j = nlohmann::json::parse(line);
  for (const char* key : {"check_id", "passed", "max_violation", "witness", "tolerance_used", "nodes_excluded"})
    CHECK(j.contains(key));
  CHECK(j["tolerance_used"] == "inf");
  CHECK(j["witness"][0] == 1.0);
}

TEST_CASE("calibrated envelope error shrinks like h^2") {
  const double e1 = diag::envelope_grid_error(GridSpec::line(-3, 3, 301), 0.25);
  const double e2 = diag::envelope_grid_error(GridSpec::line(-3, 3, 601), 0.25);
  CHECK(e1 > 0.0);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.3));
}

TEST_CASE("identity, sandwich and prox combination on the fk pair") {
  const GridFunction f = s(fixtures::fk(0.3), "fk3"), g = s(fixtures::fk(0.7), "fk7");
  const AverageParams p = AverageParams::for_inputs(f, g, 0.3, 0.25);
  CHECK(diag::check_envelope_identity(f, g, p).passed);
  CHECK(diag::check_sandwich(f, g, p).passed);
  std::vector<Point> xs;
  for (int k = -5; k <= 5; ++k) xs.push_back({0.3 * k});
  const diag::CheckReport pc = diag::check_prox_combination(f, g, p, xs);
  CHECK(pc.passed);
  CHECK(pc.max_violation <= kLine.max_spacing());
}

TEST_CASE("mu monotonicity and alpha checks") {
  const GridFunction f = s(fixtures::fk(0.3), "fk3"), g = s(fixtures::double_well(), "dw");
  CHECK(diag::check_mu_monotonicity(f, g, 0.4, {0.05, 0.1, 0.3}).passed);
  CHECK(diag::check_alpha_endpoints(f, g, 0.2).passed);
  CHECK(diag::check_alpha_continuity(f, g, 0.2, {0.0, 0.25, 0.5, 0.75, 1.0}).passed);
}

TEST_CASE("mu to zero limit: decreasing errors, bound enforced") {
  const GridFunction f = s(fixtures::fk(0.3), "fk3"), g = s(fixtures::double_well(), "dw");
  const diag::CheckReport loose = diag::check_mu_zero_limit(f, g, 0.5, {0.2, 0.1, 0.05}, 0.2);
  CHECK(loose.passed);
  CHECK(loose.note.find("proxy") != std::string::npos);
  CHECK_FALSE(diag::check_mu_zero_limit(f, g, 0.5, {0.2, 0.1, 0.05}, 1e-3).passed);
}

TEST_CASE("infimum, shifted argmin and coercivity") {
  const GridFunction f = s(fixtures::indicator_interval(-1.0, 1.0), "ind"), g = s(fixtures::scalar_quadratic(1.0), "q1");
  const AverageParams p = AverageParams::for_inputs(f, g, 0.5, 0.25);
  const diag::CheckReport inf = diag::check_infimum_formulas(f, g, p);
  CHECK(inf.passed);
  CHECK(inf.note.find("meet") != std::string::npos);
  CHECK(diag::check_shifted_argmin(f, g, p).passed);
  CHECK(diag::check_coercivity_preservation(f, g, p).passed);
}

TEST_CASE("minimizers of an inf-convolution add") {
  const GridFunction ind = s(fixtures::indicator_interval(-1.0, 1.0), "ind"), dw = s(fixtures::double_well(), "dw");
  const diag::CheckReport r = diag::check_infconv_minimizer_lemma(ind, dw);
  CHECK(r.passed);
}

TEST_CASE("differentiability: smooth average passes, the hull of fk keeps its kink") {
  const GridFunction q2 = s(fixtures::scalar_quadratic(2.0), "q2"), fk = s(fixtures::fk(0.5), "fk");
  const double c = diag::lipschitz_gradient_bound(2.0, 0.5, 0.25);
  CHECK(c == doctest::Approx(8.0));
  std::vector<Point> xs;
  for (int k = -4; k <= 4; ++k) xs.push_back({0.3 * k});
  const AverageResult smooth = proximal_average(q2, fk, AverageParams::for_inputs(q2, fk, 0.5, 0.25));
  CHECK(diag::check_subdifferential(smooth, xs, c).passed);
  const AverageResult hull = proximal_average(q2, fk, AverageParams::for_inputs(q2, fk, 0.0, 0.25));
  const diag::CheckReport kink = diag::check_subdifferential(hull, xs, c);
  CHECK_FALSE(kink.passed);
  REQUIRE(kink.witness.size() == 1);
  CHECK(std::abs(std::abs(kink.witness[0]) - 1.0) <= kLine.max_spacing());
  CHECK(diag::check_lipschitz_gradient(q2, fk, AverageParams::for_inputs(q2, fk, 0.5, 0.25), 2.0).passed);
}

TEST_CASE("equivalent envelopes versus different ones") {
  const GridFunction f = s(fixtures::fk(0.3), "fk3"), g = s(fixtures::fk(0.7), "fk7");
  const GridFunction dw = s(fixtures::double_well(), "dw");
  CHECK(diag::check_envelope_equivalences(f, g, 0.5, 0.25, true).passed);
  const diag::CheckReport differ = diag::check_envelope_equivalences(f, dw, 0.5, 0.25, true);
  CHECK_FALSE(differ.passed);
  CHECK_FALSE(differ.witness.empty());
}

TEST_CASE("prox against resolvent") {
  const Piecewise1D f = resolve_builtin({"fk", 0.5, 0.0});
  const diag::CheckReport equal = diag::check_prox_vs_resolvent(f, kLine, 0.25, {-0.5, 0.0, 0.25, 0.9});
  CHECK(equal.passed);
  CHECK(equal.note.empty());
  const diag::CheckReport strict = diag::check_prox_vs_resolvent(f, kLine, 0.5, {0.25});
  CHECK(strict.passed);
  CHECK(strict.note.find("strict containment") != std::string::npos);
}

TEST_CASE("built-in suite covers every check id, in id order, and passes") {
  const std::vector<diag::CheckReport> rs = diag::builtin_suite();
  const auto& ids = diag::check_ids();
  for (const std::string& id : ids)
    CHECK(std::any_of(rs.begin(), rs.end(), [&](const diag::CheckReport& r) { return r.check_id == id; }));
  std::size_t last = 0;
  for (const auto& r : rs) {
    const auto rank = static_cast<std::size_t>(std::find(ids.begin(), ids.end(), r.check_id) - ids.begin());
    CHECK(rank >= last);
    last = rank;
    INFO(diag::to_json_line(r));
    CHECK(r.passed);
  }
}

}  // TEST_SUITE

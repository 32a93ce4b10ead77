#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#include "proxlab/function_model.hpp"
#include "proxlab/grid_io.hpp"

using namespace proxlab;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(PROXLAB_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) out.append(buf, n);
  const int status = pclose(p);
  return {WEXITSTATUS(status), out};
}

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / "proxlab_cli_test";
  fs::create_directories(d);
  return d;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("grid CSV and JSON round trip") {
  const GridSpec line = GridSpec::line(-1.0, 1.0, 5);
  const GridFunction f = make_grid_function(line, std::vector<double>{kInf, 0.1, 1.0 / 3.0, 2.0, kInf});
  for (Format fmt : {Format::csv, Format::json}) {
    const GridFunction back = read_grid(emit_grid(f, fmt), fmt);
    CHECK(back.spec() == f.spec());
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(back[i] == f[i]);
    CHECK(emit_grid(back, fmt) == emit_grid(f, fmt));
  }
  const GridSpec plane = GridSpec::plane({0, 1, 3}, {-1, 1, 3});
  const GridFunction g = make_grid_function(plane, std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9});
  const GridFunction g2 = read_grid(emit_grid(g, Format::csv), Format::csv);
  CHECK(g2.spec() == plane);
  CHECK(g2[3].value() == 4.0);
  CHECK_THROWS(read_grid("x,value\n0,1\n", Format::csv));
}

TEST_CASE("sweep output is long format") {
  const GridSpec line = GridSpec::line(0.0, 1.0, 3);
  const GridFunction f = make_grid_function(line, std::vector<double>{1.0, 2.0, 3.0});
  const std::string csv = sweep_emit({{0.5, f}}, Format::csv);
  CHECK(csv == "param,x,value\n0.5,0,1\n0.5,0.5,2\n0.5,1,3\n");
}

TEST_CASE("envelope command writes CSV and is deterministic") {
  const std::string fn = write_file("fk.fn", "kind: builtin\nname: fk\neps: 0.5\n");
  const Run a = run("envelope --fn " + fn + " --lam 0.5 --grid -3:3:7");
  CHECK(a.code == 0);
  CHECK(a.out == "x,value\n-3,0\n-2,0\n-1,0\n0,1\n1,0\n2,0\n3,0\n");
  const Run b = run("envelope --fn " + fn + " --lam 0.5 --grid -3:3:7");
  CHECK(a.out == b.out);
}

TEST_CASE("exit codes") {
  const std::string qm = write_file("qm.fn", "kind: quadratic\nA: [[-1]]\n");
  const std::string q1 = write_file("q1.fn", "kind: quadratic\nA: [[1]]\n");
  CHECK(run("average --f " + qm + " --g " + q1 + " --mu 2 --alpha 0.5 --grid -1:1:11").code == 3);
  const Run j = run("average --f " + qm + " --g " + q1 + " --mu 2 --alpha 0.5 --grid -1:1:11 --format json");
  CHECK(j.code == 3);
  CHECK(j.out.find("\"code\":3") != std::string::npos);
  CHECK(run("envelope --fn " + q1 + " --lam 0.5 --grid -1:1").code == 2);
  CHECK(run("nonsense").code == 2);
  CHECK(run("envelope --fn /nonexistent.fn --lam 0.5 --grid -1:1:3").code == 2);
  const std::string bad = write_file("bad.fn", "kind: builtin\nname: nope\n");
  CHECK(run("envelope --fn " + bad + " --lam 0.5 --grid -1:1:3").code == 2);
}

TEST_CASE("heuristic thresholds need --force") {
  const std::string sm = write_file("s.fn", "kind: samples\ngrid: [[-1, 1, 3]]\nvalues: [1, 0, 1]\n");
  CHECK(run("envelope --fn " + sm + " --lam 0.5 --grid -1:1:5").code == 3);
  CHECK(run("envelope --fn " + sm + " --lam 0.5 --grid -1:1:5 --force").code == 0);
}

TEST_CASE("average, prox, sweeps and quadratic commands") {
  const std::string q2 = write_file("q2.fn", "kind: quadratic\nA: [[2]]\n");
  const std::string q1 = write_file("q1.fn", "kind: quadratic\nA: [[1]]\n");
  const std::string fk = write_file("fk.fn", "kind: builtin\nname: fk\neps: 0.5\n");
  const std::string out = (scratch() / "avg.csv").string();
  CHECK(run("average --f " + q2 + " --g " + q1 + " --mu 0.25 --alpha 0.5 --grid -3:3:121 --out " + out).code == 0);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  const GridFunction phi = read_grid(ss.str(), Format::csv);
  CHECK(phi.size() == 121);

  const Run p = run("prox --fn " + fk + " --lam 0.5 --x 0 --grid -3:3:601");
  CHECK(p.code == 0);
  CHECK(p.out == "x,lo,hi,representative\n0,-1,-1,-1\n0,1,1,1\n");

  const Run sw = run("sweep-alpha --f " + q2 + " --g " + q1 + " --mu 0.25 --alphas 0,1 --grid -1:1:3");
  CHECK(sw.code == 0);
  CHECK(sw.out.rfind("param,x,value\n0,-1,", 0) == 0);
  CHECK(run("sweep-mu --f " + q2 + " --g " + q1 + " --alpha 0.5 --mus 0.1,0.2 --grid -1:1:3 --format json").code == 0);

  const Run q = run("quadratic --f " + q2 + " --g " + q1 + " --mu 1 --alpha 0.5");
  CHECK(q.code == 0);
  CHECK(q.out.find("prox,0,0,0.41666666666666") != std::string::npos);
}

TEST_CASE("verify writes one JSON report per line") {
  const Run v = run("verify --suite paper");
  CHECK(v.code == 0);
  std::istringstream lines(v.out);
  std::size_t n = 0;
  for (std::string line; std::getline(lines, line); ++n) CHECK(line.rfind("{\"check_id\":", 0) == 0);
  CHECK(n > 100);
  CHECK(run("verify --suite other").code == 2);
}

}  // TEST_SUITE

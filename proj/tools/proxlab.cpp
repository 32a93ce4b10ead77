#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "proxlab/diagnostics.hpp"
#include "proxlab/errors.hpp"
#include "proxlab/function_model.hpp"
#include "proxlab/grid_io.hpp"
#include "proxlab/prox_average.hpp"
#include "proxlab/quadratic.hpp"
#include "proxlab/transforms.hpp"

namespace {

using namespace proxlab;

enum Exit { ok = 0, check_failed = 1, usage = 2, domain = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string fn, f, g, out, format = "csv", suite;
  std::vector<std::string> grids;
  std::vector<std::string> xs;
  double lam = 0.0, mu = 0.0, alpha = 0.5;
  std::vector<double> alphas, mus;
  bool force = false;
};

Format format_of(const Options& o) { return o.format == "json" ? Format::json : Format::csv; }

GridSpec parse_grid(const std::vector<std::string>& specs) {
  if (specs.empty()) throw UsageError("--grid lo:hi:count is required");
  if (specs.size() > 2) throw UsageError("at most two --grid flags");
  std::vector<Axis> axes;
  for (const std::string& s : specs) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw UsageError("bad grid '" + s + "', expected lo:hi:count");
    try {
      std::size_t used = 0;
      const double lo = std::stod(parts[0], &used);
      const double hi = std::stod(parts[1]);
      const long n = std::stol(parts[2]);
      if (n < 2) throw UsageError("grid count must be at least 2");
      axes.push_back({lo, hi, static_cast<std::size_t>(n)});
    } catch (const std::logic_error&) {
      throw UsageError("bad grid '" + s + "', expected lo:hi:count");
    }
  }
  try {
    return GridSpec(std::move(axes));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GridFunction load(const std::string& path, const GridSpec& spec, const Options& o, const char* flag) {
  if (path.empty()) throw UsageError(std::string(flag) + " is required");
  const FunctionDescriptor d = parse_descriptor(read_file(path));
  GridFunction gf = sample_to_grid(d, spec, path);
  if (gf.threshold_is_heuristic() && !o.force)
    throw MathDomainError("the prox-threshold of '" + path +
                          "' is a heuristic estimate; pass declared_threshold or --force");
  return gf;
}

void write(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.out, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + o.out + "'");
  out << text;
}

Point parse_point(const std::string& s, std::size_t dim) {
  Point p;
  std::stringstream ss(s);
  try {
    for (std::string t; std::getline(ss, t, ',');) p.push_back(std::stod(t));
  } catch (const std::logic_error&) {
    throw UsageError("bad point '" + s + "'");
  }
  if (p.size() != dim) throw UsageError("point '" + s + "' needs " + std::to_string(dim) + " coordinates");
  return p;
}

// ---------------------------------------------------------------- commands

int cmd_transform(const std::string& which, const Options& o) {
  const GridSpec spec = parse_grid(o.grids);
  const GridFunction f = load(o.fn, spec, o, "--fn");
  GridFunction r = which == "envelope" ? moreau_envelope(f, o.lam)
                   : which == "hull"   ? proximal_hull(f, o.lam)
                                       : lasry_lions(f, o.lam, o.mu);
  write(o, emit_grid(r, format_of(o)));
  return ok;
}

int cmd_average(const Options& o) {
  const GridSpec spec = parse_grid(o.grids);
  const GridFunction f = load(o.f, spec, o, "--f"), g = load(o.g, spec, o, "--g");
  const AverageParams p = AverageParams::for_inputs(f, g, o.alpha, o.mu);
  const AverageResult def = proximal_average(f, g, p);
  write(o, emit_grid(def.phi, format_of(o)));

  if (p.alpha <= 0.0 || p.alpha >= 1.0) {
    std::cerr << "route agreement: inf-convolution route not defined at alpha = "
              << format_double(p.alpha) << "\n";
    return ok;
  }
  const AverageResult ic = proximal_average_infconv(f, g, p);
  double worst = 0.0;
  std::size_t used = 0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (def.phi.flagged(i) || ic.phi.flagged(i)) continue;
    const ExtReal a = def.phi[i], b = ic.phi[i];
    if (a.is_infinite() && b.is_infinite()) continue;
    ++used;
    worst = std::max(worst, a.is_infinite() || b.is_infinite() ? kInf : std::abs(a.value() - b.value()));
  }
  const double tol = 3.0 * diag::envelope_grid_error(spec, p.mu);
  std::cerr << "route agreement: max |definition - infconv| = " << format_double(worst) << " over "
            << used << " unflagged nodes (tolerance " << format_double(tol) << ", "
            << (worst <= tol ? "agree" : "DISAGREE") << ")\n";
  return ok;
}

int cmd_prox(const Options& o) {
  const GridSpec spec = parse_grid(o.grids);
  const GridFunction f = load(o.fn, spec, o, "--fn");
  if (o.xs.empty()) throw UsageError("prox needs at least one --x");
  nlohmann::json arr = nlohmann::json::array();
  std::string csv = spec.dim() == 1 ? "x,lo,hi,representative\n" : "x,y,lo_x,lo_y,hi_x,hi_y,rep_x,rep_y\n";
  for (const std::string& s : o.xs) {
    const Point x = parse_point(s, spec.dim());
    const MinimizerSet m = prox_map(f, o.lam, x);
    nlohmann::json clusters = nlohmann::json::array();
    for (const Cluster& c : m.clusters) {
      clusters.push_back({{"lo", c.lo}, {"hi", c.hi}, {"representative", c.representative},
                          {"nodes", c.nodes}, {"touches_edge", c.touches_edge}});
      auto join = [](const Point& p) {
        std::string t;
        for (double v : p) t += format_double(v) + ",";
        return t;
      };
      std::string row = join(x) + join(c.lo) + join(c.hi) + join(c.representative);
      row.back() = '\n';
      csv += row;
    }
    arr.push_back({{"x", x}, {"clusters", clusters}, {"value", m.attained_value.value()}});
  }
  write(o, format_of(o) == Format::json ? arr.dump() + "\n" : csv);
  return ok;
}

int cmd_sweep(bool alpha_sweep_mode, const Options& o) {
  const GridSpec spec = parse_grid(o.grids);
  const GridFunction f = load(o.f, spec, o, "--f"), g = load(o.g, spec, o, "--g");
  std::vector<SweepEntry> rows;
  if (alpha_sweep_mode) {
    if (o.alphas.empty()) throw UsageError("sweep-alpha needs --alphas");
    const auto rs = alpha_sweep(f, g, o.mu, o.alphas);
    for (const auto& r : rs) rows.push_back({r.alpha, r.phi});
  } else {
    if (o.mus.empty()) throw UsageError("sweep-mu needs --mus");
    const auto rs = mu_sweep(f, g, o.alpha, o.mus);
    for (const auto& r : rs) rows.push_back({r.mu, r.phi});
  }
  write(o, sweep_emit(rows, format_of(o)));
  return ok;
}

Eigen::MatrixXd quadratic_matrix(const std::string& path, const char* flag) {
  if (path.empty()) throw UsageError(std::string(flag) + " is required");
  const FunctionDescriptor d = parse_descriptor(read_file(path));
  const auto* q = std::get_if<QuadraticFunction>(&d.payload);
  if (!q) throw UsageError(std::string(flag) + ": the quadratic command needs kind: quadratic");
  return q->matrix();
}

int cmd_quadratic(const Options& o) {
  const Eigen::MatrixXd a1 = quadratic_matrix(o.f, "--f"), a2 = quadratic_matrix(o.g, "--g");
  if (a1.rows() != a2.rows()) throw UsageError("--f and --g must have the same dimension");
  const quad::AverageMatrices m = quad::prox_average(a1, a2, o.alpha, o.mu);
  const quad::Limits lim = quad::limits(a1, a2, o.alpha);
  auto mat = [](const Eigen::MatrixXd& a) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      std::vector<double> r;
      for (Eigen::Index j = 0; j < a.cols(); ++j) r.push_back(a(i, j));
      rows.push_back(r);
    }
    return rows;
  };
  if (format_of(o) == Format::json) {
    nlohmann::json j{{"a3", mat(m.a3)}, {"phi", mat(m.phi)}, {"prox", mat(m.prox)},
                     {"mu_to_zero", mat(lim.mu_to_zero)}};
    if (lim.mu_to_infinity) j["mu_to_infinity"] = mat(*lim.mu_to_infinity);
    write(o, j.dump() + "\n");
    return ok;
  }
  std::string csv = "name,i,j,value\n";
  auto add = [&](const std::string& name, const Eigen::MatrixXd& a) {
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        csv += name + "," + std::to_string(i) + "," + std::to_string(j) + "," + format_double(a(i, j)) + "\n";
  };
  add("a3", m.a3);
  add("phi", m.phi);
  add("prox", m.prox);
  add("mu_to_zero", lim.mu_to_zero);
  if (lim.mu_to_infinity) add("mu_to_infinity", *lim.mu_to_infinity);
  write(o, csv);
  return ok;
}

int cmd_verify(const Options& o) {
  if (o.suite != "paper") throw UsageError("unknown suite '" + o.suite + "' (available: paper)");
  const std::vector<diag::CheckReport> reports = diag::builtin_suite();
  std::string text;
  std::size_t failed = 0;
  for (const auto& r : reports) {
    text += diag::to_json_line(r) + "\n";
    failed += !r.passed;
  }
  write(o, text);
  std::cerr << reports.size() << " checks, " << failed << " failed\n";
  return failed ? check_failed : ok;
}

void report_error(const Options& o, int code, const std::string& type, const std::string& msg) {
  std::cerr << "proxlab: " << msg << "\n";
  if (o.format == "json")
    std::cout << nlohmann::json{{"error", {{"code", code}, {"type", type}, {"message", msg}}}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moreau envelopes, proximal hulls and proximal averages on grids"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--grid", o.grids, "lo:hi:count, once per axis");
    c->add_option("--out", o.out, "output file (default: stdout)");
    c->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    c->add_flag("--force", o.force, "accept heuristic prox-thresholds");
  };

  std::vector<std::pair<std::string, CLI::App*>> cmds;
  for (const char* name : {"envelope", "hull", "lasrylions"}) {
    CLI::App* c = app.add_subcommand(name, std::string(name) == "envelope" ? "Moreau envelope e_lam f"
                                           : std::string(name) == "hull"   ? "proximal hull h_lam f"
                                                                           : "Lasry-Lions envelope e_{lam,mu} f");
    c->add_option("--fn", o.fn, "descriptor file")->required();
    c->add_option("--lam", o.lam, "lambda")->required();
    if (std::string(name) == "lasrylions") c->add_option("--mu", o.mu, "mu < lambda")->required();
    common(c);
    cmds.emplace_back(name, c);
  }
  CLI::App* avg = app.add_subcommand("average", "proximal average of two functions");
  avg->add_option("--f", o.f, "descriptor file")->required();
  avg->add_option("--g", o.g, "descriptor file")->required();
  avg->add_option("--mu", o.mu)->required();
  avg->add_option("--alpha", o.alpha)->required();
  common(avg);
  CLI::App* prox = app.add_subcommand("prox", "proximal mapping at points");
  prox->add_option("--fn", o.fn, "descriptor file")->required();
  prox->add_option("--lam", o.lam)->required();
  prox->add_option("--x", o.xs, "point, comma separated in 2-D (repeatable)")->required();
  common(prox);
  CLI::App* sa = app.add_subcommand("sweep-alpha", "averages over a list of alphas");
  sa->add_option("--f", o.f)->required();
  sa->add_option("--g", o.g)->required();
  sa->add_option("--mu", o.mu)->required();
  sa->add_option("--alphas", o.alphas)->required()->delimiter(',');
  common(sa);
  CLI::App* sm = app.add_subcommand("sweep-mu", "averages over a list of mus");
  sm->add_option("--f", o.f)->required();
  sm->add_option("--g", o.g)->required();
  sm->add_option("--alpha", o.alpha)->required();
  sm->add_option("--mus", o.mus)->required()->delimiter(',');
  common(sm);
  CLI::App* qd = app.add_subcommand("quadratic", "closed-form average of two quadratics");
  qd->add_option("--f", o.f, "quadratic descriptor")->required();
  qd->add_option("--g", o.g, "quadratic descriptor")->required();
  qd->add_option("--mu", o.mu)->required();
  qd->add_option("--alpha", o.alpha)->required();
  common(qd);
  CLI::App* vf = app.add_subcommand("verify", "run a diagnostics suite, JSON lines out");
  vf->add_option("--suite", o.suite)->required();
  vf->add_option("--out", o.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ok : usage;
  }

  try {
    for (const auto& [name, c] : cmds)
      if (c->parsed()) return cmd_transform(name, o);
    if (avg->parsed()) return cmd_average(o);
    if (prox->parsed()) return cmd_prox(o);
    if (sa->parsed()) return cmd_sweep(true, o);
    if (sm->parsed()) return cmd_sweep(false, o);
    if (qd->parsed()) return cmd_quadratic(o);
    if (vf->parsed()) return cmd_verify(o);
  } catch (const UsageError& e) {
    report_error(o, usage, "usage", e.what());
    return usage;
  } catch (const InputError& e) {
    report_error(o, usage, "input", e.what());
    return usage;
  } catch (const MathDomainError& e) {
    report_error(o, domain, "math_domain", e.what());
    return domain;
  } catch (const std::invalid_argument& e) {
    report_error(o, usage, "usage", e.what());
    return usage;
  }
  return usage;
}

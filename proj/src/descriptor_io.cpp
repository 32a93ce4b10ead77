#include <cmath>
#include <sstream>
#include <string>

#include <yaml-cpp/yaml.h>

#include "proxlab/errors.hpp"
#include "proxlab/function_model.hpp"

namespace proxlab {

namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& what) {
  const YAML::Mark m = node.Mark();
  throw ParseError(what, static_cast<std::size_t>(m.line + 1), static_cast<std::size_t>(m.column + 1));
}

// U+2212 MINUS SIGN is accepted as '-'.
std::string normalize_minus(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
        static_cast<unsigned char>(text[i + 1]) == 0x88 &&
        static_cast<unsigned char>(text[i + 2]) == 0x92) {
      out.push_back('-');
      i += 2;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

bool is_inf_literal(const std::string& s) {
  return s == "inf" || s == "+inf" || s == ".inf" || s == "+.inf" || s == "Inf" || s == "infinity";
}

double as_real(const YAML::Node& node, const char* field, bool allow_inf = false) {
  if (!node.IsScalar()) fail(node, std::string(field) + ": expected a number");
  const std::string s = node.Scalar();
  if (is_inf_literal(s)) {
    if (!allow_inf) fail(node, std::string(field) + ": +inf is not allowed here");
    return kInf;
  }
  double v = 0.0;
  std::istringstream is(s);
  is.imbue(std::locale::classic());
  is >> v;
  if (is.fail() || !is.eof() || !std::isfinite(v))
    fail(node, std::string(field) + ": '" + s + "' is not a real number");
  return v;
}

std::size_t as_count(const YAML::Node& node, const char* field) {
  const double v = as_real(node, field);
  if (v < 0.0 || v != std::floor(v)) fail(node, std::string(field) + ": expected a count");
  return static_cast<std::size_t>(v);
}

const YAML::Node require(const YAML::Node& map, const char* key) {
  const YAML::Node n = map[key];
  if (!n) fail(map, std::string("missing field '") + key + "'");
  return n;
}

QuadraticFunction parse_quadratic(const YAML::Node& root) {
  const YAML::Node a = require(root, "A");
  if (!a.IsSequence() || a.size() == 0) fail(a, "A: expected a nonempty list of rows");
  const auto n = static_cast<Eigen::Index>(a.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const YAML::Node row = a[static_cast<std::size_t>(i)];
    if (!row.IsSequence() || static_cast<Eigen::Index>(row.size()) != n)
      fail(row, "A: matrix must be square");
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = as_real(row[static_cast<std::size_t>(j)], "A");
  }
  return QuadraticFunction(m);
}

Piecewise1D parse_piecewise(const YAML::Node& root) {
  std::vector<double> bps;
  if (const YAML::Node b = root["breakpoints"]) {
    if (!b.IsSequence()) fail(b, "breakpoints: expected a list");
    for (const auto& x : b) bps.push_back(as_real(x, "breakpoints"));
  }
  const YAML::Node pieces = require(root, "pieces");
  if (!pieces.IsSequence()) fail(pieces, "pieces: expected a list");
  std::vector<Piecewise1D::Piece> ps;
  for (const auto& p : pieces) {
    if (p.IsScalar() && is_inf_literal(p.Scalar())) {
      ps.emplace_back(std::nullopt);
      continue;
    }
    if (!p.IsSequence()) fail(p, "pieces: each piece is a coefficient list or 'inf'");
    std::vector<double> c;
    for (const auto& x : p) c.push_back(as_real(x, "pieces"));
    ps.emplace_back(Polynomial(std::move(c)));  // may throw DegreeTooHigh
  }
  std::vector<std::optional<double>> pv(bps.size());
  if (const YAML::Node v = root["point_values"]) {
    if (!v.IsSequence() || v.size() != bps.size())
      fail(v, "point_values: one entry per breakpoint (number or null)");
    for (std::size_t k = 0; k < bps.size(); ++k)
      if (!v[k].IsNull() && !(v[k].IsScalar() && v[k].Scalar() == "~"))
        pv[k] = as_real(v[k], "point_values");
  }
  try {
    return Piecewise1D(std::move(bps), std::move(ps), std::move(pv));
  } catch (const std::invalid_argument& e) {
    fail(root, e.what());
  }
}

SampledFunction parse_samples(const YAML::Node& root) {
  const YAML::Node grid = require(root, "grid");
  if (!grid.IsSequence() || grid.size() == 0 || grid.size() > 2)
    fail(grid, "grid: expected one or two [lower, upper, points] triples");
  std::vector<Axis> axes;
  for (const auto& ax : grid) {
    if (!ax.IsSequence() || ax.size() != 3) fail(ax, "grid: axis must be [lower, upper, points]");
    axes.push_back({as_real(ax[0], "grid"), as_real(ax[1], "grid"), as_count(ax[2], "grid")});
  }
  const YAML::Node values = require(root, "values");
  if (!values.IsSequence()) fail(values, "values: expected a list");
  std::vector<double> v;
  for (const auto& x : values) v.push_back(as_real(x, "values", true));
  try {
    GridSpec spec(std::move(axes));
    return SampledFunction{make_grid_function(spec, v, "samples")};
  } catch (const std::invalid_argument& e) {
    fail(root, e.what());
  } catch (const Error& e) {
    fail(values, e.what());
  }
}

Builtin parse_builtin(const YAML::Node& root) {
  const YAML::Node name = require(root, "name");
  if (!name.IsScalar()) fail(name, "name: expected a string");
  Builtin b;
  b.name = name.Scalar();
  if (const YAML::Node e = root["eps"]) b.eps = as_real(e, "eps");
  if (const YAML::Node p = root["point"]) b.point = as_real(p, "point");
  resolve_builtin(b);  // UnknownBuiltin, bad parameters
  return b;
}

}  // namespace

FunctionDescriptor parse_descriptor(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(normalize_minus(text));
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.msg, static_cast<std::size_t>(e.mark.line + 1),
                     static_cast<std::size_t>(e.mark.column + 1));
  }
  if (!root.IsMap()) fail(root, "descriptor must be a mapping with a 'kind' field");
  const YAML::Node kind = require(root, "kind");
  if (!kind.IsScalar()) fail(kind, "kind: expected a string");
  const std::string k = kind.Scalar();

  std::optional<double> declared;
  if (const YAML::Node t = root["declared_threshold"]) {
    if (!(t.IsScalar() && t.Scalar() == "auto")) {
      declared = as_real(t, "declared_threshold", true);
      if (!(*declared > 0.0)) fail(t, "declared_threshold must be positive");
    }
  }

  try {
    if (k == "quadratic") return {parse_quadratic(root), declared};
    if (k == "piecewise1d") return {parse_piecewise(root), declared};
    if (k == "samples") return {parse_samples(root), declared};
    if (k == "builtin") return {parse_builtin(root), declared};
  } catch (const YAML::Exception& e) {
    throw ParseError(e.msg, static_cast<std::size_t>(e.mark.line + 1),
                     static_cast<std::size_t>(e.mark.column + 1));
  }
  fail(kind, "unknown kind '" + k + "' (quadratic | piecewise1d | samples | builtin)");
}

std::string serialize_descriptor(const FunctionDescriptor& f) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << f.kind();
  auto reals = [&](const std::vector<double>& v) {
    out << YAML::Flow << YAML::BeginSeq;
    for (double x : v) out << format_double(x);
    out << YAML::EndSeq;
  };
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, QuadraticFunction>) {
          const Eigen::MatrixXd& a = p.matrix();
          out << YAML::Key << "A" << YAML::Value << YAML::Flow << YAML::BeginSeq;
          for (Eigen::Index i = 0; i < a.rows(); ++i) {
            std::vector<double> row(static_cast<std::size_t>(a.cols()));
            for (Eigen::Index j = 0; j < a.cols(); ++j) row[static_cast<std::size_t>(j)] = a(i, j);
            reals(row);
          }
          out << YAML::EndSeq;
        } else if constexpr (std::is_same_v<T, Piecewise1D>) {
          out << YAML::Key << "breakpoints" << YAML::Value;
          reals(p.breakpoints());
          out << YAML::Key << "pieces" << YAML::Value << YAML::BeginSeq;
          for (const auto& piece : p.pieces()) {
            if (piece) reals(piece->coefficients());
            else out << "inf";
          }
          out << YAML::EndSeq;
          out << YAML::Key << "point_values" << YAML::Value << YAML::Flow << YAML::BeginSeq;
          for (const auto& v : p.point_values()) {
            if (v) out << format_double(*v);
            else out << YAML::Null;
          }
          out << YAML::EndSeq;
        } else if constexpr (std::is_same_v<T, SampledFunction>) {
          const GridSpec& s = p.samples.spec();
          out << YAML::Key << "grid" << YAML::Value << YAML::BeginSeq;
          for (const Axis& a : s.axes())
            reals({a.lower, a.upper, static_cast<double>(a.points)});
          out << YAML::EndSeq;
          out << YAML::Key << "values" << YAML::Value;
          reals(p.samples.raw());
        } else {
          out << YAML::Key << "name" << YAML::Value << p.name;
          out << YAML::Key << "eps" << YAML::Value << format_double(p.eps);
          out << YAML::Key << "point" << YAML::Value << format_double(p.point);
        }
      },
      f.payload);
  out << YAML::Key << "declared_threshold" << YAML::Value
      << (f.declared_threshold ? format_double(*f.declared_threshold) : std::string("auto"));
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace proxlab

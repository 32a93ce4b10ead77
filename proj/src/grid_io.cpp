#include "proxlab/grid_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "proxlab/errors.hpp"
#include "proxlab/function_model.hpp"

namespace proxlab {

namespace {

using nlohmann::json;

json number(ExtReal v) {
  if (v.is_infinite()) return "inf";
  return v.value();
}

json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json grid_json(const GridFunction& f) {
  json j;
  json axes = json::array();
  for (const Axis& a : f.spec().axes()) axes.push_back({a.lower, a.upper, a.points});
  j["grid"] = std::move(axes);
  json values = json::array();
  for (std::size_t i = 0; i < f.size(); ++i) values.push_back(number(f[i]));
  j["values"] = std::move(values);
  j["flags"] = std::vector<int>(f.flags().begin(), f.flags().end());
  j["label"] = f.label();
  return j;
}

// json::dump prints doubles with up to 17 digits; re-render with format_double
// so the two formats agree digit for digit.
std::string dump(const json& j) {
  std::string out;
  auto rec = [&](auto&& self, const json& v) -> void {
    if (v.is_object()) {
      out += '{';
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        self(self, it.value());
      }
      out += '}';
    } else if (v.is_array()) {
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        self(self, v[i]);
      }
      out += ']';
    } else if (v.is_number_float()) {
      out += format_double(v.get<double>());
    } else {
      out += v.dump();
    }
  };
  rec(rec, j);
  return out;
}

[[noreturn]] void bad(const std::string& what, std::size_t line = 1) {
  throw ParseError(what, line, 1);
}

double parse_number(std::string_view s, std::size_t line) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s == "inf" || s == "+inf") return kInf;
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) bad("'" + std::string(s) + "' is not a number", line);
  return v;
}

double json_value(const json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return kInf;
    bad("unexpected string '" + s + "' among values");
  }
  if (!v.is_number()) bad("values must be numbers or \"inf\"");
  return v.get<double>();
}

Axis axis_from(std::vector<double> coords, std::size_t line) {
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  if (coords.size() < 2) bad("each axis needs at least two distinct coordinates", line);
  Axis a{coords.front(), coords.back(), coords.size()};
  const double h = a.spacing();
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (std::abs(coords[i] - a.node(i)) > 1e-9 * h) bad("coordinates are not uniformly spaced", line);
  return a;
}

std::size_t index_on(const Axis& a, double x) {
  return static_cast<std::size_t>(std::lround((x - a.lower) / a.spacing()));
}

}  // namespace

std::string emit_grid(const GridFunction& f, Format format) {
  if (format == Format::json) return dump(grid_json(f)) + "\n";
  const GridSpec& s = f.spec();
  std::string out = s.dim() == 1 ? "x,value\n" : "x,y,value\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t k = 0; k < s.dim(); ++k) out += format_double(s.coord(i, k)) + ",";
    out += f[i].is_infinite() ? "inf" : format_double(f[i].value());
    out += '\n';
  }
  return out;
}

GridFunction read_grid(std::string_view text, Format format) {
  if (format == Format::json) {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      bad(e.what());
    }
    if (!j.is_object() || !j.contains("grid") || !j.contains("values")) bad("expected 'grid' and 'values'");
    std::vector<Axis> axes;
    for (const json& a : j["grid"]) {
      if (!a.is_array() || a.size() != 3) bad("grid axis must be [lower, upper, points]");
      axes.push_back({a[0].get<double>(), a[1].get<double>(), a[2].get<std::size_t>()});
    }
    const GridSpec spec(std::move(axes));
    std::vector<double> v;
    for (const json& x : j["values"]) v.push_back(json_value(x));
    if (v.size() != spec.size()) bad("value count does not match the grid");
    GridFunction f = make_grid_function(spec, v, j.value("label", std::string{}));
    if (j.contains("flags")) f = f.with_flags(j["flags"].get<std::vector<std::uint8_t>>());
    return f;
  }

  std::vector<std::vector<double>> rows;
  std::size_t line = 0, width = 0;
  std::istringstream in{std::string(text)};
  std::string l;
  while (std::getline(in, l)) {
    ++line;
    if (!l.empty() && l.back() == '\r') l.pop_back();
    if (l.empty()) continue;
    if (line == 1) {
      if (l != "x,value" && l != "x,y,value") bad("header must be x,value or x,y,value", line);
      width = l == "x,value" ? 2 : 3;
      continue;
    }
    std::vector<double> r;
    std::string_view sv = l;
    for (std::size_t pos; (pos = sv.find(',')) != std::string_view::npos; sv.remove_prefix(pos + 1))
      r.push_back(parse_number(sv.substr(0, pos), line));
    r.push_back(parse_number(sv, line));
    if (r.size() != width) bad("expected " + std::to_string(width) + " fields", line);
    rows.push_back(std::move(r));
  }
  if (width == 0) bad("empty input");
  std::vector<Axis> axes;
  for (std::size_t k = 0; k + 1 < width; ++k) {
    std::vector<double> c;
    for (const auto& r : rows) c.push_back(r[k]);
    axes.push_back(axis_from(std::move(c), line));
  }
  const GridSpec spec(std::move(axes));
  if (rows.size() != spec.size()) bad("every grid node must appear exactly once");
  std::vector<double> v(spec.size(), kInf);
  std::vector<std::uint8_t> seen(spec.size(), 0);
  for (const auto& r : rows) {
    const std::size_t i = index_on(spec.axis(0), r[0]);
    const std::size_t j = width == 3 ? index_on(spec.axis(1), r[1]) : 0;
    const std::size_t flat = spec.flatten(i, j);
    if (seen[flat]++) bad("duplicate node");
    v[flat] = r.back();
  }
  return make_grid_function(spec, v);
}

std::string sweep_emit(const std::vector<SweepEntry>& rows, Format format) {
  if (format == Format::json) {
    json arr = json::array();
    for (const SweepEntry& e : rows) {
      json j = grid_json(e.value);
      j["param"] = number(e.param);
      arr.push_back(std::move(j));
    }
    return dump(arr) + "\n";
  }
  if (rows.empty()) return "param,x,value\n";
  const GridSpec& s = rows.front().value.spec();
  std::string out = s.dim() == 1 ? "param,x,value\n" : "param,x,y,value\n";
  for (const SweepEntry& e : rows)
    for (std::size_t i = 0; i < e.value.size(); ++i) {
      out += format_double(e.param) + ",";
      for (std::size_t k = 0; k < s.dim(); ++k) out += format_double(s.coord(i, k)) + ",";
      out += e.value[i].is_infinite() ? "inf" : format_double(e.value[i].value());
      out += '\n';
    }
  return out;
}

}  // namespace proxlab

#include "fpilab/catalog.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fpilab/error.hpp"

namespace fpilab {

namespace {

double parse_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  // strtod accepts the same forms the CSV writer emits (e.g. 1e-05, inf).
  const std::string copy(s);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  require(!copy.empty() && end == copy.c_str() + copy.size(), ErrorKind::parse_error,
          "not a number: '" + copy + "'");
  return v;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

ParamMap parse_params(std::string_view text) {
  ParamMap out;
  std::string current;
  std::size_t pos = 0;
  while (pos <= text.size() && !text.empty()) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view token =
        text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    const std::size_t eq = token.find('=');
    if (eq != std::string_view::npos) {
      current = std::string(token.substr(0, eq));
      require(!current.empty(), ErrorKind::parse_error, "empty parameter name");
      require(!out.count(current), ErrorKind::parse_error, "duplicate parameter '" + current + "'");
      out[current].push_back(parse_number(token.substr(eq + 1)));
    } else {
      require(!current.empty(), ErrorKind::parse_error,
              "value without a parameter name in '" + std::string(text) + "'");
      out[current].push_back(parse_number(token));
    }
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

double scalar_param(const ParamMap& params, std::string_view key, double fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  require(it->second.size() == 1, ErrorKind::parse_error,
          "parameter '" + std::string(key) + "' takes a single value");
  return it->second.front();
}

std::vector<CatalogEntry> function_catalog() {
  return {
      {"const", "c=1", "u = c"},
      {"linear", "a=1[,a2,a3]", "u = a . t"},
      {"quadratic", "", "u = |t|^2"},
      {"gauss", "sigma=0.25", "u = exp(-|t - 1/2|^2 / (2 sigma^2))"},
      {"bump", "radius=0.4", "u = (1 - |t - 1/2|^2 / radius^2)^2 inside the ball, 0 outside"},
      {"oscillatory", "k=2", "u = prod_i sin(k pi t_i)"},
      {"radial", "s=1.5", "u = |t - 1/2|^s, s > 1"},
  };
}

FuncSpec FuncSpec::parse(std::string_view text) {
  FuncSpec f;
  const std::size_t colon = text.find(':');
  f.id = std::string(text.substr(0, colon));
  if (colon != std::string_view::npos) f.params = parse_params(text.substr(colon + 1));
  static const std::map<std::string, std::vector<std::string>, std::less<>> allowed = {
      {"const", {"c"}},        {"linear", {"a"}},      {"quadratic", {}},
      {"gauss", {"sigma"}},    {"bump", {"radius"}},   {"oscillatory", {"k"}},
      {"radial", {"s"}},
  };
  const auto it = allowed.find(f.id);
  require(it != allowed.end(), ErrorKind::parse_error, "unknown function '" + f.id + "'");
  for (const auto& [key, values] : f.params) {
    bool ok = false;
    for (const auto& k : it->second) ok = ok || k == key;
    require(ok, ErrorKind::parse_error, "function '" + f.id + "' has no parameter '" + key + "'");
  }
  if (f.id == "gauss") {
    require(scalar_param(f.params, "sigma", 0.25) > 0, ErrorKind::parse_error, "sigma must be > 0");
  } else if (f.id == "bump") {
    require(scalar_param(f.params, "radius", 0.4) > 0, ErrorKind::parse_error, "radius must be > 0");
  } else if (f.id == "radial") {
    // |t - c|^s is C^1 only for s > 1.
    require(scalar_param(f.params, "s", 1.5) > 1, ErrorKind::parse_error, "radial needs s > 1");
  } else if (f.id == "linear" && f.params.count("a")) {
    require(f.params.at("a").size() <= kMaxDim, ErrorKind::parse_error, "too many coefficients");
  }
  return f;
}

std::string FuncSpec::label() const {
  std::string out = id;
  bool first = true;
  for (const auto& [key, values] : params) {
    out += first ? ":" : ",";
    first = false;
    out += key + "=";
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) out += ",";
      out += format_number(values[i]);
    }
  }
  return out;
}

double FuncSpec::evaluate(const Point& t) const {
  const auto n = t.size();
  const auto centered = [&] { return (t.array() - 0.5).matrix(); };
  if (id == "const") return scalar_param(params, "c", 1.0);
  if (id == "linear") {
    const auto it = params.find("a");
    double u = 0;
    if (it == params.end()) return t[0];
    for (Eigen::Index i = 0; i < n && i < static_cast<Eigen::Index>(it->second.size()); ++i) {
      u += it->second[static_cast<std::size_t>(i)] * t[i];
    }
    return u;
  }
  if (id == "quadratic") return t.squaredNorm();
  if (id == "gauss") {
    const double s = scalar_param(params, "sigma", 0.25);
    return std::exp(-centered().squaredNorm() / (2 * s * s));
  }
  if (id == "bump") {
    const double r = scalar_param(params, "radius", 0.4);
    const double q = centered().squaredNorm() / (r * r);
    return q < 1 ? (1 - q) * (1 - q) : 0.0;
  }
  if (id == "oscillatory") {
    const double k = scalar_param(params, "k", 2.0);
    double u = 1;
    for (Eigen::Index i = 0; i < n; ++i) u *= std::sin(k * std::numbers::pi * t[i]);
    return u;
  }
  if (id == "radial") return std::pow(centered().norm(), scalar_param(params, "s", 1.5));
  fail(ErrorKind::parse_error, "unknown function '" + id + "'");
}

ScalarField sample_function(const FuncSpec& f, const LatticeGrid& grid) {
  Eigen::ArrayXd v(static_cast<Eigen::Index>(grid.node_count()));
  const auto& cube = grid.cube();
  for (std::size_t k = 0; k < grid.node_count(); ++k) {
    const Point t = (grid.node(k) - cube.corner) / cube.side;
    v[static_cast<Eigen::Index>(k)] = f.evaluate(t);
  }
  return ScalarField(grid, std::move(v), FieldKind::function);
}

}  // namespace fpilab

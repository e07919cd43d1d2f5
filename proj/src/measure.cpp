#include "fpilab/measure.hpp"

#include <cmath>
#include <cstdio>

#include "fpilab/catalog.hpp"
#include "fpilab/error.hpp"

namespace fpilab {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string point_text(const Point& p) {
  std::string s;
  for (Eigen::Index i = 0; i < p.size(); ++i) s += (i ? "," : "") + num(p[i]);
  return s;
}

void check_keys(const ParamMap& params, std::initializer_list<std::string_view> keys,
                std::string_view kind) {
  for (const auto& [key, values] : params) {
    bool ok = false;
    for (auto k : keys) ok = ok || k == key;
    require(ok, ErrorKind::parse_error,
            "weight '" + std::string(kind) + "' has no parameter '" + key + "'");
  }
}

Point to_point(const std::vector<double>& v) {
  Point p(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) p[static_cast<Eigen::Index>(i)] = v[i];
  return p;
}

// Position of the ')' matching the '(' at `open`.
std::size_t matching_paren(std::string_view s, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')' && --depth == 0) return i;
  }
  fail(ErrorKind::parse_error, "unbalanced parentheses in '" + std::string(s) + "'");
}

}  // namespace

WeightSpec WeightSpec::constant(double c) {
  WeightSpec w;
  w.kind_ = Kind::constant;
  w.c_ = c;
  require(std::isfinite(c) && c > 0, ErrorKind::not_a_weight, "constant weight needs c > 0");
  return w;
}

WeightSpec WeightSpec::power(double a, Point center) {
  WeightSpec w;
  w.kind_ = Kind::power;
  w.a_ = a;
  w.center_ = std::move(center);
  require(std::isfinite(a) && a >= 0, ErrorKind::not_a_weight, "power weight needs a >= 0");
  return w;
}

WeightSpec WeightSpec::step(int axis, double threshold, double low, double high) {
  WeightSpec w;
  w.kind_ = Kind::step;
  w.axis_ = axis;
  w.threshold_ = threshold;
  w.low_ = low;
  w.high_ = high;
  require(low > 0 && high > 0 && std::isfinite(low) && std::isfinite(high), ErrorKind::not_a_weight,
          "step weight needs lo, hi > 0");
  require(axis >= 1 && axis <= kMaxDim, ErrorKind::parse_error, "step axis must be 1, 2 or 3");
  return w;
}

WeightSpec WeightSpec::product(const WeightSpec& f, const WeightSpec& g) {
  WeightSpec w;
  w.kind_ = Kind::product;
  w.f_ = std::make_shared<const WeightSpec>(f);
  w.g_ = std::make_shared<const WeightSpec>(g);
  return w;
}

WeightSpec WeightSpec::parse(std::string_view text) {
  const std::size_t colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::string_view rest =
      colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (kind == "prod") {
    require(!rest.empty() && rest.front() == '(', ErrorKind::parse_error,
            "prod expects (<spec>)*(<spec>)");
    const std::size_t close1 = matching_paren(rest, 0);
    require(close1 + 2 < rest.size() && rest[close1 + 1] == '*' && rest[close1 + 2] == '(',
            ErrorKind::parse_error, "prod expects (<spec>)*(<spec>)");
    const std::size_t close2 = matching_paren(rest, close1 + 2);
    require(close2 + 1 == rest.size(), ErrorKind::parse_error, "trailing text after prod factors");
    return product(parse(rest.substr(1, close1 - 1)),
                   parse(rest.substr(close1 + 3, close2 - close1 - 3)));
  }
  const ParamMap params = parse_params(rest);
  if (kind == "constant") {
    check_keys(params, {"c"}, kind);
    return constant(scalar_param(params, "c", 1.0));
  }
  if (kind == "power") {
    check_keys(params, {"a", "center"}, kind);
    require(params.count("a") && params.count("center"), ErrorKind::parse_error,
            "power weight needs a=<v>,center=<c1,..>");
    return power(scalar_param(params, "a", 0.0), to_point(params.at("center")));
  }
  if (kind == "step") {
    check_keys(params, {"axis", "t", "lo", "hi"}, kind);
    const double axis = scalar_param(params, "axis", 1.0);
    require(axis == std::floor(axis), ErrorKind::parse_error, "step axis must be an integer");
    return step(static_cast<int>(axis), scalar_param(params, "t", 0.5),
                scalar_param(params, "lo", 1.0), scalar_param(params, "hi", 2.0));
  }
  fail(ErrorKind::parse_error, "unknown weight '" + std::string(kind) + "'");
}

double WeightSpec::evaluate(const Point& x) const {
  switch (kind_) {
    case Kind::constant:
      return c_;
    case Kind::power:
      return a_ == 0.0 ? 1.0 : std::pow((x - center_).norm(), -a_);
    case Kind::step:
      return x[axis_ - 1] < threshold_ ? low_ : high_;
    case Kind::product:
      return f_->evaluate(x) * g_->evaluate(x);
  }
  return 0;
}

std::string WeightSpec::label() const {
  switch (kind_) {
    case Kind::constant:
      return "constant:c=" + num(c_);
    case Kind::power:
      return "power:a=" + num(a_) + ",center=" + point_text(center_);
    case Kind::step:
      return "step:axis=" + std::to_string(axis_) + ",t=" + num(threshold_) + ",lo=" + num(low_) +
             ",hi=" + num(high_);
    case Kind::product:
      return "prod:(" + f_->label() + ")*(" + g_->label() + ")";
  }
  return {};
}

void WeightSpec::validate(int dim) const {
  switch (kind_) {
    case Kind::constant:
      break;
    case Kind::power:
      require(center_.size() == dim, ErrorKind::dimension_error,
              "power weight centre has " + std::to_string(center_.size()) + " coordinates, need " +
                  std::to_string(dim));
      require(a_ < dim, ErrorKind::not_a_weight,
              "power weight |x|^-a is locally integrable only for a < n");
      break;
    case Kind::step:
      require(axis_ <= dim, ErrorKind::dimension_error, "step axis exceeds the dimension");
      break;
    case Kind::product:
      f_->validate(dim);
      g_->validate(dim);
      break;
  }
}

double WeightSpec::max_power_exponent() const {
  if (kind_ == Kind::power) return a_;
  if (kind_ == Kind::product) return std::max(f_->max_power_exponent(), g_->max_power_exponent());
  return 0.0;
}

WeightSpec WeightSpec::scaled(double factor) const {
  return product(constant(factor), *this);
}

void WeightSpec::check_power_centers(const LatticeGrid& grid) const {
  if (kind_ == Kind::product) {
    f_->check_power_centers(grid);
    g_->check_power_centers(grid);
    return;
  }
  if (kind_ != Kind::power || a_ == 0.0) return;
  const double h = grid.spacing();
  double d2 = 0;
  for (int a = 0; a < grid.dim(); ++a) {
    const double t = (center_[a] - grid.cube().corner[a]) / h - 0.5;
    const double nearest = std::clamp(std::round(t), 0.0, grid.res() - 1.0);
    d2 += (t - nearest) * (t - nearest);
  }
  require(std::sqrt(d2) >= 0.5 * (1 - 1e-9), ErrorKind::not_a_weight,
          "power weight centre must stay at least h/2 from every node (put it on a cell corner)");
}

ScalarField sample_weight(const WeightSpec& w, const LatticeGrid& grid) {
  w.validate(grid.dim());
  w.check_power_centers(grid);
  Eigen::ArrayXd v(static_cast<Eigen::Index>(grid.node_count()));
  for (std::size_t k = 0; k < grid.node_count(); ++k) {
    const double value = w.evaluate(grid.node(k));
    if (!(value > 0) || !std::isfinite(value)) {
      fail(ErrorKind::not_a_weight, "weight " + w.label() + " is not positive and finite at node " +
                                        std::to_string(k));
    }
    v[static_cast<Eigen::Index>(k)] = value;
  }
  return ScalarField(grid, std::move(v), FieldKind::weight_density);
}

std::vector<Atom> parse_atoms(std::string_view text) {
  std::vector<Atom> atoms;
  if (text.empty()) return atoms;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t semi = text.find(';', pos);
    const std::string_view item =
        text.substr(pos, semi == std::string_view::npos ? std::string_view::npos : semi - pos);
    const std::size_t colon = item.find(':');
    require(colon != std::string_view::npos, ErrorKind::parse_error,
            "atom '" + std::string(item) + "' must look like x1,..:mass");
    const auto coords = parse_params("x=" + std::string(item.substr(0, colon))).at("x");
    const double mass = parse_params("m=" + std::string(item.substr(colon + 1))).at("m").at(0);
    require(mass > 0 && std::isfinite(mass), ErrorKind::parse_error, "atom mass must be positive");
    atoms.push_back(Atom{to_point(coords), mass});
    if (semi == std::string_view::npos) break;
    pos = semi + 1;
  }
  return atoms;
}

MeasureSpec MeasureSpec::parse(std::string_view weight, std::string_view atoms) {
  MeasureSpec m;
  if (!weight.empty() && weight != "none") m.density = WeightSpec::parse(weight);
  m.atoms = parse_atoms(atoms);
  require(m.density || !m.atoms.empty(), ErrorKind::parse_error,
          "a measure needs a density, atoms, or both");
  return m;
}

std::string MeasureSpec::label() const {
  std::string s = density ? density->label() : "none";
  if (!atoms.empty()) {
    s += "+atoms=";
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      s += (i ? ";" : "") + point_text(atoms[i].point) + ":" + num(atoms[i].mass);
    }
  }
  return s;
}

void MeasureSpec::validate(int dim) const {
  require(density || !atoms.empty(), ErrorKind::precondition_error, "empty measure");
  if (density) density->validate(dim);
  for (const auto& a : atoms) {
    require(a.point.size() == dim, ErrorKind::dimension_error, "atom has the wrong dimension");
  }
}

DiscreteMeasure::DiscreteMeasure(LatticeGrid grid, Eigen::ArrayXd density,
                                 const std::vector<Atom>& atoms)
    : grid_(std::move(grid)), density_(std::move(density)) {
  require(static_cast<std::size_t>(density_.size()) == grid_.node_count(), ErrorKind::format_error,
          "density size does not match the grid");
  require(density_.allFinite() && (density_ >= 0).all(), ErrorKind::data_error,
          "measure density must be finite and non-negative");
  for (const auto& a : atoms) {
    const auto cell = grid_.owner_cell(a.point);
    if (cell) atoms_.push_back(GridAtom{a.point, a.mass, *cell});
  }
}

DiscreteMeasure DiscreteMeasure::sample(const MeasureSpec& spec, const LatticeGrid& grid) {
  spec.validate(grid.dim());
  Eigen::ArrayXd density = spec.density ? sample_weight(*spec.density, grid).values()
                                        : Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(
                                              grid.node_count()));
  return DiscreteMeasure(grid, std::move(density), spec.atoms);
}

DiscreteMeasure DiscreteMeasure::from_field(const ScalarField& f) {
  return DiscreteMeasure(f.grid(), f.values().abs(), {});
}

DiscreteMeasure DiscreteMeasure::restricted(const CellBox& box) const {
  DiscreteMeasure out = *this;
  for (std::size_t k = 0; k < grid_.node_count(); ++k) {
    if (!grid_.contains(box, grid_.multi_index(k))) out.density_[static_cast<Eigen::Index>(k)] = 0;
  }
  std::erase_if(out.atoms_, [&](const GridAtom& a) { return !grid_.contains(box, a.cell); });
  return out;
}

Eigen::ArrayXd DiscreteMeasure::cell_masses() const {
  Eigen::ArrayXd m = density_ * grid_.cell_volume();
  for (const auto& a : atoms_) m[static_cast<Eigen::Index>(grid_.linear_index(a.cell))] += a.mass;
  return m;
}

double DiscreteMeasure::mass(const CellBox& box) const {
  double s = 0;
  for_each_in_box(grid_.dim(), box, [&](const Index3& i) {
    s += density_[static_cast<Eigen::Index>(grid_.linear_index(i))];
  });
  s *= grid_.cell_volume();
  for (const auto& a : atoms_) {
    if (grid_.contains(box, a.cell)) s += a.mass;
  }
  return s;
}

double measure_of(const MeasureSpec& mu, const Cube& r, const LatticeGrid& grid) {
  return DiscreteMeasure::sample(mu, grid).mass(grid.align(r));
}

}  // namespace fpilab

#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fpilab/lattice.hpp"

namespace fpilab {

/// Analytic weight from the catalog:
///   constant:c=<v>
///   power:a=<v>,center=<c1,..>          w(x) = |x - center|^-a, 0 <= a < n
///   step:axis=<i>,t=<v>,lo=<v>,hi=<v>   lo where x_i < t, hi elsewhere (axis is 1-based)
///   prod:(<spec>)*(<spec>)
class WeightSpec {
 public:
  enum class Kind { constant, power, step, product };

  static WeightSpec constant(double c);
  static WeightSpec power(double a, Point center);
  static WeightSpec step(int axis, double threshold, double low, double high);
  static WeightSpec product(const WeightSpec& f, const WeightSpec& g);
  static WeightSpec parse(std::string_view text);

  Kind kind() const { return kind_; }
  double evaluate(const Point& x) const;
  std::string label() const;
  bool is_unit() const { return kind_ == Kind::constant && c_ == 1.0; }

  // Checks parameter invariants for dimension `dim` (a < n, axis in range...).
  void validate(int dim) const;

  // Largest power exponent appearing in the spec; 0 when there is none.
  double max_power_exponent() const;

  WeightSpec scaled(double factor) const;

 private:
  WeightSpec() = default;
  void check_power_centers(const LatticeGrid& grid) const;
  friend ScalarField sample_weight(const WeightSpec& w, const LatticeGrid& grid);

  Kind kind_ = Kind::constant;
  double c_ = 1.0;
  double a_ = 0.0;
  Point center_;
  int axis_ = 1;
  double threshold_ = 0.5;
  double low_ = 1.0;
  double high_ = 1.0;
  std::shared_ptr<const WeightSpec> f_;
  std::shared_ptr<const WeightSpec> g_;
};

// Throws not-a-weight if a sample is not positive and finite, or if a power
// centre lies closer than h/2 to a node.
ScalarField sample_weight(const WeightSpec& w, const LatticeGrid& grid);

struct Atom {
  Point point;
  double mass = 0;
};

// "x1,..:m;x1,..:m"
std::vector<Atom> parse_atoms(std::string_view text);

/// Borel measure: optional weight density plus finitely many atoms.
struct MeasureSpec {
  std::optional<WeightSpec> density;
  std::vector<Atom> atoms;

  static MeasureSpec lebesgue() { return MeasureSpec{WeightSpec::constant(1.0), {}}; }
  static MeasureSpec parse(std::string_view weight, std::string_view atoms);
  std::string label() const;
  void validate(int dim) const;
};

/// A measure discretised on a lattice: a density sampled at the nodes plus
/// atoms, each owned by the half-open cell that contains it. Atoms outside
/// the grid cube are dropped (every quantity here lives on the grid cube).
class DiscreteMeasure {
 public:
  struct GridAtom {
    Point point;
    double mass;
    Index3 cell;
  };

  DiscreteMeasure(LatticeGrid grid, Eigen::ArrayXd density, const std::vector<Atom>& atoms);

  static DiscreteMeasure sample(const MeasureSpec& spec, const LatticeGrid& grid);
  // d mu = |f| dx
  static DiscreteMeasure from_field(const ScalarField& f);

  // chi_box mu
  DiscreteMeasure restricted(const CellBox& box) const;

  const LatticeGrid& grid() const { return grid_; }
  const Eigen::ArrayXd& density() const { return density_; }
  const std::vector<GridAtom>& atoms() const { return atoms_; }
  bool has_atoms() const { return !atoms_.empty(); }

  // h^n * density + masses of the atoms owned by each cell.
  Eigen::ArrayXd cell_masses() const;
  double mass(const CellBox& box) const;
  double total_mass() const { return mass(grid_.full_box()); }

 private:
  LatticeGrid grid_;
  Eigen::ArrayXd density_;
  std::vector<GridAtom> atoms_;
};

// h^n * sum of the density over nodes of R + masses of the atoms in R.
double measure_of(const MeasureSpec& mu, const Cube& r, const LatticeGrid& grid);

}  // namespace fpilab

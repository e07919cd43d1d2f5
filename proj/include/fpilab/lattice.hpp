#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace fpilab {

inline constexpr int kMaxDim = 3;
inline constexpr std::size_t kDefaultNodeCap = std::size_t{1} << 24;

using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Index3 = std::array<int, kMaxDim>;

/// Closed axis-aligned cube [corner, corner + side]^dim, 1 <= dim <= 3.
struct Cube {
  int dim = 1;
  Point corner = Point::Zero(1);
  double side = 1.0;

  Cube() = default;
  Cube(int dim, Point corner, double side);

  static Cube unit(int dim);

  Point center() const;
  double volume() const;
};

/// Grid-aligned cube in cell units: cells lo[a] .. lo[a] + size - 1 on every
/// used axis. Unused axes keep lo = 0 and are ignored.
struct CellBox {
  Index3 lo{0, 0, 0};
  int size = 1;

  friend bool operator==(const CellBox&, const CellBox&) = default;
};

/// Cell-centred uniform lattice: res cells per axis, node i at
/// corner + (i + 1/2) h. Nodes are stored row-major with axis 0 slowest.
class LatticeGrid {
 public:
  LatticeGrid(const Cube& cube, int res, std::size_t node_cap = kDefaultNodeCap);

  const Cube& cube() const { return cube_; }
  int dim() const { return cube_.dim; }
  int res() const { return res_; }
  double spacing() const { return h_; }
  double cell_volume() const;
  std::size_t node_count() const { return nodes_; }

  // res on used axes, 1 on the unused trailing ones.
  const Index3& extents() const { return ext_; }

  std::size_t linear_index(const Index3& i) const {
    return (static_cast<std::size_t>(i[0]) * ext_[1] + i[1]) * ext_[2] + i[2];
  }
  Index3 multi_index(std::size_t linear) const;

  Point node(const Index3& i) const;
  Point node(std::size_t linear) const { return node(multi_index(linear)); }

  CellBox full_box() const { return CellBox{{0, 0, 0}, res_}; }

  // Converts a cube to cell units. Throws domain-error when r leaves the grid
  // cube and alignment-error when its faces are not on cell boundaries.
  CellBox align(const Cube& r) const;
  Cube to_cube(const CellBox& box) const;
  bool contains(const CellBox& box, const Index3& i) const;

  // Half-open cell ownership; points on the upper closed face belong to the
  // last cell. Empty for points outside the closed grid cube.
  std::optional<Index3> owner_cell(const Point& p) const;

  friend bool operator==(const LatticeGrid& a, const LatticeGrid& b);

 private:
  Cube cube_;
  int res_;
  double h_;
  std::size_t nodes_;
  Index3 ext_;
};

LatticeGrid make_grid(const Cube& cube, int res, std::size_t node_cap = kDefaultNodeCap);

inline Index3 box_hi(int dim, const CellBox& box) {
  Index3 hi{1, 1, 1};
  for (int a = 0; a < dim; ++a) hi[a] = box.lo[a] + box.size;
  return hi;
}

// Visits every cell index of box in row-major order.
template <class F>
void for_each_in_box(int dim, const CellBox& box, F&& f) {
  const Index3 hi = box_hi(dim, box);
  const Index3 lo{box.lo[0], dim > 1 ? box.lo[1] : 0, dim > 2 ? box.lo[2] : 0};
  Index3 i{};
  for (i[0] = lo[0]; i[0] < hi[0]; ++i[0])
    for (i[1] = lo[1]; i[1] < hi[1]; ++i[1])
      for (i[2] = lo[2]; i[2] < hi[2]; ++i[2]) f(i);
}

// Every grid-aligned cube inside `within`, by side then lexicographic corner.
template <class F>
void for_each_subcube(int dim, const CellBox& within, F&& f) {
  for (int k = 1; k <= within.size; ++k) {
    const CellBox corners{within.lo, within.size - k + 1};
    for_each_in_box(dim, corners, [&](const Index3& lo) { f(CellBox{lo, k}); });
  }
}

enum class FieldKind { function, gradient_magnitude, weight_density };

/// Samples on the nodes of a lattice. Weight densities are strictly positive;
/// every field is finite.
class ScalarField {
 public:
  ScalarField(LatticeGrid grid, Eigen::ArrayXd values, FieldKind kind = FieldKind::function);

  const LatticeGrid& grid() const { return grid_; }
  const Eigen::ArrayXd& values() const { return values_; }
  FieldKind kind() const { return kind_; }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
  double at(const Index3& i) const { return (*this)[grid_.linear_index(i)]; }

 private:
  LatticeGrid grid_;
  Eigen::ArrayXd values_;
  FieldKind kind_;
};

double cube_average(const ScalarField& f, const CellBox& box);
double cube_average(const ScalarField& f, const Cube& r);

// Sum of f over the nodes of box, in row-major order.
double box_sum(const ScalarField& f, const CellBox& box);

// Partial derivatives: central differences inside, second-order one-sided
// differences on the boundary layer. Needs res >= 3.
std::vector<Eigen::ArrayXd> gradient(const ScalarField& u);
ScalarField gradient_magnitude(const ScalarField& u);

// Closed form sum_k (res - k + 1)^dim.
std::size_t subcube_count(int res, int dim);
std::vector<CellBox> enumerate_subcubes(const LatticeGrid& grid,
                                        const std::optional<Cube>& within = std::nullopt);

}  // namespace fpilab

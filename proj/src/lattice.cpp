#include "fpilab/lattice.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fpilab/error.hpp"

namespace fpilab {

Cube::Cube(int dim_, Point corner_, double side_) : dim(dim_), corner(std::move(corner_)), side(side_) {
  require(dim >= 1 && dim <= kMaxDim, ErrorKind::dimension_error,
          "cube dimension must be 1, 2 or 3, got " + std::to_string(dim));
  require(corner.size() == dim, ErrorKind::dimension_error, "cube corner has wrong dimension");
  require(std::isfinite(side) && side > 0, ErrorKind::domain_error, "cube side must be positive");
  require(corner.allFinite(), ErrorKind::domain_error, "cube corner must be finite");
}

Cube Cube::unit(int dim) { return Cube(dim, Point::Zero(dim), 1.0); }

Point Cube::center() const { return corner.array() + 0.5 * side; }

double Cube::volume() const { return std::pow(side, dim); }

LatticeGrid::LatticeGrid(const Cube& cube, int res, std::size_t node_cap)
    : cube_(cube), res_(res), h_(0), nodes_(1), ext_{1, 1, 1} {
  require(res >= 2, ErrorKind::invalid_resolution,
          "need at least 2 cells per axis, got " + std::to_string(res));
  for (int a = 0; a < cube_.dim; ++a) {
    if (nodes_ > node_cap / static_cast<std::size_t>(res)) {
      fail(ErrorKind::grid_too_large, std::to_string(res) + "^" + std::to_string(cube_.dim) +
                                          " nodes exceed the cap of " + std::to_string(node_cap));
    }
    nodes_ *= static_cast<std::size_t>(res);
    ext_[a] = res;
  }
  require(nodes_ <= node_cap, ErrorKind::grid_too_large, "node count exceeds the cap");
  h_ = cube_.side / res;
}

double LatticeGrid::cell_volume() const { return std::pow(h_, cube_.dim); }

Index3 LatticeGrid::multi_index(std::size_t linear) const {
  Index3 i{0, 0, 0};
  i[2] = static_cast<int>(linear % ext_[2]);
  linear /= ext_[2];
  i[1] = static_cast<int>(linear % ext_[1]);
  i[0] = static_cast<int>(linear / ext_[1]);
  return i;
}

Point LatticeGrid::node(const Index3& i) const {
  Point x(cube_.dim);
  for (int a = 0; a < cube_.dim; ++a) x[a] = cube_.corner[a] + (i[a] + 0.5) * h_;
  return x;
}

CellBox LatticeGrid::align(const Cube& r) const {
  require(r.dim == cube_.dim, ErrorKind::dimension_error, "cube and grid dimensions differ");
  const double tol = 1e-9;
  for (int a = 0; a < cube_.dim; ++a) {
    const double lo = (r.corner[a] - cube_.corner[a]) / h_;
    const double hi = lo + r.side / h_;
    if (lo < -tol || hi > res_ + tol) fail(ErrorKind::domain_error, "cube leaves the grid cube");
  }
  const double k = r.side / h_;
  const long ki = std::lround(k);
  require(std::abs(k - ki) <= tol * std::max(1.0, k) && ki >= 1, ErrorKind::alignment_error,
          "cube side is not a multiple of the grid spacing");
  CellBox box;
  box.size = static_cast<int>(ki);
  for (int a = 0; a < cube_.dim; ++a) {
    const double o = (r.corner[a] - cube_.corner[a]) / h_;
    const long oi = std::lround(o);
    require(std::abs(o - oi) <= tol * std::max(1.0, std::abs(o)), ErrorKind::alignment_error,
            "cube faces are not on cell boundaries");
    box.lo[a] = static_cast<int>(oi);
  }
  return box;
}

Cube LatticeGrid::to_cube(const CellBox& box) const {
  Point c(cube_.dim);
  for (int a = 0; a < cube_.dim; ++a) c[a] = cube_.corner[a] + box.lo[a] * h_;
  return Cube(cube_.dim, c, box.size * h_);
}

bool LatticeGrid::contains(const CellBox& box, const Index3& i) const {
  for (int a = 0; a < cube_.dim; ++a) {
    if (i[a] < box.lo[a] || i[a] >= box.lo[a] + box.size) return false;
  }
  return true;
}

std::optional<Index3> LatticeGrid::owner_cell(const Point& p) const {
  require(p.size() == cube_.dim, ErrorKind::dimension_error, "point has wrong dimension");
  Index3 i{0, 0, 0};
  for (int a = 0; a < cube_.dim; ++a) {
    const double t = (p[a] - cube_.corner[a]) / h_;
    if (!(t >= 0.0) || t > res_) return std::nullopt;
    i[a] = std::min(res_ - 1, static_cast<int>(std::floor(t)));
  }
  return i;
}

bool operator==(const LatticeGrid& a, const LatticeGrid& b) {
  return a.res_ == b.res_ && a.cube_.dim == b.cube_.dim && a.cube_.side == b.cube_.side &&
         a.cube_.corner == b.cube_.corner;
}

LatticeGrid make_grid(const Cube& cube, int res, std::size_t node_cap) {
  return LatticeGrid(cube, res, node_cap);
}

ScalarField::ScalarField(LatticeGrid grid, Eigen::ArrayXd values, FieldKind kind)
    : grid_(std::move(grid)), values_(std::move(values)), kind_(kind) {
  require(static_cast<std::size_t>(values_.size()) == grid_.node_count(), ErrorKind::format_error,
          "field has " + std::to_string(values_.size()) + " values for " +
              std::to_string(grid_.node_count()) + " nodes");
  require(values_.allFinite(), ErrorKind::data_error, "field contains non-finite values");
  if (kind_ == FieldKind::weight_density) {
    require((values_ > 0).all(), ErrorKind::not_a_weight, "weight density must be positive");
  }
}

double box_sum(const ScalarField& f, const CellBox& box) {
  const auto& g = f.grid();
  double s = 0;
  for_each_in_box(g.dim(), box, [&](const Index3& i) { s += f.at(i); });
  return s;
}

double cube_average(const ScalarField& f, const CellBox& box) {
  const auto& g = f.grid();
  for (int a = 0; a < g.dim(); ++a) {
    require(box.size >= 1 && box.lo[a] >= 0 && box.lo[a] + box.size <= g.res(),
            ErrorKind::domain_error, "cube leaves the grid cube");
  }
  double count = std::pow(static_cast<double>(box.size), g.dim());
  return box_sum(f, box) / count;
}

double cube_average(const ScalarField& f, const Cube& r) {
  return cube_average(f, f.grid().align(r));
}

std::vector<Eigen::ArrayXd> gradient(const ScalarField& u) {
  const auto& g = u.grid();
  require(g.res() >= 3, ErrorKind::too_coarse_for_gradient,
          "gradient needs at least 3 cells per axis");
  const int n = g.dim();
  const int res = g.res();
  const double inv2h = 1.0 / (2.0 * g.spacing());
  const auto& v = u.values();
  std::vector<Eigen::ArrayXd> out(n, Eigen::ArrayXd(v.size()));
  for (int a = 0; a < n; ++a) {
    Index3 stride_idx{0, 0, 0};
    stride_idx[a] = 1;
    const auto stride = static_cast<Eigen::Index>(g.linear_index(stride_idx));
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      const int i = g.multi_index(static_cast<std::size_t>(k))[a];
      double d;
      if (i == 0) {
        d = (-3.0 * v[k] + 4.0 * v[k + stride] - v[k + 2 * stride]) * inv2h;
      } else if (i == res - 1) {
        d = (3.0 * v[k] - 4.0 * v[k - stride] + v[k - 2 * stride]) * inv2h;
      } else {
        d = (v[k + stride] - v[k - stride]) * inv2h;
      }
      out[a][k] = d;
    }
  }
  return out;
}

ScalarField gradient_magnitude(const ScalarField& u) {
  require(u.kind() == FieldKind::function, ErrorKind::precondition_error,
          "gradient_magnitude expects a function field");
  const auto parts = gradient(u);
  Eigen::ArrayXd sq = Eigen::ArrayXd::Zero(u.values().size());
  for (const auto& p : parts) sq += p.square();
  return ScalarField(u.grid(), sq.sqrt(), FieldKind::gradient_magnitude);
}

std::size_t subcube_count(int res, int dim) {
  std::size_t total = 0;
  for (int k = 1; k <= res; ++k) {
    std::size_t term = 1;
    for (int a = 0; a < dim; ++a) term *= static_cast<std::size_t>(res - k + 1);
    total += term;
  }
  return total;
}

std::vector<CellBox> enumerate_subcubes(const LatticeGrid& grid, const std::optional<Cube>& within) {
  const CellBox box = within ? grid.align(*within) : grid.full_box();
  std::vector<CellBox> out;
  out.reserve(subcube_count(box.size, grid.dim()));
  for_each_subcube(grid.dim(), box, [&](const CellBox& c) { out.push_back(c); });
  return out;
}

}  // namespace fpilab

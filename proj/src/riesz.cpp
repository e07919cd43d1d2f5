#include <cmath>
#include <map>
#include <mutex>

#include "fpilab/error.hpp"
#include "fpilab/maximal.hpp"
#include "fpilab/parallel.hpp"

namespace fpilab {

namespace {

// 4-point Gauss-Legendre product rule on a cube of side s centred at c,
// after splitting it 4-fold per axis `depth` times.
double integrate_cube(int n, double alpha, const Point& c, double s, int depth) {
  if (depth == 0) {
    static const double x[4] = {-0.86113631159405258, -0.33998104358485626, 0.33998104358485626,
                                0.86113631159405258};
    static const double w[4] = {0.34785484513745386, 0.65214515486254614, 0.65214515486254614,
                                0.34785484513745386};
    double sum = 0;
    Index3 j{0, 0, 0};
    const int hi1 = n > 1 ? 4 : 1, hi2 = n > 2 ? 4 : 1;
    for (j[0] = 0; j[0] < 4; ++j[0])
      for (j[1] = 0; j[1] < hi1; ++j[1])
        for (j[2] = 0; j[2] < hi2; ++j[2]) {
          Point z = c;
          double wt = 1;
          for (int a = 0; a < n; ++a) {
            z[a] += x[j[a]] * s / 2;
            wt *= w[j[a]] / 2;
          }
          sum += wt * std::pow(z.norm(), alpha - n);
        }
    return std::pow(s, n) * sum;
  }
  const double t = s / 4;
  double sum = 0;
  Index3 j{0, 0, 0};
  const int hi1 = n > 1 ? 4 : 1, hi2 = n > 2 ? 4 : 1;
  for (j[0] = 0; j[0] < 4; ++j[0])
    for (j[1] = 0; j[1] < hi1; ++j[1])
      for (j[2] = 0; j[2] < hi2; ++j[2]) {
        Point sub = c;
        for (int a = 0; a < n; ++a) sub[a] += (j[a] - 1.5) * t;
        sum += integrate_cube(n, alpha, sub, t, depth - 1);
      }
  return sum;
}

double compute_self_cell(int n, double alpha) {
  if (n == 1) return 2 * std::pow(0.5, alpha) / alpha;
  // [-1/2,1/2]^n = inner cube of side 1/3 plus a shell of 3^n - 1 cubes; the
  // inner cube carries 3^-alpha of the total by scaling.
  double shell = 0;
  Index3 j{0, 0, 0};
  const int hi2 = n > 2 ? 3 : 1;
  for (j[0] = 0; j[0] < 3; ++j[0])
    for (j[1] = 0; j[1] < 3; ++j[1])
      for (j[2] = 0; j[2] < hi2; ++j[2]) {
        Point c(n);
        bool centre = true;
        for (int a = 0; a < n; ++a) {
          c[a] = (j[a] - 1) / 3.0;
          centre = centre && j[a] == 1;
        }
        if (!centre) shell += integrate_cube(n, alpha, c, 1.0 / 3.0, 2);
      }
  return shell / (1 - std::pow(3.0, -alpha));
}

void check_riesz_alpha(double alpha, int n) {
  require(std::isfinite(alpha) && alpha > 0 && alpha < n, ErrorKind::invalid_exponent,
          "Riesz potentials need 0 < alpha < n");
}

// kernel[offset] = (h |offset|)^{alpha-n}, offsets taken per axis in [0, N).
std::vector<double> kernel_table(const LatticeGrid& g, double alpha) {
  std::vector<double> k(g.node_count());
  const double h = g.spacing();
  for (std::size_t i = 0; i < k.size(); ++i) {
    const Index3 o = g.multi_index(i);
    double r2 = 0;
    for (int a = 0; a < g.dim(); ++a) r2 += static_cast<double>(o[a]) * o[a];
    k[i] = i == 0 ? 0.0 : std::pow(h * std::sqrt(r2), alpha - g.dim());
  }
  return k;
}

double potential_at(const DiscreteMeasure& mu, double alpha, std::size_t node,
                    const std::vector<double>& kernel, double self) {
  const LatticeGrid& g = mu.grid();
  const Index3 x = g.multi_index(node);
  const Eigen::ArrayXd& d = mu.density();
  double sum = 0;
  for (std::size_t y = 0; y < g.node_count(); ++y) {
    const double dy = d[static_cast<Eigen::Index>(y)];
    if (dy == 0 || y == node) continue;
    const Index3 j = g.multi_index(y);
    Index3 o{0, 0, 0};
    for (int a = 0; a < g.dim(); ++a) o[a] = std::abs(j[a] - x[a]);
    sum += dy * kernel[g.linear_index(o)];
  }
  sum *= g.cell_volume();
  sum += d[static_cast<Eigen::Index>(node)] * self;
  const Point px = g.node(x);
  for (const auto& a : mu.atoms()) {
    const double r = (a.point - px).norm();
    require(r > 0, ErrorKind::singular_evaluation, "atom sits on an evaluation node");
    sum += a.mass * std::pow(r, alpha - g.dim());
  }
  return sum;
}

}  // namespace

double self_cell_integral(int dim, double alpha) {
  check_riesz_alpha(alpha, dim);
  static std::mutex lock;
  static std::map<std::pair<int, double>, double> cache;
  std::lock_guard<std::mutex> guard(lock);
  const auto key = std::make_pair(dim, alpha);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, compute_self_cell(dim, alpha)).first;
  return it->second;
}

ScalarField riesz_field(const DiscreteMeasure& mu, double alpha) {
  const LatticeGrid& g = mu.grid();
  check_riesz_alpha(alpha, g.dim());
  const auto kernel = kernel_table(g, alpha);
  const double self = std::pow(g.spacing(), alpha) * self_cell_integral(g.dim(), alpha);
  Eigen::ArrayXd out(static_cast<Eigen::Index>(g.node_count()));
  parallel_for(g.node_count(), [&](std::size_t node) {
    out[static_cast<Eigen::Index>(node)] = potential_at(mu, alpha, node, kernel, self);
  });
  return ScalarField(g, std::move(out));
}

double riesz_potential(const DiscreteMeasure& mu, double alpha, std::size_t node,
                       const std::optional<CellBox>& q0) {
  const LatticeGrid& g = mu.grid();
  check_riesz_alpha(alpha, g.dim());
  require(node < g.node_count(), ErrorKind::domain_error, "node index out of range");
  const DiscreteMeasure restricted = q0 ? mu.restricted(*q0) : mu;
  const double self = std::pow(g.spacing(), alpha) * self_cell_integral(g.dim(), alpha);
  return potential_at(restricted, alpha, node, kernel_table(g, alpha), self);
}

}  // namespace fpilab

#include "fpilab/seminorm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fpilab/error.hpp"
#include "fpilab/parallel.hpp"

namespace fpilab {

namespace {

void check_box(const LatticeGrid& g, const CellBox& q) {
  for (int a = 0; a < g.dim(); ++a) {
    require(q.size >= 1 && q.lo[a] >= 0 && q.lo[a] + q.size <= g.res(), ErrorKind::domain_error,
            "cube leaves the grid cube");
  }
}

std::vector<std::size_t> box_nodes(const LatticeGrid& g, const CellBox& q) {
  std::vector<std::size_t> out;
  for_each_in_box(g.dim(), q, [&](const Index3& i) { out.push_back(g.linear_index(i)); });
  return out;
}

double power(double v, double p) {
  if (p == 1) return v;
  if (p == 2) return v * v;
  return std::pow(v, p);
}

// Offset-indexed table f(h |o|), o >= 0 per axis, entry 0 unused.
template <class F>
std::vector<double> offset_table(const LatticeGrid& g, F&& f) {
  std::vector<double> t(g.node_count(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) {
    const Index3 o = g.multi_index(i);
    double r2 = 0;
    for (int a = 0; a < g.dim(); ++a) r2 += static_cast<double>(o[a]) * o[a];
    t[i] = f(g.spacing() * std::sqrt(r2));
  }
  return t;
}

std::size_t offset_index(const LatticeGrid& g, const Index3& x, const Index3& y) {
  Index3 o{0, 0, 0};
  for (int a = 0; a < g.dim(); ++a) o[a] = std::abs(x[a] - y[a]);
  return g.linear_index(o);
}

// int over the square of side s centred at c of |grad . z|^p |z|^{-n-delta p}.
double diag_cube(int n, const Point& grad, double p, double delta, const Point& c, double s,
                 int depth) {
  if (depth == 0) {
    return std::pow(s, n) * std::pow(std::abs(grad.dot(c)), p) * std::pow(c.norm(), -n - delta * p);
  }
  const double t = s / 4;
  const int hi1 = n > 1 ? 4 : 1, hi2 = n > 2 ? 4 : 1;
  double sum = 0;
  Index3 j{0, 0, 0};
  for (j[0] = 0; j[0] < 4; ++j[0])
    for (j[1] = 0; j[1] < hi1; ++j[1])
      for (j[2] = 0; j[2] < hi2; ++j[2]) {
        Point sub = c;
        for (int a = 0; a < n; ++a) sub[a] += (j[a] - 1.5) * t;
        sum += diag_cube(n, grad, p, delta, sub, t, depth - 1);
      }
  return sum;
}

// int_{[-1/2,1/2]^n} |grad . z|^p |z|^{-n-delta p} dz, homogeneous of degree
// s = p (1 - delta) under dilations, so the inner third carries 3^-s of it.
double diag_unit_cell(int n, const Point& grad, double p, double delta, int depth) {
  const double s = p * (1 - delta);
  if (n == 1) return std::pow(std::abs(grad[0]), p) * 2 * std::pow(0.5, s) / s;
  double shell = 0;
  const int hi2 = n > 2 ? 3 : 1;
  Index3 j{0, 0, 0};
  for (j[0] = 0; j[0] < 3; ++j[0])
    for (j[1] = 0; j[1] < 3; ++j[1])
      for (j[2] = 0; j[2] < hi2; ++j[2]) {
        Point c(n);
        bool centre = true;
        for (int a = 0; a < n; ++a) {
          c[a] = (j[a] - 1) / 3.0;
          centre = centre && j[a] == 1;
        }
        if (!centre) shell += diag_cube(n, grad, p, delta, c, 1.0 / 3.0, depth);
      }
  return shell / (1 - std::pow(3.0, -s));
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double gagliardo_seminorm(const ScalarField& u, double p, double delta, const DiscreteMeasure& mu,
                          const CellBox& q, int diagonal_depth) {
  require(std::isfinite(delta) && delta > 0 && delta < 1, ErrorKind::invalid_exponent,
          "Gagliardo seminorm needs 0 < delta < 1");
  require(std::isfinite(p) && p >= 1, ErrorKind::invalid_exponent, "Gagliardo seminorm needs p >= 1");
  require(u.grid() == mu.grid(), ErrorKind::precondition_error, "u and mu live on different grids");
  require(diagonal_depth >= 0, ErrorKind::precondition_error, "diagonal_depth must be >= 0");
  const LatticeGrid& g = u.grid();
  check_box(g, q);
  const int n = g.dim();
  const double vol = g.cell_volume();
  const auto kernel = offset_table(g, [&](double r) { return vol * std::pow(r, -n - delta * p); });
  const auto nodes = box_nodes(g, q);
  const Eigen::ArrayXd masses = mu.cell_masses();
  std::vector<Index3> idx(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) idx[k] = g.multi_index(nodes[k]);

  std::vector<Eigen::ArrayXd> grad;
  if (diagonal_depth > 0) grad = gradient(u);
  const double diag_scale = std::pow(g.spacing(), p * (1 - delta));

  std::vector<double> rows(nodes.size(), 0.0);
  parallel_for(nodes.size(), [&](std::size_t a) {
    const double mx = masses[static_cast<Eigen::Index>(nodes[a])];
    if (mx == 0) return;
    const double ux = u[nodes[a]];
    double s = 0;
    for (std::size_t b = 0; b < nodes.size(); ++b) {
      if (b == a) continue;
      s += power(std::abs(ux - u[nodes[b]]), p) * kernel[offset_index(g, idx[a], idx[b])];
    }
    if (diagonal_depth > 0) {
      Point gx(n);
      for (int d = 0; d < n; ++d) gx[d] = grad[d][static_cast<Eigen::Index>(nodes[a])];
      if (gx.norm() > 0) s += diag_scale * diag_unit_cell(n, gx, p, delta, diagonal_depth);
    }
    rows[a] = mx * s;
  });
  const double total = std::accumulate(rows.begin(), rows.end(), 0.0);
  return std::pow(total, 1 / p);
}

double sobolev_seminorm(const ScalarField& u, double p, const ScalarField& w, const CellBox& q) {
  require(std::isfinite(p) && p >= 1, ErrorKind::invalid_exponent, "Sobolev seminorm needs p >= 1");
  require(u.grid() == w.grid(), ErrorKind::precondition_error, "u and w live on different grids");
  const LatticeGrid& g = u.grid();
  check_box(g, q);
  const ScalarField grad = gradient_magnitude(u);
  double s = 0;
  for_each_in_box(g.dim(), q, [&](const Index3& i) { s += power(grad.at(i), p) * w.at(i); });
  return std::pow(g.cell_volume() * s, 1 / p);
}

double sobolev_seminorm(const ScalarField& u, double p, const WeightSpec& w, const CellBox& q) {
  return sobolev_seminorm(u, p, sample_weight(w, u.grid()), q);
}

double poincare_oscillation(const ScalarField& u, const CellBox& q) {
  const double mean = cube_average(u, q);
  double s = 0;
  for_each_in_box(u.grid().dim(), q, [&](const Index3& i) { s += std::abs(u.at(i) - mean); });
  return s / std::pow(static_cast<double>(q.size), u.grid().dim());
}

double marcinkiewicz_quasinorm(std::vector<WeightedSample> samples, double q, bool normalized) {
  require(!samples.empty(), ErrorKind::precondition_error, "empty sample set");
  require(std::isfinite(q) && q > 0, ErrorKind::invalid_exponent, "quasinorm needs q > 0");
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double va = std::abs(samples[a].value), vb = std::abs(samples[b].value);
    return va != vb ? va > vb : a < b;
  });
  double total = 0;
  for (const auto& s : samples) {
    require(s.weight >= 0 && std::isfinite(s.weight) && std::isfinite(s.value),
            ErrorKind::data_error, "samples need finite values and non-negative weights");
    total += s.weight;
  }
  require(total > 0, ErrorKind::precondition_error, "sample set has zero total measure");
  const double denom = normalized ? total : 1.0;
  double cum = 0, best = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const double v = std::abs(samples[order[k]].value);
    cum += samples[order[k]].weight;
    // mu{|F| > t} for t just below v counts every sample of value >= v.
    const bool group_end = k + 1 == order.size() || std::abs(samples[order[k + 1]].value) != v;
    if (group_end && v > 0) best = std::max(best, v * std::pow(cum / denom, 1 / q));
  }
  return best;
}

ProductKernelSamples product_kernel_samples(const ScalarField& u, double delta,
                                            const DiscreteMeasure& mu, const CellBox& q,
                                            std::uint64_t seed, std::size_t full_limit) {
  require(std::isfinite(delta) && delta > 0 && delta < 1, ErrorKind::invalid_exponent,
          "product kernel needs 0 < delta < 1");
  require(u.grid() == mu.grid(), ErrorKind::precondition_error, "u and mu live on different grids");
  const LatticeGrid& g = u.grid();
  check_box(g, q);
  const int n = g.dim();
  const double vol = g.cell_volume();
  const auto kernel = offset_table(g, [&](double r) { return std::pow(r, -n - delta); });
  const auto nodes = box_nodes(g, q);
  const Eigen::ArrayXd masses = mu.cell_masses();
  std::vector<Index3> idx(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) idx[k] = g.multi_index(nodes[k]);
  const std::size_t m = nodes.size();
  require(m >= 2, ErrorKind::precondition_error, "need at least two nodes");

  ProductKernelSamples out;
  if (m * (m - 1) <= full_limit) {
    // Row a holds the pairs (a, b) with b > a, laid out consecutively.
    std::vector<std::size_t> start(m + 1, 0);
    for (std::size_t a = 0; a < m; ++a) start[a + 1] = start[a] + (m - 1 - a);
    out.samples.resize(start[m]);
    parallel_for(m, [&](std::size_t a) {
      const double ux = u[nodes[a]];
      const double mx = masses[static_cast<Eigen::Index>(nodes[a])];
      for (std::size_t b = a + 1; b < m; ++b) {
        out.samples[start[a] + (b - a - 1)] = {
            std::abs(ux - u[nodes[b]]) * kernel[offset_index(g, idx[a], idx[b])],
            (mx + masses[static_cast<Eigen::Index>(nodes[b])]) * vol};
      }
    });
    return out;
  }
  const std::size_t per = std::max<std::size_t>(1, full_limit / m);
  const double scale = static_cast<double>(m - 1) / static_cast<double>(per);
  out.subsampled = true;
  out.samples.resize(m * per);
  parallel_for(m, [&](std::size_t a) {
    std::mt19937_64 rng(splitmix(seed ^ splitmix(a)));
    std::uniform_int_distribution<std::size_t> pick(0, m - 2);
    const double ux = u[nodes[a]];
    const double wx = masses[static_cast<Eigen::Index>(nodes[a])] * vol * scale;
    for (std::size_t k = 0; k < per; ++k) {
      std::size_t b = pick(rng);
      if (b >= a) ++b;
      out.samples[a * per + k] = {
          std::abs(ux - u[nodes[b]]) * kernel[offset_index(g, idx[a], idx[b])], wx};
    }
  });
  return out;
}

CoreRatio kolmogorov_check(const ScalarField& u, double q, double r, const DiscreteMeasure& mu,
                           const CellBox& box) {
  require(std::isfinite(q) && std::isfinite(r) && q > 0 && q < r, ErrorKind::invalid_exponents,
          "Kolmogorov's inequality needs 0 < q < r < inf");
  require(u.grid() == mu.grid(), ErrorKind::precondition_error, "u and mu live on different grids");
  const LatticeGrid& g = u.grid();
  check_box(g, box);
  const Eigen::ArrayXd masses = mu.cell_masses();
  std::vector<WeightedSample> samples;
  double total = 0, integral = 0;
  for_each_in_box(g.dim(), box, [&](const Index3& i) {
    const std::size_t k = g.linear_index(i);
    const double v = u[k];
    require(v >= 0, ErrorKind::precondition_error, "u must be non-negative");
    const double m = masses[static_cast<Eigen::Index>(k)];
    samples.push_back({v, m});
    total += m;
    integral += std::pow(v, q) * m;
  });
  require(total > 0, ErrorKind::precondition_error, "mu(Q) = 0");
  const double weak = marcinkiewicz_quasinorm(std::move(samples), r, true);
  return make_ratio(integral / total, std::pow(weak, q), r / (r - q));
}

}  // namespace fpilab

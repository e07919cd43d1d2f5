#include "fpilab/maximal.hpp"

#include <cmath>
#include <limits>

#include "fpilab/error.hpp"
#include "fpilab/exact_sum.hpp"
#include "fpilab/parallel.hpp"

namespace fpilab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Wide ipow_wide(int base, int dim) {
  Wide r = 1;
  for (int a = 0; a < dim; ++a) r *= base;
  return r;
}

// Cell values in density units: density plus atom mass / h^n, quantised once.
// The sub-lattice splits every cell into 2^n halves; an atom sits in the
// half-open sub-cell that contains it with 2^n times its cell value, so that
// sums over aligned cubes agree exactly on both lattices.
struct Quantised {
  FixedPoint fp;
  WideLattice cells;
  WideLattice subcells;
};

Index3 sub_extents(const LatticeGrid& g) {
  Index3 e{1, 1, 1};
  for (int a = 0; a < g.dim(); ++a) e[a] = 2 * g.res();
  return e;
}

Index3 owner_subcell(const LatticeGrid& g, const Point& p) {
  Index3 s{0, 0, 0};
  for (int a = 0; a < g.dim(); ++a) {
    const double t = 2.0 * (p[a] - g.cube().corner[a]) / g.spacing();
    s[a] = std::clamp(static_cast<int>(std::floor(t)), 0, 2 * g.res() - 1);
  }
  return s;
}

void fill_subcells(const LatticeGrid& g, const std::vector<Wide>& per_cell, WideLattice& sub) {
  const int n = g.dim();
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    const Index3 i = g.multi_index(k);
    for (int o = 0; o < (1 << n); ++o) {
      Index3 s{0, 0, 0};
      for (int a = 0; a < n; ++a) s[a] = 2 * i[a] + ((o >> a) & 1);
      sub(s) = per_cell[k];
    }
  }
}

Quantised quantise(const DiscreteMeasure& mu) {
  const LatticeGrid& g = mu.grid();
  const double inv_vol = 1.0 / g.cell_volume();
  double total = mu.density().sum();
  for (const auto& a : mu.atoms()) total += a.mass * inv_vol;
  total *= std::ldexp(1.0, g.dim()) * (1 + 1e-9);
  Quantised q{FixedPoint::for_bound(total), WideLattice(g.extents()), WideLattice(sub_extents(g))};
  std::vector<Wide> dens(g.node_count());
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    dens[k] = q.fp.quantize(mu.density()[static_cast<Eigen::Index>(k)]);
    q.cells(g.multi_index(k)) = dens[k];
  }
  fill_subcells(g, dens, q.subcells);
  const Wide split = ipow_wide(2, g.dim());
  for (const auto& a : mu.atoms()) {
    const Wide v = q.fp.quantize(a.mass * inv_vol);
    q.cells(a.cell) += v;
    q.subcells(owner_subcell(g, a.point)) += split * v;
  }
  return q;
}

void check_alpha(double alpha, int dim) {
  require(std::isfinite(alpha) && alpha >= 0 && alpha < dim, ErrorKind::invalid_exponent,
          "maximal functions need 0 <= alpha < n");
}

CellBox local_box(const MaximalSpec& spec, const LatticeGrid& g) {
  if (spec.variant != MaximalVariant::local) return g.full_box();
  require(spec.q0.has_value(), ErrorKind::precondition_error, "local maximal function needs Q0");
  const CellBox b = *spec.q0;
  for (int a = 0; a < g.dim(); ++a) {
    require(b.size >= 1 && b.lo[a] >= 0 && b.lo[a] + b.size <= g.res(), ErrorKind::domain_error,
            "Q0 leaves the grid cube");
  }
  return b;
}

// Sup over aligned cubes inside `box` containing each node; 0 off the box.
template <class CubeSum>
Eigen::ArrayXd sup_aligned_fast(const LatticeGrid& g, const CellBox& box, double alpha,
                                const FixedPoint& fp, CubeSum&& cube_sum) {
  const int n = g.dim();
  const std::size_t total = g.node_count();
  Eigen::ArrayXd best = Eigen::ArrayXd::Constant(static_cast<Eigen::Index>(total), kNegInf);
  std::vector<double> cur(total, kNegInf), nxt(total, kNegInf);
  for (int k = 1; k <= box.size; ++k) {
    const int m = box.size - k + 1;
    const double scale = std::pow(k * g.spacing(), alpha);
    const Wide count = ipow_wide(k, n);
    const CellBox corners{box.lo, m};
    for_each_in_box(n, corners, [&](const Index3& lo) {
      cur[g.linear_index(lo)] =
          scale * fp.to_double(cube_sum(lo, box_hi(n, CellBox{lo, k})) / count);
    });
    // Separable window max: after the pass over axis a, index a runs over
    // nodes instead of cube corners.
    for (int a = 0; a < n; ++a) {
      for_each_in_box(n, box, [&](const Index3& x) {
        const int lo_a = std::max(box.lo[a], x[a] - k + 1);
        const int hi_a = std::min(x[a], box.lo[a] + m - 1);
        double v = kNegInf;
        Index3 j = x;
        for (j[a] = lo_a; j[a] <= hi_a; ++j[a]) v = std::max(v, cur[g.linear_index(j)]);
        nxt[g.linear_index(x)] = v;
      });
      std::swap(cur, nxt);
    }
    for_each_in_box(n, box, [&](const Index3& x) {
      const std::size_t i = g.linear_index(x);
      best[static_cast<Eigen::Index>(i)] = std::max(best[static_cast<Eigen::Index>(i)], cur[i]);
    });
  }
  for (Eigen::Index i = 0; i < best.size(); ++i) {
    if (best[i] == kNegInf) best[i] = 0;
  }
  return best;
}

Eigen::ArrayXd sup_aligned_oracle(const LatticeGrid& g, const CellBox& box, double alpha,
                                  const FixedPoint& fp, const WideLattice& cells) {
  const int n = g.dim();
  Eigen::ArrayXd best = Eigen::ArrayXd::Zero(static_cast<Eigen::Index>(g.node_count()));
  for_each_subcube(n, box, [&](const CellBox& r) {
    const Wide s = cells.direct_sum(r.lo, box_hi(n, r));
    const double v = std::pow(r.size * g.spacing(), alpha) * fp.to_double(s / ipow_wide(r.size, n));
    for_each_in_box(n, r, [&](const Index3& x) {
      auto& b = best[static_cast<Eigen::Index>(g.linear_index(x))];
      b = std::max(b, v);
    });
  });
  return best;
}

// Sub-cell box of Q(x, k h) clipped to the grid cube.
void centered_box(const LatticeGrid& g, const Index3& i, int k, Index3& lo, Index3& hi) {
  lo = {0, 0, 0};
  hi = {1, 1, 1};
  for (int a = 0; a < g.dim(); ++a) {
    lo[a] = std::max(0, 2 * i[a] + 1 - k);
    hi[a] = std::min(2 * g.res(), 2 * i[a] + 1 + k);
  }
}

template <class Value>
Eigen::ArrayXd sup_centered(const LatticeGrid& g, Value&& value) {
  Eigen::ArrayXd out(static_cast<Eigen::Index>(g.node_count()));
  parallel_for(g.node_count(), [&](std::size_t node) {
    const Index3 i = g.multi_index(node);
    double best = kNegInf;
    Index3 lo, hi;
    for (int k = 1; k <= 2 * g.res(); ++k) {
      centered_box(g, i, k, lo, hi);
      best = std::max(best, value(k, lo, hi));
    }
    out[static_cast<Eigen::Index>(node)] = best;
  });
  return out;
}

}  // namespace

ScalarField maximal_function(const MaximalSpec& spec, const DiscreteMeasure& mu, EvalPath path) {
  const LatticeGrid& g = mu.grid();
  const int n = g.dim();
  check_alpha(spec.alpha, n);
  const double h = g.spacing();
  const bool fast = path == EvalPath::fast;

  if (spec.variant == MaximalVariant::weighted_centered) {
    require(spec.weight.has_value(), ErrorKind::precondition_error,
            "weighted maximal function needs a weight");
    require(spec.weight->grid() == g, ErrorKind::precondition_error,
            "weight and measure live on different grids");
    require(!mu.has_atoms(), ErrorKind::precondition_error,
            "weighted maximal function takes a density, not atoms");
    const Eigen::ArrayXd& w = spec.weight->values();
    require((w > 0).all(), ErrorKind::not_a_weight, "weight must be positive");
    const Eigen::ArrayXd num = mu.density() * w;
    const double split = std::ldexp(1.0, n) * (1 + 1e-9);
    const FixedPoint fn = FixedPoint::for_bound(num.sum() * split);
    const FixedPoint fd = FixedPoint::for_bound(w.sum() * split);
    std::vector<Wide> qn(g.node_count()), qd(g.node_count());
    for (std::size_t k = 0; k < g.node_count(); ++k) {
      qn[k] = fn.quantize(num[static_cast<Eigen::Index>(k)]);
      qd[k] = fd.quantize(w[static_cast<Eigen::Index>(k)]);
    }
    WideLattice ln(sub_extents(g)), ld(sub_extents(g));
    fill_subcells(g, qn, ln);
    fill_subcells(g, qd, ld);
    const std::optional<SummedAreaTable> sn = fast ? std::optional(SummedAreaTable(ln)) : std::nullopt;
    const std::optional<SummedAreaTable> sd = fast ? std::optional(SummedAreaTable(ld)) : std::nullopt;
    auto value = [&](int k, const Index3& lo, const Index3& hi) {
      const Wide a = fast ? sn->box_sum(lo, hi) : ln.direct_sum(lo, hi);
      const Wide b = fast ? sd->box_sum(lo, hi) : ld.direct_sum(lo, hi);
      return std::pow(k * h, spec.alpha) * (fn.to_double(a) / fd.to_double(b));
    };
    return ScalarField(g, sup_centered(g, value));
  }

  const Quantised q = quantise(mu);
  if (spec.variant == MaximalVariant::centered) {
    const std::optional<SummedAreaTable> sat =
        fast ? std::optional(SummedAreaTable(q.subcells)) : std::nullopt;
    auto value = [&](int k, const Index3& lo, const Index3& hi) {
      const Wide s = fast ? sat->box_sum(lo, hi) : q.subcells.direct_sum(lo, hi);
      return std::pow(k * h, spec.alpha) * q.fp.to_double(s / ipow_wide(2 * k, n));
    };
    return ScalarField(g, sup_centered(g, value));
  }

  const CellBox box = local_box(spec, g);
  if (!fast) return ScalarField(g, sup_aligned_oracle(g, box, spec.alpha, q.fp, q.cells));
  const SummedAreaTable sat(q.cells);
  auto cube_sum = [&](const Index3& lo, const Index3& hi) { return sat.box_sum(lo, hi); };
  return ScalarField(g, sup_aligned_fast(g, box, spec.alpha, q.fp, cube_sum));
}

ScalarField maximal_function(const MaximalSpec& spec, const ScalarField& u, EvalPath path) {
  return maximal_function(spec, DiscreteMeasure::from_field(u), path);
}

ScalarField iterated_maximal(const DiscreteMeasure& mu) {
  const ScalarField first = maximal_function(MaximalSpec{}, mu);
  return maximal_function(MaximalSpec{}, first);
}

}  // namespace fpilab

#include "fpilab/weights.hpp"

#include <cmath>

#include "fpilab/error.hpp"
#include "fpilab/exact_sum.hpp"
#include "fpilab/parallel.hpp"

namespace fpilab {

namespace {

struct Best {
  double value = 0;
  CellBox box;
  bool set = false;
};

bool better(double v, const CellBox& b, const Best& cur) {
  if (!cur.set) return true;
  if (v != cur.value) return v > cur.value;
  if (b.lo != cur.box.lo) return b.lo < cur.box.lo;
  return b.size < cur.box.size;
}

std::size_t ipow(int base, int dim) {
  std::size_t r = 1;
  for (int a = 0; a < dim; ++a) r *= static_cast<std::size_t>(base);
  return r;
}

// i-th corner (row-major) of the m^dim corners starting at `origin`.
Index3 corner_at(int dim, const Index3& origin, int m, std::size_t i) {
  Index3 lo{0, 0, 0};
  for (int a = dim - 1; a >= 0; --a) {
    lo[a] = origin[a] + static_cast<int>(i % m);
    i /= m;
  }
  return lo;
}

template <class Prepare, class Value>
Best scan_subcubes(int dim, const CellBox& within, Prepare&& prepare, Value&& value) {
  Best best;
  for (int k = 1; k <= within.size; ++k) {
    prepare(k);
    const int m = within.size - k + 1;
    std::vector<double> vals(ipow(m, dim));
    parallel_for(vals.size(), [&](std::size_t i) {
      vals[i] = value(k, corner_at(dim, within.lo, m, i));
    });
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const CellBox box{corner_at(dim, within.lo, m, i), k};
      if (better(vals[i], box, best)) best = {vals[i], box, true};
    }
  }
  return best;
}

WideLattice quantized(const LatticeGrid& g, const Eigen::ArrayXd& v, const FixedPoint& fp) {
  WideLattice cells(g.extents());
  for (std::size_t k = 0; k < g.node_count(); ++k) {
    cells(g.multi_index(k)) = fp.quantize(v[static_cast<Eigen::Index>(k)]);
  }
  return cells;
}

CellBox checked_box(const LatticeGrid& g, const std::optional<CellBox>& within) {
  const CellBox box = within ? *within : g.full_box();
  for (int a = 0; a < g.dim(); ++a) {
    require(box.size >= 1 && box.lo[a] >= 0 && box.lo[a] + box.size <= g.res(),
            ErrorKind::domain_error, "cube leaves the grid cube");
  }
  return box;
}

void require_weight(const ScalarField& w) {
  require((w.values() > 0).all() && w.values().allFinite(), ErrorKind::not_a_weight,
          "weight must be positive and finite at every node");
}

}  // namespace

ApReport a1_constant(const ScalarField& w, const std::optional<CellBox>& within) {
  require_weight(w);
  const LatticeGrid& g = w.grid();
  const int n = g.dim();
  const CellBox box = checked_box(g, within);
  const FixedPoint fp = FixedPoint::for_bound(w.values().sum());
  const SummedAreaTable sat(quantized(g, w.values(), fp));

  // mins[lo] = min of w over the current window of side k anchored at lo.
  std::vector<double> mins(w.values().data(), w.values().data() + w.values().size());
  std::vector<double> next(mins.size());
  auto prepare = [&](int k) {
    if (k == 1) return;
    const int m = box.size - k + 1;
    parallel_for(ipow(m, n), [&](std::size_t i) {
      const Index3 lo = corner_at(n, box.lo, m, i);
      double v = mins[g.linear_index(lo)];
      for (int o = 1; o < (1 << n); ++o) {
        Index3 j = lo;
        for (int a = 0; a < n; ++a) j[a] += (o >> a) & 1;
        v = std::min(v, mins[g.linear_index(j)]);
      }
      next[g.linear_index(lo)] = v;
    });
    std::swap(mins, next);
  };
  auto value = [&](int k, const Index3& lo) {
    const Wide s = sat.box_sum(lo, box_hi(n, CellBox{lo, k}));
    const Wide floor = fp.quantize(mins[g.linear_index(lo)]) * static_cast<Wide>(ipow(k, n));
    require(floor > 0, ErrorKind::numerical_error, "weight minimum underflows the fixed-point scale");
    return static_cast<double>(s) / static_cast<double>(floor);
  };
  const Best best = scan_subcubes(n, box, prepare, value);
  return ApReport{1.0, best.value, g.to_cube(best.box), g};
}

ApReport a1_constant(const WeightSpec& w, const LatticeGrid& grid) {
  return a1_constant(sample_weight(w, grid));
}

ApReport ap_constant(const ScalarField& w, double p, const std::optional<CellBox>& within) {
  require(p >= 1 && std::isfinite(p), ErrorKind::invalid_exponent, "A_p needs 1 <= p < inf");
  if (p == 1) return a1_constant(w, within);
  require_weight(w);
  const LatticeGrid& g = w.grid();
  const int n = g.dim();
  const CellBox box = checked_box(g, within);
  const double pp = p / (p - 1);
  // the constant is 0-homogeneous; w / max w makes constant weights exact
  const Eigen::ArrayXd v = w.values() / w.values().maxCoeff();
  const Eigen::ArrayXd dual = v.pow(1 - pp);
  const FixedPoint fw = FixedPoint::for_bound(v.sum());
  const FixedPoint fd = FixedPoint::for_bound(dual.sum());
  const SummedAreaTable sw(quantized(g, v, fw));
  const SummedAreaTable sd(quantized(g, dual, fd));
  auto value = [&](int k, const Index3& lo) {
    const Index3 hi = box_hi(n, CellBox{lo, k});
    const double count = static_cast<double>(ipow(k, n));
    const double aw = fw.to_double(sw.box_sum(lo, hi)) / count;
    const double ad = fd.to_double(sd.box_sum(lo, hi)) / count;
    return aw * std::pow(ad, p - 1);
  };
  const Best best = scan_subcubes(n, box, [](int) {}, value);
  return ApReport{p, best.value, g.to_cube(best.box), g};
}

ApReport ap_constant(const WeightSpec& w, double p, const LatticeGrid& grid) {
  return ap_constant(sample_weight(w, grid), p);
}

CoreRatio make_ratio(double lhs, double core, double factor) {
  CoreRatio r{lhs, core, factor, 0.0};
  if (lhs != 0) r.ratio = lhs / (factor * core);
  require(std::isfinite(r.ratio) && r.ratio >= 0, ErrorKind::numerical_error,
          "core ratio is not finite");
  return r;
}

CoreRatio check_ap_function_inequality(const ScalarField& w, double p, const ScalarField& u,
                                       const CellBox& q, std::optional<double> constant) {
  require(u.grid() == w.grid(), ErrorKind::precondition_error, "u and w live on different grids");
  require(p >= 1 && std::isfinite(p), ErrorKind::invalid_exponent, "A_p needs 1 <= p < inf");
  const LatticeGrid& g = w.grid();
  checked_box(g, q);
  const double c = constant ? *constant : ap_constant(w, p).constant;
  double su = 0, supw = 0, sw = 0;
  for_each_in_box(g.dim(), q, [&](const Index3& i) {
    const double ui = u.at(i);
    require(ui >= 0, ErrorKind::precondition_error, "u must be non-negative");
    su += ui;
    supw += std::pow(ui, p) * w.at(i);
    sw += w.at(i);
  });
  const double count = static_cast<double>(ipow(q.size, g.dim()));
  return make_ratio(su / count, std::pow(supw / sw, 1 / p), std::pow(c, 1 / p));
}

CoreRatio check_ap_set_inequality(const ScalarField& w, double p, const std::vector<bool>& in_e,
                                  const CellBox& q, std::optional<double> constant) {
  const LatticeGrid& g = w.grid();
  require(in_e.size() == g.node_count(), ErrorKind::precondition_error,
          "set mask does not match the grid");
  require(p >= 1 && std::isfinite(p), ErrorKind::invalid_exponent, "A_p needs 1 <= p < inf");
  checked_box(g, q);
  double e_count = 0, we = 0, wq = 0;
  for_each_in_box(g.dim(), q, [&](const Index3& i) {
    const std::size_t k = g.linear_index(i);
    wq += w[k];
    if (in_e[k]) {
      e_count += 1;
      we += w[k];
    }
  });
  std::size_t total = 0;
  for (bool b : in_e) total += b;
  require(e_count > 0, ErrorKind::precondition_error, "E is empty");
  require(static_cast<double>(total) == e_count, ErrorKind::precondition_error,
          "E must lie inside Q");
  const double c = constant ? *constant : ap_constant(w, p).constant;
  const double cell = g.cell_volume();
  const double count = static_cast<double>(ipow(q.size, g.dim()));
  const double lhs = e_count * cell / std::pow(we * cell, 1 / p);
  const double core = count * cell / std::pow(wq * cell, 1 / p);
  return make_ratio(lhs, core, std::pow(c, 1 / p));
}

}  // namespace fpilab

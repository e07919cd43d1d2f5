#pragma once

#include <cmath>
#include <vector>

#include "fpilab/lattice.hpp"

namespace fpilab {

// Fixed-point accumulation. Every cell value is quantised once onto a common
// binary scale; sums of quantised values are then exact and independent of
// evaluation order, so a summed-area table and a direct loop agree bit for bit.
using Wide = __int128;

class FixedPoint {
 public:
  // Scale under which any sum of magnitudes up to `total_bound` stays below
  // 2^120. Values above total_bound * 2^-66 are represented exactly.
  static FixedPoint for_bound(double total_bound);

  Wide quantize(double v) const { return static_cast<Wide>(std::ldexp(v, shift_)); }
  double to_double(Wide q) const { return std::ldexp(static_cast<double>(q), -shift_); }
  int shift() const { return shift_; }

 private:
  explicit FixedPoint(int shift) : shift_(shift) {}
  int shift_;
};

/// Dense 3-index array of Wide values (extent 1 on unused axes).
class WideLattice {
 public:
  explicit WideLattice(const Index3& extents);

  const Index3& extents() const { return ext_; }
  std::size_t index(const Index3& i) const {
    return (static_cast<std::size_t>(i[0]) * ext_[1] + i[1]) * ext_[2] + i[2];
  }
  Wide& operator()(const Index3& i) { return data_[index(i)]; }
  Wide operator()(const Index3& i) const { return data_[index(i)]; }

  // Brute-force sum over [lo, hi) on all three axes.
  Wide direct_sum(const Index3& lo, const Index3& hi) const;

 private:
  Index3 ext_;
  std::vector<Wide> data_;
};

/// n-dimensional prefix sums: table(i) = sum of cells with index < i.
class SummedAreaTable {
 public:
  explicit SummedAreaTable(const WideLattice& cells);

  // Sum over [lo, hi) by inclusion-exclusion over the 8 table corners.
  Wide box_sum(const Index3& lo, const Index3& hi) const;

 private:
  std::size_t index(int i0, int i1, int i2) const {
    return (static_cast<std::size_t>(i0) * ext_[1] + i1) * ext_[2] + i2;
  }
  Index3 ext_;  // cell extents + 1
  std::vector<Wide> table_;
};

}  // namespace fpilab

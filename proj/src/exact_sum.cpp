#include "fpilab/exact_sum.hpp"

#include "fpilab/error.hpp"

namespace fpilab {

FixedPoint FixedPoint::for_bound(double total_bound) {
  require(std::isfinite(total_bound) && total_bound >= 0, ErrorKind::numerical_error,
          "mass bound must be finite");
  if (total_bound == 0) return FixedPoint(0);
  return FixedPoint(119 - std::ilogb(total_bound));
}

WideLattice::WideLattice(const Index3& extents)
    : ext_(extents),
      data_(static_cast<std::size_t>(extents[0]) * extents[1] * extents[2], Wide{0}) {}

Wide WideLattice::direct_sum(const Index3& lo, const Index3& hi) const {
  Wide s = 0;
  for (int i0 = lo[0]; i0 < hi[0]; ++i0) {
    for (int i1 = lo[1]; i1 < hi[1]; ++i1) {
      const Wide* row = data_.data() + index({i0, i1, 0});
      for (int i2 = lo[2]; i2 < hi[2]; ++i2) s += row[i2];
    }
  }
  return s;
}

SummedAreaTable::SummedAreaTable(const WideLattice& cells)
    : ext_{cells.extents()[0] + 1, cells.extents()[1] + 1, cells.extents()[2] + 1},
      table_(static_cast<std::size_t>(ext_[0]) * ext_[1] * ext_[2], Wide{0}) {
  const Index3& c = cells.extents();
  for (int i0 = 0; i0 < c[0]; ++i0)
    for (int i1 = 0; i1 < c[1]; ++i1)
      for (int i2 = 0; i2 < c[2]; ++i2) table_[index(i0 + 1, i1 + 1, i2 + 1)] = cells({i0, i1, i2});
  for (int i0 = 1; i0 < ext_[0]; ++i0)
    for (int i1 = 0; i1 < ext_[1]; ++i1)
      for (int i2 = 0; i2 < ext_[2]; ++i2) table_[index(i0, i1, i2)] += table_[index(i0 - 1, i1, i2)];
  for (int i0 = 0; i0 < ext_[0]; ++i0)
    for (int i1 = 1; i1 < ext_[1]; ++i1)
      for (int i2 = 0; i2 < ext_[2]; ++i2) table_[index(i0, i1, i2)] += table_[index(i0, i1 - 1, i2)];
  for (int i0 = 0; i0 < ext_[0]; ++i0)
    for (int i1 = 0; i1 < ext_[1]; ++i1)
      for (int i2 = 1; i2 < ext_[2]; ++i2) table_[index(i0, i1, i2)] += table_[index(i0, i1, i2 - 1)];
}

Wide SummedAreaTable::box_sum(const Index3& lo, const Index3& hi) const {
  return table_[index(hi[0], hi[1], hi[2])] - table_[index(lo[0], hi[1], hi[2])] -
         table_[index(hi[0], lo[1], hi[2])] - table_[index(hi[0], hi[1], lo[2])] +
         table_[index(lo[0], lo[1], hi[2])] + table_[index(lo[0], hi[1], lo[2])] +
         table_[index(hi[0], lo[1], lo[2])] - table_[index(lo[0], lo[1], lo[2])];
}

}  // namespace fpilab

#pragma once

#include <iosfwd>
#include <string>

#include "fpilab/lattice.hpp"

namespace fpilab {

// Field CSV, version 1:
//   # fpilab-field v1 dim=<n> N=<N> corner=<c1,..> side=<l>
// followed by N^n lines holding one value each in row-major node order.
// Values are written with 17 significant digits, so finite fields round-trip
// bit for bit.
void write_field(std::ostream& os, const ScalarField& field);
void save_field(const ScalarField& field, const std::string& path);

// Reads a field and the grid described by its header.
ScalarField read_field(std::istream& is, FieldKind kind = FieldKind::function);
ScalarField load_field(const std::string& path, FieldKind kind = FieldKind::function);

// As above, but the header must describe `grid`.
ScalarField load_field(const std::string& path, const LatticeGrid& grid,
                       FieldKind kind = FieldKind::function);

}  // namespace fpilab

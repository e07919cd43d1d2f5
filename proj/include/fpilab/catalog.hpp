#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fpilab/lattice.hpp"

namespace fpilab {

// key=value lists such as "a=0.5,center=0,0"; bare numbers after a key extend
// that key's list.
using ParamMap = std::map<std::string, std::vector<double>, std::less<>>;
ParamMap parse_params(std::string_view text);
double scalar_param(const ParamMap& params, std::string_view key, double fallback);

/// A C^1 test function from the catalog, defined on reference coordinates
/// t = (x - corner) / side in [0,1]^n so it rescales to any cube.
struct FuncSpec {
  std::string id;
  ParamMap params;

  static FuncSpec parse(std::string_view text);
  std::string label() const;
  double evaluate(const Point& t) const;
  bool is_constant() const { return id == "const"; }
};

struct CatalogEntry {
  std::string id;
  std::string params;
  std::string description;
};

std::vector<CatalogEntry> function_catalog();

ScalarField sample_function(const FuncSpec& f, const LatticeGrid& grid);

}  // namespace fpilab

#include "fpilab/field_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fpilab/catalog.hpp"
#include "fpilab/error.hpp"

namespace fpilab {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_field(std::ostream& os, const ScalarField& field) {
  const auto& g = field.grid();
  os << "# fpilab-field v1 dim=" << g.dim() << " N=" << g.res() << " corner=";
  for (int a = 0; a < g.dim(); ++a) os << (a ? "," : "") << fmt17(g.cube().corner[a]);
  os << " side=" << fmt17(g.cube().side) << '\n';
  for (Eigen::Index i = 0; i < field.values().size(); ++i) os << fmt17(field.values()[i]) << '\n';
}

void save_field(const ScalarField& field, const std::string& path) {
  std::ofstream os(path);
  require(bool(os), ErrorKind::format_error, "cannot open '" + path + "' for writing");
  write_field(os, field);
  require(bool(os), ErrorKind::format_error, "write to '" + path + "' failed");
}

ScalarField read_field(std::istream& is, FieldKind kind) {
  std::string header;
  require(bool(std::getline(is, header)), ErrorKind::format_error, "empty field file");
  std::istringstream hs(header);
  std::string hash, magic, version;
  hs >> hash >> magic >> version;
  require(hash == "#" && magic == "fpilab-field", ErrorKind::format_error, "not a field file");
  require(version == "v1", ErrorKind::format_error, "unsupported field version '" + version + "'");

  int dim = 0, res = 0;
  double side = 0;
  std::vector<double> corner;
  std::string token;
  while (hs >> token) {
    const auto eq = token.find('=');
    require(eq != std::string::npos, ErrorKind::format_error, "bad header token '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    try {
      if (key == "dim") {
        dim = std::stoi(value);
      } else if (key == "N") {
        res = std::stoi(value);
      } else if (key == "side") {
        side = std::stod(value);
      } else if (key == "corner") {
        corner = parse_params("c=" + value).at("c");
      } else {
        fail(ErrorKind::format_error, "unknown header key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      fail(ErrorKind::format_error, "bad header value for '" + key + "'");
    }
  }
  require(dim >= 1 && dim <= kMaxDim && static_cast<int>(corner.size()) == dim,
          ErrorKind::format_error, "header dimension and corner disagree");
  Point c(dim);
  for (int a = 0; a < dim; ++a) c[a] = corner[static_cast<std::size_t>(a)];
  const LatticeGrid grid(Cube(dim, c, side), res);

  Eigen::ArrayXd values(static_cast<Eigen::Index>(grid.node_count()));
  std::string line;
  Eigen::Index count = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    require(count < values.size(), ErrorKind::format_error, "more values than nodes");
    char* end = nullptr;
    const double v = std::strtod(line.c_str(), &end);
    require(end != line.c_str(), ErrorKind::format_error, "bad value on data line " +
                                                              std::to_string(count + 1));
    require(std::isfinite(v), ErrorKind::data_error,
            "non-finite value on data line " + std::to_string(count + 1));
    values[count++] = v;
  }
  require(count == values.size(), ErrorKind::format_error,
          "expected " + std::to_string(values.size()) + " values, found " + std::to_string(count));
  return ScalarField(grid, std::move(values), kind);
}

ScalarField load_field(const std::string& path, FieldKind kind) {
  std::ifstream is(path);
  require(bool(is), ErrorKind::format_error, "cannot open '" + path + "'");
  return read_field(is, kind);
}

ScalarField load_field(const std::string& path, const LatticeGrid& grid, FieldKind kind) {
  ScalarField f = load_field(path, kind);
  require(f.grid() == grid, ErrorKind::format_error, "field grid does not match the requested grid");
  return f;
}

}  // namespace fpilab

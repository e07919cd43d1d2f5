#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "fpilab/catalog.hpp"
#include "fpilab/config.hpp"
#include "fpilab/error.hpp"
#include "fpilab/field_io.hpp"
#include "fpilab/maximal.hpp"
#include "fpilab/parallel.hpp"
#include "fpilab/seminorm.hpp"
#include "fpilab/verify.hpp"
#include "fpilab/weights.hpp"

using namespace fpilab;

namespace {

struct Options {
  std::string config;
  std::string out;
  int threads = 0;
  std::uint64_t seed = 0;
  bool quiet = false;
  int dim = 2;
  int grid = 32;
  std::string ids;
  std::string ps = "2";
  std::string deltas = "0.5";
  std::string weights = "constant:c=1";
  std::string atoms;
  std::string funcs = "gauss";
  std::string field;
  std::optional<double> eta;
  double r = 1;
  double alpha = 1;
  std::optional<double> beta;
  double q = 0.5;
  int diagonal_depth = 0;
  bool normalized = false;
  std::string variant = "noncentered";
  std::size_t node = 0;
  std::size_t pair_cap = 10'000'000;
  std::string grid_list;
  std::string quantity;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    const auto b = cur.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    out.push_back(cur.substr(b, cur.find_last_not_of(" \t") - b + 1));
  }
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == s.size() && used > 0, ErrorKind::parse_error, "not a number: '" + s + "'");
  return v;
}

std::vector<double> numbers(const std::string& s) {
  std::vector<double> out;
  for (const auto& t : split(s, ',')) out.push_back(to_double(t));
  return out;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double single(const std::string& list, const char* flag) {
  const auto v = numbers(list);
  require(v.size() == 1, ErrorKind::parse_error, std::string(flag) + " takes one value here");
  return v.front();
}

std::string single_text(const std::string& list, const char* flag) {
  const auto v = split(list, ';');
  require(v.size() == 1, ErrorKind::parse_error, std::string(flag) + " takes one value here");
  return v.front();
}

VerifyParams base_params(const Options& o) {
  VerifyParams v;
  v.dim = o.dim;
  v.res = o.grid;
  v.atoms = o.atoms;
  v.alpha = o.alpha;
  v.beta = o.beta;
  v.eta = o.eta;
  v.r = o.r;
  v.q = o.q;
  v.diag_depth = o.diagonal_depth;
  v.normalized = o.normalized;
  v.pair_cap = o.pair_cap;
  v.seed = o.seed;
  return v;
}

SweepAxes axes_of(const Options& o) {
  SweepAxes a;
  a.ids = split(o.ids, ',');
  require(!a.ids.empty(), ErrorKind::parse_error, "--id is required");
  for (const auto& id : a.ids) {
    require(is_inequality_id(id), ErrorKind::parse_error, "unknown inequality id '" + id + "'");
  }
  a.deltas = numbers(o.deltas);
  a.ps = numbers(o.ps);
  a.weights = split(o.weights, ';');
  a.funcs = split(o.funcs, ';');
  return a;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      require(static_cast<bool>(file_), ErrorKind::data_error, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int emit_rows(const Options& o, const std::vector<InequalityReport>& rows, bool summary) {
  Output out(o.out);
  write_report_csv(out.stream(), rows, summary);
  for (const auto& r : rows) {
    if (!r.valid) {
      if (!o.quiet) std::cerr << "fpilab: invalid row for " << r.id << '\n';
      return 4;
    }
  }
  return 0;
}

int cmd_verify(const Options& o) {
  const SweepAxes a = axes_of(o);
  const VerifyParams base = base_params(o);
  std::vector<InequalityReport> rows;
  for (const auto& id : a.ids)
    for (double d : a.deltas)
      for (double p : a.ps)
        for (const auto& w : a.weights)
          for (const auto& f : a.funcs) {
            VerifyParams v = base;
            v.delta = d;
            v.p = p;
            v.weight = w;
            v.func = f;
            rows.push_back(verify_inequality(id, v));
          }
  sort_reports(rows);
  return emit_rows(o, rows, false);
}

int cmd_sweep(const Options& o) {
  const SweepTable t = sweep(axes_of(o), base_params(o));
  if (!o.quiet) {
    for (const auto& s : t.skipped) std::cerr << "fpilab: skipped " << s << '\n';
  }
  return emit_rows(o, t.rows, true);
}

int cmd_converge(const Options& o) {
  const auto ids = split(o.ids, ',');
  require(ids.size() == 1, ErrorKind::parse_error, "converge takes exactly one --id");
  require(is_inequality_id(ids[0]), ErrorKind::parse_error, "unknown inequality id '" + ids[0] + "'");
  std::vector<int> grids;
  for (double v : numbers(o.grid_list)) {
    require(v == std::floor(v) && v >= 1, ErrorKind::parse_error, "--grid-list takes positive integers");
    grids.push_back(static_cast<int>(v));
  }
  require(!grids.empty(), ErrorKind::parse_error, "--grid-list is required");
  VerifyParams v = base_params(o);
  v.p = single(o.ps, "--p");
  v.delta = single(o.deltas, "--delta");
  v.weight = single_text(o.weights, "--weight");
  v.func = single_text(o.funcs, "--func");
  const auto rows = convergence_study(ids[0], v, grids);
  Output out(o.out);
  write_convergence_csv(out.stream(), ids[0], rows);
  return 0;
}

int cmd_catalog(const Options& o) {
  Output out(o.out);
  std::ostream& os = out.stream();
  os << "kind,id,params,description\n";
  for (const auto& e : function_catalog()) {
    os << "func," << e.id << ",\"" << e.params << "\",\"" << e.description << "\"\n";
  }
  os << "weight,constant,\"c=<v>\",\"w = c\"\n"
     << "weight,power,\"a=<v>,center=<c1,..>\",\"w = |x - center|^-a, 0 <= a < n\"\n"
     << "weight,step,\"axis=<i>,t=<v>,lo=<v>,hi=<v>\",\"lo where x_axis < t, hi elsewhere\"\n"
     << "weight,prod,\"(<spec>)*(<spec>)\",\"pointwise product\"\n";
  os << "id";
  for (const auto& id : inequality_ids()) os << ',' << id;
  os << '\n';
  return 0;
}

ScalarField input_function(const Options& o) {
  if (!o.field.empty()) return load_field(o.field);
  return sample_function(FuncSpec::parse(single_text(o.funcs, "--func")), make_grid(Cube::unit(o.dim), o.grid));
}

MaximalVariant parse_variant(const std::string& s) {
  if (s == "centered") return MaximalVariant::centered;
  if (s == "noncentered") return MaximalVariant::noncentered;
  if (s == "local") return MaximalVariant::local;
  if (s == "weighted-centered" || s == "weighted_centered") return MaximalVariant::weighted_centered;
  fail(ErrorKind::parse_error, "unknown maximal variant '" + s + "'");
}

int cmd_eval(const Options& o) {
  const std::string& what = o.quantity;
  auto print = [&](double v) {
    Output out(o.out);
    out.stream() << num(v) << '\n';
    return 0;
  };
  if (what == "alpha") return print(alpha_delta_p(single(o.deltas, "--delta"), single(o.ps, "--p")));

  const ScalarField u = input_function(o);
  const LatticeGrid& g = u.grid();
  const CellBox q = g.full_box();
  const std::string wtext = single_text(o.weights, "--weight");
  auto measure = [&] { return DiscreteMeasure::sample(MeasureSpec::parse(wtext, o.atoms), g); };
  auto weight = [&] { return sample_weight(WeightSpec::parse(wtext), g); };

  if (what == "gagliardo") {
    return print(gagliardo_seminorm(u, single(o.ps, "--p"), single(o.deltas, "--delta"), measure(), q,
                                    o.diagonal_depth));
  }
  if (what == "sobolev") return print(sobolev_seminorm(u, single(o.ps, "--p"), weight(), q));
  if (what == "oscillation") return print(poincare_oscillation(u, q));
  if (what == "marcinkiewicz") {
    const Eigen::ArrayXd m = measure().cell_masses();
    std::vector<WeightedSample> s(g.node_count());
    for (std::size_t k = 0; k < s.size(); ++k) s[k] = {u[k], m[static_cast<Eigen::Index>(k)]};
    return print(marcinkiewicz_quasinorm(std::move(s), o.q, o.normalized));
  }
  if (what == "a1") return print(a1_constant(weight()).constant);
  if (what == "ap") return print(ap_constant(weight(), single(o.ps, "--p")).constant);
  if (what == "riesz") {
    require(o.node < g.node_count(), ErrorKind::domain_error, "--node out of range");
    const DiscreteMeasure mu(g, u.values().abs(), o.atoms.empty() ? std::vector<Atom>{} : parse_atoms(o.atoms));
    return print(riesz_potential(mu, o.alpha, o.node));
  }
  if (what == "maximal") {
    MaximalSpec spec;
    spec.variant = parse_variant(o.variant);
    spec.alpha = o.alpha;
    if (spec.variant == MaximalVariant::local) spec.q0 = q;
    if (spec.variant == MaximalVariant::weighted_centered) spec.weight = weight();
    const ScalarField m = maximal_function(spec, ScalarField(g, u.values().abs()));
    Output out(o.out);
    write_field(out.stream(), m);
    return 0;
  }
  fail(ErrorKind::parse_error, "unknown quantity '" + what + "'");
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::parse_error:
    case ErrorKind::domain_error:
    case ErrorKind::dimension_error:
    case ErrorKind::invalid_exponent:
    case ErrorKind::invalid_exponents:
    case ErrorKind::nothing_to_sweep:
    case ErrorKind::invalid_resolution:
    case ErrorKind::grid_too_large:
      return 2;
    default:
      return 3;
  }
}

// --config <file> or --config=<file>, wherever it appears.
std::optional<std::string> find_config(const std::vector<std::string>& args) {
  std::optional<std::string> path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) path = args[k + 1];
    if (args[k].rfind("--config=", 0) == 0) path = args[k].substr(9);
  }
  return path;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  Options o;
  CLI::App app{"fractional Poincare inequality laboratory"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.fallthrough();

  app.add_option("--config", o.config, "key = value file; flags override its keys");
  app.add_option("--out", o.out, "output file (stdout by default)");
  app.add_option("--threads", o.threads, "worker threads (0: hardware)");
  app.add_option("--seed", o.seed, "seed for sampled pair sets");
  app.add_flag("--quiet", o.quiet, "suppress diagnostics");
  app.add_option("--dim", o.dim, "dimension n");
  app.add_option("--grid", o.grid, "cells per axis N");
  app.add_option("--id", o.ids, "inequality ids, comma separated");
  app.add_option("--p", o.ps, "exponents p, comma separated");
  app.add_option("--delta", o.deltas, "smoothness delta, comma separated");
  app.add_option("--weight", o.weights, "weight specs, ';' separated");
  app.add_option("--atoms", o.atoms, "point masses x1,..:m;..");
  app.add_option("--func", o.funcs, "catalog functions, ';' separated");
  app.add_option("--field", o.field, "field CSV used instead of --func (eval)");
  app.add_option("--eta", o.eta, "eta for L44");
  app.add_option("--r", o.r, "r for L44 and KOLM");
  app.add_option("--alpha", o.alpha, "fractional order alpha");
  app.add_option("--beta", o.beta, "beta for L43 and R62");
  app.add_option("--q", o.q, "q for KOLM and marcinkiewicz");
  app.add_option("--diagonal-depth", o.diagonal_depth, "near-diagonal subdivision depth");
  app.add_flag("--normalized", o.normalized, "normalized weak quasinorm for T23");
  app.add_option("--variant", o.variant, "maximal variant");
  app.add_option("--node", o.node, "linear node index for riesz");
  app.add_option("--pair-cap", o.pair_cap, "pair budget for the pointwise lemmas");
  app.add_option("--grid-list", o.grid_list, "ascending N list for converge");

  auto* eval = app.add_subcommand("eval", "evaluate one quantity");
  eval->add_option("quantity", o.quantity,
                   "gagliardo|sobolev|oscillation|marcinkiewicz|a1|ap|maximal|riesz|alpha")
      ->required();
  auto* verify = app.add_subcommand("verify", "one report row per parameter combination");
  auto* sweep_cmd = app.add_subcommand("sweep", "admissible combinations with summary rows");
  auto* converge = app.add_subcommand("converge", "grid convergence study");
  auto* catalog = app.add_subcommand("catalog", "list function, weight and inequality ids");

  try {
    if (const auto path = find_config(args)) {
      const auto tokens = config_tokens(load_config(*path));
      args.insert(args.begin(), tokens.begin(), tokens.end());
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "fpilab: " << e.what() << '\n';
    return 2;
  }

  try {
    set_thread_count(o.threads > 0 ? o.threads : static_cast<int>(std::thread::hardware_concurrency()));
    if (eval->parsed()) return cmd_eval(o);
    if (verify->parsed()) return cmd_verify(o);
    if (sweep_cmd->parsed()) return cmd_sweep(o);
    if (converge->parsed()) return cmd_converge(o);
    if (catalog->parsed()) return cmd_catalog(o);
  } catch (const Error& e) {
    std::cerr << "fpilab: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "fpilab: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

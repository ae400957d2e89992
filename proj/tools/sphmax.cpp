// sphmax: batch front end for the multilinear spherical maximal toolkit.
//
//   sphmax region --n 2 --recips 1/2,1/2
//   sphmax prop1 --m 2 --n 2 --recips 3/4,3/4 --R 16,32,64,128,256,512 --seed 7
//
// Exit status: 0 pass, 1 fail, 2 inconclusive, 3 configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli_config.hpp"
#include "sphmax/errors.hpp"
#include "sphmax/experiments.hpp"
#include "sphmax/parallel.hpp"
#include "sphmax/region.hpp"
#include "sphmax/report.hpp"
#include "sphmax/rng.hpp"

using namespace sphmax;
using sphmax::cli::json;

namespace {

constexpr int kConfigExit = 3;

struct Sub {
  CLI::App* app = nullptr;
  std::vector<std::string> keys;
  std::map<std::string, std::string> text;
  std::map<std::string, bool> flags;
  std::string config_path;
  bool dry_run = false;
  int threads = 0;
};

void add_text(Sub& s, const std::string& key, const std::string& help) {
  s.keys.push_back(key);
  std::string flag = key;
  for (char& c : flag)
    if (c == '_') c = '-';
  s.app->add_option("--" + flag, s.text[key], help);
}

void add_flag(Sub& s, const std::string& key, const std::string& help) {
  s.keys.push_back(key);
  std::string flag = key;
  for (char& c : flag)
    if (c == '_') c = '-';
  s.app->add_flag("--" + flag, s.flags[key], help);
}

Sub make_sub(CLI::App& root, const std::string& name, const std::string& help) {
  Sub s;
  s.app = root.add_subcommand(name, help);
  s.app->add_option("--config", s.config_path, "JSON run configuration");
  s.app->add_flag("--dry-run", s.dry_run, "validate and print the resolved plan");
  s.app->add_option("--threads", s.threads, "worker threads (default: all cores)");
  s.keys.push_back("threads");
  return s;
}

// Config file first, explicit flags on top; unknown keys rejected.
json resolve(Sub& s) {
  json p = s.config_path.empty() ? json::object() : cli::load_config(s.config_path);
  for (auto& [key, value] : s.text) {
    std::string flag = key;
    for (char& c : flag)
      if (c == '_') c = '-';
    if (s.app->count("--" + flag) > 0) p[key] = value;
  }
  for (auto& [key, value] : s.flags) {
    std::string flag = key;
    for (char& c : flag)
      if (c == '_') c = '-';
    if (s.app->count("--" + flag) > 0) p[key] = value;
  }
  for (const auto& [key, value] : p.items()) {
    bool ok = false;
    for (const auto& k : s.keys) ok = ok || k == key;
    if (!ok) throw ConfigError("unknown key '" + key + "' for " + s.app->get_name());
  }
  if (s.app->count("--threads") > 0) p["threads"] = s.threads;
  const int threads = cli::get_int(p, "threads", 0);
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (threads > 0) set_threads(threads);
  return p;
}

bool seed_flag(const Sub& s) { return s.app->count("--seed") > 0; }

// "-" or empty writes to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw ConfigError("cannot write '" + path + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close() {
    if (file_) {
      file_->close();
      if (!*file_) throw ConfigError("write failed");
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void write_text(const std::string& path, const std::string& body) {
  Output out(path);
  out.stream() << body;
  out.close();
}

void print_plan(const std::string& name, const json& plan) {
  std::cout << json{{"subcommand", name}, {"plan", plan}}.dump(2) << '\n';
}

ExponentTuple tuple_from(const json& p) {
  const auto recips = cli::get_recips(p, "recips");
  const int m = cli::get_int(p, "m", static_cast<int>(recips.size()));
  if (m != static_cast<int>(recips.size()))
    throw ConfigError("m = " + std::to_string(m) + " but " + std::to_string(recips.size()) + " exponents given");
  return ExponentTuple::make(cli::get_int(p, "n", 2), recips);
}

std::vector<std::string> fraction_strings(const ExponentTuple& t) {
  std::vector<std::string> out;
  for (const auto& r : t.recips) out.push_back(format_fraction(r));
  return out;
}

int run_region(Sub& s) {
  const json p = resolve(s);
  const ExponentTuple t = tuple_from(p);
  const std::string format = cli::get_string(p, "format", "json");
  if (format != "json" && format != "text") throw ConfigError("format must be json or text");
  if (s.dry_run) {
    print_plan("region", {{"m", t.m}, {"n", t.n}, {"recips", fraction_strings(t)}, {"format", format}});
    return 0;
  }
  const RegionClassification c = classify(t);
  if (format == "text") {
    std::cout << t.str() << " n=" << t.n << ": " << to_string(c.verdict) << " [" << c.governing_case << "] "
              << c.notes << '\n';
    return 0;
  }
  const json out{{"m", t.m},
                 {"n", t.n},
                 {"recips", fraction_strings(t)},
                 {"recip_p", format_fraction(t.recip_p())},
                 {"critical", format_fraction(critical_sum(t.m, t.n))},
                 {"verdict", std::string(to_string(c.verdict))},
                 {"case", c.governing_case},
                 {"notes", c.notes},
                 {"in_hull_V", std::string(to_string(in_hull_V(t)))}};
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_vertices(Sub& s) {
  const json p = resolve(s);
  const int m = cli::get_int(p, "m", 2);
  const int n = cli::get_int(p, "n", 2);
  const std::string path = cli::get_string(p, "out", "-");
  if (s.dry_run) {
    print_plan("vertices", {{"m", m}, {"n", n}, {"out", path}});
    return 0;
  }
  const auto verts = polytope_vertices(m, n);
  std::ostringstream os;
  for (int j = 1; j <= m; ++j) os << "r" << j << ',';
  os << "recip_p\n";
  for (const auto& v : verts) {
    for (const auto& r : v.recips) os << format_fraction(r) << ',';
    os << format_fraction(v.recip_p()) << '\n';
  }
  write_text(path, os.str());
  return 0;
}

ScanConfig scan_config(const Sub& s, const json& p, std::uint64_t default_seed) {
  ScanConfig c;
  c.radii = cli::get_doubles(p, "R", c.radii);
  c.seed = cli::resolve_seed(p, seed_flag(s), default_seed);
  c.samples = cli::get_size(p, "samples", c.samples);
  c.tolerance = cli::get_double(p, "tolerance", 0.0);
  return c;
}

int emit_scan(const json& p, const ExperimentReport& rep, const std::string& default_prefix) {
  const std::string prefix = cli::get_string(p, "out", default_prefix);
  {
    Output csv(prefix + ".csv");
    write_scan_csv(rep, csv.stream());
    csv.close();
  }
  const json summary = scan_summary(rep);
  write_text(prefix + ".json", summary.dump(2) + "\n");
  if (p.contains("plot")) {
    Output svg(cli::get_string(p, "plot", ""));
    write_scan_svg(rep, svg.stream());
    svg.close();
  }
  std::cout << summary.dump(2) << '\n';
  return exit_code(rep.status);
}

int run_prop1(Sub& s) {
  const json p = resolve(s);
  const ExponentTuple t = tuple_from(p);
  const ScanConfig c = scan_config(s, p, 7);
  const bool divergence = cli::get_bool(p, "divergence", false);
  if (s.dry_run) {
    print_plan("prop1", {{"m", t.m}, {"n", t.n}, {"recips", fraction_strings(t)}, {"R", c.radii}, {"seed", c.seed},
                         {"samples", c.samples}, {"divergence", divergence}, {"out", cli::get_string(p, "out", "prop1")}});
    return 0;
  }
  ExperimentReport rep = prop1_scan(t, c);
  if (divergence) {
    // a tuple above the critical sum next to the critical one, same draws
    std::vector<Rational> above(t.recips);
    for (auto& r : above) r = Rational(1) - (Rational(1) - r) / Rational(2);
    const ExponentTuple sup = ExponentTuple::make(t.n, above);
    const std::vector<double> cuts{1e-3, 1e-5, 1e-7};
    const auto d_sup = exclusion_levels(sup, c.radii.front(), cuts, c.samples, c.seed);
    const auto d_crit = exclusion_levels(t, c.radii.front(), cuts, c.samples, c.seed);
    rep.extra["divergence"] = {{"tuple", fraction_strings(sup)},
                               {"levels", to_json(d_sup)},
                               {"critical_levels", to_json(d_crit)},
                               {"growth_threshold", kDivergenceGrowth},
                               {"pass", d_sup.increasing && d_sup.min_growth >= kDivergenceGrowth}};
    if (!(d_sup.increasing && d_sup.min_growth >= kDivergenceGrowth) && rep.status == Status::Pass)
      rep.status = Status::Fail;
  }
  return emit_scan(p, rep, "prop1");
}

int run_prop2(Sub& s) {
  const json p = resolve(s);
  const int m = cli::get_int(p, "m", 2);
  const int n = cli::get_int(p, "n", 2);
  const int k = cli::get_int(p, "k", 1);
  const ScanConfig c = scan_config(s, p, 7);
  if (s.dry_run) {
    print_plan("prop2", {{"m", m}, {"n", n}, {"k", k}, {"R", c.radii}, {"seed", c.seed}, {"samples", c.samples},
                         {"out", cli::get_string(p, "out", "prop2")}});
    return 0;
  }
  return emit_scan(p, prop2_scan(m, n, k, c), "prop2");
}

int run_lemma2(Sub& s) {
  const json p = resolve(s);
  const double r1 = cli::get_double(p, "r1", 1.0);
  const double r2 = cli::get_double(p, "r2", 1.0);
  const double C = cli::get_double(p, "C", 2.0);
  const std::size_t samples = cli::get_size(p, "samples", 1000000);
  const std::uint64_t seed = cli::resolve_seed(p, seed_flag(s), 3);
  if (s.dry_run) {
    print_plan("lemma2", {{"r1", r1}, {"r2", r2}, {"C", C}, {"samples", samples}, {"seed", seed}});
    return 0;
  }
  const Lemma2Report rep = lemma2_check(r1, r2, C, samples, seed);
  write_text(cli::get_string(p, "out", "-"), to_json(rep).dump(2) + "\n");
  return rep.pass ? 0 : 1;
}

std::vector<SliceCase> parse_cases(const std::string& text) {
  std::vector<SliceCase> out;
  std::size_t start = 0;
  for (;;) {
    const auto semi = text.find(';', start);
    const std::string item = text.substr(start, semi - start);
    const auto v = cli::get_doubles(json{{"case", item}}, "case", {});
    if (v.size() != 3) throw ConfigError("slice case '" + item + "' must be m,n,k");
    out.push_back({static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2])});
    if (semi == std::string::npos) break;
    start = semi + 1;
  }
  return out;
}

int run_slice_check(Sub& s) {
  const json p = resolve(s);
  const auto cases = p.contains("cases") ? parse_cases(cli::get_string(p, "cases", "")) : default_slice_cases();
  const std::size_t samples = cli::get_size(p, "samples", 100000);
  const std::uint64_t seed = cli::resolve_seed(p, seed_flag(s), 5);
  if (s.dry_run) {
    json c = json::array();
    for (const auto& sc : cases) c.push_back({sc.m, sc.n, sc.k});
    print_plan("slice-check", {{"cases", c}, {"samples", samples}, {"seed", seed}});
    return 0;
  }
  const SliceSurvey rep = slicing_survey(cases, samples, seed);
  write_text(cli::get_string(p, "out", "-"), to_json(rep).dump(2) + "\n");
  return rep.pass ? 0 : 1;
}

int run_domination(Sub& s) {
  const json p = resolve(s);
  DominationSurveyConfig c;
  c.m = cli::get_int(p, "m", 2);
  c.n = cli::get_int(p, "n", 2);
  c.lattice_points = cli::get_int(p, "lattice_points", c.lattice_points);
  c.half_width = cli::get_double(p, "half_width", c.half_width);
  c.nodes = cli::get_size(p, "nodes", c.nodes);
  c.seed = cli::resolve_seed(p, seed_flag(s), c.seed);
  if (p.contains("grid")) {
    const json g = p["grid"].is_string() ? json::parse(p["grid"].get<std::string>()) : p["grid"];
    c.grid = cli::parse_radius_grid(g);
  }
  const bool calibrate = cli::get_bool(p, "calibrate", false);
  if (calibrate) c.nodes *= 3;
  if (s.dry_run) {
    print_plan("domination", {{"m", c.m}, {"n", c.n}, {"lattice_points", c.lattice_points},
                              {"half_width", c.half_width}, {"nodes", c.nodes}, {"seed", c.seed},
                              {"radii", c.grid.count()}, {"calibrate", calibrate}});
    return 0;
  }
  const double bound = calibrate ? std::numeric_limits<double>::infinity() : frozen_domination_constant(c.m, c.n);
  const DominationSurvey rep = domination_survey(c, bound);
  json out = to_json(rep);
  if (calibrate) {
    out["bound"] = nullptr;
    out["suggested_constant"] = 1.2 * rep.max_ratio;
  }
  write_text(cli::get_string(p, "out", "-"), out.dump(2) + "\n");
  return rep.pass ? 0 : 1;
}

int run_operator_eval(Sub& s) {
  const json p = resolve(s);
  const std::string op = cli::get_string(p, "op", "maximal");
  if (op != "mean" && op != "maximal" && op != "hardy" && op != "spherical")
    throw ConfigError("op must be mean, maximal, hardy or spherical");
  auto as_json = [&](const char* key) {
    if (!p.contains(key)) throw ConfigError(std::string("missing '") + key + "'");
    return p[key].is_string() ? json::parse(p[key].get<std::string>()) : p[key];
  };
  const json fspec = as_json("functions");
  if (!fspec.is_array() || fspec.empty()) throw ConfigError("functions must be a non-empty array");
  std::vector<TestFunction> fs;
  for (const auto& f : fspec) fs.push_back(cli::parse_function(f));
  LatticeGrid field = cli::parse_lattice(as_json("lattice"));
  const std::size_t nodes = cli::get_size(p, "nodes", 20000);
  const std::uint64_t seed = cli::resolve_seed(p, seed_flag(s), 1);
  const RadiusGrid grid = p.contains("grid") ? cli::parse_radius_grid(as_json("grid")) : RadiusGrid::standard();
  const double t = cli::get_double(p, "t", 1.0);
  const int m = static_cast<int>(fs.size());
  const int n = fs[0].dim();
  if (field.dim() != n) throw ConfigError("lattice dimension must match the functions");
  if ((op == "hardy" || op == "spherical") && m != 1) throw ConfigError(op + " takes exactly one function");
  if ((op == "mean" || op == "maximal") && m < 2) throw ConfigError(op + " takes at least two functions");
  if (s.dry_run) {
    print_plan("operator-eval", {{"op", op}, {"m", m}, {"n", n}, {"points", field.size()}, {"nodes", nodes},
                                 {"seed", seed}, {"radii", grid.count()}, {"t", t}});
    return 0;
  }
  bool unreliable = false;
  std::vector<double> x(static_cast<std::size_t>(n));
  if (op == "mean" || op == "maximal") {
    const OperatorConfig cfg = OperatorConfig::monte_carlo(m, n, nodes, seed, grid);
    for (std::size_t i = 0; i < field.size(); ++i) {
      field.point(i, x);
      if (op == "mean") {
        const MeanResult r = spherical_mean_multi(fs, x, t, cfg);
        field.values()[i] = r.estimate.value;
        unreliable = unreliable || r.unreliable;
      } else {
        const MaximalResult r = maximal_multi(fs, x, cfg);
        field.values()[i] = r.value;
        unreliable = unreliable || r.unreliable;
      }
    }
  } else {
    const LinearConfig cfg = LinearConfig::monte_carlo(n, nodes, seed, grid);
    for (std::size_t i = 0; i < field.size(); ++i) {
      field.point(i, x);
      const MaximalResult r = op == "hardy" ? hardy_littlewood(fs[0], x, cfg) : linear_spherical_maximal(fs[0], x, cfg);
      field.values()[i] = r.value;
      unreliable = unreliable || r.unreliable;
    }
  }
  Output out(cli::get_string(p, "out", "-"));
  field.write_csv(out.stream());
  out.close();
  if (unreliable) {
    std::cerr << "warning: too many nodes rejected at a singular point\n";
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments for multilinear spherical maximal functions"};
  app.require_subcommand(1);

  Sub region = make_sub(app, "region", "classify an exponent tuple");
  add_text(region, "m", "number of factors (optional, inferred)");
  add_text(region, "n", "dimension");
  add_text(region, "recips", "exponents 1/p_j as fractions, e.g. 1/2,1/2");
  add_text(region, "format", "json or text");

  Sub vertices = make_sub(app, "vertices", "list the vertices of the boundedness polytope");
  add_text(vertices, "m", "number of factors");
  add_text(vertices, "n", "dimension");
  add_text(vertices, "out", "CSV path (default stdout)");

  Sub prop1 = make_sub(app, "prop1", "power-log scaling scan at the critical exponent");
  add_text(prop1, "m", "number of factors");
  add_text(prop1, "n", "dimension");
  add_text(prop1, "recips", "critical exponents as fractions");
  add_text(prop1, "R", "comma-separated geometric radii");
  add_text(prop1, "seed", "root seed");
  add_text(prop1, "samples", "draws per radius");
  add_text(prop1, "tolerance", "slope tolerance (default 0.3, 0.4 for m >= 3)");
  add_flag(prop1, "divergence", "add the exclusion-level divergence check");
  add_text(prop1, "out", "output prefix for .csv and .json");
  add_text(prop1, "plot", "SVG plot path");

  Sub prop2 = make_sub(app, "prop2", "ball-indicator scaling scan");
  add_text(prop2, "m", "number of factors");
  add_text(prop2, "n", "dimension");
  add_text(prop2, "k", "number of indicator factors");
  add_text(prop2, "R", "comma-separated geometric radii");
  add_text(prop2, "seed", "root seed");
  add_text(prop2, "samples", "draws per radius");
  add_text(prop2, "tolerance", "slope tolerance");
  add_text(prop2, "out", "output prefix for .csv and .json");
  add_text(prop2, "plot", "SVG plot path");

  Sub lemma2 = make_sub(app, "lemma2", "power-log comparison lemma");
  add_text(lemma2, "r1", "power exponent");
  add_text(lemma2, "r2", "log exponent");
  add_text(lemma2, "C", "ratio bound t <= C s");
  add_text(lemma2, "samples", "sample pairs");
  add_text(lemma2, "seed", "root seed");
  add_text(lemma2, "out", "JSON path (default stdout)");

  Sub slice = make_sub(app, "slice-check", "slicing identity survey");
  add_text(slice, "cases", "m,n,k;m,n,k;...");
  add_text(slice, "samples", "nodes per side");
  add_text(slice, "seed", "root seed");
  add_text(slice, "out", "JSON path (default stdout)");

  Sub dom = make_sub(app, "domination", "pointwise domination survey");
  add_text(dom, "m", "number of factors");
  add_text(dom, "n", "dimension");
  add_text(dom, "lattice_points", "lattice points per axis");
  add_text(dom, "half_width", "lattice half width");
  add_text(dom, "nodes", "quadrature nodes");
  add_text(dom, "seed", "root seed");
  add_text(dom, "grid", "radius grid as JSON");
  add_flag(dom, "calibrate", "run at triple density and report 1.2 x max");
  add_text(dom, "out", "JSON path (default stdout)");

  Sub opeval = make_sub(app, "operator-eval", "evaluate an operator on a lattice");
  add_text(opeval, "op", "mean, maximal, hardy or spherical");
  add_text(opeval, "functions", "JSON array of function specs");
  add_text(opeval, "lattice", "JSON lattice {origin, spacing, extents}");
  add_text(opeval, "t", "radius for op=mean");
  add_text(opeval, "nodes", "quadrature nodes");
  add_text(opeval, "seed", "root seed");
  add_text(opeval, "grid", "radius grid as JSON");
  add_text(opeval, "out", "CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigExit;
  }

  try {
    if (region.app->parsed()) return run_region(region);
    if (vertices.app->parsed()) return run_vertices(vertices);
    if (prop1.app->parsed()) return run_prop1(prop1);
    if (prop2.app->parsed()) return run_prop2(prop2);
    if (lemma2.app->parsed()) return run_lemma2(lemma2);
    if (slice.app->parsed()) return run_slice_check(slice);
    if (dom.app->parsed()) return run_domination(dom);
    if (opeval.app->parsed()) return run_operator_eval(opeval);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return kConfigExit;
}

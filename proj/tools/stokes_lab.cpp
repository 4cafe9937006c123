#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "stokeslab/analysis.hpp"
#include "stokeslab/config.hpp"
#include "stokeslab/report.hpp"

namespace {

using namespace stokeslab;

Vec2 parse_point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos)
    throw std::runtime_error("expected 'x,y', got '" + s + "'");
  std::size_t ax = 0, ay = 0;
  const std::string sx = s.substr(0, comma), sy = s.substr(comma + 1);
  const double x = std::stod(sx, &ax), y = std::stod(sy, &ay);
  if (ax != sx.size() || ay != sy.size())
    throw std::runtime_error("expected 'x,y', got '" + s + "'");
  return {x, y};
}

// string-typed option values; config-file keys fill any the flags left unset
struct Options {
  std::string pair = "th";
  std::string pattern = "criss-cross";
  int levels = 4;
  int n0 = 4;
  std::string weight;
  double p = 2.0;
  double alpha = 1.0;
  std::string z = "0.5,0.5";
  std::string force = "1,0";
  double kappa = 2.0;
  double lambda = 0.1;
  int deriv_i = 0;
  int deriv_j = 0;
  int quad_degree = 6;
  int grading_levels = 8;
  unsigned seed = 1234;
  bool force_gates = false;
  std::string out = ".";
  std::string config_path;
  std::string mesh_out;
};

void add_common_flags(CLI::App* sub, Options& o) {
  sub->add_option("--pair", o.pair, "element pair: mini | th");
  sub->add_option("--pattern", o.pattern, "mesh pattern: right | criss-cross");
  sub->add_option("--levels", o.levels, "number of mesh levels");
  sub->add_option("--n0", o.n0, "coarsest subdivisions per side");
  sub->add_option("--weight", o.weight,
                  "weight spec: const:c | dist:x,y:a | natterer:x,y:k | "
                  "conj:<spec>:p");
  sub->add_option("--p", o.p, "Lebesgue exponent");
  sub->add_option("--alpha", o.alpha, "distance-power exponent (dirac)");
  sub->add_option("--z", o.z, "point of interest as x,y");
  sub->add_option("--force", o.force, "point force as fx,fy (dirac)");
  sub->add_option("--kappa", o.kappa, "regularization width factor (green)");
  sub->add_option("--lambda", o.lambda, "decay exponent (green)");
  sub->add_option("--deriv-i", o.deriv_i, "derivative component (green)");
  sub->add_option("--deriv-j", o.deriv_j, "velocity component (green)");
  sub->add_option("--quad-degree", o.quad_degree, "base quadrature degree");
  sub->add_option("--grading-levels", o.grading_levels,
                  "graded-quadrature levels near singular points");
  sub->add_option("--seed", o.seed, "seed for randomized diagnostics");
  sub->add_flag("--force-gates", o.force_gates,
                "run even when an applicability gate fails");
  sub->add_option("--out", o.out, "output directory");
  sub->add_option("--config", o.config_path, "key = value config file");
}

void apply_config(CLI::App* sub, Options& o) {
  if (o.config_path.empty()) return;
  const ConfigFile cfg = load_config(o.config_path);
  for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";

  auto unset = [&](const char* flag) {
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    return opt != nullptr && opt->count() == 0;
  };
  auto fetch = [&](const char* key, const char* flag, auto parse) {
    if (cfg.has(key) && unset(flag)) parse(cfg.values.at(key));
  };
  auto to_int = [](const std::string& s) { return std::stoi(s); };
  auto to_bool = [](const std::string& s) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw std::runtime_error("expected true/false, got '" + s + "'");
  };

  fetch("pair", "--pair", [&](const std::string& v) { o.pair = v; });
  fetch("pattern", "--pattern", [&](const std::string& v) { o.pattern = v; });
  fetch("levels", "--levels", [&](const std::string& v) { o.levels = to_int(v); });
  fetch("n0", "--n0", [&](const std::string& v) { o.n0 = to_int(v); });
  fetch("weight", "--weight", [&](const std::string& v) { o.weight = v; });
  fetch("p", "--p", [&](const std::string& v) { o.p = std::stod(v); });
  fetch("alpha", "--alpha", [&](const std::string& v) { o.alpha = std::stod(v); });
  fetch("z", "--z", [&](const std::string& v) { o.z = v; });
  fetch("force", "--force", [&](const std::string& v) { o.force = v; });
  fetch("kappa", "--kappa", [&](const std::string& v) { o.kappa = std::stod(v); });
  fetch("lambda", "--lambda", [&](const std::string& v) { o.lambda = std::stod(v); });
  fetch("deriv_i", "--deriv-i", [&](const std::string& v) { o.deriv_i = to_int(v); });
  fetch("deriv_j", "--deriv-j", [&](const std::string& v) { o.deriv_j = to_int(v); });
  fetch("quad_degree", "--quad-degree",
        [&](const std::string& v) { o.quad_degree = to_int(v); });
  fetch("grading_levels", "--grading-levels",
        [&](const std::string& v) { o.grading_levels = to_int(v); });
  fetch("seed", "--seed",
        [&](const std::string& v) { o.seed = static_cast<unsigned>(std::stoul(v)); });
  fetch("force_gates", "--force-gates",
        [&](const std::string& v) { o.force_gates = to_bool(v); });
  fetch("out", "--out", [&](const std::string& v) { o.out = v; });
  fetch("mesh_out", "--mesh-out", [&](const std::string& v) { o.mesh_out = v; });

  static const char* known[] = {
      "pair",      "pattern",  "levels",      "n0",
      "weight",    "p",        "alpha",       "z",
      "force",     "kappa",    "lambda",      "deriv_i",
      "deriv_j",   "quad_degree", "grading_levels", "seed",
      "force_gates", "out",    "mesh_out"};
  for (const auto& [key, value] : cfg.values) {
    (void)value;
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) std::cerr << "warning: unknown config key '" << key << "'\n";
  }
}

ExperimentConfig to_experiment_config(const Options& o) {
  ExperimentConfig cfg;
  cfg.pattern = parse_pattern(o.pattern);
  cfg.pair = parse_pair(o.pair);
  if (o.levels < 1) throw std::runtime_error("--levels must be at least 1");
  if (o.n0 < 1) throw std::runtime_error("--n0 must be at least 1");
  cfg.levels = o.levels;
  cfg.n0 = o.n0;
  if (!(o.p > 1.0)) throw std::runtime_error("--p must exceed 1");
  cfg.p = o.p;
  if (!o.weight.empty()) cfg.weight = WeightSpec::parse(o.weight);
  cfg.z = parse_point(o.z);
  cfg.force = parse_point(o.force);
  cfg.alpha = o.alpha;
  cfg.kappa = o.kappa;
  cfg.lambda = o.lambda;
  if ((o.deriv_i & ~1) || (o.deriv_j & ~1))
    throw std::runtime_error("--deriv-i/--deriv-j must be 0 or 1");
  cfg.deriv_i = o.deriv_i;
  cfg.deriv_j = o.deriv_j;
  cfg.quad_degree = o.quad_degree;
  cfg.grading_levels = o.grading_levels;
  cfg.seed = o.seed;
  cfg.force_gates = o.force_gates;
  return cfg;
}

void emit(const ExperimentResult& res, const Options& o) {
  namespace fs = std::filesystem;
  fs::create_directories(o.out);
  const std::string base = (fs::path(o.out) / res.name).string();
  write_file(base + ".csv", to_csv(res));
  write_file(base + ".json", to_json(res));
  std::cout << render_table(res);
  std::cout << "wrote " << base << ".csv and " << base << ".json\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite element laboratory for the Stokes problem in weighted "
               "spaces"};
  app.require_subcommand(1);
  Options o;

  const char* names[] = {"mesh-info",  "weights-diag", "convergence",
                         "stability",  "infsup",       "dirac",
                         "green"};
  const char* blurbs[] = {
      "mesh ladder statistics and shape metrics",
      "Muckenhoupt diagnostics for a weight",
      "projection errors for the smooth reference pair",
      "weighted stability and best-approximation ratios",
      "discrete inf-sup constants",
      "point-force convergence against a finer reference",
      "regularized Green function decay"};
  for (int k = 0; k < 7; ++k) {
    CLI::App* sub = app.add_subcommand(names[k], blurbs[k]);
    add_common_flags(sub, o);
    if (std::string(names[k]) == "mesh-info")
      sub->add_option("--mesh-out", o.mesh_out,
                      "write the finest mesh as text to this path");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    apply_config(sub, o);
    const ExperimentConfig cfg = to_experiment_config(o);
    const std::string name = sub->get_name();
    ExperimentResult res;
    if (name == "mesh-info") {
      res = mesh_info_experiment(cfg);
      if (!o.mesh_out.empty()) {
        const Mesh finest = build_structured_mesh(
            cfg.pattern, cfg.n0 << (cfg.levels - 1), cfg.domain);
        write_mesh_text(finest, o.mesh_out);
        std::cout << "wrote mesh to " << o.mesh_out << "\n";
      }
    } else if (name == "weights-diag") {
      res = weights_diag_experiment(cfg);
    } else if (name == "convergence") {
      res = convergence_experiment(cfg);
    } else if (name == "stability") {
      res = stability_experiment(cfg);
    } else if (name == "infsup") {
      res = infsup_experiment(cfg);
    } else if (name == "dirac") {
      res = dirac_experiment(cfg);
    } else {
      res = green_experiment(cfg);
    }
    emit(res, o);
  } catch (const GateError& e) {
    std::cerr << "gate failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

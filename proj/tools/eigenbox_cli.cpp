#include "eigenbox/driver.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::vector<eigenbox::Method> parse_methods(const std::string& list) {
  std::vector<eigenbox::Method> methods;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) methods.push_back(eigenbox::parse_method(item));
  return methods;
}

int run_command(const eigenbox::ExperimentConfig& base, const std::string& domain, const std::string& methods,
                const std::string& mode, const std::string& out_path, const std::string& estimator) {
  eigenbox::ExperimentConfig config = base;
  config.domain = eigenbox::parse_domain(domain);
  config.methods = parse_methods(methods);
  config.estimator_method = eigenbox::parse_method(estimator);
  if (mode == "adaptive")
    config.adaptive = true;
  else if (mode != "uniform")
    throw std::invalid_argument("unknown mode '" + mode + "' (expected uniform or adaptive)");
  eigenbox::validate(config);
  if (out_path.empty() || out_path == "-") {
    eigenbox::run_csv(config, std::cout);
  } else {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path);
    eigenbox::run_csv(config, out);
  }
  return 0;
}

int aitken_command(const std::string& path) {
  std::ifstream file;
  std::istream* in = &std::cin;
  if (!path.empty() && path != "-") {
    file.open(path);
    if (!file) throw std::runtime_error("cannot open " + path);
    in = &file;
  }
  const std::vector<double> values{std::istream_iterator<double>(*in), std::istream_iterator<double>()};
  std::cout.precision(17);
  std::cout << eigenbox::aitken(values) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guaranteed lower and upper eigenvalue bounds for -Laplace + V"};
  app.require_subcommand(1);

  eigenbox::ExperimentConfig config;
  std::string domain = "square8";
  std::string methods = "cr,ecr,mcr,rt,scr,s1";
  std::string mode = "uniform";
  std::string out_path;
  std::string estimator = "scr";
  bool no_timing = false;
  bool exclude_boundary = false;

  app.set_config("--config", "", "INI file with key=value lines under [run]; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  CLI::App* run = app.add_subcommand("run", "Run a benchmark and write one CSV row per level and method");
  run->fallthrough();
  run->add_option("--domain", domain, "square8, lshape8 or unitsquare")->capture_default_str();
  run->add_option("--potential", config.potential, "zero, harmonic, lattice, anderson or file")->capture_default_str();
  run->add_option("--potential-mesh", config.potential_mesh, "mesh dump carrying the file potential");
  run->add_option("--potential-values", config.potential_values, "one value per triangle of --potential-mesh");
  run->add_option("--methods", methods, "comma list of cr, ecr, mcr, rt, scr, s1")->capture_default_str();
  run->add_option("--k", config.k, "eigenvalue index")->capture_default_str();
  run->add_option("--mode", mode, "uniform or adaptive")->capture_default_str();
  run->add_option("--theta", config.theta, "Doerfler parameter for adaptive mode")->capture_default_str();
  run->add_option("--levels", config.levels, "number of levels including the initial mesh")->capture_default_str();
  run->add_option("--max-dofs", config.max_dofs, "stop before a level whose largest system exceeds this")
      ->capture_default_str();
  run->add_option("--seed", config.seed, "seed of the anderson potential")->capture_default_str();
  run->add_option("--estimator", estimator, "method driving the refinement indicator")->capture_default_str();
  run->add_flag("--exclude-boundary-jumps", exclude_boundary, "drop boundary edges from the indicator");
  run->add_flag("--no-timing", no_timing, "leave the seconds column empty");
  run->add_option("--dump-mesh", config.dump_mesh, "write the mesh of each level to PATH.<level>");
  run->add_option("--out", out_path, "CSV file, '-' for stdout");

  std::string aitken_in;
  CLI::App* aitken = app.add_subcommand("aitken", "Aitken extrapolation of the last three values");
  aitken->add_option("--in", aitken_in, "whitespace-separated values, '-' for stdin");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) {
      config.timing = !no_timing;
      config.include_boundary_jumps = !exclude_boundary;
      return run_command(config, domain, methods, mode, out_path, estimator);
    }
    if (*aitken) return aitken_command(aitken_in);
  } catch (const std::exception& e) {
    std::cerr << "eigenbox: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

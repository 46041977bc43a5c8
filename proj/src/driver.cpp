#include "eigenbox/driver.hpp"

#include "eigenbox/adaptivity.hpp"
#include "eigenbox/gub.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace eigenbox {

const char* const kCsvHeader =
    "level,ntri,method,k,lambda_h,glb_cr,glb_mu,glb_ecr,glb_ecr_s,glb_rt,glb_mcr,glb_cecr,glb_scr,"
    "gub_a1,gub_a2,gub_ecr,eps,epsp,epspp,delta,deltap,hmax,seconds";

namespace {

int dof_count(Method method, const Mesh& mesh) {
  const int nt = mesh.num_triangles();
  const int nf = mesh.num_interior_edges();
  switch (method) {
    case Method::CR: return nf;
    case Method::eCR:
    case Method::mCR:
    case Method::RT: return nf + nt;
    case Method::sCR: return 4 * nt + nf + nt;
    case Method::S1: return mesh.num_interior_vertices();
  }
  return 0;
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_optional(const std::optional<double>& x) { return x ? format_number(*x) : std::string(); }

// CR coefficients of the k-th eigenfunction of `method`.
Eigen::VectorXd cr_part(Method method, const Mesh& mesh, const Spectrum& s, int k) {
  const Eigen::VectorXd u = s.eigenvectors.col(k - 1);
  const int nf = mesh.num_interior_edges();
  switch (method) {
    case Method::CR: return u;
    case Method::eCR:
    case Method::mCR:
    case Method::RT: return u.head(nf);
    case Method::sCR: return u.segment(4 * mesh.num_triangles(), nf);
    case Method::S1: break;
  }
  throw std::invalid_argument("the refinement indicator needs a nonconforming method, not s1");
}

}  // namespace

std::string to_string(Domain domain) {
  switch (domain) {
    case Domain::square8: return "square8";
    case Domain::lshape8: return "lshape8";
    case Domain::unitsquare: return "unitsquare";
  }
  return "unknown";
}

Domain parse_domain(const std::string& name) {
  for (Domain d : {Domain::square8, Domain::lshape8, Domain::unitsquare})
    if (to_string(d) == name) return d;
  throw std::invalid_argument("unknown domain '" + name + "' (expected square8, lshape8 or unitsquare)");
}

Mesh initial_mesh(Domain domain) {
  switch (domain) {
    case Domain::square8: return build_square_mesh(8.0, 8);
    case Domain::lshape8: return build_lshape_mesh(8.0, 8);
    case Domain::unitsquare: return build_square_mesh(0.5, 8, Point(0.5, 0.5));
  }
  throw std::invalid_argument("unknown domain");
}

void validate(const ExperimentConfig& config) {
  if (config.methods.empty()) throw std::invalid_argument("at least one method is required");
  if (config.k < 1) throw std::invalid_argument("k must be >= 1");
  if (config.levels < 1) throw std::invalid_argument("levels must be >= 1");
  if (config.max_dofs < 0) throw std::invalid_argument("max-dofs must be >= 0");
  if (config.adaptive && !(config.theta > 0 && config.theta <= 1))
    throw std::invalid_argument("theta must lie in (0, 1]");
  if (config.adaptive && config.estimator_method == Method::S1)
    throw std::invalid_argument("the refinement indicator needs a nonconforming method, not s1");
  const std::string& v = config.potential;
  if (v != "zero" && v != "harmonic" && v != "lattice" && v != "anderson" && v != "file")
    throw std::invalid_argument("unknown potential '" + v + "' (expected zero, harmonic, lattice, anderson or file)");
  if (v == "file" && (config.potential_mesh.empty() || config.potential_values.empty()))
    throw std::invalid_argument("the file potential needs a mesh dump and a value file");
  if (v == "anderson" && config.domain != Domain::unitsquare)
    throw std::invalid_argument("the anderson potential lives on the unitsquare domain");
}

Potential make_potential(const ExperimentConfig& config) {
  if (config.potential == "zero") return Potential::zero();
  if (config.potential == "harmonic") return Potential::harmonic();
  if (config.potential == "lattice") return Potential::lattice();
  if (config.potential == "anderson") return Potential::anderson(config.seed);
  if (config.potential == "file") {
    std::ifstream mesh_in(config.potential_mesh);
    if (!mesh_in) throw std::runtime_error("cannot read " + config.potential_mesh);
    const Mesh source = read_mesh(mesh_in);
    std::ifstream values_in(config.potential_values);
    if (!values_in) throw std::runtime_error("cannot read " + config.potential_values);
    std::vector<double> values;
    double x;
    while (values_in >> x) values.push_back(x);
    if (!values_in.eof()) throw std::runtime_error("malformed value in " + config.potential_values);
    if (static_cast<int>(values.size()) != source.num_triangles())
      throw std::runtime_error(config.potential_values + ": expected " + std::to_string(source.num_triangles()) +
                               " values, found " + std::to_string(values.size()));
    return Potential::piecewise_constant(source, std::move(values));
  }
  throw std::invalid_argument("unknown potential '" + config.potential + "'");
}

bool projects_potential(const Potential& V, Method method, const Mesh& mesh) {
  if (V.kind() == PotentialKind::lattice) return true;
  return needs_piecewise_constant(method) && !V.is_piecewise_constant_on(mesh);
}

LevelResult solve_level(const Mesh& mesh, const Potential& V, const ExperimentConfig& config, int level) {
  LevelResult result;
  result.level = level;
  result.mesh = &mesh;
  const int k = config.k;
  const double offset = V.offset();
  const bool exact_pw = V.is_piecewise_constant_on(mesh);
  const std::vector<double> v_sup = V.elementwise_sup(mesh);
  const std::vector<double> v_mean = V.pi0(mesh);
  const bool gub_projected = V.kind() == PotentialKind::lattice;
  AssemblyOptions gub_options;
  gub_options.project_potential = gub_projected;
  std::map<SpaceKind, MatrixPair> conforming;
  auto conforming_pair = [&](SpaceKind s) -> const MatrixPair& {
    auto it = conforming.find(s);
    if (it == conforming.end()) it = conforming.emplace(s, assemble_conforming(s, mesh, V, gub_options)).first;
    return it->second;
  };
  auto gub = [&](Method m, const Spectrum& s, Averaging avg) -> std::optional<double> {
    const GubResult r = rayleigh_ritz(conforming_pair(averaged_space(avg)),
                                      average_eigenfunctions(m, mesh, s.eigenvectors.leftCols(k), avg));
    if (r.k_available < k) return std::nullopt;
    return r.mu[k - 1] + offset;
  };

  for (Method m : config.methods) {
    const auto start = std::chrono::steady_clock::now();
    const bool projected = projects_potential(V, m, mesh);
    AssemblyOptions options;
    options.project_potential = projected;
    const MatrixPair pair = assemble(m, mesh, V, options);
    MethodSolution sol;
    sol.spectrum = solve_generalized(pair, k, config.eigen);
    for (double x : sol.spectrum.eigenvalues) sol.lambda.push_back(x + offset);

    BoundReport& r = sol.report;
    r.level = level;
    r.ntri = mesh.num_triangles();
    r.method = m;
    r.k = k;
    r.dofs = static_cast<int>(pair.A.rows());
    const double lambda = sol.spectrum.eigenvalues[k - 1];
    r.lambda_h = lambda + offset;
    r.params = compute_params(mesh, projected ? v_mean : v_sup);
    const GlbParameters& p = r.params;
    switch (m) {
      case Method::CR:
        r.glb_cr = glb_cr(lambda, p) + offset;
        r.glb_mu = glb_mu(lambda, sol.spectrum.eigenvalues[0], p) + offset;
        r.gub_a1 = gub(m, sol.spectrum, Averaging::A1);
        r.gub_a2 = gub(m, sol.spectrum, Averaging::A2);
        break;
      case Method::eCR:
        if (exact_pw || projected) r.glb_ecr = glb_ecr_pwconst(lambda, p) + offset;
        r.glb_ecr_s = glb_ecr_general(lambda, p) + offset;
        r.gub_ecr = gub(m, sol.spectrum, Averaging::ECR);
        break;
      case Method::RT:
        r.glb_rt = glb_rt(lambda, p) + offset;
        r.gub_ecr = gub(m, sol.spectrum, Averaging::ECR);
        break;
      case Method::mCR:
        r.glb_mcr = glb_mcr(lambda, p) + offset;
        r.glb_cecr = glb_cecr(lambda, p) + offset;
        r.gub_ecr = gub(m, sol.spectrum, Averaging::ECR);
        break;
      case Method::sCR:
        r.glb_scr = glb_scr(lambda, p) + offset;
        r.gub_ecr = gub(m, sol.spectrum, Averaging::ECR);
        break;
      case Method::S1:
        break;
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.solutions.push_back(std::move(sol));
  }
  return result;
}

void run(const ExperimentConfig& config, const std::function<void(const LevelResult&)>& on_level) {
  validate(config);
  const Potential V = make_potential(config);
  Mesh mesh = initial_mesh(config.domain);
  std::vector<Method> methods = config.methods;
  const bool hidden_driver =
      config.adaptive && std::find(methods.begin(), methods.end(), config.estimator_method) == methods.end();
  ExperimentConfig level_config = config;
  if (hidden_driver) level_config.methods.push_back(config.estimator_method);

  for (int level = 0; level < config.levels; ++level) {
    if (config.max_dofs > 0) {
      long largest = 0;
      for (Method m : level_config.methods) largest = std::max<long>(largest, dof_count(m, mesh));
      if (largest > config.max_dofs) break;
    }
    if (!config.dump_mesh.empty()) {
      std::ofstream out(config.dump_mesh + "." + std::to_string(level));
      if (!out) throw std::runtime_error("cannot write mesh dump " + config.dump_mesh);
      write_mesh(out, mesh);
    }
    LevelResult result = solve_level(mesh, V, level_config, level);
    if (config.adaptive) {
      const auto it = std::find_if(result.solutions.begin(), result.solutions.end(), [&](const MethodSolution& s) {
        return s.report.method == config.estimator_method;
      });
      EstimatorOptions est;
      est.include_boundary = config.include_boundary_jumps;
      est.project_potential = projects_potential(V, config.estimator_method, mesh);
      const Eigen::VectorXd u = cr_part(config.estimator_method, mesh, it->spectrum, config.k);
      const EstimatorReport report = estimate(mesh, V, it->spectrum.eigenvalues[config.k - 1], u, est);
      result.marked = doerfler_mark(report.eta2, config.theta);
      if (hidden_driver) result.solutions.erase(it);
    }
    on_level(result);
    if (level + 1 < config.levels) mesh = config.adaptive ? nvb_refine(mesh, result.marked) : uniform_red_refine(mesh);
  }
}

void write_csv_row(std::ostream& out, const BoundReport& r, bool timing) {
  const GlbParameters& p = r.params;
  out << r.level << ',' << r.ntri << ',' << to_string(r.method) << ',' << r.k << ',' << format_number(r.lambda_h)
      << ',' << format_optional(r.glb_cr) << ',' << format_optional(r.glb_mu) << ',' << format_optional(r.glb_ecr)
      << ',' << format_optional(r.glb_ecr_s) << ',' << format_optional(r.glb_rt) << ','
      << format_optional(r.glb_mcr) << ',' << format_optional(r.glb_cecr) << ',' << format_optional(r.glb_scr)
      << ',' << format_optional(r.gub_a1) << ',' << format_optional(r.gub_a2) << ','
      << format_optional(r.gub_ecr) << ',' << format_number(p.eps) << ',' << format_number(p.eps_p) << ','
      << format_number(p.eps_pp) << ',' << format_number(p.delta) << ',' << format_number(p.delta_p) << ','
      << format_number(p.h_max) << ',' << (timing ? format_number(r.seconds) : std::string()) << '\n';
}

void run_csv(const ExperimentConfig& config, std::ostream& out) {
  out << kCsvHeader << '\n';
  run(config, [&](const LevelResult& level) {
    for (const MethodSolution& s : level.solutions) write_csv_row(out, s.report, config.timing);
    out.flush();
  });
}

double aitken(const std::vector<double>& values) {
  if (values.size() < 3) throw std::invalid_argument("aitken: at least three values required");
  const std::size_t n = values.size();
  const double x0 = values[n - 3], x1 = values[n - 2], x2 = values[n - 1];
  const double d0 = x1 - x0;
  const double d1 = x2 - x1;
  const double second = d1 - d0;
  if (d0 == 0.0 || d1 == 0.0 || second == 0.0) throw std::runtime_error("sequence not accelerable");
  return x2 - d1 * d1 / second;
}

const std::vector<ReferenceValue>& reference_values() {
  static const std::vector<ReferenceValue> table = {
      {Domain::square8, "harmonic", 1, std::numbers::sqrt2, "ground state of |x|^2/2, sqrt(2) up to truncation"},
      {Domain::square8, "harmonic", 20, 8.4852765, "benchmark reference for the 20th eigenvalue"},
      {Domain::lshape8, "harmonic", 1, 2.357076, "benchmark reference"},
      {Domain::square8, "lattice", 1, 25.743622, "benchmark reference"},
      {Domain::unitsquare, "zero", 1, 2 * std::numbers::pi * std::numbers::pi, "analytic (1,1) mode"},
      {Domain::unitsquare, "zero", 2, 5 * std::numbers::pi * std::numbers::pi, "analytic (1,2) mode"},
      {Domain::unitsquare, "zero", 3, 5 * std::numbers::pi * std::numbers::pi, "analytic (2,1) mode"},
  };
  return table;
}

std::optional<double> reference_value(Domain domain, const std::string& potential, int k) {
  for (const ReferenceValue& r : reference_values())
    if (r.domain == domain && r.potential == potential && r.k == k) return r.value;
  return std::nullopt;
}

}  // namespace eigenbox

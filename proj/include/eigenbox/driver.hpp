#pragma once

#include "eigenbox/assembly.hpp"
#include "eigenbox/bounds.hpp"
#include "eigenbox/eigensolve.hpp"
#include "eigenbox/mesh.hpp"
#include "eigenbox/potential.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace eigenbox {

enum class Domain { square8, lshape8, unitsquare };

std::string to_string(Domain domain);
Domain parse_domain(const std::string& name);

/// 8 x 8 subsquares of (-8, 8)^2, the L-shape cut from it, or (0, 1)^2.
Mesh initial_mesh(Domain domain);

struct ExperimentConfig {
  Domain domain = Domain::square8;
  /// zero, harmonic, lattice, anderson or file.
  std::string potential = "harmonic";
  /// For potential "file": a mesh dump and one value per triangle of it.
  std::string potential_mesh;
  std::string potential_values;
  std::uint64_t seed = 1;
  std::vector<Method> methods{Method::CR, Method::eCR, Method::mCR, Method::RT, Method::sCR, Method::S1};
  int k = 1;
  bool adaptive = false;
  double theta = 0.5;
  /// Number of levels including the initial mesh.
  int levels = 6;
  /// Stop before a level whose largest system exceeds this size; 0 disables.
  long max_dofs = 0;
  /// Method whose k-th eigenfunction drives the refinement indicator.
  Method estimator_method = Method::sCR;
  bool include_boundary_jumps = true;
  /// Record wall time per row; off makes the CSV reproducible byte for byte.
  bool timing = true;
  /// Mesh dump per level to `dump_mesh` + ".<level>".
  std::string dump_mesh;
  EigenOptions eigen;
};

void validate(const ExperimentConfig& config);
Potential make_potential(const ExperimentConfig& config);

/// The potential whose eigenvalues the bounds of `method` certify: triangle
/// means for the lattice potential and for methods that need a piecewise
/// constant potential, the potential itself otherwise.
bool projects_potential(const Potential& V, Method method, const Mesh& mesh);

/// One CSV row. Bounds and eigenvalues are for the unshifted potential.
struct BoundReport {
  int level = 0;
  int ntri = 0;
  Method method = Method::CR;
  int k = 1;
  int dofs = 0;
  double lambda_h = 0.0;
  std::optional<double> glb_cr, glb_mu, glb_ecr, glb_ecr_s, glb_rt, glb_mcr, glb_cecr, glb_scr;
  std::optional<double> gub_a1, gub_a2, gub_ecr;
  GlbParameters params;
  double seconds = 0.0;
};

struct MethodSolution {
  BoundReport report;
  Spectrum spectrum;
  /// Eigenvalues of the unshifted operator.
  std::vector<double> lambda;
};

struct LevelResult {
  int level = 0;
  const Mesh* mesh = nullptr;
  std::vector<MethodSolution> solutions;
  /// Triangles marked for refinement (adaptive mode).
  std::vector<int> marked;
};

/// Solves every configured method on one mesh.
LevelResult solve_level(const Mesh& mesh, const Potential& V, const ExperimentConfig& config, int level);

/// Runs the refinement loop; `on_level` sees every level before refinement.
void run(const ExperimentConfig& config, const std::function<void(const LevelResult&)>& on_level);

/// Runs and writes the CSV (header plus one row per level and method).
void run_csv(const ExperimentConfig& config, std::ostream& out);

extern const char* const kCsvHeader;
void write_csv_row(std::ostream& out, const BoundReport& row, bool timing);

/// x2 - (x2 - x1)^2 / ((x2 - x1) - (x1 - x0)) from the last three terms.
double aitken(const std::vector<double>& values);

struct ReferenceValue {
  Domain domain;
  std::string potential;
  int k;
  double value;
  std::string note;
};

const std::vector<ReferenceValue>& reference_values();
std::optional<double> reference_value(Domain domain, const std::string& potential, int k);

}  // namespace eigenbox

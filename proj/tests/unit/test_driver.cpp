#include "eigenbox/driver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace eigenbox {
namespace {

const double kPi2 = std::numbers::pi * std::numbers::pi;

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.domain = Domain::unitsquare;
  c.potential = "zero";
  c.levels = 2;
  c.timing = false;
  return c;
}

TEST(Aitken, GeometricSequenceIsExact) {
  const double limit = 3.5;
  std::vector<double> x;
  for (int j = 0; j < 5; ++j) x.push_back(limit + 2.0 * std::pow(0.25, j));
  EXPECT_NEAR(aitken(x), limit, 1e-14);
  EXPECT_THROW(aitken({1.0, 1.0, 1.0}), std::runtime_error);
  EXPECT_THROW(aitken({1.0, 2.0}), std::invalid_argument);
}

TEST(Aitken, CourantLevelsOnUnitSquare) {
  Mesh mesh = build_square_mesh(0.5, 16, Point(0.5, 0.5));
  std::vector<double> values;
  for (int level = 0; level < 3; ++level) {
    values.push_back(solve_generalized(assemble(Method::S1, mesh, Potential::zero()), 1).eigenvalues[0]);
    mesh = uniform_red_refine(mesh);
  }
  const double extrapolated = aitken(values);
  EXPECT_LT(std::abs(extrapolated - 2 * kPi2), 0.1 * std::abs(values.back() - 2 * kPi2));
}

TEST(Config, Validation) {
  ExperimentConfig c = small_config();
  EXPECT_NO_THROW(validate(c));
  c.potential = "anderson";
  EXPECT_NO_THROW(validate(c));
  c.domain = Domain::square8;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = small_config();
  c.k = 0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = small_config();
  c.adaptive = true;
  c.theta = 0.0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c.theta = 0.5;
  c.estimator_method = Method::S1;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = small_config();
  c.potential = "coulomb";
  EXPECT_THROW(validate(c), std::invalid_argument);
  EXPECT_THROW(parse_domain("disc"), std::invalid_argument);
  EXPECT_EQ(parse_domain("lshape8"), Domain::lshape8);
}

TEST(Domains, InitialMeshes) {
  EXPECT_EQ(initial_mesh(Domain::square8).num_triangles(), 128);
  EXPECT_NEAR(initial_mesh(Domain::square8).total_area(), 256.0, 1e-12);
  EXPECT_NEAR(initial_mesh(Domain::lshape8).total_area(), 192.0, 1e-12);
  EXPECT_NEAR(initial_mesh(Domain::unitsquare).total_area(), 1.0, 1e-14);
}

TEST(Csv, HeaderRowsAndBounds) {
  std::ostringstream out;
  run_csv(small_config(), out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kCsvHeader);
  const std::vector<std::string> header = split(line);
  int rows = 0;
  while (std::getline(in, line)) {
    const std::vector<std::string> cells = split(line);
    ASSERT_EQ(cells.size(), header.size()) << line;
    EXPECT_TRUE(cells.back().empty());
    for (std::size_t c = 5; c < 13; ++c)
      if (!cells[c].empty()) EXPECT_LE(std::stod(cells[c]), 2 * kPi2) << header[c] << ' ' << cells[2];
    for (std::size_t c = 13; c < 16; ++c)
      if (!cells[c].empty()) EXPECT_GE(std::stod(cells[c]), 2 * kPi2) << header[c] << ' ' << cells[2];
    ++rows;
  }
  EXPECT_EQ(rows, 12);
}

TEST(Csv, ReproducibleWithoutTiming) {
  ExperimentConfig c = small_config();
  c.adaptive = true;
  c.levels = 3;
  std::ostringstream a, b;
  run_csv(c, a);
  run_csv(c, b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Run, AdaptiveMeshesStayConforming) {
  ExperimentConfig c;
  c.domain = Domain::lshape8;
  c.methods = {Method::CR};
  c.estimator_method = Method::CR;
  c.adaptive = true;
  c.levels = 4;
  c.timing = false;
  int previous = 0;
  run(c, [&](const LevelResult& level) {
    EXPECT_EQ(check_mesh(*level.mesh), "");
    EXPECT_GT(level.mesh->num_triangles(), previous);
    previous = level.mesh->num_triangles();
    EXPECT_FALSE(level.marked.empty());
  });
}

TEST(Run, MaxDofsStopsEarly) {
  ExperimentConfig c = small_config();
  c.levels = 10;
  c.max_dofs = 3000;
  int levels = 0;
  run(c, [&](const LevelResult&) { ++levels; });
  EXPECT_GE(levels, 1);
  EXPECT_LT(levels, 10);
}

TEST(Config, FilePotentialShiftsSpectrum) {
  const Mesh source = initial_mesh(Domain::unitsquare);
  const std::string mesh_path = ::testing::TempDir() + "eigenbox_potential_mesh.txt";
  const std::string values_path = ::testing::TempDir() + "eigenbox_potential_values.txt";
  {
    std::ofstream m(mesh_path);
    write_mesh(m, source);
    std::ofstream v(values_path);
    for (int t = 0; t < source.num_triangles(); ++t) v << "3\n";
  }
  ExperimentConfig c = small_config();
  c.levels = 1;
  c.methods = {Method::CR, Method::sCR};
  std::vector<double> plain;
  run(c, [&](const LevelResult& l) {
    for (const MethodSolution& s : l.solutions) plain.push_back(s.report.lambda_h);
  });
  c.potential = "file";
  EXPECT_THROW(validate(c), std::invalid_argument);
  c.potential_mesh = mesh_path;
  c.potential_values = values_path;
  std::vector<double> shifted;
  run(c, [&](const LevelResult& l) {
    for (const MethodSolution& s : l.solutions) shifted.push_back(s.report.lambda_h);
  });
  ASSERT_EQ(plain.size(), shifted.size());
  for (std::size_t i = 0; i < plain.size(); ++i) EXPECT_NEAR(shifted[i], plain[i] + 3.0, 1e-10);
  {
    std::ofstream v(values_path);
    v << "1 2\n";
  }
  EXPECT_THROW(make_potential(c), std::runtime_error);
}

TEST(References, Table) {
  EXPECT_NEAR(*reference_value(Domain::square8, "harmonic", 1), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(*reference_value(Domain::unitsquare, "zero", 2), 5 * kPi2, 1e-12);
  EXPECT_FALSE(reference_value(Domain::lshape8, "lattice", 1).has_value());
}

}  // namespace
}  // namespace eigenbox

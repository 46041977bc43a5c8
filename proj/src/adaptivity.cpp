#include "eigenbox/adaptivity.hpp"

#include "eigenbox/quadrature.hpp"
#include "eigenbox/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace eigenbox {

EstimatorReport estimate(const Mesh& mesh, const Potential& V, double lambda, const Eigen::VectorXd& u_cr,
                         const EstimatorOptions& options) {
  const DofSpace cr(mesh, SpaceKind::CR);
  if (u_cr.size() != cr.size()) throw std::invalid_argument("estimate: expects CR coefficients");
  const int nt = mesh.num_triangles();
  const bool constant = options.project_potential || V.is_piecewise_constant_on(mesh);
  const std::vector<double> vt = constant ? V.pi0(mesh) : std::vector<double>();
  const QuadratureRule& rule = triangle_rule(options.quadrature_degree);

  EstimatorReport report;
  report.eta2.assign(nt, 0.0);
  std::vector<Eigen::Vector2d> grad(nt);
  for (int t = 0; t < nt; ++t) {
    const LocalGeometry g = local_geometry(mesh, t);
    const QuadForm q = cr.restrict_to(t, u_cr);
    grad[t] = form_gradient(q, Eigen::Vector3d::Constant(1.0 / 3.0), g);
    double vol = 0.0;
    for (std::size_t k = 0; k < rule.weights.size(); ++k) {
      const Eigen::Vector3d& l = rule.points[k];
      const Point x = l[0] * g.vertices[0] + l[1] * g.vertices[1] + l[2] * g.vertices[2];
      const double r = (lambda - (constant ? vt[t] : V(x))) * form_value(q, l);
      vol += rule.weights[k] * r * r;
    }
    report.eta2[t] = g.area * g.area * vol;
  }

  std::vector<double> jumps(nt, 0.0);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    if (edge.on_boundary() && !options.include_boundary) continue;
    const Point n = mesh.edge_normal(e);
    const Point tangent(-n.y(), n.x());
    double jump = grad[edge.triangles[0]].dot(tangent);
    if (!edge.on_boundary()) jump -= grad[edge.triangles[1]].dot(tangent);
    const double contribution = mesh.edge_length(e) * jump * jump;
    for (int t : edge.triangles)
      if (t >= 0) jumps[t] += contribution;
  }
  for (int t = 0; t < nt; ++t) {
    report.eta2[t] += std::sqrt(mesh.area(t)) * jumps[t];
    report.total += report.eta2[t];
  }
  return report;
}

std::vector<int> doerfler_mark(const std::vector<double>& eta2, double theta) {
  if (!(theta > 0 && theta <= 1)) throw std::invalid_argument("doerfler_mark: theta must lie in (0, 1]");
  std::vector<int> order(eta2.size());
  std::iota(order.begin(), order.end(), 0);
  if (theta == 1.0) return order;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return eta2[a] > eta2[b]; });
  const double total = std::accumulate(eta2.begin(), eta2.end(), 0.0);
  const double goal = theta * total;
  double sum = 0.0;
  std::size_t count = 0;
  while (count < order.size() && sum < goal) sum += eta2[order[count++]];
  order.resize(std::max<std::size_t>(count, order.empty() ? 0 : 1));
  return order;
}

}  // namespace eigenbox

#include "eigenbox/bounds.hpp"

namespace eigenbox {

GlbParameters compute_params(const Mesh& mesh, const std::vector<double>& v_sup, double alpha_min) {
  std::vector<double> h(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) h[t] = mesh.diameter(t);
  return make_params(h, v_sup, alpha_min);
}

GlbParameters compute_params(const Mesh& mesh, const Potential& V, double alpha_min) {
  return compute_params(mesh, V.elementwise_sup(mesh), alpha_min);
}

}  // namespace eigenbox

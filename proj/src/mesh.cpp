#include "eigenbox/mesh.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace eigenbox {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * cross(b - a, c - a);
}

// Local index of the longest edge; ties resolve to the lowest index.
int longest_edge(const Point& p0, const Point& p1, const Point& p2) {
  const std::array<double, 3> len{(p1 - p2).squaredNorm(), (p2 - p0).squaredNorm(),
                                  (p0 - p1).squaredNorm()};
  int best = 0;
  for (int e = 1; e < 3; ++e)
    if (len[e] > len[best] * (1.0 + 1e-12)) best = e;
  return best;
}

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
           std::vector<int> refinement_edges, int level)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      refinement_edges_(std::move(refinement_edges)),
      level_(level) {
  if (refinement_edges_.size() != triangles_.size())
    throw std::invalid_argument("mesh: one refinement edge per triangle required");
  for (const auto& tri : triangles_)
    for (int v : tri)
      if (v < 0 || v >= num_vertices()) throw std::invalid_argument("mesh: vertex index out of range");
  for (int r : refinement_edges_)
    if (r < 0 || r > 2) throw std::invalid_argument("mesh: refinement edge must be 0, 1 or 2");
  build_topology();
}

void Mesh::build_topology() {
  const int nt = num_triangles();
  triangle_edges_.assign(nt, {-1, -1, -1});
  edges_.clear();
  std::unordered_map<std::uint64_t, int> lookup;
  lookup.reserve(3 * static_cast<std::size_t>(nt));
  for (int t = 0; t < nt; ++t) {
    const auto& tri = triangles_[t];
    for (int e = 0; e < 3; ++e) {
      const int a = tri[(e + 1) % 3];
      const int b = tri[(e + 2) % 3];
      auto [it, inserted] = lookup.try_emplace(edge_key(a, b), num_edges());
      if (inserted) {
        edges_.push_back(Edge{{std::min(a, b), std::max(a, b)}, {t, -1}});
      } else {
        Edge& edge = edges_[it->second];
        if (edge.triangles[1] >= 0)
          throw std::invalid_argument("mesh: edge shared by more than two triangles");
        edge.triangles[1] = t;
      }
      triangle_edges_[t][e] = it->second;
    }
  }

  normals_.resize(edges_.size());
  boundary_vertex_.assign(vertices_.size(), 0);
  num_interior_edges_ = 0;
  for (int e = 0; e < num_edges(); ++e) {
    Edge& edge = edges_[e];
    const Point tangent = vertices_[edge.vertices[1]] - vertices_[edge.vertices[0]];
    Point normal(-tangent.y(), tangent.x());
    normal.normalize();
    const Point mid = edge_midpoint(e);
    if (edge.on_boundary()) {
      if (normal.dot(mid - centroid(edge.triangles[0])) < 0) normal = -normal;
      boundary_vertex_[edge.vertices[0]] = 1;
      boundary_vertex_[edge.vertices[1]] = 1;
    } else {
      ++num_interior_edges_;
      // T+ is the triangle the normal points out of.
      if (normal.dot(mid - centroid(edge.triangles[0])) < 0)
        std::swap(edge.triangles[0], edge.triangles[1]);
    }
    normals_[e] = normal;
  }
  num_interior_vertices_ = static_cast<int>(
      std::count(boundary_vertex_.begin(), boundary_vertex_.end(), char{0}));

  patch_offsets_.assign(vertices_.size() + 1, 0);
  for (const auto& tri : triangles_)
    for (int v : tri) ++patch_offsets_[v + 1];
  for (std::size_t v = 0; v < vertices_.size(); ++v) patch_offsets_[v + 1] += patch_offsets_[v];
  patch_triangles_.resize(patch_offsets_.back());
  std::vector<int> fill(patch_offsets_.begin(), patch_offsets_.end() - 1);
  for (int t = 0; t < nt; ++t)
    for (int v : triangles_[t]) patch_triangles_[fill[v]++] = t;
}

int Mesh::find_edge(int a, int b) const {
  for (int t : patch(a))
    for (int e : triangle_edges_[t]) {
      const auto& ev = edges_[e].vertices;
      if ((ev[0] == a && ev[1] == b) || (ev[0] == b && ev[1] == a)) return e;
    }
  return -1;
}

double Mesh::area(int t) const {
  const auto& tri = triangles_[t];
  return signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

double Mesh::diameter(int t) const {
  const auto& tri = triangles_[t];
  const Point& a = vertices_[tri[0]];
  const Point& b = vertices_[tri[1]];
  const Point& c = vertices_[tri[2]];
  return std::sqrt(std::max({(a - b).squaredNorm(), (b - c).squaredNorm(), (c - a).squaredNorm()}));
}

Point Mesh::centroid(int t) const {
  const auto& tri = triangles_[t];
  return (vertices_[tri[0]] + vertices_[tri[1]] + vertices_[tri[2]]) / 3.0;
}

Point Mesh::edge_midpoint(int e) const {
  const auto& ev = edges_[e].vertices;
  return 0.5 * (vertices_[ev[0]] + vertices_[ev[1]]);
}

double Mesh::edge_length(int e) const {
  const auto& ev = edges_[e].vertices;
  return (vertices_[ev[0]] - vertices_[ev[1]]).norm();
}

std::span<const int> Mesh::patch(int v) const {
  return {patch_triangles_.data() + patch_offsets_[v],
          static_cast<std::size_t>(patch_offsets_[v + 1] - patch_offsets_[v])};
}

double Mesh::h_max() const {
  double h = 0.0;
  for (int t = 0; t < num_triangles(); ++t) h = std::max(h, diameter(t));
  return h;
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (int t = 0; t < num_triangles(); ++t) sum += area(t);
  return sum;
}

double Mesh::boundary_length() const {
  double sum = 0.0;
  for (int e = 0; e < num_edges(); ++e)
    if (is_boundary_edge(e)) sum += edge_length(e);
  return sum;
}

Mesh build_square_mesh(double halfwidth, int n_per_side, const Point& center) {
  if (n_per_side < 1) throw std::invalid_argument("build_square_mesh: n_per_side must be >= 1");
  if (!(halfwidth > 0)) throw std::invalid_argument("build_square_mesh: halfwidth must be positive");
  const int n = n_per_side;
  const double h = 2.0 * halfwidth / n;
  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertices.emplace_back(center.x() - halfwidth + i * h, center.y() - halfwidth + j * h);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> refinement;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      // Right angles sit at (i+1, j) and (i, j+1); the diagonal is the hypotenuse.
      triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      refinement.push_back(1);
      triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
      refinement.push_back(2);
    }
  return Mesh(std::move(vertices), std::move(triangles), std::move(refinement));
}

Mesh build_lshape_mesh(double halfwidth, int n_per_side) {
  if (n_per_side < 2 || n_per_side % 2 != 0)
    throw std::invalid_argument("build_lshape_mesh: n_per_side must be even and >= 2");
  const Mesh square = build_square_mesh(halfwidth, n_per_side);
  std::vector<int> remap(square.num_vertices(), -1);
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> refinement;
  for (int t = 0; t < square.num_triangles(); ++t) {
    const Point c = square.centroid(t);
    if (c.x() > 0 && c.y() > 0) continue;
    std::array<int, 3> tri{};
    for (int k = 0; k < 3; ++k) {
      int& slot = remap[square.triangle(t)[k]];
      if (slot < 0) {
        slot = static_cast<int>(vertices.size());
        vertices.push_back(square.vertex(square.triangle(t)[k]));
      }
      tri[k] = slot;
    }
    triangles.push_back(tri);
    refinement.push_back(square.refinement_edge(t));
  }
  return Mesh(std::move(vertices), std::move(triangles), std::move(refinement));
}

Mesh uniform_red_refine(const Mesh& mesh) {
  std::vector<Point> vertices = mesh.vertices();
  const int nv = mesh.num_vertices();
  for (int e = 0; e < mesh.num_edges(); ++e) vertices.push_back(mesh.edge_midpoint(e));
  std::vector<std::array<int, 3>> triangles;
  std::vector<int> refinement;
  triangles.reserve(4 * static_cast<std::size_t>(mesh.num_triangles()));
  refinement.reserve(triangles.capacity());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& v = mesh.triangle(t);
    const auto& te = mesh.triangle_edges(t);
    const int m0 = nv + te[0], m1 = nv + te[1], m2 = nv + te[2];
    const std::array<std::array<int, 3>, 4> children{{
        {v[0], m2, m1}, {m2, v[1], m0}, {m1, m0, v[2]}, {m0, m1, m2}}};
    for (const auto& child : children) {
      triangles.push_back(child);
      refinement.push_back(longest_edge(vertices[child[0]], vertices[child[1]], vertices[child[2]]));
    }
  }
  return Mesh(std::move(vertices), std::move(triangles), std::move(refinement), mesh.level() + 1);
}

Mesh nvb_refine(const Mesh& mesh, std::span<const int> marked) {
  const int nt = mesh.num_triangles();
  std::vector<char> edge_marked(mesh.num_edges(), 0);
  std::vector<int> queue;
  for (int t : marked) {
    if (t < 0 || t >= nt) throw std::out_of_range("nvb_refine: marked triangle index out of range");
    const int e = mesh.triangle_edges(t)[mesh.refinement_edge(t)];
    if (!edge_marked[e]) {
      edge_marked[e] = 1;
      queue.push_back(e);
    }
  }
  if (queue.empty()) return mesh;

  // Closure: any triangle with a marked edge must have its refinement edge marked.
  while (!queue.empty()) {
    const int e = queue.back();
    queue.pop_back();
    for (int t : mesh.edge(e).triangles) {
      if (t < 0) continue;
      const int r = mesh.triangle_edges(t)[mesh.refinement_edge(t)];
      if (!edge_marked[r]) {
        edge_marked[r] = 1;
        queue.push_back(r);
      }
    }
  }

  std::vector<Point> vertices = mesh.vertices();
  std::vector<int> midpoint(mesh.num_edges(), -1);
  for (int e = 0; e < mesh.num_edges(); ++e)
    if (edge_marked[e]) {
      midpoint[e] = static_cast<int>(vertices.size());
      vertices.push_back(mesh.edge_midpoint(e));
    }

  std::vector<std::array<int, 3>> triangles;
  std::vector<int> refinement;
  triangles.reserve(static_cast<std::size_t>(nt) + 2 * static_cast<std::size_t>(std::count(edge_marked.begin(), edge_marked.end(), 1)));

  // Only edges of the input mesh can be marked, so lookups go through the old
  // topology; edges created during bisection are never refined in this pass.
  auto old_edge = [&](int a, int b) -> int {
    if (a >= mesh.num_vertices() || b >= mesh.num_vertices()) return -1;
    return mesh.find_edge(a, b);
  };

  auto bisect = [&](auto&& self, const std::array<int, 3>& tri, int r) -> void {
    const int a = tri[r], b = tri[(r + 1) % 3], c = tri[(r + 2) % 3];
    const int e = old_edge(b, c);
    if (e < 0 || !edge_marked[e]) {
      triangles.push_back(tri);
      refinement.push_back(r);
      return;
    }
    const int m = midpoint[e];
    self(self, {a, b, m}, 2);
    self(self, {a, m, c}, 1);
  };

  for (int t = 0; t < nt; ++t) bisect(bisect, mesh.triangle(t), mesh.refinement_edge(t));
  return Mesh(std::move(vertices), std::move(triangles), std::move(refinement), mesh.level() + 1);
}

std::string check_mesh(const Mesh& mesh) {
  std::ostringstream why;
  for (int t = 0; t < mesh.num_triangles(); ++t)
    if (!(mesh.area(t) > 0)) {
      why << "triangle " << t << " has non-positive signed area";
      return why.str();
    }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edge(e);
    if (edge.triangles[0] < 0) {
      why << "edge " << e << " has no triangle";
      return why.str();
    }
  }
  // A hanging node leaves the coarse edge unmatched, so it shows up as a
  // boundary edge with a vertex in its relative interior.
  double hmin = std::numeric_limits<double>::infinity();
  for (int e = 0; e < mesh.num_edges(); ++e) hmin = std::min(hmin, mesh.edge_length(e));
  const double cell = std::max(hmin, 1e-300);
  Eigen::AlignedBox2d box;
  for (const Point& p : mesh.vertices()) box.extend(p);
  std::unordered_map<std::uint64_t, std::vector<int>> grid;
  auto cell_of = [&](const Point& p) {
    return std::array<long long, 2>{static_cast<long long>(std::floor((p.x() - box.min().x()) / cell)),
                                    static_cast<long long>(std::floor((p.y() - box.min().y()) / cell))};
  };
  auto key = [](long long i, long long j) {
    return (static_cast<std::uint64_t>(i) << 32) ^ static_cast<std::uint64_t>(j & 0xffffffff);
  };
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const auto c = cell_of(mesh.vertex(v));
    grid[key(c[0], c[1])].push_back(v);
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (!mesh.is_boundary_edge(e)) continue;
    const auto& ev = mesh.edge(e).vertices;
    const Point& p = mesh.vertex(ev[0]);
    const Point& q = mesh.vertex(ev[1]);
    const auto c0 = cell_of(p.cwiseMin(q));
    const auto c1 = cell_of(p.cwiseMax(q));
    const double len2 = (q - p).squaredNorm();
    for (long long i = c0[0] - 1; i <= c1[0] + 1; ++i)
      for (long long j = c0[1] - 1; j <= c1[1] + 1; ++j) {
        auto it = grid.find(key(i, j));
        if (it == grid.end()) continue;
        for (int v : it->second) {
          if (v == ev[0] || v == ev[1]) continue;
          const Point& x = mesh.vertex(v);
          const double s = (x - p).dot(q - p) / len2;
          if (s <= 1e-12 || s >= 1 - 1e-12) continue;
          if (std::abs(cross(q - p, x - p)) <= 1e-12 * len2) {
            why << "hanging node " << v << " on edge " << e;
            return why.str();
          }
        }
      }
  }
  return {};
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << mesh.num_vertices() << ' ' << mesh.num_triangles() << '\n';
  out << std::setprecision(17);
  for (int v = 0; v < mesh.num_vertices(); ++v)
    out << mesh.vertex(v).x() << ' ' << mesh.vertex(v).y() << ' '
        << (mesh.is_boundary_vertex(v) ? 1 : 0) << '\n';
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    out << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << mesh.refinement_edge(t) << '\n';
  }
}

Mesh read_mesh(std::istream& in) {
  int nv = 0, nt = 0;
  if (!(in >> nv >> nt) || nv < 3 || nt < 1) throw std::runtime_error("read_mesh: bad header");
  std::vector<Point> vertices(nv);
  std::vector<int> flags(nv);
  for (int v = 0; v < nv; ++v)
    if (!(in >> vertices[v].x() >> vertices[v].y() >> flags[v]))
      throw std::runtime_error("read_mesh: truncated vertex block");
  std::vector<std::array<int, 3>> triangles(nt);
  std::vector<int> refinement(nt);
  for (int t = 0; t < nt; ++t)
    if (!(in >> triangles[t][0] >> triangles[t][1] >> triangles[t][2] >> refinement[t]))
      throw std::runtime_error("read_mesh: truncated triangle block");
  Mesh mesh(std::move(vertices), std::move(triangles), std::move(refinement));
  for (int v = 0; v < nv; ++v)
    if ((flags[v] != 0) != mesh.is_boundary_vertex(v))
      throw std::runtime_error("read_mesh: boundary flag of vertex " + std::to_string(v) +
                               " disagrees with the topology");
  return mesh;
}

}  // namespace eigenbox

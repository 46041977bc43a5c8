#include "eigenbox/potential.hpp"

#include "eigenbox/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace eigenbox {

struct Potential::Source {
  Mesh mesh;
  std::vector<double> values;
  Eigen::AlignedBox2d box;
  int nx = 1;
  int ny = 1;
  std::vector<std::vector<int>> buckets;
};

namespace {

constexpr double kLatticeOffset = 20.0;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double lattice_smooth(const Point& x) { return std::max(0.5 * x.squaredNorm() - 16.0, 0.0); }

double lattice_value(const Point& x) {
  const double s = std::sin(std::numbers::pi * x.x() / 2) * std::sin(std::numbers::pi * x.y() / 2);
  return lattice_smooth(x) + std::floor(30.0 + 10.0 * s);
}

// Range of sin(pi x / 2) for x in [a, b].
std::pair<double, double> sine_range(double a, double b) {
  const double sa = std::sin(std::numbers::pi * a / 2);
  const double sb = std::sin(std::numbers::pi * b / 2);
  double lo = std::min(sa, sb);
  double hi = std::max(sa, sb);
  // Maxima at x = 1 + 4j, minima at x = -1 + 4j.
  if (std::floor((b - 1) / 4) >= std::ceil((a - 1) / 4)) hi = 1.0;
  if (std::floor((b + 1) / 4) >= std::ceil((a + 1) / 4)) lo = -1.0;
  return {lo, hi};
}

Eigen::AlignedBox2d triangle_box(const Mesh& mesh, int t) {
  Eigen::AlignedBox2d box;
  for (int v : mesh.triangle(t)) box.extend(mesh.vertex(v));
  return box;
}

double polygon_area(const std::vector<Point>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % poly.size()];
    a += p.x() * q.y() - p.y() * q.x();
  }
  return 0.5 * a;
}

// Sutherland-Hodgman against the half-plane sign * (x[axis] - level) <= 0.
std::vector<Point> clip(const std::vector<Point>& poly, int axis, double level, double sign) {
  std::vector<Point> out;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % n];
    const double dp = sign * (p[axis] - level);
    const double dq = sign * (q[axis] - level);
    if (dp <= 0) out.push_back(p);
    if ((dp < 0 && dq > 0) || (dp > 0 && dq < 0)) out.push_back(p + (q - p) * (dp / (dp - dq)));
  }
  return out;
}

}  // namespace

double clipped_area(const Mesh& mesh, int t, const Eigen::AlignedBox2d& box) {
  std::vector<Point> poly;
  for (int v : mesh.triangle(t)) poly.push_back(mesh.vertex(v));
  for (int axis = 0; axis < 2 && !poly.empty(); ++axis) {
    poly = clip(poly, axis, box.max()[axis], 1.0);
    if (!poly.empty()) poly = clip(poly, axis, box.min()[axis], -1.0);
  }
  return poly.size() < 3 ? 0.0 : polygon_area(poly);
}

Potential Potential::zero() { return Potential(); }

Potential Potential::harmonic() {
  Potential v;
  v.kind_ = PotentialKind::harmonic;
  return v;
}

Potential Potential::lattice() {
  Potential v;
  v.kind_ = PotentialKind::lattice;
  v.offset_ = kLatticeOffset;
  return v;
}

Potential Potential::anderson(std::uint64_t seed, int grid, const Eigen::AlignedBox2d& box) {
  if (grid < 1) throw std::invalid_argument("anderson: grid must be >= 1");
  Potential v;
  v.kind_ = PotentialKind::anderson;
  v.seed_ = seed;
  v.grid_ = grid;
  v.box_ = box;
  std::mt19937_64 engine(splitmix64(seed));
  v.cells_.resize(static_cast<std::size_t>(grid) * grid);
  for (double& c : v.cells_) c = static_cast<double>(engine() % 10000);
  v.offset_ = *std::min_element(v.cells_.begin(), v.cells_.end());
  return v;
}

Potential Potential::piecewise_constant(const Mesh& source, std::vector<double> values) {
  if (static_cast<int>(values.size()) != source.num_triangles())
    throw std::invalid_argument("piecewise_constant: one value per triangle required");
  auto src = std::make_shared<Source>();
  src->mesh = source;
  Potential v;
  v.kind_ = PotentialKind::piecewise_constant;
  v.offset_ = values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
  for (double& x : values) x -= v.offset_;
  src->values = std::move(values);
  for (const Point& p : source.vertices()) src->box.extend(p);
  const int side = std::max(1, static_cast<int>(std::sqrt(source.num_triangles() / 2.0)));
  src->nx = side;
  src->ny = side;
  src->buckets.resize(static_cast<std::size_t>(side) * side);
  const Point extent = src->box.sizes();
  auto bucket = [&](const Point& p, int axis) {
    const int n = axis == 0 ? src->nx : src->ny;
    const double s = (p[axis] - src->box.min()[axis]) / extent[axis] * n;
    return std::clamp(static_cast<int>(std::floor(s)), 0, n - 1);
  };
  for (int t = 0; t < source.num_triangles(); ++t) {
    const Eigen::AlignedBox2d tb = triangle_box(source, t);
    for (int j = bucket(tb.min(), 1); j <= bucket(tb.max(), 1); ++j)
      for (int i = bucket(tb.min(), 0); i <= bucket(tb.max(), 0); ++i)
        src->buckets[static_cast<std::size_t>(j) * src->nx + i].push_back(t);
  }
  v.source_ = std::move(src);
  return v;
}

std::string Potential::name() const {
  switch (kind_) {
    case PotentialKind::zero: return "zero";
    case PotentialKind::harmonic: return "harmonic";
    case PotentialKind::lattice: return "lattice";
    case PotentialKind::anderson: return "anderson";
    case PotentialKind::piecewise_constant: return "piecewise_constant";
  }
  return "unknown";
}

int Potential::anderson_cell(const Point& x) const {
  const Point rel = (x - box_.min()).cwiseQuotient(box_.sizes()) * grid_;
  const int i = std::clamp(static_cast<int>(std::floor(rel.x())), 0, grid_ - 1);
  const int j = std::clamp(static_cast<int>(std::floor(rel.y())), 0, grid_ - 1);
  return j * grid_ + i;
}

int Potential::locate(const Point& x) const {
  const Source& src = *source_;
  const Point extent = src.box.sizes();
  const int i = std::clamp(static_cast<int>(std::floor((x.x() - src.box.min().x()) / extent.x() * src.nx)), 0, src.nx - 1);
  const int j = std::clamp(static_cast<int>(std::floor((x.y() - src.box.min().y()) / extent.y() * src.ny)), 0, src.ny - 1);
  int best = -1;
  double best_margin = -std::numeric_limits<double>::infinity();
  for (int t : src.buckets[static_cast<std::size_t>(j) * src.nx + i]) {
    const auto& tri = src.mesh.triangle(t);
    const Point& a = src.mesh.vertex(tri[0]);
    const Point& b = src.mesh.vertex(tri[1]);
    const Point& c = src.mesh.vertex(tri[2]);
    const double area2 = 2.0 * src.mesh.area(t);
    auto cross = [](const Point& u, const Point& w) { return u.x() * w.y() - u.y() * w.x(); };
    const double l0 = cross(b - x, c - x) / area2;
    const double l1 = cross(c - x, a - x) / area2;
    const double l2 = 1.0 - l0 - l1;
    const double margin = std::min({l0, l1, l2});
    if (margin > best_margin) {
      best_margin = margin;
      best = t;
    }
  }
  if (best < 0) throw std::out_of_range("piecewise_constant: point outside the source mesh");
  return best;
}

double Potential::operator()(const Point& x) const {
  switch (kind_) {
    case PotentialKind::zero: return 0.0;
    case PotentialKind::harmonic: return 0.5 * x.squaredNorm();
    case PotentialKind::lattice: return lattice_value(x) - kLatticeOffset;
    case PotentialKind::anderson: return cells_[anderson_cell(x)] - offset_;
    case PotentialKind::piecewise_constant: return source_->values[locate(x)];
  }
  return 0.0;
}

bool Potential::is_piecewise_constant_on(const Mesh& mesh) const {
  switch (kind_) {
    case PotentialKind::zero:
    case PotentialKind::piecewise_constant:
      return true;
    case PotentialKind::harmonic:
    case PotentialKind::lattice:
      return false;
    case PotentialKind::anderson:
      for (int t = 0; t < mesh.num_triangles(); ++t) {
        const Point c = mesh.centroid(t);
        const int cell = anderson_cell(c);
        const Point size = box_.sizes() / grid_;
        const Point lo = box_.min() + Point((cell % grid_) * size.x(), (cell / grid_) * size.y());
        const Eigen::AlignedBox2d cb(lo, lo + size);
        if (clipped_area(mesh, t, cb) < (1.0 - 1e-10) * mesh.area(t)) return false;
      }
      return true;
  }
  return false;
}

std::vector<double> Potential::pi0(const Mesh& mesh) const {
  const int nt = mesh.num_triangles();
  std::vector<double> out(nt, 0.0);
  switch (kind_) {
    case PotentialKind::zero:
      break;
    case PotentialKind::harmonic:
      for (int t = 0; t < nt; ++t) {
        double s = 0.0;
        for (int e : mesh.triangle_edges(t)) s += mesh.edge_midpoint(e).squaredNorm();
        out[t] = s / 6.0;
      }
      break;
    case PotentialKind::lattice: {
      const QuadratureRule& rule = triangle_rule(10);
      for (int t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangle(t);
        double s = 0.0;
        for (std::size_t q = 0; q < rule.weights.size(); ++q) {
          const Eigen::Vector3d& l = rule.points[q];
          const Point x = l[0] * mesh.vertex(tri[0]) + l[1] * mesh.vertex(tri[1]) + l[2] * mesh.vertex(tri[2]);
          s += rule.weights[q] * (*this)(x);
        }
        out[t] = s;
      }
      break;
    }
    case PotentialKind::anderson: {
      const Point size = box_.sizes() / grid_;
      for (int t = 0; t < nt; ++t) {
        const Eigen::AlignedBox2d tb = triangle_box(mesh, t);
        const int c0 = anderson_cell(tb.min());
        const int c1 = anderson_cell(tb.max());
        double s = 0.0;
        for (int j = c0 / grid_; j <= c1 / grid_; ++j)
          for (int i = c0 % grid_; i <= c1 % grid_; ++i) {
            const Point lo = box_.min() + Point(i * size.x(), j * size.y());
            s += (cells_[j * grid_ + i] - offset_) * clipped_area(mesh, t, Eigen::AlignedBox2d(lo, lo + size));
          }
        out[t] = s / mesh.area(t);
      }
      break;
    }
    case PotentialKind::piecewise_constant:
      for (int t = 0; t < nt; ++t) out[t] = source_->values[locate(mesh.centroid(t))];
      break;
  }
  return out;
}

std::vector<double> Potential::elementwise_sup(const Mesh& mesh) const {
  const int nt = mesh.num_triangles();
  std::vector<double> out(nt, 0.0);
  switch (kind_) {
    case PotentialKind::zero:
      break;
    case PotentialKind::harmonic:
      // Convex, so the maximum over a triangle is attained at a vertex.
      for (int t = 0; t < nt; ++t)
        for (int v : mesh.triangle(t)) out[t] = std::max(out[t], 0.5 * mesh.vertex(v).squaredNorm());
      break;
    case PotentialKind::lattice:
      for (int t = 0; t < nt; ++t) {
        double smooth = 0.0;
        for (int v : mesh.triangle(t)) smooth = std::max(smooth, lattice_smooth(mesh.vertex(v)));
        const Eigen::AlignedBox2d tb = triangle_box(mesh, t);
        const auto [xlo, xhi] = sine_range(tb.min().x(), tb.max().x());
        const auto [ylo, yhi] = sine_range(tb.min().y(), tb.max().y());
        const double prod = std::max({xlo * ylo, xlo * yhi, xhi * ylo, xhi * yhi});
        out[t] = smooth + std::floor(30.0 + 10.0 * prod) - kLatticeOffset;
      }
      break;
    case PotentialKind::anderson: {
      const Point size = box_.sizes() / grid_;
      for (int t = 0; t < nt; ++t) {
        const Eigen::AlignedBox2d tb = triangle_box(mesh, t);
        const int c0 = anderson_cell(tb.min());
        const int c1 = anderson_cell(tb.max());
        const double tol = 1e-12 * mesh.area(t);
        for (int j = c0 / grid_; j <= c1 / grid_; ++j)
          for (int i = c0 % grid_; i <= c1 % grid_; ++i) {
            const Point lo = box_.min() + Point(i * size.x(), j * size.y());
            if (clipped_area(mesh, t, Eigen::AlignedBox2d(lo, lo + size)) > tol)
              out[t] = std::max(out[t], cells_[j * grid_ + i] - offset_);
          }
      }
      break;
    }
    case PotentialKind::piecewise_constant:
      out = pi0(mesh);
      break;
  }
  return out;
}

}  // namespace eigenbox

#pragma once

#include "eigenbox/mesh.hpp"
#include "eigenbox/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace eigenbox {

template <class Scalar>
struct Constants {
  static constexpr Scalar kappa_cr = Scalar(0.1893L);
  static constexpr Scalar kappa_ecr = Scalar(0.149L);
  /// Poincare constant of a right-isosceles triangle, 1 / (sqrt(2) pi).
  static constexpr Scalar poincare = Scalar(1) / (std::numbers::sqrt2_v<Scalar> * std::numbers::pi_v<Scalar>);
};

/// Mesh parameters entering the lower bounds. The elementwise quantities take
/// the maximum of h_T^2 (times sup_T V) over the triangles.
template <class Scalar>
struct BasicGlbParameters {
  Scalar eps = 0;         ///< kappa_CR^2 max h_T^2
  Scalar eps_p = 0;       ///< C_P^2 max h_T^2
  Scalar eps_pp = 0;      ///< kappa_eCR^2 max h_T^2
  Scalar eps_pp_max = 0;  ///< kappa_eCR^2 h_max^2, the global variant used by sCR
  Scalar delta = 0;       ///< kappa_CR^2 max h_T^2 sup_T V
  Scalar delta_p = 0;     ///< C_P^2 max h_T^2 sup_T V
  Scalar h_max = 0;
  Scalar alpha_min = 1;
};

using GlbParameters = BasicGlbParameters<double>;

/// Parameters from per-triangle diameters and sup bounds of V.
template <class Scalar>
BasicGlbParameters<Scalar> make_params(const std::vector<Scalar>& h, const std::vector<Scalar>& v_sup,
                                       Scalar alpha_min = 1) {
  using C = Constants<Scalar>;
  if (h.size() != v_sup.size()) throw std::invalid_argument("make_params: size mismatch");
  BasicGlbParameters<Scalar> p;
  Scalar h2 = 0, h2v = 0;
  for (std::size_t t = 0; t < h.size(); ++t) {
    h2 = std::max(h2, h[t] * h[t]);
    h2v = std::max(h2v, h[t] * h[t] * v_sup[t]);
  }
  p.h_max = std::sqrt(h2);
  p.eps = C::kappa_cr * C::kappa_cr * h2;
  p.eps_p = C::poincare * C::poincare * h2;
  p.eps_pp = C::kappa_ecr * C::kappa_ecr * h2;
  p.eps_pp_max = p.eps_pp;
  p.delta = C::kappa_cr * C::kappa_cr * h2v;
  p.delta_p = C::poincare * C::poincare * h2v;
  p.alpha_min = alpha_min;
  return p;
}

GlbParameters compute_params(const Mesh& mesh, const Potential& V, double alpha_min = 1.0);
/// Same with given per-triangle sup bounds.
GlbParameters compute_params(const Mesh& mesh, const std::vector<double>& v_sup, double alpha_min = 1.0);

template <class Scalar>
Scalar glb_cr(Scalar lambda, const BasicGlbParameters<Scalar>& p) {
  using std::sqrt;
  const Scalar den = 1 + p.delta + p.eps * lambda + 2 * sqrt(p.eps * p.delta * lambda);
  return lambda / den;
}

/// `mu` is the first CR eigenvalue.
template <class Scalar>
Scalar glb_mu(Scalar lambda, Scalar mu, const BasicGlbParameters<Scalar>& p) {
  using std::sqrt;
  if (!(mu > 0) || mu > lambda) throw std::invalid_argument("glb_mu: requires 0 < mu <= lambda");
  const Scalar root = sqrt(p.eps) + sqrt(p.delta / mu);
  const Scalar den = 1 + root * root * lambda;
  return lambda / den;
}

/// The eCR bound for a fixed s in (0, 1).
template <class Scalar>
Scalar glb_ecr_at(Scalar lambda, Scalar s, const BasicGlbParameters<Scalar>& p) {
  const Scalar zeta = 1 + p.delta_p / s - p.delta_p - s;
  const Scalar den = 1 + p.delta_p / s + p.eps_p * p.eps_p * lambda * lambda / (zeta + p.eps_p * lambda);
  return lambda / den;
}

/// Best eCR bound over s in (0, 1): a log grid clustered at both ends, then
/// golden-section search around the best sample. Any sampled s gives a valid
/// bound, so an imperfect maximiser only loosens the result.
template <class Scalar>
Scalar glb_ecr_general(Scalar lambda, const BasicGlbParameters<Scalar>& p) {
  using std::log;
  using std::exp;
  using std::sqrt;
  constexpr int half = 128;
  const Scalar lo = Scalar(1e-8);
  std::vector<Scalar> grid;
  grid.reserve(2 * half);
  for (int i = 0; i < half; ++i) {
    const Scalar x = exp(log(lo) + (log(Scalar(0.5)) - log(lo)) * Scalar(i) / Scalar(half - 1));
    grid.push_back(x);
    grid.push_back(1 - x);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::size_t best = 0;
  Scalar best_value = glb_ecr_at(lambda, grid[0], p);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const Scalar v = glb_ecr_at(lambda, grid[i], p);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  Scalar a = best == 0 ? grid[0] / 2 : grid[best - 1];
  Scalar b = best + 1 == grid.size() ? (1 + grid[best]) / 2 : grid[best + 1];
  const Scalar inv_phi = (sqrt(Scalar(5)) - 1) / 2;
  Scalar c = b - inv_phi * (b - a);
  Scalar d = a + inv_phi * (b - a);
  Scalar fc = glb_ecr_at(lambda, c, p);
  Scalar fd = glb_ecr_at(lambda, d, p);
  while (b - a > Scalar(1e-12)) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = glb_ecr_at(lambda, c, p);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = glb_ecr_at(lambda, d, p);
    }
    best_value = std::max({best_value, fc, fd});
  }
  if (p.delta_p == 0) {
    // The supremum is the limit s -> 0, which the grid only approaches.
    const Scalar limit = lambda / (1 + p.eps_p * p.eps_p * lambda * lambda / (1 + p.eps_p * lambda));
    best_value = std::max(best_value, limit);
  }
  return best_value;
}

/// eCR bound for a potential constant on each triangle.
template <class Scalar>
Scalar glb_ecr_pwconst(Scalar lambda, const BasicGlbParameters<Scalar>& p) {
  const Scalar den = 1 + p.delta_p + p.eps_p * p.eps_p * lambda * lambda / (1 + p.delta_p + p.eps_p * lambda);
  return lambda / den;
}

template <class Scalar>
Scalar glb_rt(Scalar lambda, const BasicGlbParameters<Scalar>& p) {
  return lambda / (1 + p.eps_p * lambda);
}

template <class Scalar>
Scalar glb_mcr(Scalar lambda, const BasicGlbParameters<Scalar>& p) {
  return lambda / (1 + p.eps_p * p.eps_pp * lambda * lambda / (1 + p.eps_pp * lambda));
}

template <class Scalar>
Scalar glb_cecr(Scalar lambda, const BasicGlbParameters<Scalar>& p) {
  return lambda / (1 + p.eps_pp * lambda);
}

template <class Scalar>
Scalar glb_scr(Scalar lambda, const BasicGlbParameters<Scalar>& p) {
  return lambda / (1 + std::max(p.eps_pp_max * lambda - 1, Scalar(0)));
}

/// Direct bound with a diffusion coefficient bounded below by alpha_min.
template <class Scalar>
Scalar glb_scr_diffusion(Scalar lambda, const BasicGlbParameters<Scalar>& p) {
  return lambda / (1 + std::max(p.eps_pp_max * lambda / p.alpha_min - 1, Scalar(0)));
}

}  // namespace eigenbox

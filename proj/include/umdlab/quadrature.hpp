#pragma once

#include <functional>
#include <vector>

namespace umdlab {

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [a,b].
QuadRule gauss_legendre(int n, double a, double b);

/// Gauss-Hermite rule for expectations under the standard normal:
/// E[f(X)] ~= sum_i w_i f(x_i), sum w_i = 1. Exact for polynomials of
/// degree <= 2n-1.
QuadRule gauss_hermite_normal(int n);

/// Tanh-sinh quadrature of f on (0,1). Handles integrable endpoint
/// singularities; refines until the level-to-level difference is below
/// rel_tol (relative) or max_level is hit.
double integrate_tanh_sinh01(const std::function<double(double)>& f,
                             double rel_tol = 1e-13, int max_level = 12);

/// Composite Gauss-Legendre on [0, T] with dyadically graded panels
/// toward 0 (for integrands with sharp exponential decay at the origin).
/// `panels` dyadic panels, `nodes` Gauss points per panel.
double integrate_graded_panels(const std::function<double(double)>& f,
                               double T, int panels, int nodes);

} // namespace umdlab

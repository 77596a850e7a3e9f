#pragma once

#include <vector>

#include "umdlab/grid.hpp"
#include "umdlab/multiplier.hpp"

namespace umdlab {

/// Trigonometric polynomial on the circle, coefficients c_k for |k| <= K.
struct CircleFunction {
    int degree = 0;
    std::vector<cplx> coef; // index k + degree

    explicit CircleFunction(int k = 0) : degree(k), coef(2 * k + 1, cplx(0, 0)) {}
    cplx& c(int k) { return coef[static_cast<std::size_t>(k + degree)]; }
    cplx c(int k) const { return coef[static_cast<std::size_t>(k + degree)]; }

    cplx eval(double phi) const;
    double eval_real(double phi) const { return eval(phi).real(); }
    /// n-th derivative at phi (real part), for quadrature corrections
    double derivative_real(double phi, int order) const;

    double max_imag_violation() const;   // |c_{-k} - conj(c_k)|
    bool even_only(double tol = 1e-10) const;
    bool odd_only(double tol = 1e-10) const;
    double l2_norm() const;

    CircleFunction& operator+=(const CircleFunction& o);
    CircleFunction scaled(double s) const;
};

/// Restriction of a d=2 symbol to the unit circle, sampled and projected to
/// degree <= K; *residual gets the L^2 mass beyond the band.
CircleFunction restrict_to_circle(const Multiplier& m, int k_max, double* residual = nullptr);

/// lambda_k = c0 * int_0^1 (1+r^2)^{d/2-2} (1 - 2r/(1+r^2))^{d/2-1+eps} r^k dr
/// with c0 = 2 w_{d-1} Gamma(eps+1)Gamma(d/2)/Gamma(d/2+eps).
double lambda_k(int k, double eps, int d = 2);

struct EvenDecomposition {
    double eps = 0.5;
    int degree = 0;
    std::vector<double> lambda;   // lambda_k for even k (index k; odd slots 0)
    CircleFunction density;       // f = sum_k m_k / lambda_k
    double truncation_residual = 0.0;
};

EvenDecomposition even_decompose(const Multiplier& m, double eps, int k_max);

/// Value of the two-parameter mixture integral at the unit vector xi:
/// int_{S^1} int_0^1 (1-a)^{eps-1} m_a^theta(xi) f(theta) da dtheta,
/// endpoint singularity removed by a = 1 - s^{1/eps}; Gauss-Legendre in s,
/// trapezoid in theta.
double even_reconstruct_pointwise(const EvenDecomposition& dec, const double* xi,
                                  int a_nodes = 96, int theta_nodes = 4096);

/// Symmetrized Poisson kernel (P(r xi, theta) + P(r xi, -theta))/2, closed form.
double poisson_kernel_sym(double r, const double* xi, const double* theta, int d);

/// Directional average density for an odd-imaginary d=2 symbol:
/// int Omega(psi) (-i) sgn<xi, theta(psi)> dpsi = m(xi) on band-limited m.
CircleFunction rotations_decompose_odd_2d(const Multiplier& m, int k_max);

/// Spectral application of -i sgn(<k, theta>), sgn 0 := 0.
GridFunction directional_hilbert(const double* theta_unit, const GridFunction& f);

/// Trapezoid average over theta of Omega(theta) H_theta f, with the
/// Euler-Maclaurin corrections for the two sign-change crossings per mode.
GridFunction rotations_reconstruct(const CircleFunction& omega, const GridFunction& f,
                                   int theta_nodes);

/// The per-mode averaged weight the reconstruction applies at angle phi_k
/// (exposed for the quadrature-accuracy tests).
double rotations_mode_weight(const CircleFunction& omega, double phi_k, int theta_nodes);

} // namespace umdlab

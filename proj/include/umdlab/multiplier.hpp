#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "umdlab/grid.hpp"
#include "umdlab/matrix.hpp"

namespace umdlab {

enum class Parity { EvenReal, OddImaginary };

/// Homogeneous (order zero) symbol with parity metadata and the
/// sphere-averaged zero-frequency value.
struct Multiplier {
    int dim = 0;
    Parity parity = Parity::EvenReal;
    std::function<cplx(const double*)> symbol; // xi != 0
    double zero_value = 0.0;
    std::string name;

    cplx operator()(const double* xi) const { return symbol(xi); }
};

struct NormParams {
    double p = 2.0;
    VectorNorm vector_norm = VectorNorm::L2;

    explicit NormParams(double p_ = 2.0, VectorNorm vn = VectorNorm::L2) : p(p_), vector_norm(vn) {
        if (!(p > 1.0)) throw std::invalid_argument("NormParams: p must be in (1,inf)");
    }
    double dual() const { return p / (p - 1.0); }
    double p_star() const { return p >= 2.0 ? p : dual(); }
};

// Named multipliers. Conventions: hilbert_1d is -i sgn(xi); riesz(k,d) is
// xi_k/(i|xi|); m0 is 2 xi_1^2/|xi|^2 - 1; ba_real = m0 on d=2;
// ba_imag = 2 xi_1 xi_2 / |xi|^2 (the pi/4 rotation of m0);
// m_a_theta is (1-a) sum_j a^{2j} <xi/|xi|, theta>^{2j}.
Multiplier make_hilbert_1d();
Multiplier make_riesz(int k, int d);
Multiplier make_m0(int d);
Multiplier make_ba_real();
Multiplier make_ba_imag();
Multiplier make_constant(double c, int d);
Multiplier make_m_a_theta(double a, const std::vector<double>& theta, int d);

/// Parses "m0", "ba_real", "riesz1", "hilbert", "const:2.5", ... (CLI glue).
Multiplier make_named_multiplier(const std::string& name, int d);

/// Average of the symbol over the unit sphere (trapezoid on S^1,
/// Gauss-Legendre x trapezoid product rule on S^2).
double sphere_average(const Multiplier& m);

/// Checks homogeneity and the parity assumption by sampling; throws on
/// violation. Called by every factory.
void validate_multiplier(const Multiplier& m);

/// Per-bin symbol values m(k) on the lattice of an N^d grid, zero mode set
/// to zero_value (amortizes repeated applications).
std::vector<cplx> symbol_table(const Multiplier& m, int n);

GridFunction apply_multiplier(const Multiplier& m, const GridFunction& f);

Multiplier compose_with_linear_map(const Multiplier& m, const TransformMatrix& a);

/// (delta_minus, delta_plus): extrema of an even-real symbol over the
/// sphere; dense sampling plus local refinement, 1e-8 for smooth symbols.
std::pair<double, double> multiplier_extrema(const Multiplier& m, int samples = 1024);

/// 2/(d+ - d-) * (1 + |d+ + d-|/(|d+| + |d-|)).
double umd_bound_factor(double delta_minus, double delta_plus);
double umd_bound_factor(const Multiplier& m);

} // namespace umdlab

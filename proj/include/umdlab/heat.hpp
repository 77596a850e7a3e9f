#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "umdlab/grid.hpp"
#include "umdlab/matrix.hpp"

namespace umdlab {

/// Heat extension u(x,t) of a band-limited grid function, evaluated by
/// direct spectral summation at arbitrary (off-grid) points:
/// u(x,t) = sum_k coef(k) exp(-t|k|^2/2) exp(i<k,x>).
class HeatEvaluator {
public:
    explicit HeatEvaluator(const GridFunction& f);

    int dim() const { return dim_; }

    cplx value(const double* x, double t) const;
    /// value and spatial gradient in one pass
    void value_and_gradient(const double* x, double t, cplx& val, cplx* grad) const;

    struct Mode {
        std::array<int, 3> k;
        double k2;
        cplx coef;
    };
    const std::vector<Mode>& modes() const { return modes_; }
    cplx mean() const { return mean_; }

private:
    int dim_ = 0;
    cplx mean_{0.0, 0.0};
    std::vector<Mode> modes_;
};

std::pair<cplx, std::vector<cplx>> heat_extension_eval(const GridFunction& f, const double* x,
                                                       double t);

/// Second-order Riesz combination: coefficient-wise product with
/// <k, A k>/|k|^2, zero mode mapped to 0.
GridFunction u_a_operator(const TransformMatrix& a, const GridFunction& f);

/// <U_A f, g> under normalized measure, frequency side:
/// sum_k coef_f(k) conj(coef_g(k)) <k,Ak>/|k|^2. Inputs must be mean zero.
double deterministic_bilinear_spectral(const TransformMatrix& a, const GridFunction& f,
                                       const GridFunction& g);

/// Same bilinear form via the heat representation: Gauss-Legendre in t on
/// graded panels of [0, T_cut], exact grid sums in x of <A^T grad u, grad v>.
double deterministic_bilinear_time_quadrature(const TransformMatrix& a, const GridFunction& f,
                                              const GridFunction& g, double t_cut,
                                              int nodes_per_panel = 12);

enum class StartLaw { Origin, Uniform };

struct MCConfig {
    long paths = 100000;
    double step = 1e-3;
    double horizon = 20.0;
    StartLaw start = StartLaw::Uniform;
    std::uint64_t seed = 1;
    int batches = 100;
};

struct MCBilinearReport {
    double estimate = 0.0;
    double stderr_est = 0.0;
    double z_score = 0.0; // against a caller-supplied reference, optional
    long paths = 0;
    bool coarse_step_warning = false;
};

/// Monte-Carlo estimate of E[ (int grad u . d(AW)) (int grad v . dW) ] with
/// uniform start on the torus, by Euler-Maruyama with left-endpoint sums.
MCBilinearReport mc_bilinear(const TransformMatrix& a, const GridFunction& f,
                             const GridFunction& g, const MCConfig& cfg);

/// Shared-path variant: one sweep of paths serves every (matrix, pair)
/// combination; results indexed [pair * n_matrices + matrix].
std::vector<MCBilinearReport> mc_bilinear_many(
    const std::vector<TransformMatrix>& mats,
    const std::vector<std::pair<const GridFunction*, const GridFunction*>>& pairs,
    const MCConfig& cfg);

/// Sampled Brownian path on the torus (increments kept raw, positions
/// wrapped); stream (seed, path_index) is reproducible under parallelism.
struct BrownianPath {
    int dim = 0;
    double step = 0.0;
    double horizon = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::array<double, 3>> increments; // n_steps entries
    std::vector<std::array<double, 3>> positions;  // n_steps + 1, wrapped

    static BrownianPath sample(int dim, double step, double horizon, const double* start,
                               std::uint64_t seed, std::uint64_t path_index);
};

/// Left-endpoint Euler-Maruyama pair (int <U, d(AW)>, int <U, dW>) for an
/// adapted integrand evaluated along the path.
std::pair<double, double> ito_transform_pathwise(
    const std::function<void(double t, const double* x, double* u_out)>& integrand,
    const TransformMatrix& a, const BrownianPath& path);

} // namespace umdlab

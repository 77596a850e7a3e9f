#pragma once

#include <cstdint>
#include <vector>

#include "umdlab/matrix.hpp"
#include "umdlab/rng.hpp"
#include "umdlab/walsh.hpp"

namespace umdlab {

/// Sparse multivariate monomial: sorted (variable, power) factors.
struct Monomial {
    std::vector<std::pair<int, int>> factors;
    int total_degree() const;
    bool operator<(const Monomial& o) const { return factors < o.factors; }
    bool operator==(const Monomial& o) const { return factors == o.factors; }
};

/// R^m-valued polynomial in the Gaussian variables, sparse term list.
struct Polynomial {
    int value_dim = 1;
    std::vector<std::pair<Monomial, std::vector<double>>> terms;

    static Polynomial zero(int value_dim = 1) { return Polynomial{value_dim, {}}; }
    static Polynomial constant(const std::vector<double>& c);
    static Polynomial variable(int var); // scalar x_var

    bool is_zero() const;
    int total_degree() const;
    int max_variable() const; // -1 when constant
    void add_term(const Monomial& m, const std::vector<double>& c);
    void canonicalize(); // merge duplicates, drop zeros
    std::vector<double> eval(const double* phi) const;

    Polynomial& operator+=(const Polynomial& o);
    Polynomial scaled(double s) const;
};

/// Scalar polynomial product (used by linear substitutions).
Polynomial poly_product(const Polynomial& a, const Polynomial& b);

/// Substitutes variable i by the scalar polynomial subs[i] everywhere.
Polynomial substitute(const Polynomial& p, const std::vector<Polynomial>& subs);

/// Gaussian block martingale difference data of order d with N blocks:
/// coefficient j (0-based) multiplies phi_j and may depend polynomially on
/// the variables of strictly earlier blocks only.
struct GaussianBlockInstance {
    int blocks = 0;    // N
    int order = 0;     // d
    int value_dim = 1; // m
    int degree_cap = 3;
    std::vector<Polynomial> coeffs; // size N*d

    void validate() const;
};

struct GaussRatioReport {
    double ratio = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
    double stderr_est = 0.0; // zero in quadrature mode
    bool monte_carlo = false;
    long samples = 0;
};

struct GaussEval {
    bool monte_carlo = false;
    long samples = 100000;
    std::uint64_t seed = 1;
    int batches = 64;
};

/// ||A-transform||_p / ||plain||_p of the instance. Quadrature mode uses a
/// tensor Gauss-Hermite grid over the variables that actually occur: exact
/// for even integer p (node count matched to the polynomial degree), and
/// limited to <= 4 variables otherwise. S optional as in the Walsh case.
GaussRatioReport gaussian_block_ratio(const GaussianBlockInstance& inst, const TransformMatrix& a,
                                      double p, const GaussEval& eval = {},
                                      const OperatorMatrix* s = nullptr);

/// Transform and plain sums at a single Gaussian point (pathwise view).
std::pair<std::vector<double>, std::vector<double>> transform_values_at(
    const GaussianBlockInstance& inst, const TransformMatrix& a, const double* phi);

/// Instance transport along a real orthogonal U: the U^T A U-transform of
/// `inst` and the A-transform of the result are equal pathwise under the
/// blockwise coupling psi = U phi.
GaussianBlockInstance conjugation_transport(const GaussianBlockInstance& inst,
                                            const TransformMatrix& u);

/// Embeds an order-d instance as an order-d*M instance for tensor_power(A,M)
/// with identical ratio (zero-padded coefficient slots).
GaussianBlockInstance tensor_embed(const GaussianBlockInstance& inst, int m);

/// Lifts an instance for B = submatrix(C, I) to an instance for C; requires
/// the rows of C at I to vanish outside I.
GaussianBlockInstance augment_to(const GaussianBlockInstance& inst, const TransformMatrix& c,
                                 const std::vector<int>& indices);

/// Walsh-Paley instance + sign pattern -> Gaussian block instance of order 2
/// whose A_s-transform realizes the same sign pattern (signs route levels to
/// the +1 or -1 slot; the Bernoulli variables become Gaussians).
GaussianBlockInstance gaussianize_walsh(const WalshPaleyInstance& wp,
                                        const std::vector<double>& alpha);

struct CltReport {
    double mean_s = 0.0, mean_c = 0.0;
    double var_s = 0.0, var_c = 0.0, cov_sc = 0.0;
    double max_cov_dev = 0.0; // max | cov - I |
    double kurtosis_s = 0.0;
    long samples = 0;
};

/// Normalized block sums s = (L/2)^{-1/2} sum sin(t_i), c likewise with cos,
/// over iid uniform angles; empirical second-moment matrix vs the identity.
CltReport clt_block_average(int block_len, long samples, std::uint64_t seed);

} // namespace umdlab

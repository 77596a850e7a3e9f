#pragma once

#include <optional>
#include <string>
#include <vector>

#include "umdlab/grid.hpp"
#include "umdlab/rng.hpp"

namespace umdlab {

/// Finite-dimensional operator between normed coordinate spaces; the "S" of
/// the transform inequalities and the summation operators sigma_n.
struct OperatorMatrix {
    int rows = 1, cols = 1;
    std::vector<double> a; // row-major
    VectorNorm input_norm = VectorNorm::L2;
    VectorNorm output_norm = VectorNorm::L2;

    static OperatorMatrix identity(int n);
    std::vector<double> apply(const std::vector<double>& x) const;
};

/// sigma_n: partial sums, l^1_n -> l^inf_n (lower-triangular all-ones).
OperatorMatrix summation_operator(int n);

double coord_norm(const std::vector<double>& x, VectorNorm vn);

/// Walsh-Paley martingale difference data: level k (1-based) has a table of
/// 2^{k-1} coefficient vectors indexed by the bits of (eps_1..eps_{k-1}).
struct WalshPaleyInstance {
    int depth = 0;
    int value_dim = 1;
    std::vector<std::vector<std::vector<double>>> tables; // [level][atom][comp]

    void validate() const;
    static WalshPaleyInstance random(int depth, int value_dim, Rng& rng);
    static WalshPaleyInstance random_quantized(int depth, int value_dim, Rng& rng,
                                               const std::vector<double>& values);
};

struct TransformCoefficients {
    std::vector<double> alpha; // |alpha_k| <= 1
    void validate() const;
};

struct WpRatio {
    double numerator = 0.0;
    double denominator = 0.0;
    double ratio = 0.0;
};

/// Exact enumeration over the 2^depth atoms (depth <= 24). S absent means
/// the identity; with S the numerator is measured in S's output norm and
/// the denominator in its input norm.
WpRatio wp_transform_ratio(const WalshPaleyInstance& inst, const TransformCoefficients& alpha,
                           double p, const OperatorMatrix* s = nullptr);

/// Multilinear coefficients of a scalar level table: d_k(eps) =
/// sum_{S subset [k-1]} c_S prod_{j in S} eps_j, returned indexed by mask.
std::vector<double> multilinear_coeffs(const WalshPaleyInstance& inst, int level);

enum class SearchStrategy { ExhaustiveSmall, RandomRestart, GreedyCoordinate };

struct WpSearchResult {
    double best_ratio = 0.0;
    WalshPaleyInstance best_instance;
    std::vector<double> best_alpha;
    bool budget_exhausted = false;
    long evaluations = 0;
};

struct WpSearchOptions {
    std::vector<double> value_set = {-2, -1, 0, 1, 2}; // quantized table values
    long budget = 1000000;
    std::uint64_t seed = 1;
};

/// Lower-bound search for the best transform ratio at exponent p.
/// The result never exceeds p* - 1 (+1e-9), asserted internally.
WpSearchResult umd_lower_bound_search(int depth, double p, SearchStrategy strategy,
                                      const WpSearchOptions& opts);

/// True iff the max ratio over an alpha-grid in [-1,1]^n stays within 1e-9
/// of the max over the 2^n vertex patterns.
bool verify_extreme_point(const WalshPaleyInstance& inst, double p, int grid_steps);

} // namespace umdlab

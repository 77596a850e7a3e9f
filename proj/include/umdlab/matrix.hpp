#pragma once

#include <string>
#include <utility>
#include <vector>

namespace umdlab {

enum class MatrixClass { Symmetric, Antisymmetric, General };

/// Small dense real d x d matrix with a symmetry classification, the "A"
/// of the stochastic-integral A-transforms.
struct TransformMatrix {
    int dim = 0;
    std::vector<double> a; // row-major

    TransformMatrix() = default;
    TransformMatrix(int d, std::vector<double> entries);
    static TransformMatrix identity(int d);
    static TransformMatrix zero(int d);
    static TransformMatrix diagonal(const std::vector<double>& diag);

    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * dim + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * dim + c]; }

    MatrixClass classification(double tol = 1e-12) const;
    bool is_symmetric(double tol = 1e-12) const;
    bool is_antisymmetric(double tol = 1e-12) const;

    TransformMatrix transpose() const;
    TransformMatrix times(const TransformMatrix& o) const;
    std::vector<double> apply(const std::vector<double>& x) const;
    double quad_form(const double* x) const; // <x, A x>
    double det() const;
    double max_abs_diff(const TransformMatrix& o) const;
};

/// diag(lambda_min / lambda_max) sign patterns, the extreme points of the
/// convex decomposition of clamped-spectrum symmetric matrices.
struct SignPatternMatrix {
    int dim = 0;
    std::vector<double> diagonal; // entries in {lambda_min, lambda_max} exactly
    TransformMatrix to_matrix() const { return TransformMatrix::diagonal(diagonal); }
};

enum class NamedMatrix { A_s, A_s_d, J };

/// A_s = diag(1,-1); A_s_d = diag(1,-1,...,-1) (d >= 2); J = [[0,-1],[1,0]].
TransformMatrix named_matrix(NamedMatrix which, int d = 2);

/// 2x2 rotation [[cos,-sin],[sin,cos]].
TransformMatrix rotation2(double angle);

struct EigenSystem {
    TransformMatrix u;               // orthogonal, columns are eigenvectors
    std::vector<double> eigenvalues; // descending
};

/// Cyclic Jacobi for small symmetric matrices: U^T A U = diag(eigenvalues).
EigenSystem symmetric_eigensystem(const TransformMatrix& a);

struct ConvexDecomposition {
    TransformMatrix u;
    std::vector<std::pair<double, SignPatternMatrix>> terms; // (weight, Lambda)
};

/// Writes U^T B U = sum_i w_i Lambda_i with w_i >= 0, sum w_i = 1 and the
/// Lambda_i diagonal sign-pattern matrices over {lambda_min, lambda_max}.
/// Product-measure construction: each eigenvalue is split independently.
ConvexDecomposition convex_decompose_symmetric(const TransformMatrix& b,
                                               double lambda_min, double lambda_max);

struct AntisymmetricForm {
    TransformMatrix u;           // orthogonal
    std::vector<double> blocks;  // c_k, descending; U^T A U = blkdiag(c_k J [, 0])
    bool zero_tail = false;      // trailing 1x1 zero block (always when d is odd)
};

AntisymmetricForm antisymmetric_canonical_form(const TransformMatrix& a);

struct AffineNormalization {
    double alpha = 0.0;
    double beta = 0.0;
    TransformMatrix b; // alpha*A + beta*I, extreme eigenvalues exactly +-1
};

AffineNormalization affine_normalize(const TransformMatrix& a);

/// Block-diagonal with M copies of A.
TransformMatrix tensor_power(const TransformMatrix& a, int m);

/// Principal submatrix on strictly ascending 0-based indices.
TransformMatrix submatrix(const TransformMatrix& a, const std::vector<int>& indices);

} // namespace umdlab

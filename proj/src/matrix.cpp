#include "umdlab/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace umdlab {

TransformMatrix::TransformMatrix(int d, std::vector<double> entries) : dim(d), a(std::move(entries)) {
    if (d < 1) throw std::invalid_argument("TransformMatrix: dim must be >= 1");
    if (a.size() != static_cast<std::size_t>(d) * d)
        throw std::invalid_argument("TransformMatrix: entry count does not match dim");
    for (double v : a)
        if (!std::isfinite(v)) throw std::invalid_argument("TransformMatrix: entries must be finite");
}

TransformMatrix TransformMatrix::identity(int d) {
    TransformMatrix m(d, std::vector<double>(static_cast<std::size_t>(d) * d, 0.0));
    for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
    return m;
}

TransformMatrix TransformMatrix::zero(int d) {
    return TransformMatrix(d, std::vector<double>(static_cast<std::size_t>(d) * d, 0.0));
}

TransformMatrix TransformMatrix::diagonal(const std::vector<double>& diag) {
    TransformMatrix m = zero(static_cast<int>(diag.size()));
    for (int i = 0; i < m.dim; ++i) m.at(i, i) = diag[i];
    return m;
}

bool TransformMatrix::is_symmetric(double tol) const {
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            if (std::abs(at(r, c) - at(c, r)) > tol) return false;
    return true;
}

bool TransformMatrix::is_antisymmetric(double tol) const {
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c)
            if (std::abs(at(r, c) + at(c, r)) > tol) return false;
    return true;
}

MatrixClass TransformMatrix::classification(double tol) const {
    if (is_symmetric(tol)) return MatrixClass::Symmetric;
    if (is_antisymmetric(tol)) return MatrixClass::Antisymmetric;
    return MatrixClass::General;
}

TransformMatrix TransformMatrix::transpose() const {
    TransformMatrix m = zero(dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) m.at(c, r) = at(r, c);
    return m;
}

TransformMatrix TransformMatrix::times(const TransformMatrix& o) const {
    if (dim != o.dim) throw std::invalid_argument("times: dimension mismatch");
    TransformMatrix m = zero(dim);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) {
            double s = 0.0;
            for (int k = 0; k < dim; ++k) s += at(r, k) * o.at(k, c);
            m.at(r, c) = s;
        }
    return m;
}

std::vector<double> TransformMatrix::apply(const std::vector<double>& x) const {
    std::vector<double> y(dim, 0.0);
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) y[r] += at(r, c) * x[c];
    return y;
}

double TransformMatrix::quad_form(const double* x) const {
    double s = 0.0;
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) s += x[r] * at(r, c) * x[c];
    return s;
}

double TransformMatrix::det() const {
    std::vector<double> lu(a);
    auto el = [&](int r, int c) -> double& { return lu[static_cast<std::size_t>(r) * dim + c]; };
    double d = 1.0;
    for (int col = 0; col < dim; ++col) {
        int piv = col;
        for (int r = col + 1; r < dim; ++r)
            if (std::abs(el(r, col)) > std::abs(el(piv, col))) piv = r;
        if (el(piv, col) == 0.0) return 0.0;
        if (piv != col) {
            for (int c = 0; c < dim; ++c) std::swap(el(piv, c), el(col, c));
            d = -d;
        }
        d *= el(col, col);
        for (int r = col + 1; r < dim; ++r) {
            double f = el(r, col) / el(col, col);
            for (int c = col; c < dim; ++c) el(r, c) -= f * el(col, c);
        }
    }
    return d;
}

double TransformMatrix::max_abs_diff(const TransformMatrix& o) const {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - o.a[i]));
    return m;
}

TransformMatrix named_matrix(NamedMatrix which, int d) {
    switch (which) {
        case NamedMatrix::A_s:
            return TransformMatrix::diagonal({1.0, -1.0});
        case NamedMatrix::A_s_d: {
            if (d < 2) throw std::invalid_argument("named_matrix: A_s_d requires d >= 2");
            std::vector<double> diag(d, -1.0);
            diag[0] = 1.0;
            return TransformMatrix::diagonal(diag);
        }
        case NamedMatrix::J:
            return TransformMatrix(2, {0.0, -1.0, 1.0, 0.0});
    }
    throw std::invalid_argument("named_matrix: unknown name");
}

TransformMatrix rotation2(double angle) {
    double c = std::cos(angle), s = std::sin(angle);
    return TransformMatrix(2, {c, -s, s, c});
}

EigenSystem symmetric_eigensystem(const TransformMatrix& a) {
    if (!a.is_symmetric()) throw std::domain_error("symmetric_eigensystem: matrix is not symmetric");
    const int n = a.dim;
    TransformMatrix d = a;
    TransformMatrix u = TransformMatrix::identity(n);
    double scale = 0.0;
    for (double v : a.a) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) scale = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off = std::max(off, std::abs(d.at(p, q)));
        if (off <= 1e-15 * scale) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                double apq = d.at(p, q);
                if (std::abs(apq) <= 1e-18 * scale) continue;
                double tau = (d.at(q, q) - d.at(p, p)) / (2.0 * apq);
                double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double dkp = d.at(k, p), dkq = d.at(k, q);
                    d.at(k, p) = c * dkp - s * dkq;
                    d.at(k, q) = s * dkp + c * dkq;
                }
                for (int k = 0; k < n; ++k) {
                    double dpk = d.at(p, k), dqk = d.at(q, k);
                    d.at(p, k) = c * dpk - s * dqk;
                    d.at(q, k) = s * dpk + c * dqk;
                }
                for (int k = 0; k < n; ++k) {
                    double ukp = u.at(k, p), ukq = u.at(k, q);
                    u.at(k, p) = c * ukp - s * ukq;
                    u.at(k, q) = s * ukp + c * ukq;
                }
            }
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return d.at(i, i) > d.at(j, j); });
    EigenSystem es;
    es.u = TransformMatrix::zero(n);
    es.eigenvalues.resize(n);
    for (int c = 0; c < n; ++c) {
        es.eigenvalues[c] = d.at(order[c], order[c]);
        for (int r = 0; r < n; ++r) es.u.at(r, c) = u.at(r, order[c]);
    }
    return es;
}

ConvexDecomposition convex_decompose_symmetric(const TransformMatrix& b,
                                               double lambda_min, double lambda_max) {
    if (!(lambda_min < lambda_max))
        throw std::invalid_argument("convex_decompose_symmetric: lambda_min must be < lambda_max");
    EigenSystem es = symmetric_eigensystem(b);
    const int n = b.dim;
    const double span = lambda_max - lambda_min;
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) {
        double mu = es.eigenvalues[i];
        if (mu < lambda_min - 1e-12 * std::abs(span) || mu > lambda_max + 1e-12 * std::abs(span))
            throw std::domain_error("convex_decompose_symmetric: eigenvalue " + std::to_string(mu) +
                                    " outside [lambda_min, lambda_max]");
        t[i] = std::clamp((mu - lambda_min) / span, 0.0, 1.0);
    }
    ConvexDecomposition dec;
    dec.u = es.u;
    for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
        double w = 1.0;
        SignPatternMatrix lam;
        lam.dim = n;
        lam.diagonal.resize(n);
        for (int i = 0; i < n; ++i) {
            bool hi = (mask >> i) & 1ull;
            w *= hi ? t[i] : 1.0 - t[i];
            lam.diagonal[i] = hi ? lambda_max : lambda_min;
        }
        if (w >= 1e-15) dec.terms.emplace_back(w, std::move(lam));
    }
    double total = 0.0;
    for (auto& [w, lam] : dec.terms) total += w;
    for (auto& [w, lam] : dec.terms) w /= total;
    return dec;
}

AntisymmetricForm antisymmetric_canonical_form(const TransformMatrix& a) {
    if (!a.is_antisymmetric())
        throw std::domain_error("antisymmetric_canonical_form: matrix is not antisymmetric");
    const int n = a.dim;
    // -A^2 is symmetric PSD with eigenvalues c_k^2 (doubled) plus the kernel.
    TransformMatrix s = a.transpose().times(a);
    EigenSystem es = symmetric_eigensystem(s);
    double scale = 0.0;
    for (double v : s.a) scale = std::max(scale, std::abs(v));
    const double tol = 1e-11 * std::max(scale, 1.0);

    std::vector<std::vector<double>> pos_vectors; // columns grouped later
    std::vector<double> pos_sigma;
    std::vector<std::vector<double>> kernel;
    for (int c = 0; c < n; ++c) {
        std::vector<double> col(n);
        for (int r = 0; r < n; ++r) col[r] = es.u.at(r, c);
        if (es.eigenvalues[c] > tol) {
            pos_vectors.push_back(std::move(col));
            pos_sigma.push_back(es.eigenvalues[c]);
        } else {
            kernel.push_back(std::move(col));
        }
    }

    auto dot = [n](const std::vector<double>& x, const std::vector<double>& y) {
        double d = 0.0;
        for (int i = 0; i < n; ++i) d += x[i] * y[i];
        return d;
    };
    auto axpy = [n](std::vector<double>& x, double f, const std::vector<double>& y) {
        for (int i = 0; i < n; ++i) x[i] += f * y[i];
    };

    AntisymmetricForm form;
    std::vector<std::vector<double>> columns;
    std::size_t i = 0;
    while (i < pos_vectors.size()) {
        double sigma = pos_sigma[i];
        // gather the (nearly) equal eigenvalue group
        std::size_t j = i;
        while (j < pos_vectors.size() && std::abs(pos_sigma[j] - sigma) <= 1e-9 * std::max(sigma, 1.0)) ++j;
        std::vector<std::vector<double>> group(pos_vectors.begin() + i, pos_vectors.begin() + j);
        double c = std::sqrt(sigma);
        while (!group.empty()) {
            std::vector<double> u = group.front();
            group.erase(group.begin());
            double nu = std::sqrt(dot(u, u));
            for (double& v : u) v /= nu;
            std::vector<double> v = a.apply(u);
            double nv = std::sqrt(dot(v, v));
            for (double& x : v) x /= nv;
            // remove span{u,v} from the remaining group vectors, then
            // re-orthonormalize the remainder (modified Gram-Schmidt)
            std::vector<std::vector<double>> rest;
            for (auto& g : group) {
                axpy(g, -dot(g, u), u);
                axpy(g, -dot(g, v), v);
                for (const auto& r : rest) axpy(g, -dot(g, r), r);
                double norm2 = dot(g, g);
                if (norm2 > 1e-16) {
                    for (double& x : g) x /= std::sqrt(norm2);
                    rest.push_back(g);
                }
            }
            group = std::move(rest);
            columns.push_back(u);
            columns.push_back(v);
            form.blocks.push_back(c);
        }
        i = j;
    }
    // kernel: pair into 0-blocks, odd leftover becomes the zero tail
    while (kernel.size() >= 2) {
        columns.push_back(kernel[0]);
        columns.push_back(kernel[1]);
        kernel.erase(kernel.begin(), kernel.begin() + 2);
        form.blocks.push_back(0.0);
    }
    if (!kernel.empty()) {
        columns.push_back(kernel[0]);
        form.zero_tail = true;
    }
    // blocks arrive descending because the eigenvalue groups do
    form.u = TransformMatrix::zero(n);
    for (int cidx = 0; cidx < n; ++cidx)
        for (int r = 0; r < n; ++r) form.u.at(r, cidx) = columns[cidx][r];
    return form;
}

AffineNormalization affine_normalize(const TransformMatrix& a) {
    if (!a.is_symmetric()) throw std::domain_error("affine_normalize: matrix is not symmetric");
    EigenSystem es = symmetric_eigensystem(a);
    double lmax = es.eigenvalues.front(), lmin = es.eigenvalues.back();
    if (lmax - lmin <= 1e-12 * std::max(std::abs(lmax), 1.0))
        throw std::domain_error("affine_normalize: matrix is a multiple of the identity");
    AffineNormalization an;
    an.alpha = 2.0 / (lmax - lmin);
    an.beta = -(lmax + lmin) / (lmax - lmin);
    an.b = TransformMatrix::zero(a.dim);
    for (int r = 0; r < a.dim; ++r)
        for (int c = 0; c < a.dim; ++c)
            an.b.at(r, c) = an.alpha * a.at(r, c) + (r == c ? an.beta : 0.0);
    return an;
}

TransformMatrix tensor_power(const TransformMatrix& a, int m) {
    if (m < 1) throw std::invalid_argument("tensor_power: M must be >= 1");
    const int d = a.dim;
    TransformMatrix out = TransformMatrix::zero(d * m);
    for (int b = 0; b < m; ++b)
        for (int r = 0; r < d; ++r)
            for (int c = 0; c < d; ++c) out.at(b * d + r, b * d + c) = a.at(r, c);
    return out;
}

TransformMatrix submatrix(const TransformMatrix& a, const std::vector<int>& indices) {
    const int k = static_cast<int>(indices.size());
    if (k < 1 || k >= a.dim) throw std::invalid_argument("submatrix: need 1 <= |I| < d");
    for (int i = 0; i < k; ++i) {
        if (indices[i] < 0 || indices[i] >= a.dim)
            throw std::invalid_argument("submatrix: index out of range");
        if (i > 0 && indices[i] <= indices[i - 1])
            throw std::invalid_argument("submatrix: indices must be strictly ascending");
    }
    TransformMatrix out = TransformMatrix::zero(k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) out.at(r, c) = a.at(indices[r], indices[c]);
    return out;
}

} // namespace umdlab

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "umdlab/matrix.hpp"
#include "umdlab/rng.hpp"

using namespace umdlab;

TEST_SUITE_BEGIN("matrix");

namespace {

TransformMatrix random_symmetric(int d, Rng& rng, double lo = -1.0, double hi = 1.0) {
    // random orthogonal conjugation of a diagonal with spectrum in [lo,hi]
    TransformMatrix g = TransformMatrix::zero(d);
    for (auto& v : g.a) v = rng.normal();
    // QR by Gram-Schmidt for the orthogonal factor
    TransformMatrix q = TransformMatrix::zero(d);
    for (int c = 0; c < d; ++c) {
        std::vector<double> col(d);
        for (int r = 0; r < d; ++r) col[r] = g.at(r, c);
        for (int cc = 0; cc < c; ++cc) {
            double dot = 0.0;
            for (int r = 0; r < d; ++r) dot += col[r] * q.at(r, cc);
            for (int r = 0; r < d; ++r) col[r] -= dot * q.at(r, cc);
        }
        double nn = 0.0;
        for (double v : col) nn += v * v;
        nn = std::sqrt(nn);
        for (int r = 0; r < d; ++r) q.at(r, c) = col[r] / nn;
    }
    std::vector<double> diag(d);
    for (auto& v : diag) v = rng.uniform(lo, hi);
    TransformMatrix out = q.times(TransformMatrix::diagonal(diag)).times(q.transpose());
    // symmetrize away roundoff
    for (int r = 0; r < d; ++r)
        for (int c = r + 1; c < d; ++c) {
            double avg = 0.5 * (out.at(r, c) + out.at(c, r));
            out.at(r, c) = out.at(c, r) = avg;
        }
    return out;
}

TransformMatrix random_antisymmetric(int d, Rng& rng) {
    TransformMatrix a = TransformMatrix::zero(d);
    for (int r = 0; r < d; ++r)
        for (int c = r + 1; c < d; ++c) {
            double v = rng.normal();
            a.at(r, c) = v;
            a.at(c, r) = -v;
        }
    return a;
}

double orthogonality_residual(const TransformMatrix& u) {
    TransformMatrix id = TransformMatrix::identity(u.dim);
    return u.transpose().times(u).max_abs_diff(id);
}

// Eigenvalues of iA for antisymmetric 4x4 A via the characteristic
// polynomial of A: lambda^4 + p lambda^2 + q with p = sum of squared
// upper entries, q = det(A) = Pf(A)^2. Eigenvalues of iA are the real
// roots +-c of c^4 - p c^2 + q = 0.
std::vector<double> antisym4_eigs_oracle(const TransformMatrix& a) {
    REQUIRE(a.dim == 4);
    double p = 0.0;
    for (int r = 0; r < 4; ++r)
        for (int c = r + 1; c < 4; ++c) p += a.at(r, c) * a.at(r, c);
    double pf = a.at(0, 1) * a.at(2, 3) - a.at(0, 2) * a.at(1, 3) + a.at(0, 3) * a.at(1, 2);
    double q = pf * pf;
    double disc = std::sqrt(std::max(0.0, p * p - 4.0 * q));
    double c2a = 0.5 * (p + disc), c2b = 0.5 * (p - disc);
    return {std::sqrt(std::max(0.0, c2a)), std::sqrt(std::max(0.0, c2b))};
}

} // namespace

TEST_CASE("named matrices") {
    TransformMatrix as = named_matrix(NamedMatrix::A_s);
    CHECK(as.at(0, 0) == 1.0);
    CHECK(as.at(1, 1) == -1.0);
    CHECK(as.at(0, 1) == 0.0);
    TransformMatrix j = named_matrix(NamedMatrix::J);
    CHECK(j.at(0, 1) == -1.0);
    CHECK(j.at(1, 0) == 1.0);
    CHECK(j.is_antisymmetric());
    TransformMatrix a3 = named_matrix(NamedMatrix::A_s_d, 3);
    CHECK(a3.at(0, 0) == 1.0);
    CHECK(a3.at(1, 1) == -1.0);
    CHECK(a3.at(2, 2) == -1.0);
}

TEST_CASE("symmetric eigensystem on known 2x2s") {
    EigenSystem es = symmetric_eigensystem(named_matrix(NamedMatrix::A_s));
    CHECK(es.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(es.eigenvalues[1] == doctest::Approx(-1.0));

    TransformMatrix sw(2, {0.0, 1.0, 1.0, 0.0});
    es = symmetric_eigensystem(sw);
    CHECK(es.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(es.eigenvalues[1] == doctest::Approx(-1.0));
    CHECK(std::abs(std::abs(es.u.at(0, 0)) - std::sqrt(0.5)) < 1e-12);

    CHECK_THROWS_AS(symmetric_eigensystem(named_matrix(NamedMatrix::J)), std::domain_error);
}

TEST_CASE("symmetric eigensystem residuals on random 4x4") {
    Rng rng(1234, 0);
    for (int trial = 0; trial < 25; ++trial) {
        TransformMatrix a = random_symmetric(4, rng, -3.0, 3.0);
        EigenSystem es = symmetric_eigensystem(a);
        CHECK(orthogonality_residual(es.u) < 1e-12);
        TransformMatrix rec = es.u.times(TransformMatrix::diagonal(es.eigenvalues)).times(es.u.transpose());
        CHECK(rec.max_abs_diff(a) < 1e-10);
    }
}

TEST_CASE("convex decomposition: worked examples") {
    // scalar 0 = (1/2)(+1) + (1/2)(-1)
    ConvexDecomposition dec = convex_decompose_symmetric(TransformMatrix::diagonal({0.0}), -1.0, 1.0);
    REQUIRE(dec.terms.size() == 2);
    CHECK(dec.terms[0].first == doctest::Approx(0.5));
    CHECK(dec.terms[1].first == doctest::Approx(0.5));

    // already extreme: a single term of weight 1
    dec = convex_decompose_symmetric(named_matrix(NamedMatrix::A_s), -1.0, 1.0);
    REQUIRE(dec.terms.size() == 1);
    CHECK(dec.terms[0].first == doctest::Approx(1.0));
    CHECK(dec.terms[0].second.diagonal[0] == 1.0);
    CHECK(dec.terms[0].second.diagonal[1] == -1.0);

    // diag(0.5,-1) = 0.75 diag(1,-1) + 0.25 diag(-1,-1)
    dec = convex_decompose_symmetric(TransformMatrix::diagonal({0.5, -1.0}), -1.0, 1.0);
    REQUIRE(dec.terms.size() == 2);
    double rec0 = 0.0, rec1 = 0.0;
    for (auto& [w, lam] : dec.terms) {
        rec0 += w * lam.diagonal[0];
        rec1 += w * lam.diagonal[1];
    }
    CHECK(rec0 == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(rec1 == doctest::Approx(-1.0).epsilon(1e-14));

    CHECK_THROWS_AS(convex_decompose_symmetric(TransformMatrix::diagonal({2.0, 0.0}), -1.0, 1.0),
                    std::domain_error);
}

TEST_CASE("convex decomposition reconstructs 100 random clamped matrices") {
    Rng rng(99, 4);
    for (int trial = 0; trial < 100; ++trial) {
        int d = 1 + static_cast<int>(rng.below(6));
        TransformMatrix b = random_symmetric(d, rng, -1.0, 1.0);
        ConvexDecomposition dec = convex_decompose_symmetric(b, -1.0, 1.0);
        double wsum = 0.0;
        TransformMatrix rec = TransformMatrix::zero(d);
        for (auto& [w, lam] : dec.terms) {
            CHECK(w >= 0.0);
            wsum += w;
            for (int i = 0; i < d; ++i) rec.at(i, i) += w * lam.diagonal[i];
        }
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
        TransformMatrix target = dec.u.transpose().times(b).times(dec.u);
        CHECK(rec.max_abs_diff(target) < 1e-12);
    }
}

TEST_CASE("antisymmetric canonical form: blocks and spectrum") {
    // 3 J
    TransformMatrix a(2, {0.0, -3.0, 3.0, 0.0});
    AntisymmetricForm f = antisymmetric_canonical_form(a);
    REQUIRE(f.blocks.size() == 1);
    CHECK(f.blocks[0] == doctest::Approx(3.0));
    CHECK(!f.zero_tail);

    // zero 2x2: a single 0 block
    f = antisymmetric_canonical_form(TransformMatrix::zero(2));
    REQUIRE(f.blocks.size() == 1);
    CHECK(f.blocks[0] == doctest::Approx(0.0));

    CHECK_THROWS_AS(antisymmetric_canonical_form(named_matrix(NamedMatrix::A_s)), std::domain_error);
}

TEST_CASE("antisymmetric canonical form on 100 random matrices") {
    Rng rng(555, 8);
    TransformMatrix jj = named_matrix(NamedMatrix::J);
    for (int trial = 0; trial < 100; ++trial) {
        int d = 2 + static_cast<int>(rng.below(5)); // 2..6
        TransformMatrix a = random_antisymmetric(d, rng);
        AntisymmetricForm f = antisymmetric_canonical_form(a);
        CHECK(orthogonality_residual(f.u) < 1e-12);
        // rebuild the block diagonal
        TransformMatrix bd = TransformMatrix::zero(d);
        int pos = 0;
        for (double c : f.blocks) {
            bd.at(pos, pos + 1) = -c;
            bd.at(pos + 1, pos) = c;
            pos += 2;
        }
        TransformMatrix target = f.u.transpose().times(a).times(f.u);
        CHECK(bd.max_abs_diff(target) < 1e-10);
        if (d % 2 == 1) CHECK(f.zero_tail);
        if (d == 4 && !f.zero_tail && f.blocks.size() == 2) {
            auto oracle = antisym4_eigs_oracle(a);
            CHECK(f.blocks[0] == doctest::Approx(oracle[0]).epsilon(1e-9));
            CHECK(f.blocks[1] == doctest::Approx(oracle[1]).epsilon(1e-9));
        }
    }
}

TEST_CASE("affine normalization") {
    AffineNormalization an = affine_normalize(TransformMatrix::diagonal({3.0, 1.0}));
    CHECK(an.alpha == doctest::Approx(1.0));
    CHECK(an.beta == doctest::Approx(-2.0));
    CHECK(an.b.at(0, 0) == doctest::Approx(1.0));
    CHECK(an.b.at(1, 1) == doctest::Approx(-1.0));

    an = affine_normalize(named_matrix(NamedMatrix::A_s));
    CHECK(an.alpha == doctest::Approx(1.0));
    CHECK(an.beta == doctest::Approx(0.0));

    an = affine_normalize(TransformMatrix::diagonal({5.0, -1.0, -1.0}));
    CHECK(an.alpha == doctest::Approx(1.0 / 3.0));
    CHECK(an.beta == doctest::Approx(-2.0 / 3.0));
    EigenSystem es = symmetric_eigensystem(an.b);
    CHECK(es.eigenvalues.front() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(es.eigenvalues.back() == doctest::Approx(-1.0).epsilon(1e-12));

    CHECK_THROWS_AS(affine_normalize(TransformMatrix::identity(3)), std::domain_error);

    // random symmetric: normalize then re-diagonalize gives extreme +-1
    Rng rng(777, 0);
    for (int trial = 0; trial < 20; ++trial) {
        TransformMatrix a = random_symmetric(4, rng, -5.0, 5.0);
        EigenSystem ea = symmetric_eigensystem(a);
        if (ea.eigenvalues.front() - ea.eigenvalues.back() < 1e-6) continue;
        AffineNormalization nn = affine_normalize(a);
        EigenSystem eb = symmetric_eigensystem(nn.b);
        CHECK(eb.eigenvalues.front() == doctest::Approx(1.0).epsilon(1e-11));
        CHECK(eb.eigenvalues.back() == doctest::Approx(-1.0).epsilon(1e-11));
    }
}

TEST_CASE("tensor power and principal submatrices") {
    TransformMatrix t = tensor_power(named_matrix(NamedMatrix::A_s), 2);
    CHECK(t.dim == 4);
    CHECK(t.at(0, 0) == 1.0);
    CHECK(t.at(1, 1) == -1.0);
    CHECK(t.at(2, 2) == 1.0);
    CHECK(t.at(3, 3) == -1.0);
    CHECK(tensor_power(named_matrix(NamedMatrix::J), 1).max_abs_diff(named_matrix(NamedMatrix::J)) == 0.0);

    // eigenvalue multiset of the tensor power = M copies of the spectrum
    Rng rng(31337, 2);
    TransformMatrix a = random_symmetric(3, rng, -2.0, 2.0);
    EigenSystem ea = symmetric_eigensystem(a);
    EigenSystem et = symmetric_eigensystem(tensor_power(a, 2));
    for (int i = 0; i < 3; ++i) {
        CHECK(et.eigenvalues[2 * i] == doctest::Approx(ea.eigenvalues[i]).epsilon(1e-10));
        CHECK(et.eigenvalues[2 * i + 1] == doctest::Approx(ea.eigenvalues[i]).epsilon(1e-10));
    }

    TransformMatrix s = submatrix(TransformMatrix::diagonal({1.0, -1.0, -1.0}), {0, 1});
    CHECK(s.max_abs_diff(named_matrix(NamedMatrix::A_s)) == 0.0);

    // J padded into 3x3 with a zero row/column
    TransformMatrix jp = TransformMatrix::zero(3);
    jp.at(0, 1) = -1.0;
    jp.at(1, 0) = 1.0;
    CHECK(submatrix(jp, {0, 1}).max_abs_diff(named_matrix(NamedMatrix::J)) == 0.0);

    CHECK_THROWS_AS(submatrix(jp, {1, 0}), std::invalid_argument);
    CHECK_THROWS_AS(submatrix(jp, {0, 5}), std::invalid_argument);

    // Cauchy interlacing for a principal submatrix of a random symmetric
    TransformMatrix big = random_symmetric(5, rng, -2.0, 2.0);
    EigenSystem eb = symmetric_eigensystem(big);
    EigenSystem es = symmetric_eigensystem(submatrix(big, {0, 2, 4}));
    // lambda_{k+ (5-3)}(A) <= mu_k <= lambda_k(A), eigenvalues descending
    for (int k = 0; k < 3; ++k) {
        CHECK(es.eigenvalues[k] <= eb.eigenvalues[k] + 1e-10);
        CHECK(es.eigenvalues[k] >= eb.eigenvalues[k + 2] - 1e-10);
    }
}

TEST_SUITE_END();

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "umdlab/multiplier.hpp"

using namespace umdlab;

TEST_SUITE_BEGIN("multiplier");

namespace {

GridFunction single_mode(int dim, int n, const int* k, cplx c) {
    GridFunction f(dim, n);
    std::vector<cplx> coef(f.grid_size(), cplx(0, 0));
    coef[f.bin_flat(k)] = c;
    int mk[3];
    for (int i = 0; i < dim; ++i) mk[i] = -k[i];
    coef[f.bin_flat(mk)] = std::conj(c);
    f.set_spectrum(coef);
    f.set_real_flag(true);
    return f;
}

} // namespace

TEST_CASE("named symbols take their defining values") {
    Multiplier m0 = make_m0(2);
    double e1[2] = {1, 0}, e2[2] = {0, 1};
    CHECK(m0.symbol(e1).real() == doctest::Approx(1.0));
    CHECK(m0.symbol(e2).real() == doctest::Approx(-1.0));

    Multiplier c = make_constant(1.0, 2);
    double xi[2] = {0.3, -2.0};
    CHECK(c.symbol(xi).real() == doctest::Approx(1.0));
    CHECK(c.zero_value == doctest::Approx(1.0));

    Multiplier ma = make_m_a_theta(0.5, {1.0, 0.0}, 2);
    CHECK(ma.symbol(e1).real() == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    CHECK_THROWS_AS(make_m_a_theta(1.5, {1.0, 0.0}, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_riesz(3, 2), std::invalid_argument);
}

TEST_CASE("sphere averages") {
    CHECK(std::abs(make_m0(2).zero_value) < 1e-12);
    CHECK(make_constant(2.5, 2).zero_value == doctest::Approx(2.5));
    CHECK(std::abs(make_riesz(1, 2).zero_value) < 1e-12);
    CHECK(make_m0(3).zero_value == doctest::Approx(2.0 / 3.0 - 1.0).epsilon(1e-10));
    // closed form sqrt((1-a)/(1+a)) for the Poisson-family symbol on S^1
    double a = 0.37;
    CHECK(make_m_a_theta(a, {0.0, 1.0}, 2).zero_value ==
          doctest::Approx(std::sqrt((1.0 - a) / (1.0 + a))).epsilon(1e-10));
    CHECK(std::abs(make_hilbert_1d().zero_value) < 1e-15);
}

TEST_CASE("conjugation action of the 1d Hilbert multiplier") {
    Multiplier h = make_hilbert_1d();
    for (int k : {1, 2, 5}) {
        // sin(k theta): coefficients -+ 1/(2i)
        GridFunction f(1, 64);
        std::vector<cplx> coef(f.grid_size(), cplx(0, 0));
        int kp[1] = {k}, km[1] = {-k};
        coef[f.bin_flat(kp)] = cplx(0.0, -0.5);
        coef[f.bin_flat(km)] = cplx(0.0, 0.5);
        f.set_spectrum(coef);
        GridFunction g = apply_multiplier(h, f);
        for (int j = 0; j < 64; ++j) {
            CHECK(g.value(j).real() == doctest::Approx(-std::cos(k * f.theta(j))).epsilon(1e-12));
            CHECK(std::abs(g.value(j).imag()) < 1e-12);
        }
    }
    // constants are annihilated
    GridFunction one(1, 32);
    for (std::size_t j = 0; j < one.grid_size(); ++j) one.value(j) = cplx(1.0, 0.0);
    GridFunction g = apply_multiplier(h, one);
    CHECK(g.lp_norm(2.0) < 1e-14);
}

TEST_CASE("m0 fixes its eigenmode cos(theta1)") {
    int k[2] = {1, 0};
    GridFunction f = single_mode(2, 32, k, cplx(0.5, 0.0)); // cos(theta1)
    GridFunction g = apply_multiplier(make_m0(2), f);
    g -= f;
    CHECK(g.lp_norm(2.0) < 1e-13);
}

TEST_CASE("pi/4 rotation carries m0 into ba_imag") {
    Multiplier rot = compose_with_linear_map(make_m0(2), rotation2(-M_PI / 4.0));
    Multiplier bi = make_ba_imag();
    Rng rng(3, 3);
    for (int t = 0; t < 200; ++t) {
        double xi[2] = {rng.normal(), rng.normal()};
        if (xi[0] * xi[0] + xi[1] * xi[1] < 1e-6) continue;
        CHECK(std::abs(rot.symbol(xi) - bi.symbol(xi)) < 1e-12);
    }
    // identity composition is the identity
    Multiplier same = compose_with_linear_map(make_m0(2), TransformMatrix::identity(2));
    for (int t = 0; t < 50; ++t) {
        double xi[2] = {rng.normal(), rng.normal()};
        if (xi[0] * xi[0] + xi[1] * xi[1] < 1e-6) continue;
        CHECK(std::abs(same.symbol(xi) - make_m0(2).symbol(xi)) < 1e-12);
    }
    CHECK_THROWS_AS(compose_with_linear_map(make_m0(2), TransformMatrix::zero(2)), std::domain_error);
}

TEST_CASE("spectral exactness: applying two symbols equals the product symbol") {
    Rng rng(17, 0);
    GridFunction f = random_band_limited(2, 32, 9, rng);
    Multiplier m0 = make_m0(2);
    Multiplier bi = make_ba_imag();
    GridFunction lhs = apply_multiplier(bi, apply_multiplier(m0, f));
    GridFunction rhs = f;
    rhs.apply_symbol(
        [&](const int* k) {
            double xi[2] = {static_cast<double>(k[0]), static_cast<double>(k[1])};
            return m0.symbol(xi) * bi.symbol(xi);
        },
        cplx(0.0, 0.0));
    lhs -= rhs;
    CHECK(lhs.lp_norm(2.0) < 1e-12);
}

TEST_CASE("reality preservation under both parities") {
    Rng rng(23, 5);
    GridFunction f = random_band_limited(2, 64, 12, rng);
    CHECK(apply_multiplier(make_m0(2), f).max_imag() < 1e-12);
    CHECK(apply_multiplier(make_riesz(2, 2), f).max_imag() < 1e-12);
}

TEST_CASE("Riesz identity and the real Beurling-Ahlfors symbol") {
    Rng rng(29, 1);
    GridFunction f = random_band_limited(2, 64, 10, rng);
    f.project_mean_zero();
    Multiplier r1 = make_riesz(1, 2), r2 = make_riesz(2, 2);

    // -(R1^2 + R2^2) = Id on mean-zero
    GridFunction g = apply_multiplier(r1, apply_multiplier(r1, f));
    g += apply_multiplier(r2, apply_multiplier(r2, f));
    g *= -1.0;
    g -= f;
    CHECK(g.lp_norm(2.0) < 1e-12);

    // Re(BA) = -Id - 2 R1^2
    GridFunction lhs = apply_multiplier(make_ba_real(), f);
    GridFunction rhs = apply_multiplier(r1, apply_multiplier(r1, f));
    rhs *= -2.0;
    rhs -= f;
    lhs -= rhs;
    CHECK(lhs.lp_norm(2.0) < 1e-12);
}

TEST_CASE("extrema of even symbols") {
    auto [lo, hi] = multiplier_extrema(make_m0(2));
    CHECK(lo == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-9));

    auto [clo, chi] = multiplier_extrema(make_constant(0.7, 2));
    CHECK(clo == doctest::Approx(0.7));
    CHECK(chi == doctest::Approx(0.7));

    // 1-d maximization of (1-a)/(1-a^2 t^2) over t in [-1,1], a = 0.5
    auto [alo, ahi] = multiplier_extrema(make_m_a_theta(0.5, {1.0, 0.0}, 2));
    CHECK(alo == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(ahi == doctest::Approx(2.0 / 3.0).epsilon(1e-8));

    CHECK_THROWS_AS(multiplier_extrema(make_riesz(1, 2)), std::domain_error);

    auto [lo3, hi3] = multiplier_extrema(make_m0(3));
    CHECK(lo3 == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(hi3 == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("normalization constant of the martingale bound") {
    CHECK(umd_bound_factor(make_m0(2)) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(umd_bound_factor(0.0, 1.0) == doctest::Approx(4.0));
    CHECK(umd_bound_factor(-2.0, 2.0) == doctest::Approx(0.5));
    CHECK_THROWS_AS(umd_bound_factor(1.0, 1.0), std::domain_error);
}

TEST_CASE("transference: ratios agree between grid N and 2N for even p") {
    Rng rng(31, 2);
    GridFunction f = random_band_limited(2, 32, 6, rng);
    f.project_mean_zero();
    Multiplier m0 = make_m0(2);
    for (double p : {2.0, 4.0}) {
        double r32 = apply_multiplier(m0, f).lp_norm(p) / f.lp_norm(p);
        GridFunction f64 = f.regrid(64);
        double r64 = apply_multiplier(m0, f64).lp_norm(p) / f64.lp_norm(p);
        CHECK(r32 == doctest::Approx(r64).epsilon(1e-10));
    }
}

TEST_CASE("dimension mismatch raises") {
    GridFunction f(2, 16);
    CHECK_THROWS_AS(apply_multiplier(make_hilbert_1d(), f), std::invalid_argument);
}

TEST_SUITE_END();

#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "umdlab/grid.hpp"

using namespace umdlab;

TEST_SUITE_BEGIN("grid");

TEST_CASE("spectrum round trip recovers coefficients") {
    GridFunction f(2, 16);
    std::vector<cplx> coef(f.grid_size(), cplx(0, 0));
    int k1[2] = {3, -2};
    int k2[2] = {0, 5};
    coef[f.bin_flat(k1)] = cplx(1.5, -0.25);
    coef[f.bin_flat(k2)] = cplx(0.0, 2.0);
    f.set_spectrum(coef);
    auto back = f.spectrum();
    CHECK(std::abs(back[f.bin_flat(k1)] - cplx(1.5, -0.25)) < 1e-13);
    CHECK(std::abs(back[f.bin_flat(k2)] - cplx(0.0, 2.0)) < 1e-13);
    double sum = 0.0;
    for (auto& c : back) sum += std::abs(c);
    CHECK(sum == doctest::Approx(std::abs(cplx(1.5, -0.25)) + 2.0).epsilon(1e-12));
}

TEST_CASE("grid values match the analytic trigonometric polynomial") {
    GridFunction f(1, 16);
    std::vector<cplx> coef(f.grid_size(), cplx(0, 0));
    int kp[1] = {3}, km[1] = {-3};
    coef[f.bin_flat(kp)] = cplx(0.5, 0.0);
    coef[f.bin_flat(km)] = cplx(0.5, 0.0);
    f.set_spectrum(coef); // cos(3 theta)
    for (int j = 0; j < 16; ++j) {
        double theta = f.theta(j);
        CHECK(f.value(j).real() == doctest::Approx(std::cos(3 * theta)).epsilon(1e-12));
        CHECK(std::abs(f.value(j).imag()) < 1e-13);
    }
}

TEST_CASE("Nyquist bins are zeroed on set_spectrum") {
    GridFunction f(2, 8);
    std::vector<cplx> coef(f.grid_size(), cplx(0, 0));
    int nyq[2] = {-4, 1};
    coef[f.bin_flat(nyq)] = cplx(1.0, 0.0);
    f.set_spectrum(coef);
    auto back = f.spectrum();
    for (auto& c : back) CHECK(std::abs(c) < 1e-14);
}

TEST_CASE("lp_norm: constants and cosine moments") {
    GridFunction one(2, 64);
    std::vector<cplx> coef(one.grid_size(), cplx(0, 0));
    int k0[2] = {0, 0};
    coef[one.bin_flat(k0)] = cplx(1.0, 0.0);
    one.set_spectrum(coef);
    CHECK(one.lp_norm(3.7) == doctest::Approx(1.0).epsilon(1e-13));

    GridFunction c1(1, 64);
    std::vector<cplx> cc(c1.grid_size(), cplx(0, 0));
    int kp[1] = {1}, km[1] = {-1};
    cc[c1.bin_flat(kp)] = cplx(0.5, 0.0);
    cc[c1.bin_flat(km)] = cplx(0.5, 0.0);
    c1.set_spectrum(cc);
    CHECK(c1.lp_norm(2.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    // int cos^4 = 3/8 under normalized measure
    CHECK(c1.lp_norm(4.0) == doctest::Approx(std::pow(3.0 / 8.0, 0.25)).epsilon(1e-10));
}

TEST_CASE("random band limited functions are real and inside the band") {
    Rng rng(42, 0);
    GridFunction f = random_band_limited(2, 32, 5, rng);
    CHECK(f.max_imag() < 1e-12);
    auto sp = f.spectrum();
    for_each_mode(2, 32, [&](std::size_t flat, const int* k) {
        if (std::abs(k[0]) > 5 || std::abs(k[1]) > 5) CHECK(std::abs(sp[flat]) < 1e-14);
    });
    // nonzero content
    CHECK(f.lp_norm(2.0) > 0.1);
}

TEST_CASE("regrid preserves values at shared points and lp norms for even p") {
    Rng rng(7, 1);
    GridFunction f = random_band_limited(2, 32, 7, rng);
    GridFunction g = f.regrid(64);
    // point (theta_i, theta_j) of the coarse grid appears at doubled indices
    for (int i = 0; i < 32; i += 5)
        for (int j = 0; j < 32; j += 7) {
            int ci[2] = {i, j}, fi[2] = {2 * i, 2 * j};
            CHECK(std::abs(f.value(f.flat_index(ci)) - g.value(g.flat_index(fi))) < 1e-11);
        }
    CHECK(f.lp_norm(2.0) == doctest::Approx(g.lp_norm(2.0)).epsilon(1e-12));
    CHECK(f.lp_norm(4.0) == doctest::Approx(g.lp_norm(4.0)).epsilon(1e-12));
}

TEST_CASE("compose_integer_map is an exact Lp isometry") {
    Rng rng(11, 3);
    GridFunction f = random_band_limited(2, 64, 7, rng);
    // theta -> (theta1+theta2, theta2-theta1): spectrum k -> M^T k stays in band
    GridFunction g = f.compose_integer_map({1, 1, -1, 1});
    CHECK(g.lp_norm(2.0) == doctest::Approx(f.lp_norm(2.0)).epsilon(1e-12));
    CHECK(g.lp_norm(4.0) == doctest::Approx(f.lp_norm(4.0)).epsilon(1e-12));
    CHECK(g.max_imag() < 1e-11);
}

TEST_CASE("gfn1 round trip is bit-exact") {
    Rng rng(5, 9);
    GridFunction f = random_band_limited(2, 16, 3, rng);
    f.set_real_flag(true);
    std::string path = "test_roundtrip.gfn1";
    f.write_gfn1(path);
    GridFunction g = GridFunction::read_gfn1(path);
    std::remove(path.c_str());
    REQUIRE(g.dim() == f.dim());
    REQUIRE(g.n() == f.n());
    REQUIRE(g.value_dim() == f.value_dim());
    CHECK(g.real_flagged());
    for (std::size_t i = 0; i < f.grid_size(); ++i) {
        CHECK(f.value(i).real() == g.value(i).real());
        CHECK(f.value(i).imag() == g.value(i).imag());
    }
}

TEST_SUITE_END();

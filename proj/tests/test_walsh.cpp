#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "umdlab/walsh.hpp"

using namespace umdlab;

TEST_SUITE_BEGIN("walsh");

namespace {

// Independent enumeration oracle: recomputes both sides with its own loop
// structure (reverse atom order, Kahan accumulation).
double oracle_ratio(const WalshPaleyInstance& inst, const std::vector<double>& alpha, double p) {
    const int n = inst.depth;
    const std::size_t atoms = std::size_t{1} << n;
    double num = 0.0, den = 0.0, cn = 0.0, cd = 0.0;
    for (std::size_t a = atoms; a-- > 0;) {
        double plain = 0.0, trans = 0.0;
        for (int k = n - 1; k >= 0; --k) {
            double eps = (a >> k) & 1u ? 1.0 : -1.0;
            double d = inst.tables[k][a & ((std::size_t{1} << k) - 1)][0];
            plain += eps * d;
            trans += alpha[k] * eps * d;
        }
        double tn = std::pow(std::abs(trans), p);
        double td = std::pow(std::abs(plain), p);
        double y = tn - cn, t = num + y;
        cn = (t - num) - y;
        num = t;
        y = td - cd;
        t = den + y;
        cd = (t - den) - y;
        den = t;
    }
    return std::pow(num / den, 1.0 / p);
}

WalshPaleyInstance spec_fixture() {
    // d1 = 1, d2(e1) = e1, d3(e1,e2) = max(e1,e2)
    WalshPaleyInstance inst;
    inst.depth = 3;
    inst.value_dim = 1;
    inst.tables = {
        {{1.0}},
        {{-1.0}, {1.0}},                       // d2 indexed by e1 = -1, +1
        {{-1.0}, {1.0}, {1.0}, {1.0}},         // max(e1,e2) over (e1,e2) bit pairs
    };
    inst.validate();
    return inst;
}

} // namespace

TEST_CASE("single level transforms have ratio one") {
    WalshPaleyInstance inst;
    inst.depth = 1;
    inst.value_dim = 1;
    inst.tables = {{{1.0}}};
    WpRatio r = wp_transform_ratio(inst, {{-1.0}}, 3.0);
    CHECK(r.ratio == 1.0);
}

TEST_CASE("depth-2 scalar rigidity: every sign pattern gives ratio exactly 1") {
    Rng rng(2024, 0);
    for (int trial = 0; trial < 100; ++trial) {
        WalshPaleyInstance inst = WalshPaleyInstance::random(2, 1, rng);
        for (double a1 : {1.0, -1.0})
            for (double a2 : {1.0, -1.0}) {
                WpRatio r = wp_transform_ratio(inst, {{a1, a2}}, 4.0);
                CHECK(r.ratio == 1.0); // exact: reflection couples the atom multisets
            }
    }
}

TEST_CASE("p=2 isometry for unimodular sign patterns") {
    Rng rng(11, 7);
    for (int trial = 0; trial < 50; ++trial) {
        int depth = 2 + static_cast<int>(rng.below(4));
        WalshPaleyInstance inst = WalshPaleyInstance::random(depth, 1, rng);
        std::vector<double> alpha(depth);
        for (double& a : alpha) a = rng.below(2) ? 1.0 : -1.0;
        WpRatio r = wp_transform_ratio(inst, {alpha}, 2.0);
        CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("production enumeration agrees with the independent oracle") {
    Rng rng(5150, 3);
    for (int trial = 0; trial < 30; ++trial) {
        int depth = 1 + static_cast<int>(rng.below(5));
        WalshPaleyInstance inst = WalshPaleyInstance::random(depth, 1, rng);
        std::vector<double> alpha(depth);
        for (double& a : alpha) a = rng.uniform(-1.0, 1.0);
        double p = 1.5 + 3.0 * rng.uniform();
        WpRatio r = wp_transform_ratio(inst, {alpha}, p);
        CHECK(r.ratio == doctest::Approx(oracle_ratio(inst, alpha, p)).epsilon(1e-13));
    }
}

TEST_CASE("the repo depth-3 fixture enumerates to its frozen value") {
    WalshPaleyInstance inst = spec_fixture();
    WpRatio r = wp_transform_ratio(inst, {{-1.0, 1.0, -1.0}}, 4.0);
    CHECK(r.ratio == doctest::Approx(oracle_ratio(inst, {-1.0, 1.0, -1.0}, 4.0)).epsilon(1e-14));
    // frozen by the 8-atom oracle: both sides evaluate to 21/8 * ... -> ratio 1
    CHECK(r.ratio == doctest::Approx(1.0).epsilon(1e-14));
    // a pattern without the reflection symmetry
    WpRatio r2 = wp_transform_ratio(inst, {{1.0, -1.0, 1.0}}, 4.0);
    CHECK(r2.ratio == doctest::Approx(oracle_ratio(inst, {1.0, -1.0, 1.0}, 4.0)).epsilon(1e-14));
}

TEST_CASE("vector-valued ratio with the summation operator") {
    // d_k in R^2; sigma_2 output measured in l^inf, input in l^1
    WalshPaleyInstance inst;
    inst.depth = 2;
    inst.value_dim = 2;
    inst.tables = {
        {{1.0, 0.0}},
        {{0.0, 1.0}, {0.0, -1.0}},
    };
    OperatorMatrix s2 = summation_operator(2);
    WpRatio r = wp_transform_ratio(inst, {{1.0, -1.0}}, 2.0, &s2);
    CHECK(r.denominator > 0.0);
    CHECK(r.numerator > 0.0);
    // sigma_n has norm 1 from l^1 to l^inf
    std::vector<double> e2 = {0.0, 1.0};
    CHECK(coord_norm(summation_operator(4).apply({1.0, 0.0, 0.0, 0.0}), VectorNorm::Linf) == 1.0);
    CHECK(coord_norm(summation_operator(4).apply({0.25, 0.25, 0.25, 0.25}), VectorNorm::Linf) == 1.0);
}

TEST_CASE("degenerate and malformed instances raise") {
    WalshPaleyInstance inst;
    inst.depth = 2;
    inst.value_dim = 1;
    inst.tables = {{{0.0}}, {{0.0}, {0.0}}};
    CHECK_THROWS_AS(wp_transform_ratio(inst, {{1.0, 1.0}}, 2.0), std::invalid_argument);
    inst.tables = {{{1.0}}, {{0.0}}}; // wrong table size
    CHECK_THROWS_AS(wp_transform_ratio(inst, {{1.0, 1.0}}, 2.0), std::invalid_argument);
    inst.tables = {{{1.0}}, {{0.0}, {1.0}}};
    CHECK_THROWS_AS(wp_transform_ratio(inst, {{1.0, 2.0}}, 2.0), std::invalid_argument); // |alpha|>1
}

TEST_CASE("multilinear expansion reproduces the tables") {
    Rng rng(808, 1);
    WalshPaleyInstance inst = WalshPaleyInstance::random(4, 1, rng);
    for (int level = 1; level <= 4; ++level) {
        auto c = multilinear_coeffs(inst, level);
        // evaluate the polynomial at every atom and compare
        for (std::size_t atom = 0; atom < (std::size_t{1} << (level - 1)); ++atom) {
            double v = 0.0;
            for (std::size_t mask = 0; mask < c.size(); ++mask) {
                double chi = 1.0;
                for (int j = 0; j < level - 1; ++j)
                    if ((mask >> j) & 1u) chi *= ((atom >> j) & 1u) ? 1.0 : -1.0;
                v += c[mask] * chi;
            }
            CHECK(v == doctest::Approx(inst.tables[level - 1][atom][0]).epsilon(1e-12));
        }
    }
}

TEST_CASE("search: p=2 tops out at one, p=4 exceeds one by depth 3") {
    WpSearchOptions opts;
    opts.value_set = {-1.0, 0.0, 1.0};
    opts.budget = 200000;
    WpSearchResult r2 = umd_lower_bound_search(3, 2.0, SearchStrategy::ExhaustiveSmall, opts);
    CHECK(r2.best_ratio == doctest::Approx(1.0).epsilon(1e-12));
    WpSearchResult r4 = umd_lower_bound_search(3, 4.0, SearchStrategy::ExhaustiveSmall, opts);
    CHECK(r4.best_ratio > 1.0);
    CHECK(r4.best_ratio <= 3.0 + 1e-9);
    // monotone in depth on the same family
    WpSearchResult r4d2 = umd_lower_bound_search(2, 4.0, SearchStrategy::ExhaustiveSmall, opts);
    CHECK(r4.best_ratio >= r4d2.best_ratio - 1e-12);
    // monotone in p on the same family
    WpSearchResult r3 = umd_lower_bound_search(3, 3.0, SearchStrategy::ExhaustiveSmall, opts);
    CHECK(r3.best_ratio >= r2.best_ratio - 1e-12);
    CHECK(r4.best_ratio >= r3.best_ratio - 1e-12);
}

TEST_CASE("search strategies: random restart and greedy respect the budget") {
    WpSearchOptions opts;
    opts.budget = 2000;
    opts.seed = 99;
    WpSearchResult rr = umd_lower_bound_search(3, 4.0, SearchStrategy::RandomRestart, opts);
    CHECK(rr.best_ratio > 1.0);
    CHECK(rr.evaluations <= opts.budget);
    CHECK(rr.budget_exhausted);
    WpSearchResult gc = umd_lower_bound_search(3, 4.0, SearchStrategy::GreedyCoordinate, opts);
    CHECK(gc.best_ratio > 1.0);
    CHECK(gc.evaluations <= opts.budget);
}

TEST_CASE("extreme point property holds on small fixtures") {
    Rng rng(31415, 0);
    WalshPaleyInstance inst2 = WalshPaleyInstance::random(2, 1, rng);
    CHECK(verify_extreme_point(inst2, 3.0, 9));
    WalshPaleyInstance inst3 = spec_fixture();
    CHECK(verify_extreme_point(inst3, 4.0, 9));
    CHECK(verify_extreme_point(inst3, 2.0, 5));
}

TEST_SUITE_END();

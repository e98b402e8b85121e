#include <doctest.h>

#include "dirac/verify.hpp"

#include <cmath>

using namespace dirac;

namespace {

DiracProblem trig_problem(std::size_t M) {
    Grid g(M);
    return {PotentialMatrix::from_functions(g, [](double x) { return 0.3 * std::cos(x); },
                                            [](double x) { return 0.2 * std::sin(2.0 * x); }),
            BoundaryParams(0.5, 1.0)};
}

GridVector smooth_f(const Grid& g) {
    return GridVector::from_functions(g, [](double x) { return x * (kPi - x); }, [](double x) { return 1.0 + std::cos(x); });
}

}  // namespace

TEST_CASE("eigenfunctions are orthogonal with the boundary term included") {
    const auto prob = trig_problem(800);
    const auto s = compute_spectral_data(prob, 8);
    const auto e = eigenfunctions(prob, s);
    REQUIRE(e.size() == 18);
    const auto w = trapezoid_weights(prob.potential.grid());
    const std::size_t m = 800;
    for (std::size_t a = 0; a < e.size(); ++a) {
        for (std::size_t b = a; b < e.size(); ++b) {
            double v = e[a].phi.y1[m] * e[b].phi.y1[m] / prob.boundary.h2;
            for (std::size_t j = 0; j <= m; ++j) {
                v += w[j] * (e[a].phi.y1[j] * e[b].phi.y1[j] + e[a].phi.y2[j] * e[b].phi.y2[j]);
            }
            if (a == b) {
                CHECK(v == doctest::Approx(e[a].alpha).epsilon(1e-4));
            } else {
                CHECK(std::abs(v) < 1e-4);
            }
        }
    }
}

TEST_CASE("Parseval defect shrinks with N") {
    const auto prob = trig_problem(800);
    const auto f = smooth_f(prob.potential.grid());
    const auto lo = parseval_check(prob, compute_spectral_data(prob, 10), f);
    const auto hi = parseval_check(prob, compute_spectral_data(prob, 40), f);
    CHECK(hi.defect < lo.defect);
    CHECK(hi.defect < 1e-5);
    CHECK(hi.coefficients.size() == 82);
    GridVector zero(prob.potential.grid());
    CHECK_THROWS_AS(parseval_check(prob, compute_spectral_data(prob, 2), zero), std::invalid_argument);
}

TEST_CASE("an eigenfunction expands onto itself") {
    const auto prob = trig_problem(800);
    const auto s = compute_spectral_data(prob, 20);
    const auto e = eigenfunctions(prob, s);
    const GridVector f = e[4].phi;
    const auto r = expansion_check(prob, s, f, Pairing::h_space);
    CHECK(r.max_error < 1e-3);
    const auto c = expansion_coefficients(prob, e, f, Pairing::h_space);
    CHECK(c[4] == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(std::abs(c[7]) < 1e-4);
}

TEST_CASE("expansion of a smooth function converges") {
    const auto prob = trig_problem(800);
    const auto f = smooth_f(prob.potential.grid());
    const double e10 = expansion_check(prob, compute_spectral_data(prob, 10), f).max_error;
    const double e40 = expansion_check(prob, compute_spectral_data(prob, 40), f).max_error;
    CHECK(e40 < 0.25 * e10);
}

TEST_CASE("zero-sum partial sums decay away from pi") {
    const auto prob = trig_problem(800);
    const auto s = compute_spectral_data(prob, 40);
    ZeroSumOptions opt;
    opt.ladder = {10, 20, 40};
    const auto rows = zero_sum_check(prob, s, opt);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].max_abs < rows[0].max_abs);
    CHECK(rows[0].max_abs / rows[2].max_abs >= 2.0);

    // At x = pi the series tends to the boundary element, not to zero.
    opt.x_limit_fraction = 1.0;
    const auto full = zero_sum_check(prob, s, opt);
    CHECK(full[2].max_abs > 0.5);

    opt.ladder = {80};
    CHECK_THROWS(zero_sum_check(prob, s, opt));
}

TEST_CASE("Hadamard rows") {
    const auto prob = trig_problem(600);
    const auto s = compute_spectral_data(prob, 40);
    const auto rows = hadamard_comparison(prob, s, {0.5, 1.5, 2.5});
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.shooting == doctest::Approx(char_delta(prob, r.lambda)));
        CHECK(r.relative_error == doctest::Approx(std::abs(r.product - r.shooting) / std::abs(r.shooting)));
        CHECK(r.relative_error < 3e-2);
    }
}

TEST_CASE("roundtrip at low resolution and with a corrupted alpha_0") {
    const Grid g(200);
    const auto pot = PotentialMatrix::from_functions(g, [](double x) { return 0.3 * std::cos(x); },
                                                     [](double x) { return 0.2 * std::sin(2.0 * x); });
    const auto clean = roundtrip(pot, BoundaryParams(0.5, 1.0), 10);
    CHECK(clean.rel_l2 < 0.1);
    CHECK(clean.h1_error < 0.05);
    CHECK(clean.h2_error < 0.05);
    CHECK(clean.glm_residual < 1e-10);
    CHECK(clean.spectral.truncation == 10);

    RoundtripOptions bad;
    bad.alpha0_factor = 2.0;
    const auto corrupted = roundtrip(pot, BoundaryParams(0.5, 1.0), 10, bad);
    CHECK(corrupted.rel_l2 > 5.0 * clean.rel_l2);
    CHECK(corrupted.h2_error > clean.h2_error);
}

TEST_CASE("relative L2 distance") {
    const Grid g(100);
    std::vector<double> a(101), b(101), z(101, 0.0);
    for (std::size_t j = 0; j <= 100; ++j) {
        b[j] = std::sin(g.node(j));
        a[j] = 1.1 * b[j];
    }
    CHECK(relative_l2(a, b, g) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(relative_l2(b, b, g) == 0.0);
    // absolute when the reference vanishes: int sin^2 = pi/2
    CHECK(relative_l2(b, z, g) == doctest::Approx(std::sqrt(kPi / 2)).epsilon(1e-6));
}

#include <doctest.h>

#include "dirac/recovery.hpp"
#include "dirac/spectrum.hpp"

#include <cmath>

using namespace dirac;

namespace {

DiracProblem trig_problem(std::size_t M, double h1 = 0.5, double h2 = 1.0) {
    Grid g(M);
    return {PotentialMatrix::from_functions(g, [](double x) { return 0.3 * std::cos(x); },
                                            [](double x) { return 0.2 * std::sin(2.0 * x); }),
            BoundaryParams(h1, h2)};
}

SpectralData free_data(std::size_t N) {
    SpectralData s;
    s.truncation = N;
    for (int n = -static_cast<int>(N); n <= static_cast<int>(N); ++n) s.data.push_back({n, double(n), kPi});
    return s;
}

}  // namespace

TEST_CASE("potential read off the kernel diagonal") {
    Grid g(50);
    KernelField K(g);
    // K11 - K22 = q, -(K12 + K21) = p
    const auto p = [](double x) { return 1.0 + x - 0.5 * x * x; };
    const auto q = [](double x) { return 0.2 * x * x - x; };
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.node(i);
        K.at(i, i) = Matrix2{0.5 * q(x) + 0.3, -0.25 * p(x), -0.75 * p(x), -0.5 * q(x) + 0.3};
    }
    // overwrite the origin so only extrapolation can reproduce it
    K.at(0, 0) = Matrix2{99, 99, 99, 99};
    const auto pot = potential_from_kernel(K);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(pot.p()[i] == doctest::Approx(p(g.node(i))).epsilon(1e-12));
        CHECK(pot.q()[i] == doctest::Approx(q(g.node(i))).epsilon(1e-12));
    }
    CHECK(extrapolate_origin(K).a11 == doctest::Approx(0.3).epsilon(1e-12));
    CHECK_THROWS_AS(extrapolate_origin(KernelField(Grid(2))), std::invalid_argument);
}

TEST_CASE("rank-one data recover q = delta / (1 + delta x)") {
    Grid g(400);
    const double delta = 1.0 / (kPi + 0.5) - 1.0 / kPi;
    auto s = free_data(5);
    s.at(0).alpha = kPi + 0.5;
    const auto K = solve_glm_all(build_F({s, FMode::direct_sum}, g)).kernel;
    const auto pot = potential_from_kernel(K);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.node(i);
        worst = std::max({worst, std::abs(pot.q()[i] - delta / (1.0 + delta * x)), std::abs(pot.p()[i])});
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("transformed free solution has the rank-one closed form") {
    Grid g(400);
    const double delta = 1.0 / (kPi + 0.5) - 1.0 / kPi;
    KernelField K(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) K.at(i, j).a22 = -delta / (1.0 + delta * g.node(i));
    }
    const double lambda = 1.7;
    const auto phi = transform_free_solution(K, lambda);
    for (std::size_t i = 0; i < g.size(); i += 40) {
        const double x = g.node(i);
        const double c = -delta / (1.0 + delta * x);
        CHECK(phi.y1[i] == doctest::Approx(std::sin(lambda * x)).epsilon(1e-12));
        CHECK(std::abs(phi.y2[i] - (-std::cos(lambda * x) - c * std::sin(lambda * x) / lambda)) < 1e-5);
    }
    // It solves the system with p = 0, q = delta/(1 + delta x).
    const auto pot = PotentialMatrix::from_functions(g, [](double) { return 0.0; },
                                                     [=](double x) { return delta / (1.0 + delta * x); });
    CHECK(ode_residual(pot, phi) < 1e-4);
}

TEST_CASE("boundary recovered from the true potential") {
    const auto prob = trig_problem(800);
    const auto s = compute_spectral_data(prob, 10);

    BoundaryOptions pair;
    pair.exact_pair = std::pair{1, 2};
    const auto exact = recover_boundary(s, prob.potential, pair);
    CHECK(exact.params.h1 == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(exact.params.h2 == doctest::Approx(1.0).epsilon(1e-6));

    const auto ls = recover_boundary(s, prob.potential);
    CHECK(ls.params.h1 == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(ls.params.h2 == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(ls.lambdas.size() == 22);
    for (double r : ls.relative_residuals) CHECK(std::abs(r) < 1e-6);
    CHECK(ls.condition >= 1.0);
}

TEST_CASE("boundary fit failures") {
    const auto prob = trig_problem(200);
    const auto s = compute_spectral_data(prob, 3);
    BoundaryOptions same;
    same.exact_pair = std::pair{2, 2};
    CHECK_THROWS_AS(recover_boundary(s, prob.potential, same), SolverError);

    // Integer eigenvalues of the free potential make every phi1(pi) vanish: h2 comes out 0.
    try {
        recover_boundary(free_data(4), PotentialMatrix::zero(Grid(400)));
        FAIL("expected a SolverError");
    } catch (const SolverError& e) {
        CHECK(e.stage() == "recover_boundary");
    }
}

TEST_CASE("reconstruction of the trig potential") {
    const auto prob = trig_problem(400);
    const auto s = compute_spectral_data(prob, 20);
    const auto r = reconstruct(s, Grid(200));
    const Grid g(200);
    double err = 0.0, norm = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.node(i);
        const double p = 0.3 * std::cos(x), q = 0.2 * std::sin(2.0 * x);
        err += std::pow(r.potential.p()[i] - p, 2) + std::pow(r.potential.q()[i] - q, 2);
        norm += p * p + q * q;
    }
    CHECK(std::sqrt(err / norm) < 0.05);
    CHECK(r.boundary_fit.params.h1 == doctest::Approx(0.5).epsilon(0.05));
    CHECK(r.boundary_fit.params.h2 == doctest::Approx(1.0).epsilon(0.05));
    CHECK(r.glm_residual < 1e-10);
    CHECK(r.max_condition < 1e3);
    CHECK(r.condition.size() == 201);
}

TEST_CASE("tail model improves the truncated reconstruction") {
    const auto prob = trig_problem(400);
    const auto s = compute_spectral_data(prob, 20);
    ReconstructionOptions none;
    none.tail = TailModel::none;
    const Grid g(200);
    const auto a = reconstruct(s, g);
    const auto b = reconstruct(s, g, none);
    double ea = 0.0, eb = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double q = 0.2 * std::sin(2.0 * g.node(i));
        ea += std::pow(a.potential.q()[i] - q, 2);
        eb += std::pow(b.potential.q()[i] - q, 2);
    }
    CHECK(ea < eb);
}

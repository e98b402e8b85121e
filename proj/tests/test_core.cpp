#include <doctest.h>

#include "dirac/core.hpp"

#include <cmath>
#include <numeric>
#include <random>

using namespace dirac;

TEST_CASE("grid endpoints and step") {
    Grid g(400);
    CHECK(g.size() == 401);
    CHECK(g.node(0) == 0.0);
    CHECK(g.node(400) == kPi);
    CHECK(g.step() == doctest::Approx(kPi / 400).epsilon(1e-15));
    CHECK_THROWS_AS(Grid(0), std::invalid_argument);
}

TEST_CASE("trapezoid and simpson weights integrate polynomials") {
    Grid g(100);
    const auto tw = trapezoid_weights(g);
    const auto sw = simpson_weights(g);
    CHECK(std::accumulate(tw.begin(), tw.end(), 0.0) == doctest::Approx(kPi).epsilon(1e-14));
    double cubic = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) cubic += sw[j] * std::pow(g.node(j), 3);
    CHECK(cubic == doctest::Approx(std::pow(kPi, 4) / 4).epsilon(1e-13));

    const auto prefix = trapezoid_weights_prefix(g, 10);
    CHECK(std::accumulate(prefix.begin(), prefix.end(), 0.0) == doctest::Approx(g.node(10)).epsilon(1e-14));
    const auto empty = trapezoid_weights_prefix(g, 0);
    CHECK(std::all_of(empty.begin(), empty.end(), [](double w) { return w == 0.0; }));
}

TEST_CASE("matrix helpers") {
    const Matrix2 B = Matrix2::symplectic();
    CHECK(B * B == -1.0 * Matrix2::identity());
    const Matrix2 R = Matrix2::rotation(0.3);
    CHECK((R * R.transposed() - Matrix2::identity()).max_abs() < 1e-15);
    CHECK((Matrix2::rotation(0.3) * Matrix2::rotation(0.4) - Matrix2::rotation(0.7)).max_abs() < 1e-15);
    // R(theta) T is symmetric for the reflection T = diag(-1, 1).
    const Matrix2 RT = R * Matrix2::reflection();
    CHECK(RT.a12 == doctest::Approx(RT.a21));
}

TEST_CASE("boundary parameters require h2 > 0") {
    CHECK_NOTHROW(BoundaryParams(0.5, 1.0));
    CHECK_THROWS_AS(BoundaryParams(0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(BoundaryParams(0.5, -1.0), std::invalid_argument);
}

TEST_CASE("potential rejects mismatched sample counts") {
    Grid g(10);
    CHECK_THROWS_AS(PotentialMatrix(g, std::vector<double>(11), std::vector<double>(10)), std::invalid_argument);
    auto pot = PotentialMatrix::from_functions(g, [](double x) { return x; }, [](double) { return 2.0; });
    CHECK(pot.omega(3).a11 == doctest::Approx(g.node(3)));
    CHECK(pot.omega(3).a22 == doctest::Approx(-g.node(3)));
    CHECK(pot.omega(3).a12 == 2.0);
    CHECK(pot.omega_mid(3).a11 == doctest::Approx(0.5 * (g.node(3) + g.node(4))));
}

SpectralData free_data(std::size_t N) {
    SpectralData s;
    s.truncation = N;
    for (int n = -static_cast<int>(N); n <= static_cast<int>(N); ++n) s.data.push_back({n, double(n), kPi});
    return s;
}

TEST_CASE("spectral data validation") {
    auto s = free_data(3);
    CHECK_NOTHROW(s.validate());
    CHECK(s.at(-3).lambda == -3.0);
    CHECK_THROWS_AS(s.at(4), std::out_of_range);

    auto gap = s;
    gap.data.erase(gap.data.begin() + 2);
    CHECK_THROWS_AS(gap.validate(), std::invalid_argument);

    auto neg = s;
    neg.at(1).alpha = -1.0;
    CHECK_THROWS_AS(neg.validate(), std::invalid_argument);

    auto nan = s;
    nan.at(0).lambda = std::nan("");
    CHECK_THROWS_AS(nan.validate(), std::invalid_argument);

    s.surplus = Eigenpair{-0.4, 4.0};
    const auto all = s.all();
    REQUIRE(all.size() == 8);
    CHECK(all.front().lambda == -0.4);
    const auto t = s.truncated(1);
    CHECK(t.data.size() == 3);
    CHECK(t.surplus.has_value());
    CHECK_THROWS_AS(s.truncated(5), std::invalid_argument);
}

TEST_CASE("kernel field is lower triangular") {
    KernelField K(Grid(4));
    K.at(3, 1) = Matrix2{1, 2, 3, 4};
    CHECK(K.row(3)[1].a22 == 4.0);
    CHECK(K.row(3).size() == 4);
    CHECK_THROWS_AS(K.at(1, 3), std::out_of_range);
}

TEST_CASE("dense solve reports residual and condition") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = 30;
    DenseMatrix A(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) A(r, c) = 0.1 * u(rng);
        A(r, r) += 1.0;
    }
    std::vector<double> x(n);
    for (auto& v : x) v = u(rng);
    std::vector<double> b(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) b[r] += A(r, c) * x[c];
    }
    const auto res = solve_dense(A, b);
    for (std::size_t k = 0; k < n; ++k) CHECK(res.x[k] == doctest::Approx(x[k]).epsilon(1e-12));
    CHECK(res.residual < 1e-13);
    CHECK(res.condition >= 1.0);
    CHECK(res.condition < 10.0);
}

TEST_CASE("dense solve rejects a singular matrix") {
    DenseMatrix A(3);
    A(0, 0) = 1;
    A(0, 1) = 2;
    A(1, 0) = 2;
    A(1, 1) = 4;
    A(2, 2) = 1;
    const std::vector<double> b{1, 2, 3};
    CHECK_THROWS_AS(solve_dense(A, b), SingularMatrixError);
    try {
        solve_dense(A, b);
    } catch (const SingularMatrixError& e) {
        CHECK(e.stage() == "solve_dense");
        CHECK(e.max_pivot() > 0.0);
    }
}

TEST_CASE("dense solve of the identity is exact") {
    DenseMatrix I(5);
    for (std::size_t k = 0; k < 5; ++k) I(k, k) = 1.0;
    const std::vector<double> b{1, -2, 3, -4, 5};
    const auto r = solve_dense(I, b);
    CHECK(r.x == b);
    CHECK(r.condition == doctest::Approx(1.0));
}

#include "dirac/direct.hpp"

#include <algorithm>
#include <cmath>

namespace dirac {

namespace {

// y' = -B (lambda I - Omega) y, written out:
//   y1' = q y1 - (p + lambda) y2
//   y2' = (lambda - p) y1 - q y2
Vec2 rhs(const Matrix2& omega, double lambda, Vec2 y) {
    const double p = omega.a11;
    const double q = omega.a12;
    return {q * y.y1 - (p + lambda) * y.y2, (lambda - p) * y.y1 - q * y.y2};
}

// Variational companion: z = dy/dlambda obeys z' = -B(lambda I - Omega) z - B y.
Vec2 rhs_variational(const Matrix2& omega, double lambda, Vec2 y, Vec2 z) {
    const Vec2 base = rhs(omega, lambda, z);
    return {base.y1 - y.y2, base.y2 + y.y1};
}

void require_finite(const DiracProblem& problem, double lambda) {
    if (!std::isfinite(lambda)) throw std::invalid_argument("spectral parameter must be finite");
    if (!problem.potential.finite()) {
        throw SolverError("integrate", "potential has non-finite samples; integration refused");
    }
}

// Substeps per grid interval so that |lambda| times the substep stays below 0.05;
// plain RK4 over a full interval loses accuracy once |lambda| h is not small.
std::size_t substeps(double lambda, double h) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::abs(lambda * h) / 0.05)));
}

Matrix2 lerp(const Matrix2& a, const Matrix2& b, double theta) { return (1.0 - theta) * a + theta * b; }

// RK4 across [x_from, x_to] (adjacent nodes, either direction), Omega linear in between.
Vec2 rk4_interval(const DiracProblem& problem, double lambda, std::size_t from, std::size_t to, double h, Vec2 y) {
    const Matrix2 om0 = problem.potential.omega(from);
    const Matrix2 om1 = problem.potential.omega(to);
    const std::size_t n = substeps(lambda, h);
    const double dh = h / static_cast<double>(n);
    for (std::size_t s = 0; s < n; ++s) {
        const double t0 = static_cast<double>(s) / static_cast<double>(n);
        const double t1 = static_cast<double>(s + 1) / static_cast<double>(n);
        const Matrix2 a = lerp(om0, om1, t0);
        const Matrix2 m = lerp(om0, om1, 0.5 * (t0 + t1));
        const Matrix2 b = lerp(om0, om1, t1);
        const Vec2 k1 = rhs(a, lambda, y);
        const Vec2 k2 = rhs(m, lambda, y + (0.5 * dh) * k1);
        const Vec2 k3 = rhs(m, lambda, y + (0.5 * dh) * k2);
        const Vec2 k4 = rhs(b, lambda, y + dh * k3);
        y = y + (dh / 6.0) * (k1 + (2.0 * k2) + (2.0 * k3) + k4);
    }
    return y;
}

VectorSolution integrate_from(const DiracProblem& problem, double lambda, Vec2 initial, bool backward) {
    require_finite(problem, lambda);
    const Grid& g = problem.grid();
    const std::size_t m = g.intervals();
    VectorSolution sol(g, lambda);
    if (!backward) {
        sol.set(0, initial);
        Vec2 y = initial;
        for (std::size_t j = 0; j < m; ++j) {
            y = rk4_interval(problem, lambda, j, j + 1, g.step(), y);
            sol.set(j + 1, y);
        }
    } else {
        sol.set(m, initial);
        Vec2 y = initial;
        for (std::size_t j = m; j > 0; --j) {
            y = rk4_interval(problem, lambda, j, j - 1, -g.step(), y);
            sol.set(j - 1, y);
        }
    }
    return sol;
}

}  // namespace

DiracProblem::DiracProblem(PotentialMatrix pot, BoundaryParams bc) : potential(std::move(pot)), boundary(bc) {
    if (!(boundary.h2 > 0.0)) throw std::invalid_argument("DiracProblem: h2 must be positive");
}

VectorSolution integrate_phi(const DiracProblem& problem, double lambda) {
    return integrate_from(problem, lambda, {0.0, -1.0}, false);
}

VectorSolution integrate_psi(const DiracProblem& problem, double lambda) {
    const auto& bc = problem.boundary;
    return integrate_from(problem, lambda, {bc.h2, -lambda - bc.h1}, true);
}

PhiWithDerivative integrate_phi_variational(const DiracProblem& problem, double lambda) {
    require_finite(problem, lambda);
    const Grid& g = problem.grid();
    const double h = g.step();
    PhiWithDerivative out{VectorSolution(g, lambda), VectorSolution(g, lambda)};
    Vec2 y{0.0, -1.0};
    Vec2 z{0.0, 0.0};
    out.phi.set(0, y);
    out.dphi.set(0, z);
    const std::size_t n = substeps(lambda, h);
    const double dh = h / static_cast<double>(n);
    for (std::size_t j = 0; j < g.intervals(); ++j) {
        const Matrix2 om0 = problem.potential.omega(j);
        const Matrix2 om1 = problem.potential.omega(j + 1);
        for (std::size_t s = 0; s < n; ++s) {
            const double t0 = static_cast<double>(s) / static_cast<double>(n);
            const double t1 = static_cast<double>(s + 1) / static_cast<double>(n);
            const Matrix2 oa = lerp(om0, om1, t0);
            const Matrix2 om = lerp(om0, om1, 0.5 * (t0 + t1));
            const Matrix2 ob = lerp(om0, om1, t1);

            const Vec2 k1 = rhs(oa, lambda, y);
            const Vec2 l1 = rhs_variational(oa, lambda, y, z);
            const Vec2 y2 = y + (0.5 * dh) * k1;
            const Vec2 z2 = z + (0.5 * dh) * l1;
            const Vec2 k2 = rhs(om, lambda, y2);
            const Vec2 l2 = rhs_variational(om, lambda, y2, z2);
            const Vec2 y3 = y + (0.5 * dh) * k2;
            const Vec2 z3 = z + (0.5 * dh) * l2;
            const Vec2 k3 = rhs(om, lambda, y3);
            const Vec2 l3 = rhs_variational(om, lambda, y3, z3);
            const Vec2 y4 = y + dh * k3;
            const Vec2 z4 = z + dh * l3;
            const Vec2 k4 = rhs(ob, lambda, y4);
            const Vec2 l4 = rhs_variational(ob, lambda, y4, z4);

            y = y + (dh / 6.0) * (k1 + (2.0 * k2) + (2.0 * k3) + k4);
            z = z + (dh / 6.0) * (l1 + (2.0 * l2) + (2.0 * l3) + l4);
        }
        out.phi.set(j + 1, y);
        out.dphi.set(j + 1, z);
    }
    return out;
}

double char_delta(const DiracProblem& problem, double lambda) {
    const auto phi = integrate_phi(problem, lambda);
    const std::size_t m = problem.grid().intervals();
    const auto& bc = problem.boundary;
    return (lambda + bc.h1) * phi.y1[m] + bc.h2 * phi.y2[m];
}

double char_delta_deriv(const DiracProblem& problem, double lambda) {
    const auto sol = integrate_phi_variational(problem, lambda);
    const std::size_t m = problem.grid().intervals();
    const auto& bc = problem.boundary;
    return sol.phi.y1[m] + (lambda + bc.h1) * sol.dphi.y1[m] + bc.h2 * sol.dphi.y2[m];
}

double char_delta_deriv_fd(const DiracProblem& problem, double lambda) {
    const double step = 1e-6 * std::max(1.0, std::abs(lambda));
    return (char_delta(problem, lambda + step) - char_delta(problem, lambda - step)) / (2.0 * step);
}

WronskianReport wronskian_residual(const VectorSolution& phi, const VectorSolution& psi) {
    if (!(phi.grid == psi.grid)) throw std::invalid_argument("wronskian_residual: grid mismatch");
    if (phi.lambda != psi.lambda) throw std::invalid_argument("wronskian_residual: lambda mismatch");
    const std::size_t m = phi.grid.intervals();
    auto w = [&](std::size_t j) { return phi.y2[j] * psi.y1[j] - phi.y1[j] * psi.y2[j]; };
    WronskianReport r;
    r.value_at_pi = w(m);
    for (std::size_t j = 0; j <= m; ++j) r.max_deviation = std::max(r.max_deviation, std::abs(w(j) - r.value_at_pi));
    return r;
}

}  // namespace dirac

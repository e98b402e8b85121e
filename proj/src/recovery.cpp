#include "dirac/recovery.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dirac {

Matrix2 extrapolate_origin(const KernelField& K) {
    if (K.grid().intervals() < 3) throw std::invalid_argument("extrapolate_origin: need at least 3 intervals");
    return 3.0 * K.at(1, 1) - 3.0 * K.at(2, 2) + K.at(3, 3);
}

PotentialMatrix potential_from_kernel(const KernelField& K) {
    const Grid& grid = K.grid();
    const Matrix2 B = Matrix2::symplectic();
    std::vector<double> p(grid.size());
    std::vector<double> q(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Matrix2 kd = i == 0 ? extrapolate_origin(K) : K.at(i, i);
        const Matrix2 omega = kd * B - B * kd;
        const double scale = std::max(1.0, kd.max_abs());
        if (std::abs(omega.a12 - omega.a21) > 1e-12 * scale || std::abs(omega.trace()) > 1e-12 * scale) {
            std::ostringstream os;
            os << "K(x,x)B - BK(x,x) is not symmetric trace-free at node " << i;
            throw SolverError("potential_from_kernel", os.str());
        }
        p[i] = omega.a11;
        q[i] = omega.a12;
    }
    return {grid, std::move(p), std::move(q)};
}

BoundaryFit recover_boundary(const SpectralData& spectral, const PotentialMatrix& potential,
                             const BoundaryOptions& options) {
    spectral.validate();
    // h2 does not enter phi; any positive placeholder gives the same integration.
    const DiracProblem probe(potential, BoundaryParams(0.0, 1.0));
    const std::size_t m = potential.grid().intervals();

    std::vector<double> lambdas;
    if (options.exact_pair) {
        lambdas = {spectral.at(options.exact_pair->first).lambda, spectral.at(options.exact_pair->second).lambda};
    } else {
        if (options.include_surplus && spectral.surplus) lambdas.push_back(spectral.surplus->lambda);
        for (const auto& d : spectral.data) {
            if (options.max_index < 0 || std::abs(d.n) <= options.max_index) lambdas.push_back(d.lambda);
        }
    }

    const auto rows = static_cast<Eigen::Index>(lambdas.size());
    Eigen::MatrixXd A(rows, 2);
    Eigen::VectorXd b(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto phi = integrate_phi(probe, lambdas[static_cast<std::size_t>(r)]);
        A(r, 0) = phi.y1[m];
        A(r, 1) = phi.y2[m];
        b(r) = -lambdas[static_cast<std::size_t>(r)] * phi.y1[m];
    }
    if (rows < 2) throw SolverError("recover_boundary", "need at least two eigenvalues");

    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (!(sv(1) > 1e-12 * std::max(1.0, sv(0)))) {
        throw SolverError("recover_boundary", "least-squares matrix is rank deficient (phi(pi) data vanish)");
    }
    const Eigen::Vector2d h = svd.solve(b);

    BoundaryFit fit;
    fit.condition = sv(0) / sv(1);
    fit.lambdas = lambdas;
    if (!(h(1) > 0.0)) {
        std::ostringstream os;
        os << "fitted h2 = " << h(1) << " is not positive; spectral data are inconsistent";
        throw SolverError("recover_boundary", os.str());
    }
    fit.params = BoundaryParams(h(0), h(1));
    for (Eigen::Index r = 0; r < rows; ++r) {
        const double lam = lambdas[static_cast<std::size_t>(r)];
        const double res = (lam + h(0)) * A(r, 0) + h(1) * A(r, 1);
        const double scale = std::abs(lam + h(0)) * std::abs(A(r, 0)) + h(1) * std::abs(A(r, 1));
        fit.residuals.push_back(res);
        fit.relative_residuals.push_back(scale > 0.0 ? res / scale : res);
    }
    return fit;
}

VectorSolution transform_free_solution(const KernelField& K, double lambda) {
    const Grid& grid = K.grid();
    VectorSolution phi(grid, lambda);
    std::vector<Vec2> free(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        free[j] = {std::sin(lambda * grid.node(j)), -std::cos(lambda * grid.node(j))};
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto w = trapezoid_weights_prefix(grid, i);
        Vec2 v = free[i];
        const auto row = K.row(i);
        for (std::size_t j = 0; j <= i; ++j) v += w[j] * (row[j] * free[j]);
        phi.set(i, v);
    }
    return phi;
}

double ode_residual(const PotentialMatrix& potential, const VectorSolution& phi) {
    if (!(potential.grid() == phi.grid)) throw std::invalid_argument("ode_residual: grid mismatch");
    const Grid& grid = phi.grid;
    const double h = grid.step();
    const Matrix2 B = Matrix2::symplectic();
    double worst = 0.0;
    for (std::size_t j = 1; j + 1 < grid.size(); ++j) {
        const Vec2 d = (1.0 / (2.0 * h)) * (phi.at(j + 1) - phi.at(j - 1));
        const Vec2 r = B * d + potential.omega(j) * phi.at(j) - phi.lambda * phi.at(j);
        worst = std::max({worst, std::abs(r.y1), std::abs(r.y2)});
    }
    return worst;
}

ReconstructionResult reconstruct(const SpectralData& spectral, const Grid& grid, const ReconstructionOptions& options) {
    spectral.validate();
    const SquareKernel F = build_F({spectral, options.mode, options.tail}, grid);
    GlmSolution glm = solve_glm_all(F, options.glm);
    PotentialMatrix potential = potential_from_kernel(glm.kernel);
    BoundaryFit fit = recover_boundary(spectral, potential, options.boundary);

    ReconstructionResult out{std::move(potential), std::move(fit), glm.condition, 1.0, glm_residual(F, glm.kernel),
                             extrapolate_origin(glm.kernel), "", std::move(glm.kernel)};
    out.max_condition = *std::max_element(out.condition.begin(), out.condition.end());
    out.extrapolation_note = "K(0,0) extrapolated quadratically from diagonal nodes x1, x2, x3";
    return out;
}

}  // namespace dirac

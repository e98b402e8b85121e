#pragma once

#include "dirac/core.hpp"
#include "dirac/direct.hpp"
#include "dirac/glm.hpp"

#include <string>
#include <vector>

namespace dirac {

/// Omega(x) = K(x,x) B - B K(x,x), i.e. p = -(K12 + K21), q = K11 - K22 on the
/// diagonal. K(0,0) comes from quadratic extrapolation of the diagonal at
/// x_1, x_2, x_3 (row 0 of the main equation is empty). Needs M >= 3.
/// Throws SolverError if the expansion is not of the form [[p, q], [q, -p]].
PotentialMatrix potential_from_kernel(const KernelField& K);

/// K(0,0) extrapolated from the first three diagonal entries.
Matrix2 extrapolate_origin(const KernelField& K);

struct BoundaryFit {
    BoundaryParams params;
    std::vector<double> residuals;  ///< (lambda + h1) phi1(pi) + h2 phi2(pi), one per eigenvalue used
    /// residual / (|lambda + h1| |phi1(pi)| + h2 |phi2(pi)|)
    std::vector<double> relative_residuals;
    std::vector<double> lambdas;    ///< the eigenvalues in the same order
    double condition = 1.0;         ///< condition number of the least-squares matrix
};

struct BoundaryOptions {
    /// Restrict to |n| <= max_index; negative means all stored indices.
    int max_index = -1;
    bool include_surplus = true;
    /// When set, solve exactly from these two indices instead of least squares.
    std::optional<std::pair<int, int>> exact_pair;
};

/// Fits (h1, h2) to h1 phi1(pi, lambda_n) + h2 phi2(pi, lambda_n) = -lambda_n phi1(pi, lambda_n)
/// with phi integrated through the given potential. Throws SolverError when the
/// system is rank deficient or the fitted h2 is not positive.
BoundaryFit recover_boundary(const SpectralData& spectral, const PotentialMatrix& potential,
                             const BoundaryOptions& options = {});

/// phi(x, lambda) = phi0(x, lambda) + int_0^x K(x,t) phi0(t, lambda) dt by trapezoid quadrature.
VectorSolution transform_free_solution(const KernelField& K, double lambda);

/// Max over interior nodes of |B phi' + Omega phi - lambda phi| with centred differences.
double ode_residual(const PotentialMatrix& potential, const VectorSolution& phi);

struct ReconstructionOptions {
    FMode mode = FMode::direct_sum;
    TailModel tail = TailModel::asymptotic;
    GlmOptions glm;
    BoundaryOptions boundary;
};

struct ReconstructionResult {
    PotentialMatrix potential;
    BoundaryFit boundary_fit;
    std::vector<double> condition;  ///< per GLM row
    double max_condition = 1.0;
    double glm_residual = 0.0;
    Matrix2 origin_kernel;          ///< extrapolated K(0,0)
    std::string extrapolation_note;
    KernelField kernel;             ///< row 0 left zero
};

/// Spectral data -> F -> K -> Omega -> (h1, h2).
ReconstructionResult reconstruct(const SpectralData& spectral, const Grid& grid,
                                 const ReconstructionOptions& options = {});

}  // namespace dirac

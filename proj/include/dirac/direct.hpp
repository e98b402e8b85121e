#pragma once

#include "dirac/core.hpp"

namespace dirac {

/// B y' + Omega(x) y = lambda y on [0, pi] with y1(0) = 0 and
/// (lambda + h1) y1(pi) + h2 y2(pi) = 0.
struct DiracProblem {
    PotentialMatrix potential;
    BoundaryParams boundary;

    DiracProblem(PotentialMatrix pot, BoundaryParams bc);
    const Grid& grid() const noexcept { return potential.grid(); }
};

/// phi(x, lambda) with phi(0) = (0, -1), integrated forward by RK4 on the problem
/// grid, each interval split so that |lambda| times the substep is below 0.05.
/// Omega between nodes is linearly interpolated.
VectorSolution integrate_phi(const DiracProblem& problem, double lambda);

/// psi(x, lambda) with psi(pi) = (h2, -lambda - h1), integrated backward from pi.
VectorSolution integrate_psi(const DiracProblem& problem, double lambda);

/// phi and its lambda-derivative, integrated jointly (variational system).
struct PhiWithDerivative {
    VectorSolution phi;
    VectorSolution dphi;
};
PhiWithDerivative integrate_phi_variational(const DiracProblem& problem, double lambda);

/// Delta(lambda) = (lambda + h1) phi1(pi) + h2 phi2(pi).
double char_delta(const DiracProblem& problem, double lambda);

/// dDelta/dlambda from the variational system.
double char_delta_deriv(const DiracProblem& problem, double lambda);

/// Central-difference dDelta/dlambda with step 1e-6 * max(1, |lambda|); cross-check only.
double char_delta_deriv_fd(const DiracProblem& problem, double lambda);

struct WronskianReport {
    double max_deviation = 0.0;  ///< max_x |W(x) - W(pi)|
    double value_at_pi = 0.0;    ///< W(pi), equal to Delta(lambda) when psi carries the boundary data
};

/// W(x) = phi2 psi1 - phi1 psi2 at every node. Throws on grid or lambda mismatch.
WronskianReport wronskian_residual(const VectorSolution& phi, const VectorSolution& psi);

}  // namespace dirac

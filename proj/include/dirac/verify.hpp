#pragma once

#include "dirac/core.hpp"
#include "dirac/direct.hpp"
#include "dirac/recovery.hpp"
#include "dirac/spectrum.hpp"

#include <vector>

namespace dirac {

/// Pairing used for expansion coefficients a_n = <f, phi_n> / alpha_n.
///  l2:      int_0^pi phi(t, lambda_n)^T f(t) dt
///  h_space: l2 pairing plus f1(pi) phi1(pi, lambda_n) / h2 (members of the operator domain)
enum class Pairing { l2, h_space };

struct Eigenfunction {
    double lambda = 0.0;
    double alpha = 0.0;
    VectorSolution phi;
};

/// phi(., lambda) for every eigenpair of `spectral` (surplus first).
std::vector<Eigenfunction> eigenfunctions(const DiracProblem& problem, const SpectralData& spectral);

/// a_n for each eigenfunction, in the same order.
std::vector<double> expansion_coefficients(const DiracProblem& problem, const std::vector<Eigenfunction>& basis,
                                           const GridVector& f, Pairing pairing = Pairing::l2);

struct ParsevalReport {
    double norm_squared = 0.0;  ///< ||f||^2 in the chosen pairing
    double series = 0.0;        ///< sum alpha_n a_n^2
    double defect = 0.0;        ///< |norm - series| / norm
    std::vector<double> coefficients;
};

/// Throws std::invalid_argument for f == 0.
ParsevalReport parseval_check(const DiracProblem& problem, const SpectralData& spectral, const GridVector& f,
                              Pairing pairing = Pairing::l2);

struct ExpansionReport {
    double max_error = 0.0;  ///< max over nodes and components of |f - f*|
    double max_error_y1 = 0.0;
    double max_error_y2 = 0.0;
    GridVector reconstruction;
};

ExpansionReport expansion_check(const DiracProblem& problem, const SpectralData& spectral, const GridVector& f,
                                Pairing pairing = Pairing::l2);

struct ZeroSumRow {
    std::size_t N = 0;
    double max_abs = 0.0;  ///< max over x in [0, x_limit] of |sum_{|n|<=N} phi(x,lambda_n)/(alpha_n beta_n)|
};

struct ZeroSumOptions {
    std::vector<std::size_t> ladder{10, 20, 40, 80};
    /// Right end of the x-range examined, as a fraction of pi. The series is the
    /// expansion of the pure boundary element (0, 0, 1): it tends to 0 in L2, but
    /// the first component at x = pi tends to 1, so x = pi itself is excluded.
    double x_limit_fraction = 0.9;
    bool include_surplus = true;
};

/// Partial sums of sum_n phi(x, lambda_n) / (alpha_n beta_n). The spectral data must
/// reach the largest ladder entry. Throws SolverError if a beta_n vanishes.
std::vector<ZeroSumRow> zero_sum_check(const DiracProblem& problem, const SpectralData& spectral,
                                       const ZeroSumOptions& options = {});

struct HadamardRow {
    double lambda = 0.0;
    double product = 0.0;
    double shooting = 0.0;
    double relative_error = 0.0;
};

std::vector<HadamardRow> hadamard_comparison(const DiracProblem& problem, const SpectralData& spectral,
                                             const std::vector<double>& points, const HadamardOptions& options = {});

struct RoundtripOptions {
    LocateOptions locate;
    ReconstructionOptions reconstruction;
    /// Multiplies alpha_0 before inversion (perturbation studies); 1 leaves data untouched.
    double alpha0_factor = 1.0;
};

struct RoundtripReport {
    SpectralData spectral;
    double rel_l2_p = 0.0;
    double rel_l2_q = 0.0;
    double rel_l2 = 0.0;  ///< joint relative L2 error of (p, q); absolute when the generator is zero
    double h1_error = 0.0;
    double h2_error = 0.0;
    BoundaryParams recovered;
    double max_boundary_residual = 0.0;           ///< max |residual| of the boundary fit
    double max_relative_boundary_residual = 0.0;  ///< max |relative residual|
    double max_condition = 1.0;
    double glm_residual = 0.0;
    PotentialMatrix potential;  ///< reconstructed
};

/// Direct problem -> spectral data -> GLM -> potential and boundary, compared with the generator.
/// Stage failures propagate as SolverError carrying the stage name.
RoundtripReport roundtrip(const PotentialMatrix& potential, const BoundaryParams& boundary, std::size_t N,
                          const RoundtripOptions& options = {});

/// Relative L2 distance sqrt(int (a - b)^2) / sqrt(int b^2) (absolute if b == 0).
double relative_l2(std::span<const double> a, std::span<const double> b, const Grid& grid);

}  // namespace dirac

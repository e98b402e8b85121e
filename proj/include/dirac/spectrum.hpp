#pragma once

#include "dirac/core.hpp"
#include "dirac/direct.hpp"

#include <vector>

namespace dirac {

struct LocateOptions {
    double window_half_width = 0.5;
    std::size_t samples_per_window = 64;
    /// Windows with |n| <= guard are merged into one sweep and labelled by sort order.
    int low_index_guard = 2;
    /// Refined roots satisfy |Delta| <= residual_tol * max(1, |lambda|).
    double residual_tol = 1e-12;
    double bisection_width = 1e-8;
};

/// Eigenvalues lambda_n for n = -N..N plus the surplus eigenvalue, alpha left at 0.
///
/// Delta is sampled on [-N - w, N + w] and every sign change is refined by
/// bisection followed by a safeguarded secant polish. Each root is assigned
/// to the window (n - 1/2, n + 1/2] it lies in; the problem has one root more
/// than there are indices, so exactly one window holds two roots and the one
/// farther from its window centre becomes `surplus`. Windows with |n| at most
/// low_index_guard are labelled jointly by sort order instead. When no window
/// in the index range has the extra root, windows beyond N are searched outward.
///
/// Throws SolverError when the root count or window occupancy does not match.
SpectralData locate_eigenvalues(const DiracProblem& problem, std::size_t N, const LocateOptions& options = {});

/// alpha = int_0^pi (phi1^2 + phi2^2) dx + phi1(pi)^2 / h2 (trapezoid).
double normalizing_number(const DiracProblem& problem, double lambda_n);

struct BetaResult {
    double beta = 0.0;        ///< Delta'(lambda_n) / alpha_n
    double beta_ratio = 0.0;  ///< psi2(0, lambda_n) / phi2(0, lambda_n)
    double discrepancy = 0.0; ///< |beta - beta_ratio|
    double delta_dot = 0.0;
};

/// beta_n from Delta'(lambda_n) = beta_n alpha_n, cross-checked against psi = beta phi at x = 0.
/// Throws SolverError when |Delta'(lambda_n)| is below `simple_tol` (multiple eigenvalue).
BetaResult beta_coefficient(const DiracProblem& problem, double lambda_n, double alpha_n,
                            double simple_tol = 1e-8);

/// Locates eigenvalues and fills in every alpha.
SpectralData compute_spectral_data(const DiracProblem& problem, std::size_t N, const LocateOptions& options = {});

struct EigenReport {
    SpectralData spectral;
    std::vector<BetaResult> beta;  ///< one per index n = -N..N
    std::vector<double> epsilon;   ///< lambda_n - n
    std::vector<double> tau;       ///< alpha_n - pi
    std::optional<BetaResult> surplus_beta;
};

EigenReport eigen_report(const DiracProblem& problem, std::size_t N, const LocateOptions& options = {});

struct HadamardOptions {
    std::size_t tail_cutoff = 10000;
};

/// Delta reconstructed from eigenvalues alone through the product over its zeros,
///   Delta(lambda) = pi (lambda - mu_a)(lambda - mu_b) prod_{n>=1} (lambda_n - lambda)(lambda - lambda_{-n}) / n^2,
/// where mu_a, mu_b are lambda_0 and the surplus eigenvalue (-lambda_0 when the
/// data carry no surplus). For a symmetric
/// spectrum this is -pi (lambda_0^2 - lambda^2) prod (lambda_n^2 - lambda^2)/n^2.
/// Indices N+1..tail_cutoff use the free values lambda_{+-n} = +-n.
/// Returns exactly 0 when lambda equals one of the eigenvalues.
double hadamard_delta(const SpectralData& spectral, double lambda, const HadamardOptions& options = {});

struct AsymptoticsRow {
    int n = 0;  ///< the table row for index k aggregates n = -k and n = k
    double epsilon_neg = 0.0;
    double epsilon_pos = 0.0;
    double tau_neg = 0.0;
    double tau_pos = 0.0;
    double epsilon_sq_sum = 0.0;  ///< sum over |m| <= n of epsilon_m^2
    double tau_sq_sum = 0.0;
};

struct AsymptoticsReport {
    std::vector<AsymptoticsRow> rows;  ///< k = 0..N
    double epsilon_plateau = 1.0;      ///< S_eps(N) / S_eps(N/2); 1 when S_eps(N/2) == 0
    double tau_plateau = 1.0;
};

AsymptoticsReport asymptotics_report(const SpectralData& spectral);

}  // namespace dirac

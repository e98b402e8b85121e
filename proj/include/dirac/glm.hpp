#pragma once

#include "dirac/core.hpp"

#include <vector>

namespace dirac {

enum class FMode { direct_sum, a_form };

FMode parse_fmode(const std::string& name);
std::string to_string(FMode mode);

/// none: the series stops at the data's N.
/// asymptotic: terms |n| > N are added in closed form from the leading
/// behaviour lambda_n - n ~ d/n, alpha_n - pi ~ c/n fitted on the top half of the data.
enum class TailModel { none, asymptotic };

TailModel parse_tail(const std::string& name);
std::string to_string(TailModel tail);

/// First-order contribution of the indices |n| > N to a(s):
///   S_N(s) [-(2 d s / pi) I - (2 c / pi^2) J],  S_N(s) = sum_{n>N} sin(n s)/n,  J = [[0,-1],[1,0]].
/// S_N is evaluated in closed form; at s = 2pi the limit from below is used
/// (x + t never exceeds 2pi), at s = 0 the symmetric value 0.
struct AsymptoticTail {
    std::size_t from = 0;  ///< N; the tail covers |n| > N
    double d = 0.0;
    double c = 0.0;

    /// Least-squares fit of g_n = d + e/n^2 over n in [N/2, N], g_n the odd part of n eps_n
    /// (and likewise for tau_n). Returns a zero tail when N < 8.
    static AsymptoticTail fit(const SpectralData& spectral);
    Matrix2 operator()(double s) const;
    bool zero() const { return d == 0.0 && c == 0.0; }
};

/// Input of the F-kernel assembly.
struct FKernelSpec {
    SpectralData spectral;
    FMode mode = FMode::direct_sum;
    TailModel tail = TailModel::none;
};

/// F(x,t) = sum_k (1/alpha_k) u(x,lambda_k) u(t,lambda_k)^T - sum_{|n|<=N} (1/pi) u(x,n) u(t,n)^T
/// with u(x,lambda) = (sin lambda x, -cos lambda x). The perturbed sum runs
/// over every supplied eigenpair (including a surplus one).
///
/// In a_form mode F(x_i,t_j) = 1/2 [a((i-j)h) + a((i+j)h) T]; both arguments
/// fall on multiples of h, so a is tabulated there and no interpolation is involved.
SquareKernel build_F(const FKernelSpec& spec, const Grid& grid);

/// a(s) = sum_k (1/alpha_k) R(lambda_k s) - sum_{|n|<=N} (1/pi) R(n s), R the rotation matrix.
Matrix2 build_a(const SpectralData& spectral, double s);

/// a(.) tabulated at 4M+1 equispaced points of [-2pi, 2pi]; off-node queries interpolate linearly.
class ACache {
public:
    ACache(const SpectralData& spectral, const Grid& grid, TailModel tail = TailModel::none);

    /// Exact tabulated value at s = k h, k in [-2M, 2M].
    const Matrix2& at_node(long k) const;
    Matrix2 operator()(double s) const;

private:
    std::size_t intervals_;
    double step_;
    std::vector<Matrix2> table_;
};

struct GlmRow {
    std::vector<Matrix2> blocks;  ///< K(x_i, t_j), j = 0..i
    double condition = 1.0;
};

/// Nystrom solve of F(x_i,t) + K(x_i,t) + int_0^{x_i} K(x_i,s) F(s,t) ds = 0 on t in {x_0..x_i}.
/// Both rows of the 2x2 unknown share the system matrix, factored once.
/// Requires i >= 1. Throws SolverError naming the row if the discrete system is singular.
GlmRow solve_glm_row(const SquareKernel& F, std::size_t i);

struct GlmSolution {
    KernelField kernel;
    std::vector<double> condition;  ///< per row; row 0 is 1 (empty integral)
};

struct GlmOptions {
    /// 0 uses std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Solves every row i = 1..M. Row 0 is left zero here; the recovery step
/// extrapolates K(0,0). Results do not depend on the thread count.
GlmSolution solve_glm_all(const SquareKernel& F, const GlmOptions& options = {});

/// max over node pairs t_j < x_i of |F + K + sum_s w_s K(x_i, s) F(s, t_j)| (entrywise).
double glm_residual(const SquareKernel& F, const KernelField& K);

/// Kernel of the inverse transformation, phi0 = phi + int_0^x H(x,t) phi(t) dt:
/// H(x,t) = [F(t,x) + int_0^t K(t,s) F(s,x) ds]^T on t <= x (zero above the diagonal).
SquareKernel build_H(const SquareKernel& F, const KernelField& K);

/// max_x |phi(x) + int_0^x H(x,t) phi(t) dt - phi0(x, lambda)| for a sampled solution phi.
double inverse_representation_residual(const SquareKernel& H, const VectorSolution& phi);

}  // namespace dirac

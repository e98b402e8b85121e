#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dirac {

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Raised when a numerical stage cannot produce a trustworthy result.
/// `stage` names the pipeline step ("locate_eigenvalues", "glm_row", ...).
class SolverError : public std::runtime_error {
public:
    SolverError(std::string stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

/// Dense solve failure; carries the pivot diagnostics of the LU factorization.
class SingularMatrixError : public SolverError {
public:
    SingularMatrixError(const std::string& what, double min_pivot, double max_pivot)
        : SolverError("solve_dense", what), min_pivot_(min_pivot), max_pivot_(max_pivot) {}

    double min_pivot() const noexcept { return min_pivot_; }
    double max_pivot() const noexcept { return max_pivot_; }

private:
    double min_pivot_;
    double max_pivot_;
};

// ---------------------------------------------------------------------------
// Small fixed-size algebra
// ---------------------------------------------------------------------------

struct Vec2 {
    double y1 = 0.0;
    double y2 = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.y1 + b.y1, a.y2 + b.y2}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.y1 - b.y1, a.y2 - b.y2}; }
    friend Vec2 operator*(double s, Vec2 a) { return {s * a.y1, s * a.y2}; }
    Vec2& operator+=(Vec2 b) {
        y1 += b.y1;
        y2 += b.y2;
        return *this;
    }
};

/// Row-major 2x2 real matrix. Value type; copied freely.
struct Matrix2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a21 = 0.0;
    double a22 = 0.0;

    static constexpr Matrix2 zero() { return {}; }
    static constexpr Matrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    /// B = [[0, 1], [-1, 0]]
    static constexpr Matrix2 symplectic() { return {0.0, 1.0, -1.0, 0.0}; }
    /// T = diag(-1, 1)
    static constexpr Matrix2 reflection() { return {-1.0, 0.0, 0.0, 1.0}; }
    /// [[cos t, -sin t], [sin t, cos t]]
    static Matrix2 rotation(double theta);

    Matrix2 transposed() const { return {a11, a21, a12, a22}; }
    double trace() const { return a11 + a22; }
    /// max |entry|
    double max_abs() const;
    bool finite() const;

    Matrix2& operator+=(const Matrix2& b) {
        a11 += b.a11;
        a12 += b.a12;
        a21 += b.a21;
        a22 += b.a22;
        return *this;
    }
    Matrix2& operator-=(const Matrix2& b) {
        a11 -= b.a11;
        a12 -= b.a12;
        a21 -= b.a21;
        a22 -= b.a22;
        return *this;
    }
    Matrix2& operator*=(double s) {
        a11 *= s;
        a12 *= s;
        a21 *= s;
        a22 *= s;
        return *this;
    }

    friend Matrix2 operator+(Matrix2 a, const Matrix2& b) { return a += b; }
    friend Matrix2 operator-(Matrix2 a, const Matrix2& b) { return a -= b; }
    friend Matrix2 operator*(double s, Matrix2 a) { return a *= s; }
    friend Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
        return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
                a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
    }
    friend Vec2 operator*(const Matrix2& a, Vec2 v) {
        return {a.a11 * v.y1 + a.a12 * v.y2, a.a21 * v.y1 + a.a22 * v.y2};
    }
    friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

// ---------------------------------------------------------------------------
// Grid and grid functions
// ---------------------------------------------------------------------------

/// Uniform partition x_j = j*pi/M, j = 0..M, of [0, pi].
class Grid {
public:
    explicit Grid(std::size_t intervals);

    std::size_t intervals() const noexcept { return intervals_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    double step() const noexcept { return step_; }
    double node(std::size_t j) const { return nodes_.at(j); }
    std::span<const double> nodes() const noexcept { return nodes_; }

    friend bool operator==(const Grid& a, const Grid& b) { return a.intervals_ == b.intervals_; }

private:
    std::size_t intervals_;
    double step_;
    std::vector<double> nodes_;
};

/// Composite trapezoid weights on the whole grid: h/2 at the ends, h inside.
std::vector<double> trapezoid_weights(const Grid& grid);

/// Trapezoid weights for the sub-interval [x_0, x_i] (i+1 weights; all zero when i == 0).
std::vector<double> trapezoid_weights_prefix(const Grid& grid, std::size_t i);

/// Composite Simpson weights; requires an even number of intervals.
std::vector<double> simpson_weights(const Grid& grid);

/// Pair of real grid functions (y1, y2).
struct GridVector {
    Grid grid;
    std::vector<double> y1;
    std::vector<double> y2;

    explicit GridVector(Grid g) : grid(std::move(g)), y1(grid.size()), y2(grid.size()) {}
    static GridVector from_functions(const Grid& grid, const std::function<double(double)>& f1,
                                     const std::function<double(double)>& f2);

    Vec2 at(std::size_t j) const { return {y1[j], y2[j]}; }
    void set(std::size_t j, Vec2 v) {
        y1[j] = v.y1;
        y2[j] = v.y2;
    }
    bool finite() const;
    /// Trapezoid L2 norm squared: int (y1^2 + y2^2) dx.
    double norm_squared() const;
};

/// Solution y(x, lambda) of the Dirac system sampled on a grid.
struct VectorSolution : GridVector {
    double lambda = 0.0;

    VectorSolution(Grid g, double lam) : GridVector(std::move(g)), lambda(lam) {}
};

// ---------------------------------------------------------------------------
// Problem data
// ---------------------------------------------------------------------------

/// Potential Omega(x) = [[p, q], [q, -p]] sampled on a grid.
class PotentialMatrix {
public:
    PotentialMatrix(Grid grid, std::vector<double> p, std::vector<double> q);

    static PotentialMatrix zero(const Grid& grid);
    static PotentialMatrix from_functions(const Grid& grid, const std::function<double(double)>& p,
                                          const std::function<double(double)>& q);

    const Grid& grid() const noexcept { return grid_; }
    std::span<const double> p() const noexcept { return p_; }
    std::span<const double> q() const noexcept { return q_; }

    Matrix2 omega(std::size_t j) const { return {p_[j], q_[j], q_[j], -p_[j]}; }
    /// Omega at the midpoint of [x_j, x_{j+1}] (linear interpolation).
    Matrix2 omega_mid(std::size_t j) const;
    bool finite() const;

private:
    Grid grid_;
    std::vector<double> p_;
    std::vector<double> q_;
};

/// Coefficients of (lambda + h1) y1(pi) + h2 y2(pi) = 0. Requires h2 > 0.
struct BoundaryParams {
    double h1 = 0.0;
    double h2 = 1.0;

    BoundaryParams() = default;
    BoundaryParams(double h1_, double h2_);
};

// ---------------------------------------------------------------------------
// Spectral data
// ---------------------------------------------------------------------------

struct SpectralDatum {
    int n = 0;
    double lambda = 0.0;
    double alpha = 0.0;
};

/// Eigenvalue / normalizing number pair without an index.
struct Eigenpair {
    double lambda = 0.0;
    double alpha = 0.0;
};

/// Indexed spectral data {(n, lambda_n, alpha_n)}, n = -N..N.
///
/// The boundary condition at pi depends on lambda, so the problem has one more
/// eigenvalue than the unperturbed index set carries (the double zero of
/// lambda*sin(lambda*pi) at 0 splits into two). That eigenvalue is stored in
/// `surplus`. Sums that need completeness (GLM kernel, expansions) run over
/// `all()`; index-based diagnostics only see `data`.
struct SpectralData {
    std::size_t truncation = 0;
    std::vector<SpectralDatum> data;
    std::optional<Eigenpair> surplus;

    const SpectralDatum& at(int n) const;
    SpectralDatum& at(int n);
    /// Every eigenpair, ordered by index with the surplus first.
    std::vector<Eigenpair> all() const;
    /// Restricts to indices |n| <= N (the surplus is kept).
    SpectralData truncated(std::size_t N) const;

    /// Throws std::invalid_argument unless indices are exactly -N..N in order,
    /// every value is finite and every alpha is positive.
    void validate() const;
};

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

/// Matrix-valued K(x_i, t_j) for j <= i (lower triangle including the diagonal).
class KernelField {
public:
    explicit KernelField(Grid grid);

    const Grid& grid() const noexcept { return grid_; }
    const Matrix2& at(std::size_t i, std::size_t j) const { return values_[index(i, j)]; }
    Matrix2& at(std::size_t i, std::size_t j) { return values_[index(i, j)]; }
    std::span<Matrix2> row(std::size_t i);
    std::span<const Matrix2> row(std::size_t i) const;

private:
    std::size_t index(std::size_t i, std::size_t j) const;

    Grid grid_;
    std::vector<Matrix2> values_;
};

/// Matrix-valued kernel on the full square of grid nodes.
class SquareKernel {
public:
    explicit SquareKernel(Grid grid);

    const Grid& grid() const noexcept { return grid_; }
    const Matrix2& at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
    Matrix2& at(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }
    bool finite() const;

private:
    Grid grid_;
    std::size_t n_;
    std::vector<Matrix2> values_;
};

/// Max-entry distance between two kernels on the same grid.
double max_difference(const SquareKernel& a, const SquareKernel& b);

// ---------------------------------------------------------------------------
// Dense linear algebra
// ---------------------------------------------------------------------------

/// Row-major dense square matrix.
struct DenseMatrix {
    std::size_t n = 0;
    std::vector<double> values;

    explicit DenseMatrix(std::size_t size) : n(size), values(size * size, 0.0) {}
    double& operator()(std::size_t r, std::size_t c) { return values[r * n + c]; }
    double operator()(std::size_t r, std::size_t c) const { return values[r * n + c]; }
};

struct DenseSolveResult {
    std::vector<double> x;
    double residual = 0.0;   ///< ||A x - b||_inf
    double condition = 0.0;  ///< 1-norm condition estimate
    double min_pivot = 0.0;
    double max_pivot = 0.0;
};

/// LU factorization with partial pivoting, reusable across right-hand sides.
/// Throws SingularMatrixError when a pivot vanishes to working precision.
class DenseLu {
public:
    explicit DenseLu(const DenseMatrix& a);
    ~DenseLu();
    DenseLu(DenseLu&&) noexcept;
    DenseLu& operator=(DenseLu&&) noexcept;

    std::vector<double> solve(std::span<const double> b) const;
    double condition() const noexcept { return condition_; }
    double min_pivot() const noexcept { return min_pivot_; }
    double max_pivot() const noexcept { return max_pivot_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    double condition_ = 0.0;
    double min_pivot_ = 0.0;
    double max_pivot_ = 0.0;
};

DenseSolveResult solve_dense(const DenseMatrix& a, std::span<const double> b);

}  // namespace dirac

#include "dirac/core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dirac {

Matrix2 Matrix2::rotation(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return {c, -s, s, c};
}

double Matrix2::max_abs() const {
    return std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
}

bool Matrix2::finite() const {
    return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) && std::isfinite(a22);
}

// ---------------------------------------------------------------------------

Grid::Grid(std::size_t intervals) : intervals_(intervals) {
    if (intervals == 0) throw std::invalid_argument("Grid: need at least one interval");
    step_ = kPi / static_cast<double>(intervals);
    nodes_.resize(intervals + 1);
    for (std::size_t j = 0; j <= intervals; ++j) {
        nodes_[j] = static_cast<double>(j) * kPi / static_cast<double>(intervals);
    }
    nodes_.back() = kPi;
}

std::vector<double> trapezoid_weights(const Grid& grid) {
    return trapezoid_weights_prefix(grid, grid.intervals());
}

std::vector<double> trapezoid_weights_prefix(const Grid& grid, std::size_t i) {
    if (i > grid.intervals()) throw std::out_of_range("trapezoid_weights_prefix: index past grid end");
    std::vector<double> w(i + 1, grid.step());
    if (i == 0) {
        w[0] = 0.0;
        return w;
    }
    w.front() = 0.5 * grid.step();
    w.back() = 0.5 * grid.step();
    return w;
}

std::vector<double> simpson_weights(const Grid& grid) {
    const std::size_t m = grid.intervals();
    if (m % 2 != 0) throw std::invalid_argument("simpson_weights: interval count must be even");
    const double h = grid.step();
    std::vector<double> w(m + 1);
    for (std::size_t j = 0; j <= m; ++j) {
        w[j] = (j == 0 || j == m) ? h / 3.0 : (j % 2 == 1 ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
    }
    return w;
}

GridVector GridVector::from_functions(const Grid& grid, const std::function<double(double)>& f1,
                                      const std::function<double(double)>& f2) {
    GridVector v(grid);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        v.y1[j] = f1(grid.node(j));
        v.y2[j] = f2(grid.node(j));
    }
    return v;
}

bool GridVector::finite() const {
    auto ok = [](double v) { return std::isfinite(v); };
    return std::all_of(y1.begin(), y1.end(), ok) && std::all_of(y2.begin(), y2.end(), ok);
}

double GridVector::norm_squared() const {
    const auto w = trapezoid_weights(grid);
    double s = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * (y1[j] * y1[j] + y2[j] * y2[j]);
    return s;
}

// ---------------------------------------------------------------------------

PotentialMatrix::PotentialMatrix(Grid grid, std::vector<double> p, std::vector<double> q)
    : grid_(std::move(grid)), p_(std::move(p)), q_(std::move(q)) {
    if (p_.size() != grid_.size() || q_.size() != grid_.size()) {
        throw std::invalid_argument("PotentialMatrix: sample count does not match grid");
    }
}

PotentialMatrix PotentialMatrix::zero(const Grid& grid) {
    return {grid, std::vector<double>(grid.size(), 0.0), std::vector<double>(grid.size(), 0.0)};
}

PotentialMatrix PotentialMatrix::from_functions(const Grid& grid, const std::function<double(double)>& p,
                                                const std::function<double(double)>& q) {
    std::vector<double> ps(grid.size());
    std::vector<double> qs(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
        ps[j] = p(grid.node(j));
        qs[j] = q(grid.node(j));
    }
    return {grid, std::move(ps), std::move(qs)};
}

Matrix2 PotentialMatrix::omega_mid(std::size_t j) const {
    const double p = 0.5 * (p_[j] + p_[j + 1]);
    const double q = 0.5 * (q_[j] + q_[j + 1]);
    return {p, q, q, -p};
}

bool PotentialMatrix::finite() const {
    auto ok = [](double v) { return std::isfinite(v); };
    return std::all_of(p_.begin(), p_.end(), ok) && std::all_of(q_.begin(), q_.end(), ok);
}

BoundaryParams::BoundaryParams(double h1_, double h2_) : h1(h1_), h2(h2_) {
    if (!std::isfinite(h1) || !std::isfinite(h2)) throw std::invalid_argument("BoundaryParams: non-finite value");
    if (!(h2 > 0.0)) throw std::invalid_argument("BoundaryParams: h2 must be positive");
}

// ---------------------------------------------------------------------------

const SpectralDatum& SpectralData::at(int n) const {
    const auto N = static_cast<int>(truncation);
    if (n < -N || n > N || data.size() != 2 * truncation + 1) {
        throw std::out_of_range("SpectralData: index " + std::to_string(n) + " not stored");
    }
    return data[static_cast<std::size_t>(n + N)];
}

SpectralDatum& SpectralData::at(int n) {
    return const_cast<SpectralDatum&>(std::as_const(*this).at(n));
}

std::vector<Eigenpair> SpectralData::all() const {
    std::vector<Eigenpair> out;
    out.reserve(data.size() + 1);
    if (surplus) out.push_back(*surplus);
    for (const auto& d : data) out.push_back({d.lambda, d.alpha});
    return out;
}

SpectralData SpectralData::truncated(std::size_t N) const {
    if (N > truncation) throw std::invalid_argument("SpectralData::truncated: N exceeds stored truncation");
    SpectralData out;
    out.truncation = N;
    out.surplus = surplus;
    const auto n_max = static_cast<int>(N);
    for (const auto& d : data) {
        if (d.n >= -n_max && d.n <= n_max) out.data.push_back(d);
    }
    return out;
}

void SpectralData::validate() const {
    const auto N = static_cast<int>(truncation);
    if (data.size() != 2 * truncation + 1) {
        throw std::invalid_argument("spectral data: expected " + std::to_string(2 * truncation + 1) +
                                    " records for truncation " + std::to_string(truncation) + ", got " +
                                    std::to_string(data.size()));
    }
    for (std::size_t k = 0; k < data.size(); ++k) {
        const auto& d = data[k];
        if (d.n != static_cast<int>(k) - N) {
            throw std::invalid_argument("spectral data: indices must be exactly -N..N in order (record " +
                                        std::to_string(k) + " has n=" + std::to_string(d.n) + ")");
        }
        if (!std::isfinite(d.lambda) || !std::isfinite(d.alpha)) {
            throw std::invalid_argument("spectral data: non-finite value at n=" + std::to_string(d.n));
        }
        if (!(d.alpha > 0.0)) {
            throw std::invalid_argument("spectral data: alpha must be positive at n=" + std::to_string(d.n));
        }
    }
    if (surplus) {
        if (!std::isfinite(surplus->lambda) || !std::isfinite(surplus->alpha)) {
            throw std::invalid_argument("spectral data: non-finite surplus eigenpair");
        }
        if (!(surplus->alpha > 0.0)) throw std::invalid_argument("spectral data: surplus alpha must be positive");
    }
}

// ---------------------------------------------------------------------------

KernelField::KernelField(Grid grid) : grid_(std::move(grid)), values_(grid_.size() * (grid_.size() + 1) / 2) {}

std::size_t KernelField::index(std::size_t i, std::size_t j) const {
    if (i >= grid_.size()) throw std::out_of_range("KernelField: x index past grid end");
    if (j > i) {
        throw std::out_of_range("KernelField: K(x,t) is stored for t <= x only (i=" + std::to_string(i) +
                                ", j=" + std::to_string(j) + ")");
    }
    return i * (i + 1) / 2 + j;
}

std::span<Matrix2> KernelField::row(std::size_t i) { return {values_.data() + index(i, 0), i + 1}; }

std::span<const Matrix2> KernelField::row(std::size_t i) const { return {values_.data() + index(i, 0), i + 1}; }

SquareKernel::SquareKernel(Grid grid) : grid_(std::move(grid)), n_(grid_.size()), values_(n_ * n_) {}

bool SquareKernel::finite() const {
    return std::all_of(values_.begin(), values_.end(), [](const Matrix2& m) { return m.finite(); });
}

double max_difference(const SquareKernel& a, const SquareKernel& b) {
    if (!(a.grid() == b.grid())) throw std::invalid_argument("max_difference: grid mismatch");
    double d = 0.0;
    for (std::size_t i = 0; i < a.grid().size(); ++i) {
        for (std::size_t j = 0; j < a.grid().size(); ++j) d = std::max(d, (a.at(i, j) - b.at(i, j)).max_abs());
    }
    return d;
}

// ---------------------------------------------------------------------------

struct DenseLu::Impl {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
};

DenseLu::DenseLu(const DenseMatrix& a) : impl_(std::make_unique<Impl>()) {
    if (a.n == 0) throw std::invalid_argument("DenseLu: empty matrix");
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> view(
        a.values.data(), static_cast<Eigen::Index>(a.n), static_cast<Eigen::Index>(a.n));
    if (!view.allFinite()) throw SingularMatrixError("matrix has non-finite entries", 0.0, 0.0);
    impl_->lu.compute(view);

    const auto pivots = impl_->lu.matrixLU().diagonal().cwiseAbs();
    min_pivot_ = pivots.minCoeff();
    max_pivot_ = pivots.maxCoeff();
    const double eps = std::numeric_limits<double>::epsilon();
    if (!(min_pivot_ > static_cast<double>(a.n) * eps * max_pivot_)) {
        std::ostringstream msg;
        msg << "singular to working precision (n=" << a.n << ", min |pivot|=" << min_pivot_
            << ", max |pivot|=" << max_pivot_ << ")";
        throw SingularMatrixError(msg.str(), min_pivot_, max_pivot_);
    }
    const double rcond = impl_->lu.rcond();
    if (!(rcond > eps)) {
        std::ostringstream msg;
        msg << "reciprocal condition " << rcond << " below machine precision (min |pivot|=" << min_pivot_
            << ", max |pivot|=" << max_pivot_ << ")";
        throw SingularMatrixError(msg.str(), min_pivot_, max_pivot_);
    }
    condition_ = 1.0 / rcond;
}

DenseLu::~DenseLu() = default;
DenseLu::DenseLu(DenseLu&&) noexcept = default;
DenseLu& DenseLu::operator=(DenseLu&&) noexcept = default;

std::vector<double> DenseLu::solve(std::span<const double> b) const {
    const auto n = impl_->lu.matrixLU().rows();
    if (static_cast<Eigen::Index>(b.size()) != n) throw std::invalid_argument("DenseLu::solve: size mismatch");
    const Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);
    const Eigen::VectorXd x = impl_->lu.solve(rhs);
    return {x.data(), x.data() + n};
}

DenseSolveResult solve_dense(const DenseMatrix& a, std::span<const double> b) {
    if (b.size() != a.n) throw std::invalid_argument("solve_dense: right-hand side size mismatch");
    const DenseLu lu(a);
    DenseSolveResult out;
    out.x = lu.solve(b);
    out.condition = lu.condition();
    out.min_pivot = lu.min_pivot();
    out.max_pivot = lu.max_pivot();
    for (std::size_t r = 0; r < a.n; ++r) {
        double s = -b[r];
        for (std::size_t c = 0; c < a.n; ++c) s += a(r, c) * out.x[c];
        out.residual = std::max(out.residual, std::abs(s));
    }
    return out;
}

}  // namespace dirac

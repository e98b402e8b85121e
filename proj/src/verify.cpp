#include "dirac/verify.hpp"

#include <algorithm>
#include <cmath>

namespace dirac {

std::vector<Eigenfunction> eigenfunctions(const DiracProblem& problem, const SpectralData& spectral) {
    spectral.validate();
    std::vector<Eigenfunction> out;
    for (const auto& e : spectral.all()) out.push_back({e.lambda, e.alpha, integrate_phi(problem, e.lambda)});
    return out;
}

std::vector<double> expansion_coefficients(const DiracProblem& problem, const std::vector<Eigenfunction>& basis,
                                           const GridVector& f, Pairing pairing) {
    if (!(f.grid == problem.grid())) throw std::invalid_argument("expansion_coefficients: grid mismatch");
    const auto w = trapezoid_weights(f.grid);
    const std::size_t m = f.grid.intervals();
    std::vector<double> a;
    a.reserve(basis.size());
    for (const auto& e : basis) {
        double s = 0.0;
        for (std::size_t j = 0; j <= m; ++j) s += w[j] * (e.phi.y1[j] * f.y1[j] + e.phi.y2[j] * f.y2[j]);
        if (pairing == Pairing::h_space) s += f.y1[m] * e.phi.y1[m] / problem.boundary.h2;
        a.push_back(s / e.alpha);
    }
    return a;
}

ParsevalReport parseval_check(const DiracProblem& problem, const SpectralData& spectral, const GridVector& f,
                              Pairing pairing) {
    ParsevalReport r;
    r.norm_squared = f.norm_squared();
    if (pairing == Pairing::h_space) {
        const double end = f.y1[f.grid.intervals()];
        r.norm_squared += end * end / problem.boundary.h2;
    }
    if (!(r.norm_squared > 0.0)) throw std::invalid_argument("parseval_check: f must be nonzero");
    const auto basis = eigenfunctions(problem, spectral);
    r.coefficients = expansion_coefficients(problem, basis, f, pairing);
    for (std::size_t k = 0; k < basis.size(); ++k) r.series += basis[k].alpha * r.coefficients[k] * r.coefficients[k];
    r.defect = std::abs(r.norm_squared - r.series) / r.norm_squared;
    return r;
}

ExpansionReport expansion_check(const DiracProblem& problem, const SpectralData& spectral, const GridVector& f,
                                Pairing pairing) {
    const auto basis = eigenfunctions(problem, spectral);
    const auto a = expansion_coefficients(problem, basis, f, pairing);
    ExpansionReport r{0.0, 0.0, 0.0, GridVector(f.grid)};
    for (std::size_t k = 0; k < basis.size(); ++k) {
        for (std::size_t j = 0; j < f.grid.size(); ++j) {
            r.reconstruction.y1[j] += a[k] * basis[k].phi.y1[j];
            r.reconstruction.y2[j] += a[k] * basis[k].phi.y2[j];
        }
    }
    for (std::size_t j = 0; j < f.grid.size(); ++j) {
        r.max_error_y1 = std::max(r.max_error_y1, std::abs(f.y1[j] - r.reconstruction.y1[j]));
        r.max_error_y2 = std::max(r.max_error_y2, std::abs(f.y2[j] - r.reconstruction.y2[j]));
    }
    r.max_error = std::max(r.max_error_y1, r.max_error_y2);
    return r;
}

std::vector<ZeroSumRow> zero_sum_check(const DiracProblem& problem, const SpectralData& spectral,
                                       const ZeroSumOptions& options) {
    spectral.validate();
    const Grid& grid = problem.grid();
    const double x_limit = options.x_limit_fraction * kPi * (1.0 + 1e-12);

    struct Term {
        int n;
        double weight;  // 1 / (alpha beta) = 1 / Delta'(lambda)
        VectorSolution phi;
    };
    auto make_term = [&](int n, double lambda, double alpha) {
        const auto beta = beta_coefficient(problem, lambda, alpha);
        return Term{n, 1.0 / (alpha * beta.beta), integrate_phi(problem, lambda)};
    };

    std::vector<ZeroSumRow> rows;
    for (std::size_t N : options.ladder) {
        if (N > spectral.truncation) {
            throw std::invalid_argument("zero_sum_check: ladder entry " + std::to_string(N) +
                                        " exceeds spectral truncation");
        }
    }
    std::vector<Term> terms;
    if (options.include_surplus && spectral.surplus) {
        terms.push_back(make_term(0, spectral.surplus->lambda, spectral.surplus->alpha));
    }
    for (const auto& d : spectral.data) {
        const std::size_t absn = static_cast<std::size_t>(std::abs(d.n));
        const std::size_t top = options.ladder.empty() ? 0 : *std::max_element(options.ladder.begin(), options.ladder.end());
        if (absn <= top) terms.push_back(make_term(d.n, d.lambda, d.alpha));
    }

    for (std::size_t N : options.ladder) {
        GridVector sum(grid);
        for (const auto& t : terms) {
            if (static_cast<std::size_t>(std::abs(t.n)) > N) continue;
            for (std::size_t j = 0; j < grid.size(); ++j) {
                sum.y1[j] += t.weight * t.phi.y1[j];
                sum.y2[j] += t.weight * t.phi.y2[j];
            }
        }
        ZeroSumRow row{N, 0.0};
        for (std::size_t j = 0; j < grid.size() && grid.node(j) <= x_limit; ++j) {
            row.max_abs = std::max({row.max_abs, std::abs(sum.y1[j]), std::abs(sum.y2[j])});
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<HadamardRow> hadamard_comparison(const DiracProblem& problem, const SpectralData& spectral,
                                             const std::vector<double>& points, const HadamardOptions& options) {
    std::vector<HadamardRow> rows;
    for (double lambda : points) {
        HadamardRow r;
        r.lambda = lambda;
        r.product = hadamard_delta(spectral, lambda, options);
        r.shooting = char_delta(problem, lambda);
        r.relative_error = std::abs(r.product - r.shooting) / std::max(std::abs(r.shooting), 1e-300);
        rows.push_back(r);
    }
    return rows;
}

double relative_l2(std::span<const double> a, std::span<const double> b, const Grid& grid) {
    const auto w = trapezoid_weights(grid);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        num += w[j] * (a[j] - b[j]) * (a[j] - b[j]);
        den += w[j] * b[j] * b[j];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

RoundtripReport roundtrip(const PotentialMatrix& potential, const BoundaryParams& boundary, std::size_t N,
                          const RoundtripOptions& options) {
    const Grid& grid = potential.grid();
    const DiracProblem problem(potential, boundary);
    SpectralData spectral = compute_spectral_data(problem, N, options.locate);
    if (options.alpha0_factor != 1.0) spectral.at(0).alpha *= options.alpha0_factor;

    auto rec = reconstruct(spectral, grid, options.reconstruction);

    RoundtripReport r{spectral, 0.0, 0.0, 0.0, 0.0, 0.0, rec.boundary_fit.params, 0.0, 0.0, rec.max_condition,
                      rec.glm_residual, rec.potential};
    r.rel_l2_p = relative_l2(rec.potential.p(), potential.p(), grid);
    r.rel_l2_q = relative_l2(rec.potential.q(), potential.q(), grid);

    const auto w = trapezoid_weights(grid);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double dp = rec.potential.p()[j] - potential.p()[j];
        const double dq = rec.potential.q()[j] - potential.q()[j];
        num += w[j] * (dp * dp + dq * dq);
        den += w[j] * (potential.p()[j] * potential.p()[j] + potential.q()[j] * potential.q()[j]);
    }
    r.rel_l2 = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    r.h1_error = std::abs(rec.boundary_fit.params.h1 - boundary.h1);
    r.h2_error = std::abs(rec.boundary_fit.params.h2 - boundary.h2);
    for (double v : rec.boundary_fit.residuals) r.max_boundary_residual = std::max(r.max_boundary_residual, std::abs(v));
    for (double v : rec.boundary_fit.relative_residuals) {
        r.max_relative_boundary_residual = std::max(r.max_relative_boundary_residual, std::abs(v));
    }
    return r;
}

}  // namespace dirac

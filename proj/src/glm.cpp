#include "dirac/glm.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace dirac {

FMode parse_fmode(const std::string& name) {
    if (name == "direct_sum") return FMode::direct_sum;
    if (name == "a_form") return FMode::a_form;
    throw std::invalid_argument("unknown F mode '" + name + "' (expected direct_sum or a_form)");
}

std::string to_string(FMode mode) { return mode == FMode::direct_sum ? "direct_sum" : "a_form"; }

TailModel parse_tail(const std::string& name) {
    if (name == "none") return TailModel::none;
    if (name == "asymptotic") return TailModel::asymptotic;
    throw std::invalid_argument("unknown tail model '" + name + "' (expected none or asymptotic)");
}

std::string to_string(TailModel tail) { return tail == TailModel::none ? "none" : "asymptotic"; }

AsymptoticTail AsymptoticTail::fit(const SpectralData& spectral) {
    spectral.validate();
    AsymptoticTail t;
    t.from = spectral.truncation;
    const auto N = static_cast<int>(spectral.truncation);
    if (N < 8) return t;
    // Normal equations for g = d + e u, u = 1/n^2.
    double s0 = 0, su = 0, suu = 0, sg = 0, sug = 0, sh = 0, suh = 0;
    for (int n = (N + 1) / 2; n <= N; ++n) {
        const auto& up = spectral.at(n);
        const auto& dn = spectral.at(-n);
        const double g = 0.5 * n * ((up.lambda - n) - (dn.lambda + n));
        const double h = 0.5 * n * ((up.alpha - kPi) - (dn.alpha - kPi));
        const double u = 1.0 / (static_cast<double>(n) * n);
        s0 += 1;
        su += u;
        suu += u * u;
        sg += g;
        sug += u * g;
        sh += h;
        suh += u * h;
    }
    const double det = s0 * suu - su * su;
    t.d = (suu * sg - su * sug) / det;
    t.c = (suu * sh - su * suh) / det;
    return t;
}

Matrix2 AsymptoticTail::operator()(double s) const {
    if (zero()) return {};
    double sign = 1.0;
    if (s < 0.0) {
        sign = -1.0;
        s = -s;
    }
    double S = 0.0;
    if (s >= 2.0 * kPi - 1e-12) {
        S = -0.5 * kPi;
    } else if (s > 0.0) {
        S = 0.5 * (kPi - s);
        for (std::size_t n = 1; n <= from; ++n) S -= std::sin(static_cast<double>(n) * s) / static_cast<double>(n);
    }
    S *= sign;
    s *= sign;
    const double diag = -2.0 * d * s / kPi * S;
    const double off = 2.0 * c / (kPi * kPi) * S;
    return {diag, off, -off, diag};
}

namespace {

struct Term {
    double lambda;
    double weight;
};

// Perturbed terms paired with their unperturbed counterparts, index by index.
std::vector<Term> paired_terms(const SpectralData& spectral) {
    spectral.validate();
    std::vector<Term> terms;
    terms.reserve(2 * spectral.data.size() + 1);
    if (spectral.surplus) terms.push_back({spectral.surplus->lambda, 1.0 / spectral.surplus->alpha});
    for (const auto& d : spectral.data) {
        terms.push_back({d.lambda, 1.0 / d.alpha});
        terms.push_back({static_cast<double>(d.n), -1.0 / kPi});
    }
    return terms;
}

SquareKernel build_F_direct(const std::vector<Term>& terms, const Grid& grid, const AsymptoticTail& tail) {
    const std::size_t n = grid.size();
    SquareKernel F(grid);
    std::vector<double> s(n);
    std::vector<double> c(n);
    for (const auto& term : terms) {
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = std::sin(term.lambda * grid.node(i));
            c[i] = std::cos(term.lambda * grid.node(i));
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double ws = term.weight * s[i];
            const double wc = term.weight * c[i];
            for (std::size_t j = 0; j < n; ++j) {
                Matrix2& f = F.at(i, j);
                f.a11 += ws * s[j];
                f.a12 -= ws * c[j];
                f.a21 -= wc * s[j];
                f.a22 += wc * c[j];
            }
        }
    }
    if (!tail.zero()) {
        const Matrix2 T = Matrix2::reflection();
        const double h = grid.step();
        const auto m = static_cast<long>(grid.intervals());
        std::vector<Matrix2> table(4 * grid.intervals() + 1);
        for (long k = -2 * m; k <= 2 * m; ++k) table[static_cast<std::size_t>(k + 2 * m)] = tail(static_cast<double>(k) * h);
        for (long i = 0; i < static_cast<long>(n); ++i) {
            for (long j = 0; j < static_cast<long>(n); ++j) {
                F.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) +=
                    0.5 * (table[static_cast<std::size_t>(i - j + 2 * m)] + table[static_cast<std::size_t>(i + j + 2 * m)] * T);
            }
        }
    }
    return F;
}

}  // namespace

Matrix2 build_a(const SpectralData& spectral, double s) {
    Matrix2 a;
    for (const auto& term : paired_terms(spectral)) a += term.weight * Matrix2::rotation(term.lambda * s);
    return a;
}

ACache::ACache(const SpectralData& spectral, const Grid& grid, TailModel tail_model)
    : intervals_(grid.intervals()), step_(grid.step()), table_(4 * grid.intervals() + 1) {
    const auto terms = paired_terms(spectral);
    const AsymptoticTail tail = tail_model == TailModel::asymptotic ? AsymptoticTail::fit(spectral) : AsymptoticTail{};
    const auto m = static_cast<long>(intervals_);
    for (long k = -2 * m; k <= 2 * m; ++k) {
        const double s = static_cast<double>(k) * step_;
        Matrix2 a;
        for (const auto& term : terms) a += term.weight * Matrix2::rotation(term.lambda * s);
        table_[static_cast<std::size_t>(k + 2 * m)] = a + tail(s);
    }
}

const Matrix2& ACache::at_node(long k) const {
    const auto m = static_cast<long>(intervals_);
    if (k < -2 * m || k > 2 * m) throw std::out_of_range("ACache: node outside [-2pi, 2pi]");
    return table_[static_cast<std::size_t>(k + 2 * m)];
}

Matrix2 ACache::operator()(double s) const {
    const auto m = static_cast<long>(intervals_);
    const double u = s / step_;
    if (u < static_cast<double>(-2 * m) - 1e-9 || u > static_cast<double>(2 * m) + 1e-9) {
        throw std::out_of_range("ACache: argument outside [-2pi, 2pi]");
    }
    long k = static_cast<long>(std::floor(u));
    k = std::clamp(k, -2 * m, 2 * m - 1);
    const double frac = std::clamp(u - static_cast<double>(k), 0.0, 1.0);
    return (1.0 - frac) * at_node(k) + frac * at_node(k + 1);
}

SquareKernel build_F(const FKernelSpec& spec, const Grid& grid) {
    if (spec.mode == FMode::direct_sum) {
        const AsymptoticTail tail =
            spec.tail == TailModel::asymptotic ? AsymptoticTail::fit(spec.spectral) : AsymptoticTail{};
        return build_F_direct(paired_terms(spec.spectral), grid, tail);
    }

    const ACache a(spec.spectral, grid, spec.tail);
    const Matrix2 T = Matrix2::reflection();
    SquareKernel F(grid);
    const auto n = static_cast<long>(grid.size());
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) {
            F.at(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) =
                0.5 * (a.at_node(i - j) + a.at_node(i + j) * T);
        }
    }
    return F;
}

GlmRow solve_glm_row(const SquareKernel& F, std::size_t i) {
    const Grid& grid = F.grid();
    if (i == 0 || i >= grid.size()) throw std::out_of_range("solve_glm_row: row index must be in 1..M");
    const std::size_t n = i + 1;
    const auto w = trapezoid_weights_prefix(grid, i);

    // Unknown vector: (K_r1(t_0), K_r2(t_0), K_r1(t_1), ...) for one row r of K.
    // Equation (j, c): K_rc(t_j) + sum_{j', d} w_j' K_rd(t_j') F_dc(t_j', t_j) = -F_rc(x_i, t_j).
    DenseMatrix A(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t jp = 0; jp < n; ++jp) {
            const Matrix2& f = F.at(jp, j);
            const double wj = w[jp];
            A(2 * j, 2 * jp) = wj * f.a11;
            A(2 * j, 2 * jp + 1) = wj * f.a21;
            A(2 * j + 1, 2 * jp) = wj * f.a12;
            A(2 * j + 1, 2 * jp + 1) = wj * f.a22;
        }
        A(2 * j, 2 * j) += 1.0;
        A(2 * j + 1, 2 * j + 1) += 1.0;
    }

    GlmRow row;
    try {
        const DenseLu lu(A);
        row.condition = lu.condition();
        std::vector<double> b1(2 * n);
        std::vector<double> b2(2 * n);
        for (std::size_t j = 0; j < n; ++j) {
            const Matrix2& f = F.at(i, j);
            b1[2 * j] = -f.a11;
            b1[2 * j + 1] = -f.a12;
            b2[2 * j] = -f.a21;
            b2[2 * j + 1] = -f.a22;
        }
        const auto u1 = lu.solve(b1);
        const auto u2 = lu.solve(b2);
        row.blocks.resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            row.blocks[j] = {u1[2 * j], u1[2 * j + 1], u2[2 * j], u2[2 * j + 1]};
        }
    } catch (const SingularMatrixError& e) {
        throw SolverError("glm_row", "row " + std::to_string(i) + " (x=" + std::to_string(grid.node(i)) +
                                         "): discrete main equation is singular; " + e.what());
    }
    return row;
}

GlmSolution solve_glm_all(const SquareKernel& F, const GlmOptions& options) {
    if (!F.finite()) throw SolverError("solve_glm_all", "F has non-finite entries");
    const Grid& grid = F.grid();
    const std::size_t m = grid.intervals();
    GlmSolution sol{KernelField(grid), std::vector<double>(grid.size(), 1.0)};

    unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, m));

    std::vector<std::string> failures(threads);
    auto worker = [&](unsigned tid) {
        // Largest rows first, interleaved across workers.
        for (std::size_t k = tid; k < m; k += threads) {
            const std::size_t i = m - k;
            try {
                auto row = solve_glm_row(F, i);
                auto dst = sol.kernel.row(i);
                std::copy(row.blocks.begin(), row.blocks.end(), dst.begin());
                sol.condition[i] = row.condition;
            } catch (const SolverError& e) {
                failures[tid] += (failures[tid].empty() ? "" : "; ") + std::string(e.what());
            }
        }
    };
    if (threads <= 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    }

    std::string all;
    for (const auto& f : failures) {
        if (!f.empty()) all += (all.empty() ? "" : "; ") + f;
    }
    if (!all.empty()) throw SolverError("solve_glm_all", all);
    return sol;
}

double glm_residual(const SquareKernel& F, const KernelField& K) {
    if (!(F.grid() == K.grid())) throw std::invalid_argument("glm_residual: grid mismatch");
    const Grid& grid = F.grid();
    double worst = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const auto w = trapezoid_weights_prefix(grid, i);
        const auto k_row = K.row(i);
        for (std::size_t j = 0; j <= i; ++j) {
            Matrix2 r = F.at(i, j) + k_row[j];
            for (std::size_t s = 0; s <= i; ++s) r += w[s] * (k_row[s] * F.at(s, j));
            worst = std::max(worst, r.max_abs());
        }
    }
    return worst;
}

SquareKernel build_H(const SquareKernel& F, const KernelField& K) {
    if (!(F.grid() == K.grid())) throw std::invalid_argument("build_H: grid mismatch");
    const Grid& grid = F.grid();
    SquareKernel H(grid);
    // H(x,t)^T = F(t,x) + int_0^t K(t,s) F(s,x) ds  (completeness of phi0 against phi)
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const auto w = trapezoid_weights_prefix(grid, j);
        const auto k_row = K.row(j);
        for (std::size_t i = j; i < grid.size(); ++i) {
            Matrix2 ht = F.at(j, i);
            for (std::size_t s = 0; s <= j; ++s) ht += w[s] * (k_row[s] * F.at(s, i));
            H.at(i, j) = ht.transposed();
        }
    }
    return H;
}

double inverse_representation_residual(const SquareKernel& H, const VectorSolution& phi) {
    if (!(H.grid() == phi.grid)) throw std::invalid_argument("inverse_representation_residual: grid mismatch");
    const Grid& grid = H.grid();
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto w = trapezoid_weights_prefix(grid, i);
        Vec2 v = phi.at(i);
        for (std::size_t j = 0; j <= i; ++j) v += w[j] * (H.at(i, j) * phi.at(j));
        const double x = grid.node(i);
        const Vec2 free{std::sin(phi.lambda * x), -std::cos(phi.lambda * x)};
        const Vec2 d = v - free;
        worst = std::max({worst, std::abs(d.y1), std::abs(d.y2)});
    }
    return worst;
}

}  // namespace dirac

#include "dirac/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace dirac {

namespace {

struct Bracket {
    double lo;
    double hi;
    double f_lo;
    double f_hi;
};

// Bisection down to `width`, then secant steps kept inside the bracket.
double refine_root(const DiracProblem& problem, Bracket b, const LocateOptions& opt) {
    auto delta = [&](double x) { return char_delta(problem, x); };
    auto converged = [&](double x, double fx) { return std::abs(fx) <= opt.residual_tol * std::max(1.0, std::abs(x)); };

    if (b.f_lo == 0.0) return b.lo;
    if (b.f_hi == 0.0) return b.hi;

    while (b.hi - b.lo > opt.bisection_width) {
        const double mid = 0.5 * (b.lo + b.hi);
        const double fm = delta(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (b.f_lo < 0.0)) {
            b.lo = mid;
            b.f_lo = fm;
        } else {
            b.hi = mid;
            b.f_hi = fm;
        }
    }

    double best = std::abs(b.f_lo) < std::abs(b.f_hi) ? b.lo : b.hi;
    double f_best = std::min(std::abs(b.f_lo), std::abs(b.f_hi));
    for (int iter = 0; iter < 60 && !converged(best, f_best); ++iter) {
        double x = b.hi - b.f_hi * (b.hi - b.lo) / (b.f_hi - b.f_lo);
        if (!(x > b.lo && x < b.hi)) x = 0.5 * (b.lo + b.hi);
        if (x == b.lo || x == b.hi) break;  // bracket exhausted at roundoff
        const double fx = delta(x);
        if (std::abs(fx) < f_best) {
            best = x;
            f_best = std::abs(fx);
        }
        if (fx == 0.0) break;
        if ((fx < 0.0) == (b.f_lo < 0.0)) {
            b.lo = x;
            b.f_lo = fx;
        } else {
            b.hi = x;
            b.f_hi = fx;
        }
    }
    return best;
}

std::vector<double> sweep_roots(const DiracProblem& problem, double from, double to, std::size_t samples,
                                const LocateOptions& opt) {
    std::vector<double> roots;
    const double step = (to - from) / static_cast<double>(samples);
    double x_prev = from;
    double f_prev = char_delta(problem, x_prev);
    if (f_prev == 0.0) roots.push_back(x_prev);
    for (std::size_t k = 1; k <= samples; ++k) {
        const double x = (k == samples) ? to : from + static_cast<double>(k) * step;
        const double f = char_delta(problem, x);
        if (f == 0.0) {
            roots.push_back(x);
        } else if (f_prev != 0.0 && (f < 0.0) != (f_prev < 0.0)) {
            roots.push_back(refine_root(problem, {x_prev, x, f_prev, f}, opt));
        }
        x_prev = x;
        f_prev = f;
    }
    return roots;
}

std::string describe_windows(const std::map<int, std::vector<double>>& windows) {
    std::ostringstream os;
    for (const auto& [n, roots] : windows) {
        os << " [" << n << ": " << roots.size() << " root(s)]";
    }
    return os.str();
}

}  // namespace

SpectralData locate_eigenvalues(const DiracProblem& problem, std::size_t N, const LocateOptions& opt) {
    if (opt.window_half_width <= 0.0 || opt.samples_per_window < 2) {
        throw std::invalid_argument("locate_eigenvalues: invalid window options");
    }
    const int n_max = static_cast<int>(N);
    const int guard = std::min(opt.low_index_guard, n_max);
    const double w = opt.window_half_width;

    // One contiguous sweep so that no root falls between windows.
    const double from = -n_max - w;
    const double to = n_max + w;
    const auto total_samples =
        static_cast<std::size_t>(std::ceil((to - from) / (2.0 * w))) * opt.samples_per_window;
    std::vector<double> roots = sweep_roots(problem, from, to, total_samples, opt);
    std::sort(roots.begin(), roots.end());

    std::map<int, std::vector<double>> windows;
    std::vector<double> low;
    for (double r : roots) {
        const int n = static_cast<int>(std::ceil(r - 0.5));
        if (std::abs(n) <= guard) {
            low.push_back(r);
        } else {
            windows[n].push_back(r);
        }
    }

    SpectralData out;
    out.truncation = N;
    out.data.resize(2 * N + 1);
    for (int n = -n_max; n <= n_max; ++n) out.data[static_cast<std::size_t>(n + n_max)].n = n;

    auto fail = [&](const std::string& why) {
        std::ostringstream os;
        os << why << "; found " << roots.size() << " root(s) in [" << from << ", " << to
           << "], low sweep [" << -guard - 0.5 << ", " << guard + 0.5 << "] holds " << low.size()
           << ", windows:" << describe_windows(windows);
        throw SolverError("locate_eigenvalues", os.str());
    };

    for (int n = -n_max; n <= n_max; ++n) {
        if (std::abs(n) <= guard) continue;
        auto it = windows.find(n);
        if (it == windows.end()) fail("window " + std::to_string(n) + " holds no root");
        auto& rs = it->second;
        if (rs.size() > 2) fail("window " + std::to_string(n) + " holds more than two roots");
        if (rs.size() == 2) {
            if (out.surplus) fail("more than one window holds two roots");
            const bool first_closer = std::abs(rs[0] - n) <= std::abs(rs[1] - n);
            out.surplus = Eigenpair{first_closer ? rs[1] : rs[0], 0.0};
            out.at(n).lambda = first_closer ? rs[0] : rs[1];
        } else {
            out.at(n).lambda = rs[0];
        }
    }

    const auto low_slots = static_cast<std::size_t>(2 * guard + 1);
    if (low.size() == low_slots + 1 && !out.surplus) {
        // Drop the root whose removal leaves the best fit to the index ladder.
        std::size_t best_drop = 0;
        double best_cost = std::numeric_limits<double>::infinity();
        for (std::size_t drop = 0; drop < low.size(); ++drop) {
            double cost = 0.0;
            for (std::size_t k = 0, slot = 0; k < low.size(); ++k) {
                if (k == drop) continue;
                const double d = low[k] - static_cast<double>(static_cast<int>(slot) - guard);
                cost += d * d;
                ++slot;
            }
            if (cost < best_cost - 1e-14) {
                best_cost = cost;
                best_drop = drop;
            }
        }
        out.surplus = Eigenpair{low[best_drop], 0.0};
        low.erase(low.begin() + static_cast<std::ptrdiff_t>(best_drop));
    }
    if (low.size() != low_slots) {
        fail("low-index sweep expected " + std::to_string(low_slots) + (out.surplus ? "" : " or " + std::to_string(low_slots + 1)) +
             " roots");
    }
    for (int n = -guard; n <= guard; ++n) out.at(n).lambda = low[static_cast<std::size_t>(n + guard)];

    // The surplus root can lie beyond the index range (small N, large |h1|):
    // continue window by window outward until one holds two roots.
    const int reach = n_max + static_cast<int>(std::ceil(std::abs(problem.boundary.h1))) + 20;
    for (int k = n_max + 1; !out.surplus && k <= reach; ++k) {
        for (int n : {-k, k}) {
            auto rs = sweep_roots(problem, n - w, n + w, opt.samples_per_window, opt);
            if (rs.size() > 2) fail("window " + std::to_string(n) + " beyond the index range holds more than two roots");
            if (rs.size() == 2) {
                std::sort(rs.begin(), rs.end());
                out.surplus = Eigenpair{std::abs(rs[0] - n) <= std::abs(rs[1] - n) ? rs[1] : rs[0], 0.0};
                break;
            }
        }
    }
    if (!out.surplus) fail("no surplus eigenvalue found (expected 2N+2 roots)");
    return out;
}

double normalizing_number(const DiracProblem& problem, double lambda_n) {
    const auto phi = integrate_phi(problem, lambda_n);
    const std::size_t m = problem.grid().intervals();
    const double alpha = phi.norm_squared() + phi.y1[m] * phi.y1[m] / problem.boundary.h2;
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw SolverError("normalizing_number", "non-positive normalizing number at lambda=" + std::to_string(lambda_n));
    }
    return alpha;
}

BetaResult beta_coefficient(const DiracProblem& problem, double lambda_n, double alpha_n, double simple_tol) {
    if (!(alpha_n > 0.0)) throw std::invalid_argument("beta_coefficient: alpha must be positive");
    BetaResult r;
    r.delta_dot = char_delta_deriv(problem, lambda_n);
    if (std::abs(r.delta_dot) < simple_tol) {
        throw SolverError("beta_coefficient", "Delta'(lambda) vanishes at lambda=" + std::to_string(lambda_n) +
                                                  "; eigenvalue is (nearly) multiple");
    }
    r.beta = r.delta_dot / alpha_n;
    const auto psi = integrate_psi(problem, lambda_n);
    r.beta_ratio = psi.y2[0] / -1.0;
    r.discrepancy = std::abs(r.beta - r.beta_ratio);
    return r;
}

SpectralData compute_spectral_data(const DiracProblem& problem, std::size_t N, const LocateOptions& options) {
    SpectralData s = locate_eigenvalues(problem, N, options);
    for (auto& d : s.data) d.alpha = normalizing_number(problem, d.lambda);
    if (s.surplus) s.surplus->alpha = normalizing_number(problem, s.surplus->lambda);
    return s;
}

EigenReport eigen_report(const DiracProblem& problem, std::size_t N, const LocateOptions& options) {
    EigenReport r;
    r.spectral = compute_spectral_data(problem, N, options);
    for (const auto& d : r.spectral.data) {
        r.beta.push_back(beta_coefficient(problem, d.lambda, d.alpha));
        r.epsilon.push_back(d.lambda - d.n);
        r.tau.push_back(d.alpha - kPi);
    }
    if (r.spectral.surplus) {
        r.surplus_beta = beta_coefficient(problem, r.spectral.surplus->lambda, r.spectral.surplus->alpha);
    }
    return r;
}

double hadamard_delta(const SpectralData& spectral, double lambda, const HadamardOptions& options) {
    spectral.validate();
    const auto N = static_cast<int>(spectral.truncation);
    // Without a surplus eigenvalue the pair around zero is taken symmetric, +-lambda_0.
    const double partner = spectral.surplus ? spectral.surplus->lambda : -spectral.at(0).lambda;
    double value = kPi * (lambda - spectral.at(0).lambda) * (lambda - partner);
    for (int n = 1; n <= N; ++n) {
        const double nn = static_cast<double>(n) * n;
        value *= (spectral.at(n).lambda - lambda) * (lambda - spectral.at(-n).lambda) / nn;
    }
    const auto tail_end = static_cast<std::size_t>(std::max<std::size_t>(options.tail_cutoff, spectral.truncation));
    const double l2 = lambda * lambda;
    for (std::size_t n = spectral.truncation + 1; n <= tail_end; ++n) {
        const double nn = static_cast<double>(n) * static_cast<double>(n);
        value *= (nn - l2) / nn;
    }
    return value;
}

AsymptoticsReport asymptotics_report(const SpectralData& spectral) {
    spectral.validate();
    const auto N = static_cast<int>(spectral.truncation);
    AsymptoticsReport rep;
    double se = 0.0;
    double st = 0.0;
    for (int k = 0; k <= N; ++k) {
        AsymptoticsRow row;
        row.n = k;
        const auto& pos = spectral.at(k);
        const auto& neg = spectral.at(-k);
        row.epsilon_pos = pos.lambda - k;
        row.epsilon_neg = neg.lambda + k;
        row.tau_pos = pos.alpha - kPi;
        row.tau_neg = neg.alpha - kPi;
        se += row.epsilon_pos * row.epsilon_pos;
        st += row.tau_pos * row.tau_pos;
        if (k > 0) {
            se += row.epsilon_neg * row.epsilon_neg;
            st += row.tau_neg * row.tau_neg;
        }
        row.epsilon_sq_sum = se;
        row.tau_sq_sum = st;
        rep.rows.push_back(row);
    }
    const auto& half = rep.rows[static_cast<std::size_t>(N / 2)];
    const auto& full = rep.rows.back();
    rep.epsilon_plateau = half.epsilon_sq_sum > 0.0 ? full.epsilon_sq_sum / half.epsilon_sq_sum : 1.0;
    rep.tau_plateau = half.tau_sq_sum > 0.0 ? full.tau_sq_sum / half.tau_sq_sum : 1.0;
    return rep;
}

}  // namespace dirac

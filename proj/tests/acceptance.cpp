// One line per acceptance criterion; exit status 1 if any fails.

#include "dirac/glm.hpp"
#include "dirac/recovery.hpp"
#include "dirac/spectrum.hpp"
#include "dirac/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace dirac;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

PotentialMatrix trig_potential(const Grid& g) {
    return PotentialMatrix::from_functions(g, [](double x) { return 0.3 * std::cos(x); },
                                           [](double x) { return 0.2 * std::sin(2.0 * x); });
}

DiracProblem trig_problem(std::size_t M) { return {trig_potential(Grid(M)), BoundaryParams(0.5, 1.0)}; }
DiracProblem free_problem(std::size_t M) { return {PotentialMatrix::zero(Grid(M)), BoundaryParams(0.0, 1.0)}; }

// ---------------------------------------------------------------------------

double constant_error(std::size_t M) {
    const double p0 = 0.5;
    Grid g(M);
    DiracProblem prob(PotentialMatrix::from_functions(g, [=](double) { return p0; }, [](double) { return 0.0; }),
                      BoundaryParams(0.0, 1.0));
    double worst = 0.0;
    for (int k = -20; k <= 20; ++k) {
        const double lambda = 0.25 * k;
        const auto phi = integrate_phi(prob, lambda);
        const double nu2 = lambda * lambda - p0 * p0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            const double x = g.node(j);
            double e1, e2;
            if (nu2 > 0) {
                const double nu = std::sqrt(nu2);
                e1 = (lambda + p0) / nu * std::sin(nu * x);
                e2 = -std::cos(nu * x);
            } else if (nu2 < 0) {
                const double kk = std::sqrt(-nu2);
                e1 = (lambda + p0) / kk * std::sinh(kk * x);
                e2 = -std::cosh(kk * x);
            } else {
                e1 = (lambda + p0) * x;
                e2 = -1.0;
            }
            worst = std::max({worst, std::abs(phi.y1[j] - e1), std::abs(phi.y2[j] - e2)});
        }
    }
    return worst;
}

Outcome closed_form_direct() {
    const auto t0 = Clock::now();
    const double e2000 = constant_error(2000);
    const double t = seconds_since(t0);
    const double r1 = constant_error(500) / constant_error(1000);
    const double r2 = constant_error(1000) / e2000;
    const auto near16 = [](double r) { return std::abs(r - 16.0) <= 0.3 * 16.0; };
    std::ostringstream os;
    os << "err(M=2000)=" << e2000 << " ratios " << r1 << ", " << r2 << " time " << t << " s";
    return {e2000 <= 1e-8 && near16(r1) && near16(r2) && t < 1.0, os.str()};
}

// Spectral data of the trig preset shared by criteria 2 to 4.
struct TrigSpectrum {
    DiracProblem problem = trig_problem(800);
    SpectralData data;
    double seconds = 0.0;
};

const TrigSpectrum& trig_spectrum() {
    static const TrigSpectrum s = [] {
        TrigSpectrum r;
        const auto t0 = Clock::now();
        r.data = compute_spectral_data(r.problem, 60);
        r.seconds = seconds_since(t0);
        return r;
    }();
    return s;
}

double partial_sum(const SpectralData& s, int N, const std::function<double(const SpectralDatum&)>& term) {
    double sum = 0.0;
    for (const auto& d : s.data) {
        if (std::abs(d.n) <= N) sum += term(d);
    }
    return sum;
}

Outcome eigenvalue_localization() {
    const auto& ts = trig_spectrum();
    bool in_window = true;
    double worst_delta = 0.0;
    for (const auto& d : ts.data.data) {
        if (std::abs(d.n) >= 3 && std::abs(d.n) <= 40 && !(d.lambda > d.n - 0.5 && d.lambda < d.n + 0.5)) in_window = false;
        worst_delta = std::max(worst_delta, std::abs(char_delta(ts.problem, d.lambda)));
    }
    const auto eps2 = [](const SpectralDatum& d) { return (d.lambda - d.n) * (d.lambda - d.n); };
    const double s30 = partial_sum(ts.data, 30, eps2);
    const double s60 = partial_sum(ts.data, 60, eps2);
    const double plateau = std::abs(s60 - s30) / s60;
    std::ostringstream os;
    os << "windows " << (in_window ? "ok" : "violated") << ", sum eps^2 N=30 " << s30 << " N=60 " << s60
       << " (diff " << 100 * plateau << "%), max|Delta| " << worst_delta << ", time " << ts.seconds << " s";
    return {in_window && plateau <= 0.01 && worst_delta <= 1e-10 && ts.seconds < 30.0, os.str()};
}

Outcome normalizing_asymptotics() {
    const auto& ts = trig_spectrum();
    double worst = 0.0;
    int worst_n = 0;
    for (const auto& d : ts.data.data) {
        if (std::abs(d.n) >= 5 && std::abs(d.alpha - kPi) > worst) {
            worst = std::abs(d.alpha - kPi);
            worst_n = d.n;
        }
    }
    const auto tau2 = [](const SpectralDatum& d) { return (d.alpha - kPi) * (d.alpha - kPi); };
    const double s30 = partial_sum(ts.data, 30, tau2);
    const double s60 = partial_sum(ts.data, 60, tau2);
    const double plateau = std::abs(s60 - s30) / s60;
    std::ostringstream os;
    os << "max |alpha_n - pi| over |n|>=5: " << worst << " at n=" << worst_n << ", sum tau^2 diff " << 100 * plateau
       << "%";
    return {worst <= 0.2 && plateau <= 0.01, os.str()};
}

Outcome three_way_identity() {
    const auto& ts = trig_spectrum();
    double worst = 0.0;
    for (const auto& d : ts.data.data) {
        if (std::abs(d.n) > 20) continue;
        const auto b = beta_coefficient(ts.problem, d.lambda, d.alpha);
        worst = std::max(worst, std::abs(b.delta_dot - b.beta_ratio * d.alpha) / std::abs(b.delta_dot));
    }
    std::ostringstream os;
    os << "max relative defect " << worst;
    return {worst <= 1e-6, os.str()};
}

Outcome hadamard() {
    const auto prob = trig_problem(800);
    const auto s = compute_spectral_data(prob, 200);
    HadamardOptions opt;
    opt.tail_cutoff = 10000;
    double worst = 0.0;
    for (int k = 0; k <= 5; ++k) {
        const double lambda = k + 0.5;
        const double shoot = char_delta(prob, lambda);
        worst = std::max(worst, std::abs(hadamard_delta(s, lambda, opt) - shoot) / std::abs(shoot));
    }
    std::ostringstream os;
    os << "max relative error " << worst;
    return {worst <= 1e-2, os.str()};
}

Outcome rank_one() {
    double slowest = 0.0;
    const double delta = 1.0 / (kPi + 0.5) - 1.0 / kPi;
    const Grid g(400);
    double worst = 0.0;
    for (std::size_t N : {1u, 5u, 20u}) {
        const auto t0 = Clock::now();
        SpectralData s;
        s.truncation = N;
        for (int n = -static_cast<int>(N); n <= static_cast<int>(N); ++n) s.data.push_back({n, double(n), n == 0 ? kPi + 0.5 : kPi});
        const auto pot = potential_from_kernel(solve_glm_all(build_F({s, FMode::direct_sum}, g)).kernel);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double q = delta / (1.0 + delta * g.node(i));
            worst = std::max({worst, std::abs(pot.q()[i] - q), std::abs(pot.p()[i])});
        }
        slowest = std::max(slowest, seconds_since(t0));
    }
    std::ostringstream os;
    os << "max node error " << worst << " over N in {1,5,20}, slowest solve " << slowest << " s";
    return {worst <= 1e-6 && slowest < 5.0, os.str()};
}

struct RoundtripRun {
    std::size_t N, M;
    RoundtripReport report;
};

std::vector<RoundtripRun>& roundtrip_runs() {
    static std::vector<RoundtripRun> runs;
    return runs;
}

Outcome roundtrip_reconstruction() {
    const auto t0 = Clock::now();
    auto& runs = roundtrip_runs();
    for (auto [N, M] : {std::pair<std::size_t, std::size_t>{40, 400}, {10, 200}, {20, 400}, {40, 800}}) {
        runs.push_back({N, M, roundtrip(trig_potential(Grid(M)), BoundaryParams(0.5, 1.0), N)});
    }
    const double t = seconds_since(t0);
    const auto& main = runs[0].report;
    const bool main_ok = main.rel_l2 <= 0.05 && main.h1_error <= 0.05 && main.h2_error <= 0.05;
    const bool ladder_ok = runs[2].report.rel_l2 <= runs[1].report.rel_l2 && runs[3].report.rel_l2 <= runs[2].report.rel_l2;
    std::ostringstream os;
    os << "N=40,M=400: rel L2 " << main.rel_l2 << ", h1 " << main.recovered.h1 << ", h2 " << main.recovered.h2
       << "; ladder " << runs[1].report.rel_l2 << " -> " << runs[2].report.rel_l2 << " -> " << runs[3].report.rel_l2
       << ", time " << t << " s";
    return {main_ok && ladder_ok && t < 300.0, os.str()};
}

Outcome glm_residual_and_condition() {
    if (roundtrip_runs().empty()) roundtrip_reconstruction();
    double residual = 0.0, condition = 1.0;
    for (const auto& r : roundtrip_runs()) {
        residual = std::max(residual, r.report.glm_residual);
        condition = std::max(condition, r.report.max_condition);
    }
    std::ostringstream os;
    os << "max residual " << residual << ", max row condition " << condition;
    return {residual <= 1e-10 && condition <= 1e3, os.str()};
}

Outcome parseval_expansion() {
    const auto prob = free_problem(1000);
    const auto s = compute_spectral_data(prob, 60);
    const auto basis = eigenfunctions(prob, s);
    // basis[0] is the surplus; index n sits at n + N + 1
    const GridVector f3 = basis[3 + 60 + 1].phi;
    const double expansion = expansion_check(prob, s, f3, Pairing::h_space).max_error;

    const auto wide = free_problem(2000);
    const auto f = GridVector::from_functions(wide.potential.grid(), [](double x) { return x * (kPi - x); },
                                              [](double x) { return 1.0 + std::cos(x); });
    const auto s100 = compute_spectral_data(wide, 100);
    const double d50 = parseval_check(wide, s100.truncated(50), f).defect;
    const double d100 = parseval_check(wide, s100, f).defect;
    std::ostringstream os;
    os << "expansion error " << expansion << ", Parseval defect N=50 " << d50 << " N=100 " << d100;
    return {expansion <= 1e-3 && d100 <= 0.5 * d50, os.str()};
}

Outcome zero_sum() {
    const auto prob = free_problem(1000);
    const auto s = compute_spectral_data(prob, 80);
    ZeroSumOptions opt;
    opt.ladder = {20, 80};
    const auto rows = zero_sum_check(prob, s, opt);
    const double ratio = rows[0].max_abs / rows[1].max_abs;
    std::ostringstream os;
    os << "max over [0, " << opt.x_limit_fraction << " pi]: N=20 " << rows[0].max_abs << " N=80 " << rows[1].max_abs
       << " (ratio " << ratio << ")";
    return {ratio >= 2.0, os.str()};
}

Outcome mode_equivalence() {
    std::mt19937 rng(20);
    std::uniform_real_distribution<double> eps(-0.3, 0.3);
    SpectralData s;
    s.truncation = 20;
    for (int n = -20; n <= 20; ++n) s.data.push_back({n, n + eps(rng), kPi + eps(rng)});
    s.surplus = Eigenpair{-0.4 + eps(rng), kPi + eps(rng)};
    const Grid g(400);
    const double diff = max_difference(build_F({s, FMode::direct_sum}, g), build_F({s, FMode::a_form}, g));
    std::ostringstream os;
    os << "max node difference " << diff;
    return {diff <= 1e-12, os.str()};
}

}  // namespace

int main() {
    const std::pair<const char*, Outcome (*)()> criteria[] = {
        {"closed-form direct solve", closed_form_direct},
        {"eigenvalue localization", eigenvalue_localization},
        {"normalizing asymptotics", normalizing_asymptotics},
        {"Delta' = beta alpha identity", three_way_identity},
        {"Hadamard product", hadamard},
        {"rank-one GLM oracle", rank_one},
        {"round-trip reconstruction", roundtrip_reconstruction},
        {"GLM residual and conditioning", glm_residual_and_condition},
        {"Parseval and expansion", parseval_expansion},
        {"zero-sum identity", zero_sum},
        {"a_form / direct_sum equivalence", mode_equivalence},
    };
    int failed = 0;
    int k = 0;
    for (const auto& [name, fn] : criteria) {
        ++k;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", k, name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %d criteria passed\n", k - failed, k);
    return failed == 0 ? 0 : 1;
}

#pragma once

/// @file secret.hpp
/// Secrecy-rate maximization for the secret message at a fixed power P_m.
///
/// The max-min fractional program is solved by bisection on the target
/// ratio t = 2^{2 Rs}. Each step is a max-slack feasibility check on the
/// rank-relaxed program in normalized variables p = Ps1 / P_m and
/// Q = Psi / P_m; the relaxed matrix is then reduced to a beam vector.

#include "dfsec/cone.hpp"
#include "dfsec/rates.hpp"
#include "dfsec/scenario.hpp"
#include "dfsec/solution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace dfsec {

/// The conic kernel failed to reach its tolerance.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int max_bisect_iterations = 60;
inline constexpr double rank_one_threshold = 1e-6;
inline constexpr int rounding_samples = 200;

/// Certified bracket end for the bisection: the destination SNR never
/// exceeds P_m max(|a0|^2, |a|^2) / N0 and the eavesdropper ratio is >= 1.
inline double t_upper_bound(const ChannelScenario& sc, double P_m) {
    if (!(P_m >= 0.0)) throw std::invalid_argument("t_upper_bound: P_m must be nonnegative");
    return 1.0 + P_m * std::max(std::norm(sc.alpha0), sc.alpha.squaredNorm()) / sc.noise_power;
}

namespace secret_detail {

inline double eve_matrix_bound(const ChannelScenario& sc) {
    double out = 0.0;
    for (int j = 0; j < sc.n_eves; ++j) {
        const CMatrix b = rates::eve_form(sc, j);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(b, Eigen::EigenvaluesOnly);
        out = std::max({out, rates::eve_direct_gain(sc, j), es.eigenvalues().maxCoeff()});
    }
    return out;
}

// Large enough that the slack variable u = slack + K is never pinned at 0.
inline double slack_offset(const ChannelScenario& sc, double t, double snr) {
    return 1.0 + t * (1.0 + snr * eve_matrix_bound(sc));
}

/// Relaxed ratio min_j (1 + snr (p a0 + tr A Q)) / (1 + snr (p e_j + tr B_j Q)).
inline double relaxed_ratio(const ChannelScenario& sc, double snr, double p, const CMatrix& Q) {
    const double num = 1.0 + snr * (p * std::norm(sc.alpha0) + cone::detail::real_trace(rates::dest_form(sc), Q));
    if (sc.n_eves == 0) return num;
    double worst = 0.0;
    for (int j = 0; j < sc.n_eves; ++j) {
        const double den =
            1.0 + snr * (p * rates::eve_direct_gain(sc, j) + cone::detail::real_trace(rates::eve_form(sc, j), Q));
        worst = std::max(worst, den);
    }
    return num / worst;
}

struct Relaxed {
    double p = 0.0;
    CMatrix Q;
};

/// Projects onto the cone and the power budget to clean up solver noise.
inline Relaxed clean(double p, const CMatrix& Q) {
    Relaxed r;
    r.p = std::max(0.0, p);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (Q + Q.adjoint()));
    const RVector lam = es.eigenvalues().cwiseMax(0.0);
    r.Q = es.eigenvectors() * lam.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
    const double total = r.p + lam.sum();
    if (total > 1.0) {
        r.p /= total;
        r.Q /= total;
    }
    return r;
}

inline cone::ConeSolution checked_solve(const cone::ConeProgram& prog, double tol, const char* what) {
    cone::ConeSolution sol = cone::solve(prog, tol);
    if (sol.status == cone::Status::MaxIter && sol.kkt.max() > std::sqrt(tol))
        throw SolverError(std::string(what) + ": kernel stopped after " + std::to_string(sol.iterations) +
                          " iterations with KKT residual " + std::to_string(sol.kkt.max()));
    if (sol.status == cone::Status::Infeasible || sol.status == cone::Status::Unbounded)
        throw SolverError(std::string(what) + ": kernel reported " + std::string(cone::to_string(sol.status)) +
                          " for a program that is feasible and bounded by construction");
    return sol;
}

struct Line {
    double a = 0.0, b = 0.0, c = 0.0;  // a P + b S = c
};

}  // namespace secret_detail

/// Phase-1 program at target ratio t. Scalars are (p, u) with slack u - K;
/// the objective minimizes -u. Row order: eavesdroppers, relays, power.
inline cone::ConeProgram build_phase1_program(const ChannelScenario& sc, double P_m, double t) {
    const int n = sc.n_relays;
    const double snr = P_m / sc.noise_power;
    const double a0 = std::norm(sc.alpha0);
    const CMatrix A = rates::dest_form(sc);
    const double K = secret_detail::slack_offset(sc, t, snr);

    cone::ConeProgram prog(n, 2);
    prog.objective_scalars = RVector::Zero(2);
    prog.objective_scalars(1) = -1.0;
    for (int j = 0; j < sc.n_eves; ++j) {
        auto& c = prog.add(cone::Sense::GreaterEqual, -K - (1.0 - t));
        c.psd = snr * (A - t * rates::eve_form(sc, j));
        c.scalars(0) = snr * (a0 - t * rates::eve_direct_gain(sc, j));
        c.scalars(1) = -1.0;
    }
    for (int i = 0; i < n; ++i) {
        auto& c = prog.add(cone::Sense::GreaterEqual, 0.0);
        c.psd = -A;
        c.scalars(0) = std::norm(sc.gamma(i)) - a0;
    }
    auto& pw = prog.add(cone::Sense::LessEqual, 1.0);
    pw.psd = CMatrix::Identity(n, n);
    pw.scalars(0) = 1.0;
    return prog;
}

/// Best power split (Ps1, |psi|^2) along a fixed unit beam direction v.
/// The objective is a ratio of an affine numerator to a max of affine
/// denominators over a polygon, so its maximum sits at a vertex of the
/// arrangement formed by the polygon edges and the lines where two
/// eavesdropper denominators cross.
struct SplitResult {
    double Ps1 = 0.0;
    double s = 0.0;
    double value = 0.0;  // raw secrecy objective
};

inline SplitResult best_split(const ChannelScenario& sc, double P_m, const CVector& v) {
    using secret_detail::Line;
    const double a0 = std::norm(sc.alpha0);
    const double d = rates::beam_gain(sc.alpha, v);
    const double slope = rates::min_relay_gain(sc) - a0;
    std::vector<double> e(sc.n_eves), b(sc.n_eves);
    for (int j = 0; j < sc.n_eves; ++j) {
        e[j] = rates::eve_direct_gain(sc, j);
        b[j] = rates::eve_beam_gain(sc, j, v);
    }
    std::vector<Line> lines = {{1, 0, 0}, {0, 1, 0}, {1, 1, P_m}, {slope, -d, 0}};
    for (int j = 0; j < sc.n_eves; ++j)
        for (int k = j + 1; k < sc.n_eves; ++k) lines.push_back({e[j] - e[k], b[j] - b[k], 0});

    const double n0 = sc.noise_power;
    auto value = [&](double P, double S) {
        const double num = n0 + P * a0 + S * d;
        double den = n0;
        for (int j = 0; j < sc.n_eves; ++j) den = std::max(den, n0 + P * e[j] + S * b[j]);
        if (sc.n_eves == 0) den = n0;
        return 0.5 * std::log2(num / den);
    };
    auto admit = [&](double& P, double& S) {
        const double eps = 1e-12 * std::max(1.0, P_m);
        if (!(P >= -eps && S >= -eps && P + S <= P_m + eps)) return false;
        if (slope * P - d * S < -eps * std::max(1.0, std::abs(slope) + d)) return false;
        P = std::max(0.0, P);
        S = std::max(0.0, S);
        if (P + S > P_m) {
            const double k = P_m / (P + S);
            P *= k;
            S *= k;
        }
        if (d * S > slope * P) S = slope * P > 0.0 ? slope * P / d : 0.0;
        return true;
    };

    SplitResult best{0.0, 0.0, value(0.0, 0.0)};
    for (std::size_t x = 0; x < lines.size(); ++x) {
        for (std::size_t y = x + 1; y < lines.size(); ++y) {
            const Line& l1 = lines[x];
            const Line& l2 = lines[y];
            const double det = l1.a * l2.b - l2.a * l1.b;
            const double scale = std::max({std::abs(l1.a), std::abs(l1.b)}) * std::max({std::abs(l2.a), std::abs(l2.b)});
            if (!(std::abs(det) > 1e-14 * scale)) continue;
            double P = (l1.c * l2.b - l2.c * l1.b) / det;
            double S = (l1.a * l2.c - l2.a * l1.c) / det;
            if (!admit(P, S)) continue;
            const double val = value(P, S);
            if (val > best.value) best = {P, S, val};
        }
    }
    return best;
}

namespace secret_detail {

inline SecretAllocation from_split(const ChannelScenario& sc, const SplitResult& sp, const CVector& v) {
    SecretAllocation out;
    out.Ps1 = sp.Ps1;
    out.psi = std::sqrt(sp.s) * v;
    const double raw = rates::raw_secrecy_objective(sc, out.Ps1, out.psi);
    out.clamped = raw < 0.0;
    out.secrecy_rate = std::max(0.0, raw);
    return out;
}

inline std::mt19937_64 rounding_rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

/// Reduces the relaxed (Ps1, Psi) to a beam vector.
inline SecretAllocation recover(const ChannelScenario& sc, double P_m, double Ps1_relaxed, const CMatrix& Psi,
                                std::uint64_t seed, std::uint64_t stream) {
    const int n = sc.n_relays;
    const auto pd = cone::principal_direction(Psi);
    const double trace = std::max(0.0, Psi.trace().real());

    std::vector<CVector> directions;
    CVector principal = pd.vector;
    if (principal.norm() == 0.0) principal = CVector::Unit(n, 0);
    directions.push_back(principal);

    bool rounded = false;
    if (pd.rank1_defect > rank_one_threshold && trace > 0.0) {
        rounded = true;
        Eigen::SelfAdjointEigenSolver<CMatrix> es(Psi);
        const RVector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        const CMatrix factor = es.eigenvectors() * root.cast<Complex>().asDiagonal();
        auto rng = rounding_rng(seed, stream);
        std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
        for (int k = 0; k < rounding_samples; ++k) {
            CVector w(n);
            for (int i = 0; i < n; ++i) w(i) = Complex(nd(rng), nd(rng));
            const CVector xi = factor * w;
            if (xi.norm() > 0.0) directions.push_back(xi.normalized());
        }
    }

    // The relaxed point itself, rescaled to the beam power and pulled back
    // inside the relay constraint.
    const double slope = rates::min_relay_gain(sc) - std::norm(sc.alpha0);
    SecretAllocation best;
    {
        double P = std::clamp(Ps1_relaxed, 0.0, P_m);
        CVector psi = std::sqrt(std::min(trace, P_m - P)) * principal;
        const double g = rates::dest_beam_gain(sc, psi);
        if (g > slope * P) psi *= slope * P > 0.0 ? std::sqrt(slope * P / g) : 0.0;
        best.Ps1 = P;
        best.psi = psi;
        const double raw = rates::raw_secrecy_objective(sc, P, psi);
        best.clamped = raw < 0.0;
        best.secrecy_rate = std::max(0.0, raw);
    }
    double best_raw = rates::raw_secrecy_objective(sc, best.Ps1, best.psi);
    for (const CVector& v : directions) {
        const SplitResult sp = best_split(sc, P_m, v);
        if (sp.value > best_raw) {
            best_raw = sp.value;
            best = from_split(sc, sp, v);
        }
    }
    best.rank1_defect = pd.rank1_defect;
    best.rounded = rounded;
    return best;
}

}  // namespace secret_detail

/// Problem 1 at budget P_m. `stream` seeds the rounding RNG so concurrent
/// solves at different budgets stay reproducible.
inline SecretAllocation solve_problem1(const ChannelScenario& sc, double P_m, const SolveConfig& cfg,
                                       std::uint64_t stream = 0) {
    if (!(P_m >= 0.0) || !std::isfinite(P_m)) throw std::invalid_argument("solve_problem1: P_m must be nonnegative");
    const int n = sc.n_relays;
    SecretAllocation zero;
    zero.psi = CVector::Zero(n);
    if (P_m == 0.0) return zero;
    const double a0 = std::norm(sc.alpha0);
    // Relays decode less than the destination unless all source power is
    // withheld, and then no beam can be formed either.
    if (rates::min_relay_gain(sc) < a0) return zero;

    const double snr = P_m / sc.noise_power;
    const CMatrix A = rates::dest_form(sc);

    if (sc.n_eves == 0) {
        cone::ConeProgram prog(n, 1);
        prog.objective_psd = -A;
        prog.objective_scalars = RVector::Constant(1, -a0);
        for (int i = 0; i < n; ++i) {
            auto& c = prog.add(cone::Sense::GreaterEqual, 0.0);
            c.psd = -A;
            c.scalars(0) = std::norm(sc.gamma(i)) - a0;
        }
        auto& pw = prog.add(cone::Sense::LessEqual, 1.0);
        pw.psd = CMatrix::Identity(n, n);
        pw.scalars(0) = 1.0;
        const auto sol = secret_detail::checked_solve(prog, cfg.sdp_tol, "secret message, no eavesdropper");
        const auto r = secret_detail::clean(sol.scalars(0), sol.psd_matrix);
        SecretAllocation out = secret_detail::recover(sc, P_m, P_m * r.p, P_m * r.Q, cfg.rng_seed, stream);
        out.relaxation_rate = 0.5 * std::log2(1.0 + snr * -sol.objective_value);
        out.relaxation_rate = std::max(out.relaxation_rate, out.secrecy_rate);
        return out;
    }

    double lo = 0.0;
    double hi = 0.5 * std::log2(t_upper_bound(sc, P_m));
    secret_detail::Relaxed sol_lo{0.0, CMatrix::Zero(n, n)};
    int iters = 0;
    while (hi - lo > cfg.secrecy_bisect_tol && iters < max_bisect_iterations) {
        ++iters;
        const double mid = 0.5 * (lo + hi);
        const double t = std::exp2(2.0 * mid);
        const auto prog = build_phase1_program(sc, P_m, t);
        const auto sol = secret_detail::checked_solve(prog, cfg.sdp_tol, "secret message phase-1");
        const double K = secret_detail::slack_offset(sc, t, snr);
        const double slack = sol.scalars(1) - K;
        if (slack >= -cfg.sdp_tol * (1.0 + t)) {
            const auto r = secret_detail::clean(sol.scalars(0), sol.psd_matrix);
            const double achieved = 0.5 * std::log2(secret_detail::relaxed_ratio(sc, snr, r.p, r.Q));
            lo = std::min(hi, std::max(mid, achieved));
            sol_lo = r;
        } else {
            hi = mid;
        }
    }

    SecretAllocation out =
        secret_detail::recover(sc, P_m, P_m * sol_lo.p, P_m * sol_lo.Q, cfg.rng_seed, stream);
    out.bisect_iters = iters;
    out.relaxation_rate = std::max(hi, out.secrecy_rate);
    return out;
}

}  // namespace dfsec

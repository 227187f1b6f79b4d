#pragma once

/// @file public.hpp
/// Minimum-power allocation for the public message given the secret-message
/// allocation (Ps1, psi) and the residual budget.

#include "dfsec/cone.hpp"
#include "dfsec/rates.hpp"
#include "dfsec/scenario.hpp"
#include "dfsec/secret.hpp"
#include "dfsec/solution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace dfsec {

namespace public_detail {

inline constexpr double budget_slack = 1e-12;

inline CVector dest_direction(const ChannelScenario& sc) {
    const CVector u = sc.alpha.conjugate();
    if (u.norm() == 0.0) return CVector::Unit(sc.n_relays, 0);
    return u.normalized();
}

inline double snr_target(const SolveConfig& cfg) { return std::exp2(2.0 * cfg.public_rate) - 1.0; }

/// Smallest Ps0 that lets every relay decode the public symbol.
inline double relay_floor(const ChannelScenario& sc, double g, double Ps1) {
    double L = 0.0;
    for (int i = 0; i < sc.n_relays; ++i)
        L = std::max(L, g * (sc.noise_power / std::norm(sc.gamma(i)) + Ps1));
    return L;
}

inline int dead_relay(const ChannelScenario& sc) {
    for (int i = 0; i < sc.n_relays; ++i)
        if (std::norm(sc.gamma(i)) == 0.0) return i;
    return -1;
}

inline PublicAllocation trivial(const ChannelScenario& sc, PublicVariant variant) {
    PublicAllocation out;
    out.feasible = true;
    out.variant = variant;
    out.phi_u = dest_direction(sc);
    return out;
}

/// Coverage requirement  x * sx + y * sy >= g  for (Ps0, PR0) = (x, y).
struct Coverage {
    double sx = 0.0, sy = 0.0;
};

/// Minimizes Ps0 + PR0 with Ps0 >= L and the coverage half-planes by
/// enumerating the vertices of the boundary arrangement.
inline bool min_total_vertex(double L, double g, const std::vector<Coverage>& cov, double& Ps0, double& PR0) {
    struct Line {
        double a, b, c;
    };
    std::vector<Line> lines = {{1.0, 0.0, L}, {1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}};
    for (const auto& c : cov) lines.push_back({c.sx, c.sy, g});
    auto ok = [&](double x, double y) {
        if (x < L * (1.0 - 1e-14) || y < 0.0) return false;
        for (const auto& c : cov)
            if (c.sx * x + c.sy * y < g * (1.0 - 1e-13)) return false;
        return true;
    };
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < lines.size(); ++p)
        for (std::size_t q = p + 1; q < lines.size(); ++q) {
            const double det = lines[p].a * lines[q].b - lines[q].a * lines[p].b;
            if (det == 0.0) continue;
            const double x = (lines[p].c * lines[q].b - lines[q].c * lines[p].b) / det;
            const double y = (lines[p].a * lines[q].c - lines[q].a * lines[p].c) / det;
            if (ok(x, y) && x + y < best) {
                best = x + y;
                Ps0 = std::max(x, L);
                PR0 = std::max(0.0, y);
            }
        }
    return std::isfinite(best);
}

}  // namespace public_detail

/// Destination-only variant: the relay beam points along alpha* and the
/// remaining two-variable program has a closed-form optimum.
inline PublicAllocation solve_problem2_dest(const ChannelScenario& sc, const SolveConfig& cfg, double Ps1,
                                            const CVector& psi, double budget) {
    using namespace public_detail;
    if (cfg.public_rate <= 0.0) return trivial(sc, PublicVariant::DestOnly);
    PublicAllocation out;
    out.variant = PublicVariant::DestOnly;
    out.phi_u = dest_direction(sc);
    if (int i = dead_relay(sc); i >= 0) {
        out.reason = "relay " + std::to_string(i) + " has a zero source gain and cannot decode the public message";
        out.total = std::numeric_limits<double>::infinity();
        return out;
    }
    const double n0 = sc.noise_power;
    const double g = snr_target(cfg);
    const double L = relay_floor(sc, g, Ps1);
    const double a0 = std::norm(sc.alpha0);
    const double e = a0 / (n0 + Ps1 * a0);
    const double f = sc.alpha.squaredNorm() / (n0 + rates::dest_beam_gain(sc, psi));

    double best = std::numeric_limits<double>::infinity();
    // Relay floor binding, destination topped up by the relay beam.
    if (f > 0.0 || e * L >= g) {
        const double pr = f > 0.0 ? std::max(0.0, (g - e * L) / f) : 0.0;
        best = L + pr;
        out.Ps0 = L;
        out.PR0 = pr;
    }
    // Direct link alone.
    if (e > 0.0) {
        const double ps = std::max(L, g / e);
        if (ps < best) {
            best = ps;
            out.Ps0 = ps;
            out.PR0 = 0.0;
        }
    }
    out.total = best;
    if (!std::isfinite(best)) {
        out.reason = "destination has no usable link for the public message";
        out.Ps0 = out.PR0 = 0.0;
        return out;
    }
    out.feasible = best <= budget + budget_slack;
    if (!out.feasible) out.reason = "public message needs " + std::to_string(best) + " but the budget is " + std::to_string(budget);
    return out;
}

/// Variant where every eavesdropper must also decode the public message.
/// Stage A solves the rank-relaxed minimum-power program, Stage B takes the
/// principal direction of the relaxed beam, and Stage C re-optimizes the two
/// powers along it.
inline PublicAllocation solve_problem2_eve(const ChannelScenario& sc, const SolveConfig& cfg, double Ps1,
                                           const CVector& psi, double budget) {
    using namespace public_detail;
    if (sc.eve_csi != EveCsi::Perfect)
        throw std::invalid_argument("solve_problem2_eve: eavesdropper decoding needs instantaneous CSI");
    if (sc.n_eves == 0) {
        PublicAllocation out = solve_problem2_dest(sc, cfg, Ps1, psi, budget);
        out.variant = PublicVariant::EveDecode;
        return out;
    }
    if (cfg.public_rate <= 0.0) return trivial(sc, PublicVariant::EveDecode);
    PublicAllocation out;
    out.variant = PublicVariant::EveDecode;
    out.phi_u = dest_direction(sc);
    out.total = std::numeric_limits<double>::infinity();
    if (int i = dead_relay(sc); i >= 0) {
        out.reason = "relay " + std::to_string(i) + " has a zero source gain and cannot decode the public message";
        return out;
    }
    if (!(budget > 0.0)) {
        out.reason = "no power left for the public message";
        return out;
    }

    const int n = sc.n_relays;
    const double n0 = sc.noise_power;
    const double g = snr_target(cfg);
    const double L = relay_floor(sc, g, Ps1);
    const double a0 = std::norm(sc.alpha0);
    const double dest_noise = n0 + rates::dest_beam_gain(sc, psi);
    const CMatrix A = rates::dest_form(sc);

    // Stage A, in units of the budget: x = Ps0 / B, F = Phi / B.
    cone::ConeProgram prog(n, 1);
    prog.objective_psd = CMatrix::Identity(n, n);
    prog.objective_scalars = RVector::Ones(1);
    {
        auto& c = prog.add(cone::Sense::GreaterEqual, L / budget);
        c.scalars(0) = 1.0;
    }
    {
        auto& c = prog.add(cone::Sense::GreaterEqual, g);
        c.scalars(0) = budget * a0 / (n0 + Ps1 * a0);
        c.psd = (budget / dest_noise) * A;
    }
    for (int j = 0; j < sc.n_eves; ++j) {
        const double e0 = rates::eve_direct_gain(sc, j);
        auto& c = prog.add(cone::Sense::GreaterEqual, g);
        c.scalars(0) = budget * e0 / (n0 + Ps1 * e0);
        c.psd = (budget / (n0 + rates::eve_beam_gain(sc, j, psi))) * rates::eve_form(sc, j);
    }
    {
        auto& c = prog.add(cone::Sense::LessEqual, 1.0);
        c.scalars(0) = 1.0;
        c.psd = CMatrix::Identity(n, n);
    }
    const cone::ConeSolution sol = cone::solve(prog, cfg.sdp_tol);
    if (sol.status == cone::Status::Infeasible) {
        out.reason = "relaxed eavesdropper-decoding program is infeasible within the budget";
        out.certificate = sol.certificate;
        return out;
    }
    if (sol.status != cone::Status::Optimal && sol.kkt.max() > std::sqrt(cfg.sdp_tol))
        throw SolverError("public message relaxation: kernel reported " + std::string(cone::to_string(sol.status)) +
                          " with KKT residual " + std::to_string(sol.kkt.max()));

    // Stage B.
    const auto pd = cone::principal_direction(sol.psd_matrix);
    if (pd.eigenvalue > 1e-12) out.phi_u = pd.vector;
    out.rank_defect = pd.rank1_defect;
    out.suboptimal_rank_defect = pd.rank1_defect > rank_one_threshold;

    // Stage C.
    std::vector<Coverage> cov;
    cov.push_back({a0 / (n0 + Ps1 * a0), rates::beam_gain(sc.alpha, out.phi_u) / dest_noise});
    for (int j = 0; j < sc.n_eves; ++j) {
        const double e0 = rates::eve_direct_gain(sc, j);
        cov.push_back({e0 / (n0 + Ps1 * e0),
                       rates::eve_beam_gain(sc, j, out.phi_u) / (n0 + rates::eve_beam_gain(sc, j, psi))});
    }
    double Ps0 = 0.0, PR0 = 0.0;
    if (!min_total_vertex(L, g, cov, Ps0, PR0)) {
        out.reason = "no power split along the chosen relay direction reaches every receiver";
        return out;
    }
    out.Ps0 = Ps0;
    out.PR0 = PR0;
    out.total = Ps0 + PR0;
    out.feasible = out.total <= budget + budget_slack;
    if (!out.feasible)
        out.reason = "public message needs " + std::to_string(out.total) + " along the relaxed direction but the budget is " +
                     std::to_string(budget);
    return out;
}

inline PublicAllocation solve_problem2(const ChannelScenario& sc, const SolveConfig& cfg, double Ps1, const CVector& psi,
                                       double budget) {
    return cfg.eve_must_decode_public ? solve_problem2_eve(sc, cfg, Ps1, psi, budget)
                                      : solve_problem2_dest(sc, cfg, Ps1, psi, budget);
}

}  // namespace dfsec

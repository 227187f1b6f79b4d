#pragma once

/// @file allocator.hpp
/// Outer search over the split of the total power between the two messages,
/// and parameter sweeps built on it.

#include "dfsec/public.hpp"
#include "dfsec/rates.hpp"
#include "dfsec/scenario.hpp"
#include "dfsec/secret.hpp"
#include "dfsec/solution.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace dfsec {

/// P_T is cut into M steps; the secret message gets P_m = m P_T / M and the
/// public message the rest. m is searched from the top down and the first m
/// whose public allocation fits wins. With verify_monotone every m is solved
/// and the secrecy rate is checked to be nondecreasing in m.
inline FullSolution allocate(const ChannelScenario& sc, const SolveConfig& cfg) {
    const int M = cfg.power_steps;
    const double P_T = cfg.total_power;
    const double delta = P_T / M;
    const int m_top = cfg.include_m_equals_M ? M : M - 1;

    FullSolution out;
    std::vector<SecretAllocation> secrets;
    for (int m = m_top; m >= 0; --m) {
        const double P_m = m == M ? P_T : m * delta;
        SecretAllocation sec = solve_problem1(sc, P_m, cfg, static_cast<std::uint64_t>(m));
        const double budget = std::max(0.0, P_T - P_m);
        PublicAllocation pub = solve_problem2(sc, cfg, sec.Ps1, sec.psi, budget);
        out.trace.push_back({m, P_m, sec.secrecy_rate, pub.feasible, pub.total});
        if (pub.feasible && !out.m_star) {
            out.m_star = m;
            out.P_m = P_m;
            out.secret = sec;
            out.nonsecret = pub;
            out.status = SolveStatus::Solved;
            if (!cfg.verify_monotone) break;
        }
    }
    if (cfg.verify_monotone) {
        // The trace runs from high m to low m.
        const double tol = 2.0 * cfg.secrecy_bisect_tol;
        for (std::size_t k = 1; k < out.trace.size(); ++k)
            if (out.trace[k].secrecy_rate > out.trace[k - 1].secrecy_rate + tol) out.monotone_ok = false;
    }
    if (!out.m_star) {
        out.status = SolveStatus::PublicInfeasible;
        out.secret = SecretAllocation{};
        out.secret.psi = CVector::Zero(sc.n_relays);
        out.nonsecret = PublicAllocation{};
        out.nonsecret.variant = cfg.eve_must_decode_public ? PublicVariant::EveDecode : PublicVariant::DestOnly;
        out.nonsecret.phi_u = CVector::Zero(sc.n_relays);
        out.nonsecret.reason = "public rate is not reachable even with the whole budget";
        if (!out.trace.empty()) out.nonsecret.total = out.trace.back().public_total;
    }
    out.rates = rates::evaluate(sc, out);
    if (out.status == SolveStatus::PublicInfeasible) out.rates.secrecy_rate = 0.0;
    return out;
}

enum class SweepAxis { TotalPowerDb, PublicRate };

inline std::string_view to_string(SweepAxis a) { return a == SweepAxis::TotalPowerDb ? "power_db" : "public_rate"; }

struct SweepRow {
    double value = 0.0;
    FullSolution solution;
    std::string error;  // set when the point failed; the sweep goes on
};

/// Evenly spaced grid from `from` to `to` inclusive.
inline std::vector<double> linspace(double from, double to, int points) {
    if (points < 1) throw std::invalid_argument("linspace: need at least one point");
    std::vector<double> out(points);
    for (int k = 0; k < points; ++k) out[k] = points == 1 ? from : from + (to - from) * k / (points - 1);
    return out;
}

inline SolveConfig at_point(const ChannelScenario& sc, SolveConfig cfg, SweepAxis axis, double value) {
    if (axis == SweepAxis::TotalPowerDb)
        set_total_power_db(cfg, value, sc.noise_power);
    else
        cfg.public_rate = value;
    return cfg;
}

/// One allocation per grid value. Points run on `jobs` threads; rows come
/// back in grid order.
inline std::vector<SweepRow> sweep(const ChannelScenario& sc, const SolveConfig& cfg, SweepAxis axis,
                                   const std::vector<double>& grid, int jobs = 1) {
    if (grid.empty()) throw std::invalid_argument("sweep: grid is empty");
    if (!std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("sweep: grid must be sorted");
    std::vector<SweepRow> rows(grid.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < grid.size(); k = next++) {
            rows[k].value = grid[k];
            try {
                const SolveConfig point = at_point(sc, cfg, axis, grid[k]);
                validate(point);
                rows[k].solution = allocate(sc, point);
            } catch (const std::exception& e) {
                rows[k].error = e.what();
            }
        }
    };
    const int n = std::clamp(jobs, 1, static_cast<int>(grid.size()));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rows;
}

}  // namespace dfsec

#pragma once

/// @file oracle.hpp
/// Brute-force reference solutions for small networks (N <= 2). These share
/// only the rate formulas with the solvers, never their optimization code.

#include "dfsec/rates.hpp"
#include "dfsec/scenario.hpp"
#include "dfsec/solution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace dfsec::oracle {

struct GridResolution {
    int ps1_points = 201;
    int theta_points = 91;   // magnitude split between the two basis vectors
    int phase_points = 360;  // relative phase
};

namespace detail {

inline void require_small(const ChannelScenario& sc, const char* who) {
    if (sc.n_relays > 2) throw std::invalid_argument(std::string(who) + ": oracle supports at most 2 relays");
}

/// Unit vectors along alpha* and its orthogonal complement.
inline std::pair<CVector, CVector> beam_basis(const ChannelScenario& sc) {
    const int n = sc.n_relays;
    CVector a1 = sc.alpha.conjugate();
    if (a1.norm() == 0.0) a1 = CVector::Unit(n, 0);
    a1.normalize();
    CVector a2 = CVector::Zero(n);
    if (n == 2) {
        a2(0) = -std::conj(a1(1));
        a2(1) = std::conj(a1(0));
    }
    return {a1, a2};
}

inline std::vector<CVector> beam_directions(const ChannelScenario& sc, const GridResolution& res) {
    const auto [a1, a2] = beam_basis(sc);
    std::vector<CVector> out;
    if (sc.n_relays == 1) {
        out.push_back(a1);
        return out;
    }
    const double pi = std::numbers::pi;
    for (int k = 0; k < res.theta_points; ++k) {
        const double theta = res.theta_points == 1 ? 0.0 : 0.5 * pi * k / (res.theta_points - 1);
        const int phases = (k == 0) ? 1 : res.phase_points;
        for (int l = 0; l < phases; ++l) {
            const double phi = 2.0 * pi * l / res.phase_points;
            out.push_back(std::cos(theta) * a1 + std::sin(theta) * std::polar(1.0, phi) * a2);
        }
    }
    return out;
}

}  // namespace detail

/// Exhaustive search over the source power grid and the beam direction grid.
/// For each (Ps1, direction) the beam power is optimized exactly: the
/// objective is monotone between the points where two eavesdropper terms
/// cross, so only those points and the interval ends are evaluated.
inline SecretAllocation grid_problem1(const ChannelScenario& sc, double P_m, const GridResolution& res = {}) {
    detail::require_small(sc, "grid_problem1");
    if (!(P_m >= 0.0)) throw std::invalid_argument("grid_problem1: P_m must be nonnegative");
    const int n = sc.n_relays;
    SecretAllocation best;
    best.psi = CVector::Zero(n);
    best.secrecy_rate = 0.0;
    if (P_m == 0.0) return best;

    const int J = sc.n_eves;
    const double n0 = sc.noise_power;
    const double a0 = std::norm(sc.alpha0);
    double gmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) gmin = std::min(gmin, std::norm(sc.gamma(i)));
    std::vector<double> e(J);
    for (int j = 0; j < J; ++j) e[j] = rates::eve_direct_gain(sc, j);

    const auto dirs = detail::beam_directions(sc, res);
    double best_raw = rates::raw_secrecy_objective(sc, 0.0, best.psi);
    double best_P = 0.0, best_s = 0.0;
    std::size_t best_dir = 0;

    std::vector<double> b(J), cand;
    for (std::size_t di = 0; di < dirs.size(); ++di) {
        const CVector& v = dirs[di];
        const double d = rates::beam_gain(sc.alpha, v);
        for (int j = 0; j < J; ++j) b[j] = rates::eve_beam_gain(sc, j, v);
        for (int k = 0; k < res.ps1_points; ++k) {
            const double P = res.ps1_points == 1 ? P_m : P_m * k / (res.ps1_points - 1);
            // Relay decoding: P gmin >= P a0 + s d.
            double s_max = P_m - P;
            const double room = P * (gmin - a0);
            if (room < 0.0) continue;
            if (d > 0.0) s_max = std::min(s_max, room / d);
            s_max = std::max(0.0, s_max);
            cand.assign({0.0, s_max});
            for (int j = 0; j < J; ++j)
                for (int l = j + 1; l < J; ++l) {
                    const double db = b[l] - b[j];
                    if (db == 0.0) continue;
                    const double s = P * (e[j] - e[l]) / db;
                    if (s > 0.0 && s < s_max) cand.push_back(s);
                }
            for (double s : cand) {
                const double num = n0 + P * a0 + s * d;
                double den = n0;
                for (int j = 0; j < J; ++j) den = std::max(den, n0 + P * e[j] + s * b[j]);
                const double raw = 0.5 * std::log2(num / den);
                if (raw > best_raw) {
                    best_raw = raw;
                    best_P = P;
                    best_s = s;
                    best_dir = di;
                }
            }
        }
    }
    best.Ps1 = best_P;
    best.psi = std::sqrt(best_s) * dirs[best_dir];
    const double raw = rates::raw_secrecy_objective(sc, best.Ps1, best.psi);
    best.clamped = raw < 0.0;
    best.secrecy_rate = std::max(0.0, raw);
    best.relaxation_rate = best.secrecy_rate;
    return best;
}

/// Minimize x + y subject to a_k x + b_k y >= c_k and x, y >= 0 by checking
/// every pairwise intersection of the constraint boundaries and the axes.
struct HalfPlane {
    double a = 0.0, b = 0.0, c = 0.0;
};

struct Lp2Result {
    bool feasible = false;
    double x = 0.0, y = 0.0;
};

inline Lp2Result lp2_min_total(const std::vector<HalfPlane>& cons) {
    std::vector<HalfPlane> lines = cons;
    lines.push_back({1.0, 0.0, 0.0});
    lines.push_back({0.0, 1.0, 0.0});
    auto satisfied = [&](double x, double y) {
        if (x < 0.0 || y < 0.0) return false;
        for (const auto& h : cons) {
            const double lhs = h.a * x + h.b * y;
            if (lhs < h.c - 1e-12 * std::max({1.0, std::abs(h.c), std::abs(h.a * x), std::abs(h.b * y)})) return false;
        }
        return true;
    };
    Lp2Result best;
    double best_total = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < lines.size(); ++p)
        for (std::size_t q = p + 1; q < lines.size(); ++q) {
            const auto& l1 = lines[p];
            const auto& l2 = lines[q];
            const double det = l1.a * l2.b - l2.a * l1.b;
            if (det == 0.0) continue;
            const double x = (l1.c * l2.b - l2.c * l1.b) / det;
            const double y = (l1.a * l2.c - l2.a * l1.c) / det;
            if (!satisfied(x, y)) continue;
            if (x + y < best_total) {
                best_total = x + y;
                best = {true, std::max(0.0, x), std::max(0.0, y)};
            }
        }
    return best;
}

/// Destination-only public allocation as a generic two-variable LP with one
/// half-plane per relay and one for the destination.
inline PublicAllocation vertex_problem2_dest(const ChannelScenario& sc, const SolveConfig& cfg, double Ps1,
                                             const CVector& psi, double budget) {
    PublicAllocation out;
    out.variant = PublicVariant::DestOnly;
    CVector u = sc.alpha.conjugate();
    out.phi_u = u.norm() > 0.0 ? CVector(u.normalized()) : CVector(CVector::Unit(sc.n_relays, 0));
    const double g = std::exp2(2.0 * cfg.public_rate) - 1.0;
    const double n0 = sc.noise_power;
    std::vector<HalfPlane> cons;
    for (int i = 0; i < sc.n_relays; ++i) {
        const double gi = std::norm(sc.gamma(i));
        cons.push_back({gi, 0.0, g * (n0 + Ps1 * gi)});
    }
    const double a0 = std::norm(sc.alpha0);
    cons.push_back({a0 / (n0 + Ps1 * a0), rates::beam_gain(sc.alpha, out.phi_u) / (n0 + rates::beam_gain(sc.alpha, psi)), g});
    const auto r = lp2_min_total(cons);
    out.Ps0 = r.x;
    out.PR0 = r.y;
    out.total = r.x + r.y;
    out.feasible = r.feasible && out.total <= budget + 1e-12;
    if (!r.feasible) out.total = std::numeric_limits<double>::infinity();
    return out;
}

/// Dense grid over (Ps0, PR0) in [0, budget]^2 with the relay direction held
/// fixed, followed by a few zoomed passes around the best point.
inline PublicAllocation grid_problem2(const ChannelScenario& sc, const SolveConfig& cfg, double Ps1, const CVector& psi,
                                      double budget, PublicVariant variant,
                                      const std::optional<CVector>& phi_u = std::nullopt, int points = 2000,
                                      int zoom_rounds = 4) {
    detail::require_small(sc, "grid_problem2");
    PublicAllocation out;
    out.variant = variant;
    if (phi_u) {
        out.phi_u = *phi_u;
    } else {
        CVector u = sc.alpha.conjugate();
        out.phi_u = u.norm() > 0.0 ? CVector(u.normalized()) : CVector(CVector::Unit(sc.n_relays, 0));
    }
    const double R0 = cfg.public_rate;
    if (R0 <= 0.0) {
        out.feasible = true;
        return out;
    }
    if (!(budget > 0.0)) return out;

    auto feasible = [&](double Ps0, double PR0) {
        const CVector phi = std::sqrt(PR0) * out.phi_u;
        for (int i = 0; i < sc.n_relays; ++i)
            if (rates::relay_public_rate(sc, i, Ps0, Ps1) < R0) return false;
        if (rates::dest_public_rate(sc, Ps0, Ps1, phi, psi) < R0) return false;
        if (variant == PublicVariant::EveDecode)
            for (int j = 0; j < sc.n_eves; ++j)
                if (rates::eve_public_rate(sc, j, Ps0, Ps1, phi, psi) < R0) return false;
        return true;
    };

    double best_total = std::numeric_limits<double>::infinity();
    double bx = 0.0, by = 0.0;
    auto scan = [&](double x0, double y0, double h, int nx, int ny) {
        for (int k = 0; k <= ny; ++k) {
            const double y = y0 + k * h;
            if (y < 0.0 || y > budget) continue;
            // Every rate grows with Ps0, so the first feasible point of a
            // row is its cheapest.
            for (int i = 0; i <= nx; ++i) {
                const double x = x0 + i * h;
                if (x < 0.0) continue;
                if (x + y > budget || x + y >= best_total) break;
                if (feasible(x, y)) {
                    best_total = x + y;
                    bx = x;
                    by = y;
                    break;
                }
            }
        }
    };
    double h = budget / points;
    scan(0.0, 0.0, h, points, points);
    if (!std::isfinite(best_total)) return out;
    for (int r = 0; r < zoom_rounds; ++r) {
        const double w = 5.0 * h;
        h /= 10.0;
        scan(bx - w, by - w, h, 100, 100);
    }
    out.feasible = true;
    out.Ps0 = bx;
    out.PR0 = by;
    out.total = best_total;
    return out;
}

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Monte-Carlo value of the ergodic secrecy objective: the destination rate
/// minus the largest expected eavesdropper rate, with eavesdropper gains
/// drawn from their circular normal distributions. std_error is that of the
/// sample mean for the maximizing eavesdropper.
inline McEstimate mc_ergodic_objective(const ChannelScenario& sc, double Ps1, const CVector& psi, int samples,
                                       std::uint64_t seed) {
    if (sc.eve_csi != EveCsi::Statistical)
        throw std::invalid_argument("mc_ergodic_objective: requires statistical eavesdropper CSI");
    if (samples < 1000) throw std::invalid_argument("mc_ergodic_objective: at least 1000 samples required");
    const int n = sc.n_relays;
    const double n0 = sc.noise_power;
    const double dest = rates::dest_secret_rate(sc, Ps1, psi);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x6d63u};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> nd;

    McEstimate out{dest, 0.0};
    double worst = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < sc.n_eves; ++j) {
        const double sd0 = std::sqrt(0.5 * sc.sigma2_beta0(j));
        RVector sd(n);
        for (int i = 0; i < n; ++i) sd(i) = std::sqrt(0.5 * sc.sigma2_beta(j, i));
        double sum = 0.0, sum2 = 0.0;
        for (int k = 0; k < samples; ++k) {
            const Complex b0(sd0 * nd(rng), sd0 * nd(rng));
            Complex beam = 0.0;
            for (int i = 0; i < n; ++i) beam += Complex(sd(i) * nd(rng), sd(i) * nd(rng)) * psi(i);
            const double rate = 0.5 * std::log2(1.0 + (Ps1 * std::norm(b0) + std::norm(beam)) / n0);
            sum += rate;
            sum2 += rate * rate;
        }
        const double mean = sum / samples;
        const double var = std::max(0.0, (sum2 - samples * mean * mean) / (samples - 1));
        if (mean > worst) {
            worst = mean;
            out.mean = dest - mean;
            out.std_error = std::sqrt(var / samples);
        }
    }
    return out;
}

}  // namespace dfsec::oracle

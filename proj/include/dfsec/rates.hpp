#pragma once

/// @file rates.hpp
/// Information rates and decode constraints of the two-hop relay network.
/// Every rate carries the 1/2 pre-log of the two-hop schedule and is in bits
/// per channel use. Quadratic forms psi* a* a psi are evaluated as |a psi|^2.

#include "dfsec/scenario.hpp"
#include "dfsec/solution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dfsec::rates {

inline constexpr double constraint_tolerance = 1e-7;

namespace detail {

inline void check_relay(const ChannelScenario& sc, int i) {
    if (i < 0 || i >= sc.n_relays) throw std::out_of_range("relay index out of range");
}

inline void check_eve(const ChannelScenario& sc, int j) {
    if (j < 0 || j >= sc.n_eves) throw std::out_of_range("eavesdropper index out of range");
}

inline void check_len(const ChannelScenario& sc, const CVector& v, const char* name) {
    if (v.size() != 0 && v.size() != sc.n_relays)
        throw std::invalid_argument(std::string(name) + " must have n_relays entries");
}

}  // namespace detail

inline double half_log2(double x) { return 0.5 * std::log2(x); }

/// |<row, v>|^2 with the bilinear (unconjugated) product of the model.
inline double beam_gain(const CVector& row, const CVector& v) {
    if (v.size() == 0) return 0.0;
    return std::norm((row.array() * v.array()).sum());
}

inline double dest_beam_gain(const ChannelScenario& sc, const CVector& v) {
    detail::check_len(sc, v, "beam");
    return beam_gain(sc.alpha, v);
}

/// psi* B_j psi: the instantaneous rank-one form, or psi* Lambda_j psi when
/// only the eavesdropper statistics are known.
inline double eve_beam_gain(const ChannelScenario& sc, int j, const CVector& v) {
    detail::check_eve(sc, j);
    detail::check_len(sc, v, "beam");
    if (v.size() == 0) return 0.0;
    if (sc.eve_csi == EveCsi::Perfect) return beam_gain(sc.beta.row(j).transpose(), v);
    return (sc.sigma2_beta.row(j).transpose().array() * v.array().abs2()).sum();
}

/// |beta_0j|^2, or its variance in statistical mode.
inline double eve_direct_gain(const ChannelScenario& sc, int j) {
    detail::check_eve(sc, j);
    return sc.eve_csi == EveCsi::Perfect ? std::norm(sc.beta0(j)) : sc.sigma2_beta0(j);
}

/// Matrix of the eavesdropper quadratic form (rank one, or diagonal).
inline CMatrix eve_form(const ChannelScenario& sc, int j) {
    detail::check_eve(sc, j);
    if (sc.eve_csi == EveCsi::Perfect) {
        const CVector b = sc.beta.row(j).transpose();
        return b.conjugate() * b.transpose();
    }
    return sc.sigma2_beta.row(j).transpose().cast<Complex>().asDiagonal();
}

inline CMatrix dest_form(const ChannelScenario& sc) {
    return sc.alpha.conjugate() * sc.alpha.transpose();
}

inline double min_relay_gain(const ChannelScenario& sc) {
    return sc.gamma.cwiseAbs2().minCoeff();
}

/// Public symbol at relay i, secret symbol treated as noise.
inline double relay_public_rate(const ChannelScenario& sc, int i, double Ps0, double Ps1) {
    detail::check_relay(sc, i);
    const double g = std::norm(sc.gamma(i));
    return half_log2(1.0 + Ps0 * g / (sc.noise_power + Ps1 * g));
}

/// Public symbol at the destination, combining both hops.
inline double dest_public_rate(const ChannelScenario& sc, double Ps0, double Ps1, const CVector& phi,
                               const CVector& psi) {
    detail::check_len(sc, phi, "phi");
    detail::check_len(sc, psi, "psi");
    const double a0 = std::norm(sc.alpha0);
    const double n0 = sc.noise_power;
    return half_log2(1.0 + Ps0 * a0 / (n0 + Ps1 * a0) +
                     beam_gain(sc.alpha, phi) / (n0 + beam_gain(sc.alpha, psi)));
}

/// Secret symbol at relay i given the public symbol.
inline double relay_secret_rate(const ChannelScenario& sc, int i, double Ps1) {
    detail::check_relay(sc, i);
    return half_log2(1.0 + Ps1 * std::norm(sc.gamma(i)) / sc.noise_power);
}

inline double dest_secret_rate(const ChannelScenario& sc, double Ps1, const CVector& psi) {
    detail::check_len(sc, psi, "psi");
    return half_log2(1.0 + (Ps1 * std::norm(sc.alpha0) + beam_gain(sc.alpha, psi)) / sc.noise_power);
}

/// Secret symbol at eavesdropper j, which is assumed to know the public
/// symbol. In statistical mode this is the Jensen surrogate.
inline double eve_secret_rate(const ChannelScenario& sc, int j, double Ps1, const CVector& psi) {
    return half_log2(1.0 + (Ps1 * eve_direct_gain(sc, j) + eve_beam_gain(sc, j, psi)) / sc.noise_power);
}

/// Public symbol at eavesdropper j, secret symbol treated as noise.
inline double eve_public_rate(const ChannelScenario& sc, int j, double Ps0, double Ps1, const CVector& phi,
                              const CVector& psi) {
    const double e0 = eve_direct_gain(sc, j);
    const double n0 = sc.noise_power;
    return half_log2(1.0 + Ps0 * e0 / (n0 + Ps1 * e0) +
                     eve_beam_gain(sc, j, phi) / (n0 + eve_beam_gain(sc, j, psi)));
}

/// Worst-case secrecy rate of the secret message without the {.}^+ clamp.
inline double raw_secrecy_objective(const ChannelScenario& sc, double Ps1, const CVector& psi) {
    const double dest = dest_secret_rate(sc, Ps1, psi);
    double worst = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < sc.n_eves; ++j) worst = std::max(worst, eve_secret_rate(sc, j, Ps1, psi));
    return sc.n_eves == 0 ? dest : dest - worst;
}

inline double secrecy_objective(const ChannelScenario& sc, double Ps1, const CVector& psi) {
    return std::max(0.0, raw_secrecy_objective(sc, Ps1, psi));
}

inline RateReport evaluate(const ChannelScenario& sc, double Ps0, double Ps1, const CVector& phi,
                           const CVector& psi) {
    RateReport r;
    r.relay_public_rates.resize(sc.n_relays);
    r.relay_secret_rates.resize(sc.n_relays);
    for (int i = 0; i < sc.n_relays; ++i) {
        r.relay_public_rates(i) = relay_public_rate(sc, i, Ps0, Ps1);
        r.relay_secret_rates(i) = relay_secret_rate(sc, i, Ps1);
    }
    r.dest_public_rate = dest_public_rate(sc, Ps0, Ps1, phi, psi);
    r.dest_secret_rate = dest_secret_rate(sc, Ps1, psi);
    r.eve_secret_rates.resize(sc.n_eves);
    r.eve_public_rates.resize(sc.n_eves);
    for (int j = 0; j < sc.n_eves; ++j) {
        r.eve_secret_rates(j) = eve_secret_rate(sc, j, Ps1, psi);
        r.eve_public_rates(j) = eve_public_rate(sc, j, Ps0, Ps1, phi, psi);
    }
    r.secrecy_rate = secrecy_objective(sc, Ps1, psi);
    return r;
}

inline RateReport evaluate(const ChannelScenario& sc, const FullSolution& sol) {
    return evaluate(sc, sol.nonsecret.Ps0, sol.secret.Ps1, sol.nonsecret.phi(), sol.secret.psi);
}

struct Violation {
    std::string constraint;
    int index = 0;
    double slack = 0.0;
};

/// Audits every constraint of the joint problem. Violations are slacks below
/// -constraint_tolerance; the list is empty iff the solution is feasible.
inline std::vector<Violation> check_constraints(const ChannelScenario& sc, const SolveConfig& cfg,
                                                const FullSolution& sol) {
    std::vector<Violation> out;
    auto audit = [&](const char* name, int index, double slack) {
        if (!(slack >= -constraint_tolerance)) out.push_back({name, index, slack});
    };
    const double Ps0 = sol.nonsecret.Ps0;
    const double Ps1 = sol.secret.Ps1;
    const double PR0 = sol.nonsecret.PR0;
    const CVector phi = sol.nonsecret.phi();
    const CVector& psi = sol.secret.psi;
    const double R0 = cfg.public_rate;

    for (int i = 0; i < sc.n_relays; ++i) audit("relay_public_decode", i, relay_public_rate(sc, i, Ps0, Ps1) - R0);
    audit("dest_public_decode", 0, dest_public_rate(sc, Ps0, Ps1, phi, psi) - R0);
    const double dest_secret = dest_secret_rate(sc, Ps1, psi);
    for (int i = 0; i < sc.n_relays; ++i)
        audit("relay_secret_decode", i, relay_secret_rate(sc, i, Ps1) - dest_secret);
    audit("nonnegative_power", 0, Ps0);
    audit("nonnegative_power", 1, Ps1);
    audit("nonnegative_power", 2, PR0);
    audit("power_budget", 0, cfg.total_power - sol.total_power());
    if (cfg.eve_must_decode_public)
        for (int j = 0; j < sc.n_eves; ++j)
            audit("eve_public_decode", j, eve_public_rate(sc, j, Ps0, Ps1, phi, psi) - R0);
    return out;
}

}  // namespace dfsec::rates

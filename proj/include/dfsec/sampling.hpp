#pragma once

/// @file sampling.hpp
/// Seeded random scenarios for property tests and solver-vs-oracle checks.

#include "dfsec/scenario.hpp"

#include <random>

namespace dfsec {

/// Rayleigh-faded channels with unit-variance legitimate links and weaker
/// eavesdropper links. Statistical-mode variances are drawn in [0.05, 0.5].
inline ChannelScenario random_scenario(std::mt19937_64& rng, int n_relays, int n_eves, EveCsi csi,
                                       double noise_power = 1.0) {
    std::normal_distribution<double> nd(0.0, std::sqrt(0.5));
    std::uniform_real_distribution<double> var(0.05, 0.5);
    auto cn = [&](double scale) { return scale * Complex(nd(rng), nd(rng)); };
    ChannelScenario sc;
    sc.n_relays = n_relays;
    sc.n_eves = n_eves;
    sc.noise_power = noise_power;
    sc.eve_csi = csi;
    sc.alpha0 = cn(0.6);
    sc.gamma.resize(n_relays);
    sc.alpha.resize(n_relays);
    for (int i = 0; i < n_relays; ++i) {
        // Source-relay links are kept stronger than the direct link so the
        // relays take part.
        sc.gamma(i) = cn(1.0) + std::polar(1.0, std::arg(cn(1.0)));
        sc.alpha(i) = cn(0.7);
    }
    sc.beta0.resize(n_eves);
    sc.beta.resize(n_eves, n_relays);
    sc.sigma2_beta0.resize(n_eves);
    sc.sigma2_beta.resize(n_eves, n_relays);
    for (int j = 0; j < n_eves; ++j) {
        sc.beta0(j) = cn(0.4);
        sc.sigma2_beta0(j) = var(rng) * 0.4;
        for (int i = 0; i < n_relays; ++i) {
            sc.beta(j, i) = cn(0.5);
            sc.sigma2_beta(j, i) = var(rng);
        }
    }
    return sc;
}

}  // namespace dfsec

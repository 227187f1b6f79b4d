#pragma once

#include "dfsec/scenario.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dfsec {

/// Per-node information rates of an allocation, in bits per channel use.
struct RateReport {
    RVector relay_public_rates;
    double dest_public_rate = 0.0;
    RVector relay_secret_rates;
    double dest_secret_rate = 0.0;
    RVector eve_secret_rates;
    RVector eve_public_rates;
    double secrecy_rate = 0.0;
};

struct SecretAllocation {
    double Ps1 = 0.0;
    CVector psi;
    double secrecy_rate = 0.0;
    double rank1_defect = 0.0;
    int bisect_iters = 0;
    // Best certified value of the relaxed program; never below secrecy_rate.
    double relaxation_rate = 0.0;
    bool rounded = false;  // Gaussian randomization was used
    bool clamped = false;  // the raw objective was negative and reported as 0
};

enum class PublicVariant { DestOnly, EveDecode };

struct PublicAllocation {
    bool feasible = false;
    double Ps0 = 0.0;
    double PR0 = 0.0;
    CVector phi_u;
    double total = 0.0;
    PublicVariant variant = PublicVariant::DestOnly;
    double rank_defect = 0.0;
    bool suboptimal_rank_defect = false;
    std::string reason;      // why the allocation is infeasible, if it is
    RVector certificate;     // Farkas multipliers of the relaxed program, if any

    CVector phi() const {
        if (phi_u.size() == 0) return {};
        return std::sqrt(PR0) * phi_u;
    }
};

enum class SolveStatus { Solved, PublicInfeasible };

inline std::string_view to_string(SolveStatus s) {
    return s == SolveStatus::Solved ? "Solved" : "PublicInfeasible";
}

/// One step of the outer power-split search.
struct SearchStep {
    int m = 0;
    double P_m = 0.0;
    double secrecy_rate = 0.0;
    bool public_feasible = false;
    double public_total = 0.0;
};

struct FullSolution {
    std::optional<int> m_star;
    double P_m = 0.0;
    SecretAllocation secret;
    PublicAllocation nonsecret;
    RateReport rates;
    SolveStatus status = SolveStatus::PublicInfeasible;
    std::vector<SearchStep> trace;  // in search order
    bool monotone_ok = true;        // only meaningful with verify_monotone

    double total_power() const {
        return nonsecret.Ps0 + nonsecret.PR0 + secret.Ps1 +
               (secret.psi.size() ? secret.psi.squaredNorm() : 0.0);
    }
};

}  // namespace dfsec

#pragma once

/// @file csv.hpp
/// Sweep tables as CSV. Rates and axis values use 6 decimals, powers 9
/// significant digits; m_star is empty for infeasible rows.

#include "dfsec/allocator.hpp"

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace dfsec {

inline constexpr const char* sweep_csv_header = "axis,value,Rs,m_star,feasible,Ps0,Ps1,PR0,psi_norm2";

inline std::string format(const char* fmt, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

inline std::string csv_row(SweepAxis axis, const SweepRow& row) {
    const FullSolution& s = row.solution;
    const bool ok = row.error.empty() && s.status == SolveStatus::Solved;
    std::string out(to_string(axis));
    out += ',' + format("%.6f", row.value);
    out += ',' + format("%.6f", ok ? s.secret.secrecy_rate : 0.0);
    out += ',';
    if (ok && s.m_star) out += std::to_string(*s.m_star);
    out += ok ? ",1" : ",0";
    const double psi2 = s.secret.psi.size() ? s.secret.psi.squaredNorm() : 0.0;
    out += ',' + format("%.9g", ok ? s.nonsecret.Ps0 : 0.0);
    out += ',' + format("%.9g", ok ? s.secret.Ps1 : 0.0);
    out += ',' + format("%.9g", ok ? s.nonsecret.PR0 : 0.0);
    out += ',' + format("%.9g", ok ? psi2 : 0.0);
    return out;
}

inline void write_sweep_csv(std::ostream& os, SweepAxis axis, const std::vector<SweepRow>& rows) {
    os << sweep_csv_header << '\n';
    for (const auto& r : rows) os << csv_row(axis, r) << '\n';
}

}  // namespace dfsec

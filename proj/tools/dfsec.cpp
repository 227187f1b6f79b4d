// dfsec: secrecy-rate power allocation for decode-and-forward relay networks.
//
//   dfsec solve        --config FILE [overrides]
//   dfsec sweep        --config FILE --axis power_db|public_rate --from A --to B --points K [--out CSV]
//   dfsec oracle-check --config FILE [--trials T] [--seed S] [--tolerance BITS]
//
// Exit status: 0 success, 2 public rate unreachable (solve), 1 any error or
// failed oracle check.

#include "dfsec/dfsec.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

using namespace dfsec;

namespace {

struct Overrides {
    std::string config;
    std::optional<double> public_rate;
    std::optional<double> total_power_db;
    std::optional<double> noise_power;
    std::optional<int> eves;
    std::optional<int> power_steps;
    std::optional<std::uint64_t> seed;
    bool eve_decode_public = false;
    bool statistical_csi = false;
    bool verify_monotone = false;
};

void add_common(CLI::App* app, Overrides& o) {
    app->add_option("--config", o.config, "scenario/config JSON file")->required();
    app->add_option("--public-rate", o.public_rate, "public message rate R0 (bits/use)");
    app->add_option("--total-power-db", o.total_power_db, "total power in dB relative to N0");
    app->add_option("--noise-power", o.noise_power, "noise power N0 (linear)");
    app->add_option("--eves", o.eves, "keep only the first N eavesdroppers");
    app->add_option("--power-steps", o.power_steps, "number of power steps M");
    app->add_option("--seed", o.seed, "random seed");
    app->add_flag("--eve-decode-public", o.eve_decode_public, "eavesdroppers must decode the public message");
    app->add_flag("--statistical-csi", o.statistical_csi, "only eavesdropper channel statistics are known");
    app->add_flag("--verify-monotone", o.verify_monotone, "solve every power step and check monotonicity");
}

// Flags override the file, which overrides the defaults.
Config load(const Overrides& o) {
    Config cfg = load_scenario_file(o.config);
    ChannelScenario& sc = cfg.scenario;
    SolveConfig& sv = cfg.solve;
    if (o.eves) sc = with_first_eves(sc, *o.eves);
    if (o.noise_power) sc.noise_power = *o.noise_power;
    if (o.statistical_csi) sc.eve_csi = EveCsi::Statistical;
    if (o.public_rate) sv.public_rate = *o.public_rate;
    if (o.power_steps) sv.power_steps = *o.power_steps;
    if (o.seed) sv.rng_seed = *o.seed;
    if (o.eve_decode_public) sv.eve_must_decode_public = true;
    if (o.verify_monotone) sv.verify_monotone = true;
    set_total_power_db(sv, o.total_power_db ? *o.total_power_db : sv.total_power_db, sc.noise_power);
    validate(cfg);
    return cfg;
}

std::string fmt_power(double p) {
    char buf[96];
    if (p > 0.0)
        std::snprintf(buf, sizeof buf, "%.9g (%.3f dB)", p, linear_to_db(p));
    else
        std::snprintf(buf, sizeof buf, "%.9g (-inf dB)", p);
    return buf;
}

std::string fmt_vector(const CVector& v) {
    std::ostringstream os;
    os << '[';
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s%.6f%+.6fi", i ? ", " : "", v(i).real(), v(i).imag());
        os << buf;
    }
    os << ']';
    return os.str();
}

int cmd_solve(const Overrides& o, const std::string& trace_path) {
    const Config cfg = load(o);
    const ChannelScenario& sc = cfg.scenario;
    const SolveConfig& sv = cfg.solve;
    const FullSolution sol = allocate(sc, sv);

    std::printf("status          %s\n", std::string(to_string(sol.status)).c_str());
    std::printf("relays/eaves    %d / %d, eavesdropper CSI %s, public decoding %s\n", sc.n_relays, sc.n_eves,
                std::string(to_string(sc.eve_csi)).c_str(), sv.eve_must_decode_public ? "destination and eavesdroppers" : "destination");
    std::printf("total power     %s, noise %.9g\n", fmt_power(sv.total_power).c_str(), sc.noise_power);
    std::printf("public rate     %.6f\n", sv.public_rate);
    if (sol.status == SolveStatus::Solved) {
        std::printf("Rs              %.6f\n", sol.secret.secrecy_rate);
        std::printf("relaxed Rs      %.6f\n", sol.secret.relaxation_rate);
        std::printf("m_star          %d of %d (P_m = %s)\n", *sol.m_star, sv.power_steps, fmt_power(sol.P_m).c_str());
        std::printf("Ps0             %s\n", fmt_power(sol.nonsecret.Ps0).c_str());
        std::printf("Ps1             %s\n", fmt_power(sol.secret.Ps1).c_str());
        std::printf("PR0             %s\n", fmt_power(sol.nonsecret.PR0).c_str());
        std::printf("|psi|^2         %s\n", fmt_power(sol.secret.psi.squaredNorm()).c_str());
        std::printf("power used      %s\n", fmt_power(sol.total_power()).c_str());
        std::printf("phi_u           %s\n", fmt_vector(sol.nonsecret.phi_u).c_str());
        std::printf("psi             %s\n", fmt_vector(sol.secret.psi).c_str());
        std::printf("rank-1 defect   secret %.3e, public %.3e%s\n", sol.secret.rank1_defect, sol.nonsecret.rank_defect,
                    sol.secret.rounded ? " (secret beam from randomization)" : "");
        if (sol.secret.clamped) std::printf("note            secrecy objective was negative and is reported as 0\n");
        if (sol.nonsecret.suboptimal_rank_defect) std::printf("note            public relaxation was not rank one\n");

        const RateReport& r = sol.rates;
        std::printf("slacks (rate - requirement):\n");
        for (int i = 0; i < sc.n_relays; ++i)
            std::printf("  relay %d public    %+.6f\n", i, r.relay_public_rates(i) - sv.public_rate);
        std::printf("  dest public       %+.6f\n", r.dest_public_rate - sv.public_rate);
        for (int i = 0; i < sc.n_relays; ++i)
            std::printf("  relay %d secret    %+.6f\n", i, r.relay_secret_rates(i) - r.dest_secret_rate);
        if (sv.eve_must_decode_public)
            for (int j = 0; j < sc.n_eves; ++j)
                std::printf("  eave %d public     %+.6f\n", j, r.eve_public_rates(j) - sv.public_rate);
        std::printf("  power budget      %+.9g\n", sv.total_power - sol.total_power());
        std::printf("rates: dest secret %.6f", r.dest_secret_rate);
        for (int j = 0; j < sc.n_eves; ++j) std::printf(", eave %d secret %.6f", j, r.eve_secret_rates(j));
        std::printf("\n");
        const auto viol = rates::check_constraints(sc, sv, sol);
        for (const auto& v : viol)
            std::fprintf(stderr, "warning: constraint %s[%d] violated by %.3e\n", v.constraint.c_str(), v.index, -v.slack);
    } else {
        std::printf("Rs              0.000000\n");
        std::printf("reason          %s\n", sol.nonsecret.reason.c_str());
    }
    if (sv.verify_monotone) std::printf("monotone in m   %s\n", sol.monotone_ok ? "yes" : "NO");

    if (!trace_path.empty()) {
        std::ofstream out(trace_path);
        if (!out) throw std::runtime_error("cannot write trace file: " + trace_path);
        out << "m,P_m,Rs,public_feasible,public_total\n";
        for (const auto& st : sol.trace)
            out << st.m << ',' << format("%.9g", st.P_m) << ',' << format("%.6f", st.secrecy_rate) << ','
                << (st.public_feasible ? 1 : 0) << ',' << format("%.9g", st.public_total) << '\n';
    }
    return sol.status == SolveStatus::Solved ? 0 : 2;
}

int cmd_sweep(const Overrides& o, const std::string& axis_name, double from, double to, int points,
              const std::string& out_path, int jobs) {
    const Config cfg = load(o);
    SweepAxis axis;
    if (axis_name == "power_db")
        axis = SweepAxis::TotalPowerDb;
    else if (axis_name == "public_rate")
        axis = SweepAxis::PublicRate;
    else
        throw std::invalid_argument("--axis must be power_db or public_rate");
    if (points < 1) throw std::invalid_argument("--points must be at least 1");
    if (to < from) throw std::invalid_argument("--to must not be below --from");
    const auto rows = sweep(cfg.scenario, cfg.solve, axis, linspace(from, to, points), jobs);
    for (const auto& r : rows)
        if (!r.error.empty()) std::fprintf(stderr, "warning: point %.6f failed: %s\n", r.value, r.error.c_str());
    if (out_path.empty()) {
        write_sweep_csv(std::cout, axis, rows);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        write_sweep_csv(out, axis, rows);
    }
    return 0;
}

int cmd_oracle_check(const Overrides& o, int trials, double p1_tol) {
    const Config cfg = load(o);
    if (trials <= 0) {
        std::printf("warning: no trials requested, nothing checked\n");
        return 0;
    }
    constexpr double dest_tol = 1e-8;
    constexpr double stage_c_tol = 1e-3;
    std::mt19937_64 rng(cfg.solve.rng_seed);
    double dev_p1 = 0.0, dev_dest = 0.0, dev_c = 0.0;
    for (int t = 0; t < trials; ++t) {
        ChannelScenario sc;
        if (t == 0) {
            sc = cfg.scenario;
        } else {
            const int J = 1 + (t - 1) % 3;
            sc = random_scenario(rng, 2, J, ((t - 1) / 3) % 2 ? EveCsi::Statistical : EveCsi::Perfect);
        }
        if (sc.n_relays > 2) throw std::invalid_argument("oracle-check needs at most 2 relays");
        const double P_m = cfg.solve.total_power;
        const auto s = solve_problem1(sc, P_m, cfg.solve, static_cast<std::uint64_t>(t));
        const auto g = oracle::grid_problem1(sc, P_m);
        const double d1 = std::abs(s.secrecy_rate - g.secrecy_rate);

        SolveConfig pub = cfg.solve;
        if (pub.public_rate <= 0.0) pub.public_rate = 0.2;
        const double budget = cfg.solve.total_power;
        const auto cf = solve_problem2_dest(sc, pub, s.Ps1, s.psi, budget);
        const auto vx = oracle::vertex_problem2_dest(sc, pub, s.Ps1, s.psi, budget);
        const double d2 = std::abs(cf.total - vx.total);

        double d3 = 0.0;
        if (sc.eve_csi == EveCsi::Perfect) {
            const CVector zero = CVector::Zero(sc.n_relays);
            const auto ev = solve_problem2_eve(sc, pub, 0.0, zero, budget);
            const auto gr = oracle::grid_problem2(sc, pub, 0.0, zero, budget, PublicVariant::EveDecode, ev.phi_u);
            if (ev.feasible != gr.feasible)
                d3 = std::numeric_limits<double>::infinity();
            else if (ev.feasible)
                d3 = std::abs(ev.total - gr.total);
        }
        std::printf("trial %d: J=%d %s  Rs solver %.6f oracle %.6f  |dRs| %.2e  |dP2 dest| %.2e  |dP2 eve| %.2e\n", t,
                    sc.n_eves, std::string(to_string(sc.eve_csi)).c_str(), s.secrecy_rate, g.secrecy_rate, d1, d2, d3);
        dev_p1 = std::max(dev_p1, d1);
        dev_dest = std::max(dev_dest, d2);
        dev_c = std::max(dev_c, d3);
    }
    const bool ok = dev_p1 <= p1_tol && dev_dest <= dest_tol && dev_c <= stage_c_tol;
    std::printf("max deviation: secret %.3e (tol %.3e), public dest %.3e (tol %.0e), public eve %.3e (tol %.0e)\n", dev_p1,
                p1_tol, dev_dest, dest_tol, dev_c, stage_c_tol);
    std::printf("%s\n", ok ? "PASS" : "FAIL");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secrecy-rate power allocation for decode-and-forward relay networks"};
    app.require_subcommand(1);

    Overrides solve_o, sweep_o, check_o;
    std::string trace_path;
    auto* solve = app.add_subcommand("solve", "allocate power at one operating point");
    add_common(solve, solve_o);
    solve->add_option("--trace", trace_path, "write the per-step search trace as CSV");

    std::string axis, out_path;
    double from = 0.0, to = 0.0;
    int points = 1;
    int jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    auto* sw = app.add_subcommand("sweep", "sweep total power or public rate and write CSV");
    add_common(sw, sweep_o);
    sw->add_option("--axis", axis, "power_db or public_rate")->required();
    sw->add_option("--from", from, "first grid value")->required();
    sw->add_option("--to", to, "last grid value")->required();
    sw->add_option("--points", points, "number of grid points")->required();
    sw->add_option("--out", out_path, "output CSV (default stdout)");
    sw->add_option("--jobs", jobs, "worker threads");

    int trials = 5;
    double tolerance = 0.02;
    auto* oc = app.add_subcommand("oracle-check", "compare solvers with brute-force oracles");
    add_common(oc, check_o);
    oc->add_option("--trials", trials, "number of scenarios (the first is the config scenario)");
    oc->add_option("--tolerance", tolerance, "allowed secrecy-rate deviation (bits/use)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    try {
        if (*solve) return cmd_solve(solve_o, trace_path);
        if (*sw) return cmd_sweep(sweep_o, axis, from, to, points, out_path, jobs);
        if (*oc) return cmd_oracle_check(check_o, trials, tolerance);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}

// Acceptance suite: one [PASS]/[FAIL] line per criterion, details indented.
// Exit status is nonzero if any hard criterion fails.

#include "dfsec/dfsec.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace dfsec;

namespace {

const std::string data_dir = DFSEC_DATA_DIR;
const std::string cli = DFSEC_CLI;

Config paper() { return load_scenario_file(data_dir + "/paper_n2j3.json"); }

struct Report {
    bool ok = true;
    std::vector<std::string> notes;

    void check(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            notes.push_back("violated: " + what);
        }
    }
    void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Problem 1 against the grid oracle.
Report oracle_problem1() {
    Report r;
    const Config cfg = paper();
    const double P_m = cfg.solve.total_power;
    std::vector<std::pair<std::string, ChannelScenario>> cases;
    for (EveCsi csi : {EveCsi::Perfect, EveCsi::Statistical})
        for (int J = 1; J <= 3; ++J) {
            ChannelScenario sc = with_first_eves(cfg.scenario, J);
            sc.eve_csi = csi;
            cases.emplace_back(fmt("reference J=%d %s", J, std::string(to_string(csi)).c_str()), sc);
        }
    std::mt19937_64 rng(20240601);
    for (int k = 0; k < 20; ++k) {
        const int J = 1 + k % 3;
        const EveCsi csi = (k / 3) % 2 ? EveCsi::Statistical : EveCsi::Perfect;
        cases.emplace_back(fmt("random #%d J=%d %s", k, J, std::string(to_string(csi)).c_str()),
                           random_scenario(rng, 2, J, csi));
    }
    double worst = 0.0, slowest = 0.0;
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const auto& [name, sc] = cases[k];
        const auto t0 = std::chrono::steady_clock::now();
        const auto s = solve_problem1(sc, P_m, cfg.solve, k);
        const auto g = oracle::grid_problem1(sc, P_m);
        const double t = elapsed(t0);
        const double dev = std::abs(s.secrecy_rate - g.secrecy_rate);
        worst = std::max(worst, dev);
        slowest = std::max(slowest, t);
        r.check(dev <= 0.02, fmt("%s: solver %.6f oracle %.6f", name.c_str(), s.secrecy_rate, g.secrecy_rate));
        r.check(t < 60.0, fmt("%s took %.1f s", name.c_str(), t));
    }
    r.note(fmt("%zu cases, max |dRs| = %.2e bits/use (tol 0.02), slowest case %.2f s (limit 60 s)", cases.size(), worst,
               slowest));
    return r;
}

// 2. Problem 2 against the vertex-enumeration and grid oracles.
Report oracle_problem2() {
    Report r;
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    int feasible = 0;
    for (int k = 0; k < 100; ++k) {
        const auto sc = random_scenario(rng, 1 + k % 2, k % 4, EveCsi::Perfect, 0.3 + u(rng));
        SolveConfig cfg;
        set_total_power_db(cfg, 6.0, sc.noise_power);
        cfg.public_rate = 0.05 + u(rng);
        const CVector psi = CVector::Random(sc.n_relays) * u(rng);
        const double Ps1 = 2.0 * u(rng), budget = 10.0 * u(rng);
        const auto cf = solve_problem2_dest(sc, cfg, Ps1, psi, budget);
        const auto vx = oracle::vertex_problem2_dest(sc, cfg, Ps1, psi, budget);
        const double dev = std::abs(cf.total - vx.total);
        worst = std::max(worst, dev);
        feasible += cf.feasible;
        r.check(dev <= 1e-8 && cf.feasible == vx.feasible, fmt("instance %d: closed form %.12f, vertex %.12f", k, cf.total, vx.total));
    }
    r.note(fmt("DestOnly: 100 instances (%d within budget), max |d total| = %.2e (tol 1e-8)", feasible, worst));

    const Config cfg = paper();
    double worst_c = 0.0;
    for (int J = 1; J <= 3; ++J) {
        const ChannelScenario sc = with_first_eves(cfg.scenario, J);
        const CVector zero = CVector::Zero(2);
        const auto e = solve_problem2_eve(sc, cfg.solve, 0.0, zero, cfg.solve.total_power);
        const auto g = oracle::grid_problem2(sc, cfg.solve, 0.0, zero, cfg.solve.total_power, PublicVariant::EveDecode, e.phi_u);
        const double dev = e.feasible && g.feasible ? std::abs(e.total - g.total) : INFINITY;
        worst_c = std::max(worst_c, dev);
        r.check(dev <= 1e-3, fmt("EveDecode J=%d: stage C %.9f grid %.9f", J, e.total, g.total));
    }
    r.note(fmt("EveDecode stage C, reference scenario R0=0.2, J=1..3: max |d total| = %.2e (tol 1e-3)", worst_c));
    return r;
}

// 3. Monotonicity in m, P_T, R0 and J.
Report monotonicity() {
    Report r;
    const Config cfg = paper();
    const double tol = 2.0 * cfg.solve.secrecy_bisect_tol;
    int runs = 0;
    double worst_m = 0.0;
    for (EveCsi csi : {EveCsi::Perfect, EveCsi::Statistical})
        for (int J = 1; J <= 3; ++J)
            for (double R0 : {0.0, 0.2}) {
                ChannelScenario sc = with_first_eves(cfg.scenario, J);
                sc.eve_csi = csi;
                SolveConfig c = cfg.solve;
                c.public_rate = R0;
                c.verify_monotone = true;
                c.include_m_equals_M = true;
                const auto s = allocate(sc, c);
                ++runs;
                for (std::size_t k = 1; k < s.trace.size(); ++k)
                    worst_m = std::max(worst_m, s.trace[k].secrecy_rate - s.trace[k - 1].secrecy_rate);
                r.check(s.monotone_ok, fmt("R_s^m not monotone: J=%d %s R0=%.1f", J, std::string(to_string(csi)).c_str(), R0));
            }
    r.note(fmt("m: %d full searches over m = 0..50, largest increase of R_s^m when m decreases = %.2e (tol %.0e)", runs,
               std::max(0.0, worst_m), tol));

    double worst_p = 0.0, worst_r = 0.0, worst_j = 0.0;
    for (EveCsi csi : {EveCsi::Perfect, EveCsi::Statistical}) {
        std::vector<std::vector<double>> by_j;
        for (int J = 0; J <= 3; ++J) {
            ChannelScenario sc = with_first_eves(cfg.scenario, J);
            sc.eve_csi = csi;
            const auto pw = sweep(sc, cfg.solve, SweepAxis::TotalPowerDb, linspace(0.0, 12.0, 13), 8);
            std::vector<double> col;
            for (std::size_t k = 0; k < pw.size(); ++k) {
                col.push_back(pw[k].solution.secret.secrecy_rate);
                if (k) worst_p = std::max(worst_p, col[k - 1] - col[k]);
                if (k) r.check(col[k] >= col[k - 1] - tol, fmt("P_T sweep J=%d at %.0f dB", J, pw[k].value));
            }
            by_j.push_back(col);
            const auto rr = sweep(sc, cfg.solve, SweepAxis::PublicRate, linspace(0.0, 1.5, 16), 8);
            for (std::size_t k = 1; k < rr.size(); ++k) {
                const double a = rr[k - 1].solution.secret.secrecy_rate, b = rr[k].solution.secret.secrecy_rate;
                worst_r = std::max(worst_r, b - a);
                r.check(b <= a + tol, fmt("R0 sweep J=%d at R0=%.2f", J, rr[k].value));
            }
        }
        for (int J = 1; J <= 3; ++J)
            for (std::size_t k = 0; k < by_j[J].size(); ++k) {
                worst_j = std::max(worst_j, by_j[J][k] - by_j[J - 1][k]);
                r.check(by_j[J][k] <= by_j[J - 1][k] + tol, fmt("adding eavesdropper %d raised Rs", J));
            }
    }
    r.note(fmt("P_T sweeps 0..12 dB: largest drop %.2e; R0 sweeps 0..1.5: largest rise %.2e; J -> J+1: largest rise %.2e",
               std::max(0.0, worst_p), std::max(0.0, worst_r), std::max(0.0, worst_j)));
    return r;
}

// 4. The public message costs secrecy, less so at high power.
Report public_message_cost() {
    Report r;
    const Config cfg = paper();
    const auto grid = linspace(0.0, 12.0, 13);
    for (EveCsi csi : {EveCsi::Perfect, EveCsi::Statistical})
        for (int J = 1; J <= 3; ++J) {
            ChannelScenario sc = with_first_eves(cfg.scenario, J);
            sc.eve_csi = csi;
            SolveConfig with = cfg.solve, without = cfg.solve;
            with.public_rate = 0.2;
            without.public_rate = 0.0;
            const auto a = sweep(sc, with, SweepAxis::TotalPowerDb, grid, 8);
            const auto b = sweep(sc, without, SweepAxis::TotalPowerDb, grid, 8);
            for (std::size_t k = 0; k < grid.size(); ++k)
                r.check(a[k].solution.secret.secrecy_rate <= b[k].solution.secret.secrecy_rate + 1e-9,
                        fmt("J=%d %s at %.0f dB", J, std::string(to_string(csi)).c_str(), grid[k]));
            const double gap0 = b.front().solution.secret.secrecy_rate - a.front().solution.secret.secrecy_rate;
            const double gap12 = b.back().solution.secret.secrecy_rate - a.back().solution.secret.secrecy_rate;
            r.check(gap12 < gap0, fmt("gap did not shrink for J=%d %s", J, std::string(to_string(csi)).c_str()));
            r.note(fmt("J=%d %-11s gap Rs(R0=0) - Rs(R0=0.2): %.4f at 0 dB, %.4f at 12 dB", J,
                       std::string(to_string(csi)).c_str(), gap0, gap12));
        }
    // Not gated: where the single-eavesdropper gap turns down.
    {
        const ChannelScenario sc = with_first_eves(cfg.scenario, 1);
        SolveConfig with = cfg.solve, without = cfg.solve;
        with.public_rate = 0.2;
        without.public_rate = 0.0;
        const auto hi = linspace(12.0, 30.0, 4);
        const auto a = sweep(sc, with, SweepAxis::TotalPowerDb, hi, 4);
        const auto b = sweep(sc, without, SweepAxis::TotalPowerDb, hi, 4);
        std::string line = "info J=1 perfect gap beyond 12 dB:";
        for (std::size_t k = 0; k < hi.size(); ++k)
            line += fmt(" %.0f dB %.4f", hi[k], b[k].solution.secret.secrecy_rate - a[k].solution.secret.secrecy_rate);
        r.note(line);
    }
    return r;
}

// 5. Comparison with the quoted figure values.
Report reference_figures(std::string& calibration) {
    Report r;
    const double target[3] = {0.58, 0.45, 0.28};
    Config cfg = paper();
    cfg.solve.public_rate = 0.0;
    // Calibration candidates keep P_T fixed in absolute units and change N0.
    for (double n0 : {1.0, 0.5, 0.1}) {
        Report attempt;
        std::string line = fmt("N0=%.1f:", n0);
        for (int J = 1; J <= 3; ++J) {
            ChannelScenario sc = with_first_eves(cfg.scenario, J);
            sc.noise_power = n0;
            SolveConfig c = cfg.solve;
            c.total_power = db_to_linear(6.0);
            const double rs = allocate(sc, c).secret.secrecy_rate;
            line += fmt(" J=%d Rs=%.4f (quoted %.2f)", J, rs, target[J - 1]);
            attempt.check(std::abs(rs - target[J - 1]) <= 0.05, fmt("J=%d off by %.3f", J, rs - target[J - 1]));
        }
        r.note(line);
        if (attempt.ok) {
            calibration = fmt("%.1f", n0);
            return r;
        }
    }
    r.ok = false;
    r.note("no noise calibration reaches the quoted values within 0.05; recorded as a discrepancy");
    return r;
}

// 6. Jensen surrogate is a lower bound on the ergodic objective.
Report jensen() {
    Report r;
    const Config cfg = paper();
    for (int J = 1; J <= 3; ++J) {
        ChannelScenario sc = with_first_eves(cfg.scenario, J);
        sc.eve_csi = EveCsi::Statistical;
        const auto s = allocate(sc, cfg.solve);
        const auto mc = oracle::mc_ergodic_objective(sc, s.secret.Ps1, s.secret.psi, 100000, cfg.solve.rng_seed + J);
        const double bound = s.secret.secrecy_rate - 3.0 * mc.std_error;
        r.check(mc.mean >= bound, fmt("J=%d", J));
        r.note(fmt("J=%d surrogate Rs %.6f, MC ergodic %.6f +- %.1e (1e5 samples)", J, s.secret.secrecy_rate, mc.mean,
                   mc.std_error));
    }
    return r;
}

// 7. Kernel residuals and infeasibility certificates.
Report kernel() {
    Report r;
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_kkt = 0.0, worst_gap = 0.0;
    for (int k = 0; k < 50; ++k) {
        const auto sc = random_scenario(rng, 1 + k % 4, 1 + k % 3, k % 2 ? EveCsi::Statistical : EveCsi::Perfect);
        const double P_m = 0.5 + 5.0 * u(rng);
        const double t = 1.0 + (t_upper_bound(sc, P_m) - 1.0) * u(rng);
        const auto prog = build_phase1_program(sc, P_m, t);
        const auto sol = cone::solve(prog, 1e-9);
        const double gap = std::abs(sol.objective_value - sol.dual_objective);
        worst_kkt = std::max(worst_kkt, std::max(sol.kkt.primal_feas, sol.kkt.dual_feas));
        worst_gap = std::max(worst_gap, gap / (1.0 + std::abs(sol.objective_value)));
        r.check(sol.status == cone::Status::Optimal, fmt("program %d status %s", k, std::string(cone::to_string(sol.status)).c_str()));
        r.check(sol.kkt.primal_feas <= 1e-7 && sol.kkt.dual_feas <= 1e-7, fmt("program %d KKT %.2e", k, sol.kkt.max()));
        r.check(gap <= 1e-6 * (1.0 + std::abs(sol.objective_value)), fmt("program %d gap %.2e", k, gap));
    }
    r.note(fmt("50 phase-1 programs: max primal/dual residual %.2e (tol 1e-7), max relative gap %.2e (tol 1e-6)", worst_kkt,
               worst_gap));

    std::vector<cone::ConeProgram> bad;
    {
        cone::ConeProgram p(2, 0);
        p.add(cone::Sense::LessEqual, 1.0).psd = CMatrix::Identity(2, 2);
        p.add(cone::Sense::GreaterEqual, 2.0).psd = CMatrix::Identity(2, 2);
        bad.push_back(p);
    }
    for (int k = 0; k < 5; ++k) {
        // Problem-1 rows with the budget pushed below what a forced beam needs.
        const auto sc = random_scenario(rng, 2, 1 + k % 3, EveCsi::Perfect);
        auto p = build_phase1_program(sc, 2.0, 1.5);
        auto& c = p.add(cone::Sense::GreaterEqual, 1.5);
        c.psd = CMatrix::Identity(2, 2);
        bad.push_back(p);
    }
    int certified = 0;
    for (const auto& p : bad) {
        const auto sol = cone::solve(p, 1e-9);
        const bool ok = sol.status == cone::Status::Infeasible && cone::verify_infeasibility_certificate(p, sol.certificate, 1e-8);
        certified += ok;
        r.check(ok, "infeasible program not certified");
    }
    r.note(fmt("%d/%zu contradictory programs reported Infeasible with a verified certificate", certified, bad.size()));
    return r;
}

int run_cli(const std::string& args) {
    const std::string cmd = "'" + cli + "' " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 8. Byte-identical sweep output.
Report determinism() {
    Report r;
    const std::string a = "acceptance_sweep_a.csv", b = "acceptance_sweep_b.csv";
    const std::string config = data_dir + "/paper_n2j3.json";
    for (const std::string extra : {"", " --statistical-csi"}) {
        const std::string args = "sweep --config '" + config + "' --axis power_db --from 0 --to 12 --points 13 --seed 9" + extra;
        r.check(run_cli(args + " --jobs 1 --out " + a) == 0, "first sweep failed");
        r.check(run_cli(args + " --jobs 8 --out " + b) == 0, "second sweep failed");
        const std::string ta = slurp(a), tb = slurp(b);
        r.check(!ta.empty() && ta == tb, "CSV differs between runs" + extra);
        r.note(fmt("%s: %zu bytes, identical=%s", extra.empty() ? "perfect CSI" : "statistical CSI", ta.size(),
                   ta == tb ? "yes" : "no"));
    }
    std::remove(a.c_str());
    std::remove(b.c_str());
    return r;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Report()> run;
    };
    std::string calibration;
    const std::vector<Criterion> criteria = {
        {"1 oracle equivalence, secret message", oracle_problem1},
        {"2 oracle equivalence, public message", oracle_problem2},
        {"3 monotonicity suite", monotonicity},
        {"4 public-message dominance and gap shrinkage", public_message_cost},
        {"5 quoted figure values at 6 dB", [&] { return reference_figures(calibration); }},
        {"6 Jensen bound realization", jensen},
        {"7 kernel certification", kernel},
        {"8 sweep determinism", determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Report r;
        try {
            r = c.run();
        } catch (const std::exception& e) {
            r.ok = false;
            r.note(std::string("exception: ") + e.what());
        }
        std::printf("[%s] %s (%.1f s)\n", r.ok ? "PASS" : "FAIL", c.name, elapsed(t0));
        std::size_t shown = 0;
        for (const auto& n : r.notes) {
            if (shown++ >= 12) {
                std::printf("      ... %zu more\n", r.notes.size() - 12);
                break;
            }
            std::printf("      %s\n", n.c_str());
        }
        if (!r.ok) ++failed;
        std::fflush(stdout);
    }
    if (!calibration.empty()) std::printf("noise calibration used for criterion 5: N0 = %s\n", calibration.c_str());
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed ? 1 : 0;
}

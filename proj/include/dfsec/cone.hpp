#pragma once

/// @file cone.hpp
/// Small dense conic programs: one Hermitian PSD block plus nonnegative
/// scalars, linear constraints of either sense or equality.
///
///     minimize    Re tr(C Psi) + c . s
///     subject to  Re tr(A_k Psi) + a_k . s  {<=, >=, =}  b_k
///                 Psi >= 0 (Hermitian),  s >= 0
///
/// The Hermitian block is mapped to a real symmetric block of twice the size,
/// [[Re, -Im], [Im, Re]], and the resulting real program is solved by a
/// primal-dual interior-point method on the homogeneous self-dual embedding
/// (HKM direction, Mehrotra predictor-corrector). The embedding yields either
/// an optimal pair with certified residuals or a Farkas ray proving primal
/// infeasibility, without a separate phase-1 solve.

#include "dfsec/scenario.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dfsec::cone {

enum class Sense { LessEqual, GreaterEqual, Equal };

struct LinearConstraint {
    CMatrix psd;      // Hermitian psd_dim x psd_dim; empty means zero
    RVector scalars;  // n_scalars; empty means zero
    double rhs = 0.0;
    Sense sense = Sense::GreaterEqual;
};

struct ConeProgram {
    int psd_dim = 0;
    int n_scalars = 0;
    CMatrix objective_psd;      // empty means zero
    RVector objective_scalars;  // empty means zero
    std::vector<LinearConstraint> constraints;

    ConeProgram() = default;
    ConeProgram(int psd, int scalars) : psd_dim(psd), n_scalars(scalars) {}

    LinearConstraint& add(Sense sense, double rhs) {
        LinearConstraint c;
        c.sense = sense;
        c.rhs = rhs;
        c.psd = CMatrix::Zero(psd_dim, psd_dim);
        c.scalars = RVector::Zero(n_scalars);
        constraints.push_back(std::move(c));
        return constraints.back();
    }
};

enum class Status { Optimal, Infeasible, Unbounded, MaxIter };

inline std::string_view to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "Optimal";
        case Status::Infeasible: return "Infeasible";
        case Status::Unbounded: return "Unbounded";
        default: return "MaxIter";
    }
}

/// Relative residuals of a primal-dual pair of the original program.
struct KktResiduals {
    double primal_feas = std::numeric_limits<double>::infinity();
    double dual_feas = std::numeric_limits<double>::infinity();
    double duality_gap = std::numeric_limits<double>::infinity();

    double max() const { return std::max({primal_feas, dual_feas, duality_gap}); }
};

struct ConeSolution {
    Status status = Status::MaxIter;
    CMatrix psd_matrix;
    RVector scalars;
    double objective_value = std::numeric_limits<double>::quiet_NaN();
    double dual_objective = std::numeric_limits<double>::quiet_NaN();
    RVector duals;        // one multiplier per constraint
    KktResiduals kkt;
    RVector certificate;  // Farkas multipliers with b . y = 1, when Infeasible
    int iterations = 0;
};

struct SolverOptions {
    int max_iterations = 120;
    double step_fraction = 0.98;
};

/// Real symmetric embedding of a Hermitian matrix.
inline RMatrix embed(const CMatrix& h) {
    const Eigen::Index n = h.rows();
    RMatrix out(2 * n, 2 * n);
    out.topLeftCorner(n, n) = h.real();
    out.topRightCorner(n, n) = -h.imag();
    out.bottomLeftCorner(n, n) = h.imag();
    out.bottomRightCorner(n, n) = h.real();
    return out;
}

/// Hermitian matrix closest to a real symmetric 2n x 2n matrix in the
/// embedded subspace. Preserves positive semidefiniteness.
inline CMatrix extract(const RMatrix& x) {
    const Eigen::Index n = x.rows() / 2;
    const RMatrix re = 0.5 * (x.topLeftCorner(n, n) + x.bottomRightCorner(n, n));
    const RMatrix im = 0.5 * (x.bottomLeftCorner(n, n) - x.topRightCorner(n, n));
    CMatrix h(n, n);
    h.real() = re;
    h.imag() = im;
    return 0.5 * (h + h.adjoint());
}

inline double hermitian_defect(const CMatrix& a) {
    if (a.size() == 0) return 0.0;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() / std::max(1.0, a.cwiseAbs().maxCoeff());
}

inline void validate(const ConeProgram& prog) {
    auto fail = [](const std::string& what) { throw std::invalid_argument("cone program: " + what); };
    if (prog.psd_dim < 0 || prog.n_scalars < 0) fail("negative dimension");
    if (prog.psd_dim > 32) fail("psd_dim exceeds 32");
    if (prog.constraints.size() > 64) fail("more than 64 constraints");
    auto check_block = [&](const CMatrix& m, const std::string& name) {
        if (m.size() == 0) return;
        if (m.rows() != prog.psd_dim || m.cols() != prog.psd_dim) fail(name + " has wrong dimension");
        if (!m.allFinite()) fail(name + " is not finite");
        if (hermitian_defect(m) > 1e-12) fail(name + " is not Hermitian");
    };
    auto check_vec = [&](const RVector& v, const std::string& name) {
        if (v.size() != 0 && v.size() != prog.n_scalars) fail(name + " has wrong length");
        if (!v.allFinite()) fail(name + " is not finite");
    };
    check_block(prog.objective_psd, "objective");
    check_vec(prog.objective_scalars, "objective scalars");
    for (std::size_t k = 0; k < prog.constraints.size(); ++k) {
        const auto& c = prog.constraints[k];
        const std::string name = "constraint " + std::to_string(k);
        check_block(c.psd, name);
        check_vec(c.scalars, name + " scalars");
        if (!std::isfinite(c.rhs)) fail(name + " rhs is not finite");
    }
}

namespace detail {

inline double inner(const RMatrix& a, const RMatrix& b) { return (a.array() * b.array()).sum(); }

inline RMatrix sym(const RMatrix& a) { return 0.5 * (a + a.transpose()); }

inline double real_trace(const CMatrix& a, const CMatrix& psi) {
    if (a.size() == 0 || psi.size() == 0) return 0.0;
    return (a.array() * psi.transpose().array()).sum().real();
}

inline double dot_or_zero(const RVector& a, const RVector& s) {
    return a.size() == 0 || s.size() == 0 ? 0.0 : a.dot(s);
}

inline double min_eigenvalue(const CMatrix& h) {
    if (h.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

/// The real standard form  min <C,X> + c.x  s.t.  <A_k,X> + G_k x = b_k,
/// X >= 0, x >= 0, with every row and the objective normalized.
struct StandardForm {
    int d = 0;  // real block dimension
    int p = 0;  // nonnegative variables: program scalars, then slacks
    int m = 0;
    int n_scalars = 0;
    std::vector<RMatrix> A;
    RMatrix G;
    RVector b;
    RMatrix C;
    RVector c;
    RVector row_scale;
    double obj_scale = 1.0;

    RVector apply_block(const RMatrix& X) const {
        RVector out = RVector::Zero(m);
        for (int k = 0; k < m && d; ++k) out(k) = inner(A[k], X);
        return out;
    }

    RVector apply(const RMatrix& X, const RVector& x) const { return apply_block(X) + G * x; }

    RMatrix adjoint(const RVector& y) const {
        RMatrix out = RMatrix::Zero(d, d);
        for (int k = 0; k < m; ++k) out += y(k) * A[k];
        return out;
    }
};

inline StandardForm standardize(const ConeProgram& prog) {
    StandardForm sf;
    sf.d = 2 * prog.psd_dim;
    sf.m = static_cast<int>(prog.constraints.size());
    sf.n_scalars = prog.n_scalars;
    int n_slack = 0;
    for (const auto& c : prog.constraints)
        if (c.sense != Sense::Equal) ++n_slack;
    sf.p = prog.n_scalars + n_slack;
    sf.G = RMatrix::Zero(sf.m, sf.p);
    sf.b = RVector::Zero(sf.m);
    sf.row_scale = RVector::Ones(sf.m);
    sf.A.assign(sf.m, RMatrix::Zero(sf.d, sf.d));

    int slack = prog.n_scalars;
    for (int k = 0; k < sf.m; ++k) {
        const auto& con = prog.constraints[k];
        if (con.psd.size() && sf.d) sf.A[k] = 0.5 * embed(con.psd);
        if (con.scalars.size()) sf.G.row(k).head(prog.n_scalars) = con.scalars.transpose();
        if (con.sense == Sense::GreaterEqual) sf.G(k, slack++) = -1.0;
        if (con.sense == Sense::LessEqual) sf.G(k, slack++) = 1.0;
        sf.b(k) = con.rhs;
        const double norm = std::sqrt(sf.A[k].squaredNorm() + sf.G.row(k).squaredNorm());
        const double scale = norm > 0.0 ? 1.0 / norm : 1.0;
        sf.row_scale(k) = scale;
        sf.A[k] *= scale;
        sf.G.row(k) *= scale;
        sf.b(k) *= scale;
    }
    sf.C = RMatrix::Zero(sf.d, sf.d);
    if (prog.objective_psd.size() && sf.d) sf.C = 0.5 * embed(prog.objective_psd);
    sf.c = RVector::Zero(sf.p);
    if (prog.objective_scalars.size()) sf.c.head(prog.n_scalars) = prog.objective_scalars;
    const double onorm = std::sqrt(sf.C.squaredNorm() + sf.c.squaredNorm());
    sf.obj_scale = onorm > 0.0 ? 1.0 / std::max(onorm, 1e-300) : 1.0;
    sf.obj_scale = std::min(sf.obj_scale, 1.0);
    sf.C *= sf.obj_scale;
    sf.c *= sf.obj_scale;
    return sf;
}

/// Largest step a with M + a dM >= 0 (infinity when unconstrained).
inline double psd_step(const RMatrix& M, const RMatrix& dM) {
    if (M.size() == 0) return std::numeric_limits<double>::infinity();
    Eigen::LLT<RMatrix> llt(M);
    if (llt.info() != Eigen::Success) return 0.0;
    const RMatrix Linv_dM = llt.matrixL().solve(dM);
    const RMatrix S = llt.matrixL().solve(Linv_dM.transpose());
    Eigen::SelfAdjointEigenSolver<RMatrix> es(sym(S), Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues()(0);
    return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

inline double orthant_step(const RVector& v, const RVector& dv) {
    double a = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (dv(i) < 0.0) a = std::min(a, -v(i) / dv(i));
    return a;
}

inline double scalar_step(double v, double dv) {
    return dv < 0.0 ? -v / dv : std::numeric_limits<double>::infinity();
}

}  // namespace detail

/// Residuals of (Psi, s, y) with respect to the original program.
inline KktResiduals measure(const ConeProgram& prog, const CMatrix& psi, const RVector& s, const RVector& y) {
    using detail::dot_or_zero;
    using detail::real_trace;
    KktResiduals r;
    double pf = 0.0;
    for (std::size_t k = 0; k < prog.constraints.size(); ++k) {
        const auto& c = prog.constraints[k];
        const double lhs = real_trace(c.psd, psi) + dot_or_zero(c.scalars, s);
        double v = 0.0;
        switch (c.sense) {
            case Sense::GreaterEqual: v = std::max(0.0, c.rhs - lhs); break;
            case Sense::LessEqual: v = std::max(0.0, lhs - c.rhs); break;
            case Sense::Equal: v = std::abs(lhs - c.rhs); break;
        }
        pf = std::max(pf, v / (1.0 + std::abs(c.rhs)));
    }
    for (Eigen::Index i = 0; i < s.size(); ++i) pf = std::max(pf, -s(i));
    if (prog.psd_dim) pf = std::max(pf, -detail::min_eigenvalue(psi));
    r.primal_feas = pf;

    double onorm = 0.0;
    CMatrix zmat = prog.psd_dim ? CMatrix(CMatrix::Zero(prog.psd_dim, prog.psd_dim)) : CMatrix();
    RVector zvec = RVector::Zero(prog.n_scalars);
    if (prog.objective_psd.size()) {
        zmat += prog.objective_psd;
        onorm = std::max(onorm, prog.objective_psd.cwiseAbs().maxCoeff());
    }
    if (prog.objective_scalars.size()) {
        zvec += prog.objective_scalars;
        onorm = std::max(onorm, prog.objective_scalars.cwiseAbs().maxCoeff());
    }
    double sign_viol = 0.0;
    for (std::size_t k = 0; k < prog.constraints.size(); ++k) {
        const auto& c = prog.constraints[k];
        const double yk = y(static_cast<Eigen::Index>(k));
        if (c.psd.size()) zmat -= yk * c.psd;
        if (c.scalars.size()) zvec -= yk * c.scalars;
        if (c.sense == Sense::GreaterEqual) sign_viol = std::max(sign_viol, -yk);
        if (c.sense == Sense::LessEqual) sign_viol = std::max(sign_viol, yk);
    }
    double df = sign_viol;
    if (prog.psd_dim) df = std::max(df, -detail::min_eigenvalue(zmat));
    for (Eigen::Index i = 0; i < zvec.size(); ++i) df = std::max(df, -zvec(i));
    r.dual_feas = df / (1.0 + onorm);

    const double pobj = real_trace(prog.objective_psd, psi) + dot_or_zero(prog.objective_scalars, s);
    double dobj = 0.0;
    for (std::size_t k = 0; k < prog.constraints.size(); ++k)
        dobj += prog.constraints[k].rhs * y(static_cast<Eigen::Index>(k));
    r.duality_gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
    return r;
}

/// True when y proves that no (Psi, s) satisfies the constraints:
/// b . y > 0, sum y_k A_k <= 0, sum y_k a_k <= 0, with y_k >= 0 on ">="
/// rows and y_k <= 0 on "<=" rows. Checked to tolerance `tol` after
/// normalizing to b . y = 1.
inline bool verify_infeasibility_certificate(const ConeProgram& prog, const RVector& y, double tol) {
    if (y.size() != static_cast<Eigen::Index>(prog.constraints.size())) return false;
    double by = 0.0;
    for (std::size_t k = 0; k < prog.constraints.size(); ++k) by += prog.constraints[k].rhs * y(k);
    if (!(by > 0.0)) return false;
    const RVector yn = y / by;
    CMatrix agg = CMatrix::Zero(prog.psd_dim, prog.psd_dim);
    RVector svec = RVector::Zero(prog.n_scalars);
    double scale = 1.0;
    for (std::size_t k = 0; k < prog.constraints.size(); ++k) {
        const auto& c = prog.constraints[k];
        const double yk = yn(k);
        if (c.sense == Sense::GreaterEqual && yk < -tol) return false;
        if (c.sense == Sense::LessEqual && yk > tol) return false;
        if (c.psd.size()) {
            agg += yk * c.psd;
            scale = std::max(scale, std::abs(yk) * c.psd.cwiseAbs().maxCoeff());
        }
        if (c.scalars.size()) {
            svec += yk * c.scalars;
            scale = std::max(scale, std::abs(yk) * c.scalars.cwiseAbs().maxCoeff());
        }
    }
    if (prog.psd_dim && -detail::min_eigenvalue(-agg) > tol * scale) return false;
    for (Eigen::Index i = 0; i < svec.size(); ++i)
        if (svec(i) > tol * scale) return false;
    return true;
}

/// Solves the program to relative KKT residuals <= tol.
inline ConeSolution solve(const ConeProgram& prog, double tol, const SolverOptions& opt = {}) {
    validate(prog);
    if (!(tol > 0.0)) throw std::invalid_argument("cone program: tolerance must be positive");
    using namespace detail;
    const StandardForm sf = standardize(prog);
    const int d = sf.d, p = sf.p, m = sf.m;
    const double nu = d + p + 1;

    RMatrix X = RMatrix::Identity(d, d), Z = RMatrix::Identity(d, d);
    RVector x = RVector::Ones(p), z = RVector::Ones(p), y = RVector::Zero(m);
    double tau = 1.0, kappa = 1.0;

    ConeSolution sol;
    sol.psd_matrix = CMatrix::Zero(prog.psd_dim, prog.psd_dim);
    sol.scalars = RVector::Zero(prog.n_scalars);
    sol.duals = RVector::Zero(m);

    auto to_original_duals = [&](const RVector& yi, double t) {
        return RVector((yi.array() * sf.row_scale.array()).matrix() / (sf.obj_scale * t));
    };

    for (int it = 0; it <= opt.max_iterations; ++it) {
        sol.iterations = it;
        const RVector rp = sf.apply(X, x) - sf.b * tau;
        const RMatrix Rd = sf.adjoint(y) + Z - sf.C * tau;
        const RVector rd = sf.G.transpose() * y + z - sf.c * tau;
        const double pobj = (d ? inner(sf.C, X) : 0.0) + sf.c.dot(x);
        const double dobj = sf.b.dot(y);
        const double rg = pobj - dobj + kappa;
        const double mu = ((d ? inner(X, Z) : 0.0) + x.dot(z) + tau * kappa) / nu;

        // Candidate optimal pair.
        {
            const CMatrix psi = d ? extract(X / tau) : CMatrix();
            const RVector s = x.head(prog.n_scalars) / tau;
            const RVector yo = to_original_duals(y, tau);
            const KktResiduals kkt = measure(prog, psi, s, yo);
            if (kkt.max() <= tol) {
                sol.status = Status::Optimal;
                sol.psd_matrix = d ? psi : CMatrix(0, 0);
                sol.scalars = s;
                sol.duals = yo;
                sol.kkt = kkt;
                sol.objective_value = real_trace(prog.objective_psd, psi) + dot_or_zero(prog.objective_scalars, s);
                sol.dual_objective = 0.0;
                for (int k = 0; k < m; ++k) sol.dual_objective += prog.constraints[k].rhs * yo(k);
                return sol;
            }
            sol.kkt = kkt;
        }
        // Primal infeasibility ray.
        if (dobj > 0.0 && m > 0) {
            const RVector yc = (y.array() * sf.row_scale.array()).matrix();
            if (verify_infeasibility_certificate(prog, yc, tol)) {
                double by = 0.0;
                for (int k = 0; k < m; ++k) by += prog.constraints[k].rhs * yc(k);
                sol.status = Status::Infeasible;
                sol.certificate = yc / by;
                return sol;
            }
        }
        // Dual infeasibility ray (unbounded objective).
        if (pobj < 0.0) {
            const double ray = sf.apply(X, x).cwiseAbs().maxCoeff() / -pobj;
            if (m == 0 || ray <= tol) {
                sol.status = Status::Unbounded;
                return sol;
            }
        }
        if (it == opt.max_iterations) break;

        // Newton system on the embedding.
        RMatrix Zinv;
        if (d) {
            Eigen::LLT<RMatrix> zl(Z);
            if (zl.info() != Eigen::Success) break;
            Zinv = zl.solve(RMatrix::Identity(d, d));
        }
        const RVector D = (x.array() / z.array()).matrix();
        RMatrix M = sf.G * D.asDiagonal() * sf.G.transpose();
        for (int l = 0; l < m && d; ++l) {
            const RMatrix T = X * sf.A[l] * Zinv;
            for (int k = 0; k < m; ++k) M(k, l) += inner(sf.A[k], T);
        }
        M = 0.5 * (M + M.transpose()).eval();
        Eigen::LDLT<RMatrix> M_ldlt;
        if (m) {
            M_ldlt.compute(M);
            if (M_ldlt.info() != Eigen::Success) {
                M.diagonal().array() += 1e-14 * std::max(1.0, M.diagonal().maxCoeff());
                M_ldlt.compute(M);
            }
        }
        auto msolve = [&](const RVector& r) { return m ? RVector(M_ldlt.solve(r)) : RVector(); };
        auto K = [&](const RMatrix& W) {
            RVector out = RVector::Zero(m);
            if (!d) return out;
            const RMatrix T = X * W * Zinv;
            for (int k = 0; k < m; ++k) out(k) = inner(sf.A[k], T);
            return out;
        };
        const RVector h = K(sf.C) + sf.G * (D.array() * sf.c.array()).matrix() + sf.b;
        const RVector v = msolve(h);

        struct Direction {
            RMatrix dX, dZ;
            RVector dx, dz, dy;
            double dtau = 0, dkappa = 0;
        };
        auto direction = [&](double target, double eta, const Direction* aff) {
            RMatrix Rx = d ? RMatrix(target * Zinv - X) : RMatrix();
            RVector rx = ((target - x.array() * z.array()) / z.array()).matrix();
            double rtk = target - tau * kappa;
            if (aff) {
                if (d) Rx -= aff->dX * aff->dZ * Zinv;
                rx -= (aff->dx.array() * aff->dz.array() / z.array()).matrix();
                rtk -= aff->dtau * aff->dkappa;
            }
            if (d) Rx = sym(Rx);
            const RVector rhs0 = -eta * rp - sf.apply_block(Rx) - eta * K(Rd) - sf.G * rx -
                                 eta * sf.G * (D.array() * rd.array()).matrix();
            const RVector u = msolve(rhs0);
            const RMatrix dZ0 = -eta * Rd - sf.adjoint(u);
            const RMatrix dZ1 = sf.C - sf.adjoint(v);
            const RVector dz0 = -eta * rd - sf.G.transpose() * u;
            const RVector dz1 = sf.c - sf.G.transpose() * v;
            const RMatrix dX0 = d ? RMatrix(Rx - sym(X * dZ0 * Zinv)) : RMatrix();
            const RMatrix dX1 = d ? RMatrix(-sym(X * dZ1 * Zinv)) : RMatrix();
            const RVector dx0 = rx - (D.array() * dz0.array()).matrix();
            const RVector dx1 = -(D.array() * dz1.array()).matrix();
            const double num = -eta * rg - (d ? inner(sf.C, dX0) : 0.0) - sf.c.dot(dx0) + sf.b.dot(u) - rtk / tau;
            const double den = (d ? inner(sf.C, dX1) : 0.0) + sf.c.dot(dx1) - sf.b.dot(v) - kappa / tau;
            Direction dir;
            dir.dtau = num / den;
            dir.dy = u + v * dir.dtau;
            dir.dZ = dZ0 + dZ1 * dir.dtau;
            dir.dz = dz0 + dz1 * dir.dtau;
            dir.dX = d ? RMatrix(dX0 + dX1 * dir.dtau) : RMatrix();
            dir.dx = dx0 + dx1 * dir.dtau;
            dir.dkappa = (rtk - kappa * dir.dtau) / tau;
            return dir;
        };
        auto max_step = [&](const Direction& dir) {
            double a = std::numeric_limits<double>::infinity();
            if (d) a = std::min({a, psd_step(X, dir.dX), psd_step(Z, dir.dZ)});
            a = std::min({a, orthant_step(x, dir.dx), orthant_step(z, dir.dz), scalar_step(tau, dir.dtau),
                          scalar_step(kappa, dir.dkappa)});
            return a;
        };

        const Direction aff = direction(0.0, 1.0, nullptr);
        const double a_aff = std::min(1.0, max_step(aff));
        const double mu_aff =
            ((d ? inner(X + a_aff * aff.dX, Z + a_aff * aff.dZ) : 0.0) + (x + a_aff * aff.dx).dot(z + a_aff * aff.dz) +
             (tau + a_aff * aff.dtau) * (kappa + a_aff * aff.dkappa)) /
            nu;
        const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);
        const Direction dir = direction(sigma * mu, 1.0 - sigma, &aff);
        const double alpha = std::min(1.0, opt.step_fraction * max_step(dir));
        if (!(alpha > 0.0) || !std::isfinite(alpha)) break;

        if (d) {
            X = sym(X + alpha * dir.dX);
            Z = sym(Z + alpha * dir.dZ);
        }
        x += alpha * dir.dx;
        z += alpha * dir.dz;
        y += alpha * dir.dy;
        tau += alpha * dir.dtau;
        kappa += alpha * dir.dkappa;
    }

    // Best effort on failure: report the last iterate.
    sol.status = Status::MaxIter;
    if (tau > 0.0) {
        if (d) sol.psd_matrix = extract(X / tau);
        sol.scalars = x.head(prog.n_scalars) / tau;
        sol.duals = to_original_duals(y, tau);
        sol.objective_value =
            real_trace(prog.objective_psd, sol.psd_matrix) + dot_or_zero(prog.objective_scalars, sol.scalars);
    }
    return sol;
}

/// Leading eigenpair of a Hermitian PSD matrix.
struct PrincipalDirection {
    CVector vector;  // unit norm, first nonzero component real positive; zero when eigenvalue is 0
    double eigenvalue = 0.0;
    double rank1_defect = 0.0;  // lambda_2 / lambda_1
};

inline PrincipalDirection principal_direction(const CMatrix& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("principal_direction: matrix is not square");
    if (hermitian_defect(h) > 1e-12) throw std::invalid_argument("principal_direction: matrix is not Hermitian");
    const Eigen::Index n = h.rows();
    PrincipalDirection out;
    out.vector = CVector::Zero(n);
    if (n == 0) return out;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (h + h.adjoint()));
    const RVector& ev = es.eigenvalues();
    const double l1 = ev(n - 1);
    if (!(l1 > 0.0)) return out;
    out.eigenvalue = l1;
    out.rank1_defect = n > 1 ? std::max(0.0, ev(n - 2)) / l1 : 0.0;

    // Eigenvalues tied with the top one span a subspace; choose the unit
    // vector in it with the largest lowest-index component.
    const double tie = 1e-12 * std::max(1.0, std::abs(l1));
    Eigen::Index first = n - 1;
    while (first > 0 && l1 - ev(first - 1) <= tie) --first;
    const CMatrix basis = es.eigenvectors().rightCols(n - first);
    CVector u = basis.col(basis.cols() - 1);
    if (basis.cols() > 1) {
        for (Eigen::Index k = 0; k < n; ++k) {
            const CVector proj = basis * basis.row(k).adjoint();
            if (proj.norm() > 1e-8) {
                u = proj.normalized();
                break;
            }
        }
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        if (std::abs(u(k)) > 1e-12) {
            u *= std::conj(u(k)) / std::abs(u(k));
            u(k) = std::abs(u(k));
            break;
        }
    }
    out.vector = u;
    return out;
}

}  // namespace dfsec::cone

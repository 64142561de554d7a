#pragma once

// Semidefinite feasibility solver behind the conic-solver contract:
// given affine symmetric blocks G_j(z) and margins k_j, decide whether some z
// satisfies G_j(z) <= -k_j I for all j, and return it when one exists.
//
// Method: phase-I eigenvalue minimization
//     minimize t   s.t.   G_j(z) + k_j I <= t I,
// solved as a dual-form SDP with a primal-dual path-following interior-point
// iteration (HKM direction, Mehrotra predictor-corrector).  Dual feasibility
// Z_j = C_j - sum_i y_i A_ij >= 0 is maintained exactly, so any iterate with
// t < 0 is a certified strictly feasible point; a converged positive optimum
// certifies infeasibility of the margined system.
//
// Any conforming semidefinite solver can replace this one; select via the
// MGFD_SOLVER environment variable (only "internal" ships).

#include "mgfd/lmi.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace mgfd {

enum class SolveStatus { feasible, infeasible, numerical_failure };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::feasible: return "feasible";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::numerical_failure: return "numerical-failure";
    }
    return "?";
}

struct SolverOptions {
    int max_iterations = 200;
    double gap_tolerance = 1e-9;       // relative duality gap for a verdict
    double infeasible_threshold = 1e-7;  // t* above this (relative) => infeasible
    double feasible_exit = 1e-6;       // stop once t below -feasible_exit * scale
    bool verbose = false;
};

struct SolveResult {
    SolveStatus status = SolveStatus::numerical_failure;
    Eigen::VectorXd z;          // decision vector (meaningful when feasible)
    double phase1_objective = std::numeric_limits<double>::quiet_NaN();  // final t
    double worst_margin = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    std::string detail;
};

namespace detail {

struct ScaledCone {
    // Per constraint block: C_j and sparse A_ij for the ACTIVE variables plus
    // the artificial t variable (index m_active).
    struct Block {
        Eigen::MatrixXd c;
        std::vector<std::pair<int, std::vector<AffineBlock::Triplet>>> a;  // active var -> coeffs
        int dim;
    };
    std::vector<Block> blocks;
    std::vector<int> active;          // active var -> original var index
    Eigen::VectorXd var_scale;        // z_original = z_scaled / var_scale (per active var)
    int n_active = 0;
    int total_dim = 0;
};

inline ScaledCone build_cone(const LmiProblem& problem) {
    const int m = problem.vars.dimension();
    std::vector<double> max_coeff(m, 0.0);
    for (const auto& b : problem.blocks)
        for (const auto& [var, trips] : b.terms)
            for (const auto& t : trips)
                max_coeff[var] = std::max(max_coeff[var], std::abs(t.value));

    ScaledCone cone;
    std::vector<int> to_active(m, -1);
    for (int i = 0; i < m; ++i) {
        if (max_coeff[i] > 0.0) {
            to_active[i] = cone.n_active++;
            cone.active.push_back(i);
        }
    }
    cone.var_scale.resize(cone.n_active);
    for (int k = 0; k < cone.n_active; ++k) cone.var_scale(k) = 1.0 / max_coeff[cone.active[k]];

    for (const auto& b : problem.blocks) {
        ScaledCone::Block sb;
        sb.dim = b.dim();
        Eigen::MatrixXd f0 = b.constant + b.margin * Eigen::MatrixXd::Identity(sb.dim, sb.dim);
        f0 = 0.5 * (f0 + f0.transpose());
        const double block_scale = std::max(1e-12, f0.cwiseAbs().maxCoeff());
        sb.c = -f0 / block_scale;
        for (const auto& [var, trips] : b.terms) {
            const int k = to_active[var];
            std::vector<AffineBlock::Triplet> scaled;
            scaled.reserve(trips.size());
            for (const auto& t : trips) {
                // symmetrize and scale; split off-diagonal entries evenly
                scaled.push_back({t.row, t.col, t.value * cone.var_scale(k) / block_scale});
            }
            // merge duplicate (r,c) moves to evaluation time; keep raw triplets
            bool found = false;
            for (auto& [existing, list] : sb.a) {
                if (existing == k) {
                    list.insert(list.end(), scaled.begin(), scaled.end());
                    found = true;
                    break;
                }
            }
            if (!found) sb.a.emplace_back(k, std::move(scaled));
        }
        cone.total_dim += sb.dim;
        cone.blocks.push_back(std::move(sb));
    }
    return cone;
}

// Symmetrized dense form of a triplet list.
inline Eigen::MatrixXd dense_sym(const std::vector<AffineBlock::Triplet>& trips, int n) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& t : trips) a(t.row, t.col) += t.value;
    return 0.5 * (a + a.transpose());
}

inline double max_step(const Eigen::MatrixXd& pd, const Eigen::MatrixXd& delta) {
    // largest alpha with pd + alpha*delta >= 0, via lambda_min of L^-1 delta L^-T
    Eigen::LLT<Eigen::MatrixXd> llt(pd);
    if (llt.info() != Eigen::Success) return 0.0;
    const Eigen::MatrixXd l = llt.matrixL();
    Eigen::MatrixXd w = l.triangularView<Eigen::Lower>().solve(delta);
    w = l.triangularView<Eigen::Lower>().solve(w.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (w + w.transpose()),
                                                      Eigen::EigenvaluesOnly);
    const double lam_min = es.eigenvalues().minCoeff();
    if (lam_min >= -1e-14) return std::numeric_limits<double>::infinity();
    return -1.0 / lam_min;
}

}  // namespace detail

inline SolveResult solve_feasibility(const LmiProblem& problem, const SolverOptions& opts = {}) {
    using detail::ScaledCone;
    SolveResult result;
    const detail::ScaledCone cone = detail::build_cone(problem);
    const int m = cone.n_active;     // scaled z variables
    const int nv = m + 1;            // plus the phase-I variable t
    const int nb = static_cast<int>(cone.blocks.size());
    if (nb == 0 || cone.total_dim == 0) {
        result.status = SolveStatus::feasible;
        result.z = Eigen::VectorXd::Zero(problem.vars.dimension());
        result.detail = "no constraints";
        return result;
    }

    // State: y = (z_scaled, t), X_j primal, Z_j = C_j - A*(y) dual slack.
    Eigen::VectorXd y = Eigen::VectorXd::Zero(nv);
    std::vector<Eigen::MatrixXd> x(nb), z(nb), zinv(nb);
    double t0 = 0.0;
    for (int j = 0; j < nb; ++j) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cone.blocks[j].c, Eigen::EigenvaluesOnly);
        t0 = std::max(t0, -es.eigenvalues().minCoeff());
    }
    t0 = 1.25 * t0 + 1.0;
    y(m) = t0;

    auto dual_slack = [&](const Eigen::VectorXd& yy, int j) {
        Eigen::MatrixXd s = cone.blocks[j].c;
        for (const auto& [var, trips] : cone.blocks[j].a)
            for (const auto& t : trips) {
                if (t.row == t.col) s(t.row, t.col) -= yy(var) * t.value;
                else {
                    s(t.row, t.col) -= 0.5 * yy(var) * t.value;
                    s(t.col, t.row) -= 0.5 * yy(var) * t.value;
                }
            }
        s += yy(m) * Eigen::MatrixXd::Identity(s.rows(), s.cols());  // A_t = -I
        return s;
    };
    auto inner_sparse = [](const std::vector<AffineBlock::Triplet>& trips,
                           const Eigen::MatrixXd& w) {
        double acc = 0.0;
        for (const auto& t : trips) {
            if (t.row == t.col) acc += t.value * w(t.row, t.col);
            else acc += 0.5 * t.value * (w(t.row, t.col) + w(t.col, t.row));
        }
        return acc;
    };

    for (int j = 0; j < nb; ++j) {
        x[j] = Eigen::MatrixXd::Identity(cone.blocks[j].dim, cone.blocks[j].dim) /
               static_cast<double>(cone.total_dim);
        z[j] = dual_slack(y, j);
    }

    // b = -e_t: maximize -t.  Primal: min <C,X> s.t. <A_i,X> = b_i, X >= 0.
    Eigen::VectorXd b = Eigen::VectorXd::Zero(nv);
    b(m) = -1.0;

    auto finalize_z = [&](const Eigen::VectorXd& yy) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(problem.vars.dimension());
        for (int k = 0; k < m; ++k) out(cone.active[k]) = yy(k) * cone.var_scale(k);
        return out;
    };

    double best_t = t0;
    Eigen::VectorXd best_y = y;
    int stalled = 0;

    for (int iter = 1; iter <= opts.max_iterations; ++iter) {
        result.iterations = iter;

        // Factor dual slacks.
        bool ok = true;
        for (int j = 0; j < nb; ++j) {
            Eigen::LLT<Eigen::MatrixXd> llt(z[j]);
            if (llt.info() != Eigen::Success) {
                ok = false;
                break;
            }
            zinv[j] = llt.solve(Eigen::MatrixXd::Identity(z[j].rows(), z[j].cols()));
        }
        if (!ok) {
            result.detail = "dual slack lost definiteness";
            break;
        }

        double mu = 0.0;
        for (int j = 0; j < nb; ++j) mu += x[j].cwiseProduct(z[j]).sum();
        const double gap = mu;
        mu /= cone.total_dim;

        // Primal residual r_p = b - A(X).
        Eigen::VectorXd ax = Eigen::VectorXd::Zero(nv);
        for (int j = 0; j < nb; ++j) {
            for (const auto& [var, trips] : cone.blocks[j].a)
                ax(var) += inner_sparse(trips, x[j]);
            ax(m) += -x[j].trace();
        }
        const Eigen::VectorXd rp = b - ax;

        const double t_now = y(m);
        if (t_now < best_t) {
            best_t = t_now;
            best_y = y;
            stalled = 0;
        } else if (++stalled > 40) {
            result.detail = "progress stalled";
            break;
        }

        const double rel_gap = gap / (1.0 + std::abs(t_now));
        const double rp_norm = rp.norm() / (1.0 + b.norm());

        if (opts.verbose)
            std::fprintf(stderr, "  sdp iter %3d  t=% .6e  mu=%.3e  rp=%.3e\n", iter, t_now, mu,
                         rp_norm);

        // Verdicts.
        if (t_now < -opts.feasible_exit * (1.0 + t0) ||
            (t_now < 0.0 && rel_gap < opts.gap_tolerance)) {
            const Eigen::VectorXd candidate = finalize_z(y);
            const double margin = problem.worst_margin(candidate);
            if (margin < 0.0) {
                result.status = SolveStatus::feasible;
                result.z = candidate;
                result.phase1_objective = t_now;
                result.worst_margin = margin;
                result.detail = "phase-1 objective " + std::to_string(t_now);
                return result;
            }
            // direct check disagreed with the scaled iterate; keep refining
        }
        if (rel_gap < opts.gap_tolerance && rp_norm < 1e-8) {
            if (t_now > opts.infeasible_threshold * (1.0 + t0)) {
                result.status = SolveStatus::infeasible;
                result.phase1_objective = t_now;
                result.z = finalize_z(y);
                result.worst_margin = problem.worst_margin(result.z);
                result.detail = "converged with positive phase-1 objective " + std::to_string(t_now);
                return result;
            }
            // Optimum pinned at ~0: cannot certify a strict margin either way.
            result.status = SolveStatus::numerical_failure;
            result.phase1_objective = t_now;
            result.z = finalize_z(y);
            result.worst_margin = problem.worst_margin(result.z);
            result.detail = "phase-1 optimum on the feasibility boundary";
            return result;
        }

        // Schur complement M_ik = sum_j tr(A_i Zinv A_k X).
        Eigen::MatrixXd schur = Eigen::MatrixXd::Zero(nv, nv);
        Eigen::VectorXd a_zinv = Eigen::VectorXd::Zero(nv);  // tr(A_i Z^-1)
        std::vector<std::vector<Eigen::MatrixXd>> w(nb);     // W_kj = Zinv A_k X
        for (int j = 0; j < nb; ++j) {
            const auto& blk = cone.blocks[j];
            const int n = blk.dim;
            w[j].assign(nv, Eigen::MatrixXd());
            for (const auto& [var, trips] : blk.a) {
                Eigen::MatrixXd ax_mat = Eigen::MatrixXd::Zero(n, n);
                for (const auto& t : trips) {
                    if (t.row == t.col) ax_mat.row(t.row) += t.value * x[j].row(t.col);
                    else {
                        ax_mat.row(t.row) += 0.5 * t.value * x[j].row(t.col);
                        ax_mat.row(t.col) += 0.5 * t.value * x[j].row(t.row);
                    }
                }
                w[j][var] = zinv[j] * ax_mat;
                a_zinv(var) += inner_sparse(trips, zinv[j]);
            }
            w[j][m] = -zinv[j] * x[j];
            a_zinv(m) += -zinv[j].trace();
            for (int i = 0; i < nv; ++i) {
                if (w[j][i].size() == 0) continue;
                for (const auto& [var, trips] : blk.a)
                    schur(var, i) += inner_sparse(trips, w[j][i]);
                schur(m, i) += -w[j][i].trace();
            }
        }
        schur = 0.5 * (schur + schur.transpose()).eval();

        Eigen::LDLT<Eigen::MatrixXd> fact(schur);
        if (fact.info() != Eigen::Success || !fact.isPositive()) {
            schur += 1e-12 * schur.diagonal().maxCoeff() * Eigen::MatrixXd::Identity(nv, nv);
            fact.compute(schur);
            if (fact.info() != Eigen::Success) {
                result.detail = "Schur complement factorization failed";
                break;
            }
        }

        auto assemble_dz = [&](const Eigen::VectorXd& dy, int j) {
            Eigen::MatrixXd dz = Eigen::MatrixXd::Zero(cone.blocks[j].dim, cone.blocks[j].dim);
            for (const auto& [var, trips] : cone.blocks[j].a)
                for (const auto& t : trips) {
                    if (t.row == t.col) dz(t.row, t.col) -= dy(var) * t.value;
                    else {
                        dz(t.row, t.col) -= 0.5 * dy(var) * t.value;
                        dz(t.col, t.row) -= 0.5 * dy(var) * t.value;
                    }
                }
            dz += dy(m) * Eigen::MatrixXd::Identity(dz.rows(), dz.cols());
            return dz;
        };

        // Predictor (sigma = 0): M dy = b - 0 * a_zinv  => with rhs_i = b_i.
        Eigen::VectorXd dy_aff = fact.solve(b);
        std::vector<Eigen::MatrixXd> dz_aff(nb), dx_aff(nb);
        double ap = std::numeric_limits<double>::infinity();
        double ad = std::numeric_limits<double>::infinity();
        for (int j = 0; j < nb; ++j) {
            dz_aff[j] = assemble_dz(dy_aff, j);
            Eigen::MatrixXd dx = -x[j] - zinv[j] * dz_aff[j] * x[j];
            dx_aff[j] = 0.5 * (dx + dx.transpose());
            ap = std::min(ap, detail::max_step(x[j], dx_aff[j]));
            ad = std::min(ad, detail::max_step(z[j], dz_aff[j]));
        }
        ap = std::min(1.0, 0.98 * ap);
        ad = std::min(1.0, 0.98 * ad);

        double gap_aff = 0.0;
        for (int j = 0; j < nb; ++j)
            gap_aff += (x[j] + ap * dx_aff[j]).cwiseProduct(z[j] + ad * dz_aff[j]).sum();
        double sigma = std::pow(std::max(0.0, gap_aff / gap), 3.0);
        sigma = std::min(0.99, std::max(1e-6, sigma));

        // Corrector: rhs_i = b_i - sigma*mu*tr(A_i Z^-1) + tr(A_i Z^-1 dZ dX).
        Eigen::VectorXd rhs = b - sigma * mu * a_zinv;
        for (int j = 0; j < nb; ++j) {
            const Eigen::MatrixXd u = zinv[j] * dz_aff[j] * dx_aff[j];
            for (const auto& [var, trips] : cone.blocks[j].a)
                rhs(var) += inner_sparse(trips, u);
            rhs(m) += -u.trace();
        }
        Eigen::VectorXd dy = fact.solve(rhs);

        std::vector<Eigen::MatrixXd> dz(nb), dx(nb);
        ap = std::numeric_limits<double>::infinity();
        ad = std::numeric_limits<double>::infinity();
        for (int j = 0; j < nb; ++j) {
            dz[j] = assemble_dz(dy, j);
            Eigen::MatrixXd step = sigma * mu * zinv[j] - x[j] - zinv[j] * dz[j] * x[j] -
                                   zinv[j] * dz_aff[j] * dx_aff[j];
            dx[j] = 0.5 * (step + step.transpose());
            ap = std::min(ap, detail::max_step(x[j], dx[j]));
            ad = std::min(ad, detail::max_step(z[j], dz[j]));
        }
        const double tau = (gap / cone.total_dim < 1e-5) ? 0.99 : 0.95;
        ap = std::min(1.0, tau * ap);
        ad = std::min(1.0, tau * ad);
        if (ap < 1e-12 && ad < 1e-12) {
            result.detail = "step lengths collapsed";
            break;
        }

        for (int j = 0; j < nb; ++j) x[j] += ap * dx[j];
        y += ad * dy;
        for (int j = 0; j < nb; ++j) z[j] = dual_slack(y, j);
    }

    // Ran out of iterations or hit a numerical wall.  Report the best iterate.
    result.phase1_objective = best_t;
    result.z = finalize_z(best_y);
    result.worst_margin = problem.worst_margin(result.z);
    if (result.worst_margin < 0.0) {
        result.status = SolveStatus::feasible;
        result.detail += " (best iterate feasible on direct check)";
    } else {
        result.status = SolveStatus::numerical_failure;
        if (result.detail.empty()) result.detail = "iteration limit reached";
    }
    return result;
}

}  // namespace mgfd

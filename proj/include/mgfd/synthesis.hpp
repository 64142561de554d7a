#pragma once

// Observer synthesis via the mixed robustness/sensitivity LMIs.
//
// Error dynamics (W = I):
//   edot = (A - LC) e + (E_w - L F_w) w + (E_f - L F_f) f + Phi
//   r    = C e + F_w w + F_f f
// With Y = P L the two 3x3 block conditions become affine in (P, Y, eps):
//
// robust block                                 sensitive block
//   [ O1   P Ew - Y Fw + C'Fw   P + corner1 ]    [ O2   P Ef - Y Ff - C'Ff   P + corner2 ]
//   [  *   -a^2 I + Fw'Fw       0           ]    [  *   -b^2 I + Ff'Ff       0           ]
//   [  *    *                   -e2 I       ]    [  *    *                   -e4 I       ]
//
// with, for the one-sided-Lipschitz / quadratic-inner-bounded form,
//   O1 = A'P + PA - C'Y' - YC + C'C + (e1*rho + e2*delta) I, corner1 = (e2*phi - e1)/2 I,
//   O2 = A'P + PA - C'Y' - YC - C'C + (e3*rho + e4*delta) I, corner2 = (e4*phi - e3)/2 I,
// and, for the Lipschitz form,
//   O1 = ... + e1*gamma^2 I, corner1 = 0;  O2 = ... + e2*gamma^2 I, corner2 = 0,
// with -e1 I / -e2 I in the bottom-right corners.
//
// States are rescaled by a diagonal similarity S before assembly (the grid
// model mixes magnitudes from 1e-5 to 2e4); the returned gain L = S L_tilde
// is in original coordinates, and the design is re-verified by substituting
// L back into the nonlinear-in-L blocks.

#include "mgfd/faults.hpp"
#include "mgfd/gfm_model.hpp"
#include "mgfd/ini.hpp"
#include "mgfd/lmi.hpp"
#include "mgfd/sdp.hpp"
#include "mgfd/sector_constants.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mgfd {

struct ErrorSystemMatrices {
    Eigen::MatrixXd A;    // n x n
    Eigen::MatrixXd C;    // p x n
    Eigen::MatrixXd E_w;  // n x nw   (defaults to B)
    Eigen::MatrixXd F_w;  // p x nw   (defaults to D)
    Eigen::MatrixXd E_f;  // n x k
    Eigen::MatrixXd F_f;  // p x k

    int states() const { return static_cast<int>(A.rows()); }
    int outputs() const { return static_cast<int>(C.rows()); }

    void validate() const {
        const int n = states();
        const int p = outputs();
        if (A.cols() != n || C.cols() != n || E_w.rows() != n || E_f.rows() != n)
            throw std::invalid_argument("error-system dimension mismatch in state matrices");
        if (F_w.rows() != p || F_f.rows() != p)
            throw std::invalid_argument("error-system dimension mismatch in output matrices");
        if (E_w.cols() != F_w.cols() || E_f.cols() != F_f.cols())
            throw std::invalid_argument("disturbance/fault channel dimension mismatch");
    }

    ErrorSystemMatrices scaled_by(const Eigen::VectorXd& s) const {
        validate();
        if (s.size() != states())
            throw std::invalid_argument("state scale length mismatch");
        const auto sinv = s.cwiseInverse().asDiagonal();
        ErrorSystemMatrices out;
        out.A = sinv * A * s.asDiagonal();
        out.C = C * s.asDiagonal();
        out.E_w = sinv * E_w;
        out.F_w = F_w;
        out.E_f = sinv * E_f;
        out.F_f = F_f;
        return out;
    }
};

inline ErrorSystemMatrices make_error_system(const InverterModel& model,
                                             const FaultSignature& fault) {
    ErrorSystemMatrices sys;
    sys.A = model.A;
    sys.C = model.C;
    sys.E_w = model.B;  // disturbance enters through the input channels
    sys.F_w = model.D;
    sys.E_f = fault.state_matrix;
    sys.F_f = fault.output_matrix;
    sys.validate();
    return sys;
}

enum class SynthesisMethod { lipschitz, olqb };

inline const char* to_string(SynthesisMethod m) {
    return m == SynthesisMethod::lipschitz ? "lipschitz" : "olqb";
}

inline SynthesisMethod synthesis_method_from_string(const std::string& name) {
    if (name == "lipschitz") return SynthesisMethod::lipschitz;
    if (name == "olqb") return SynthesisMethod::olqb;
    throw std::invalid_argument("unknown synthesis method '" + name + "'");
}

struct SynthesisProblem {
    LmiProblem lmi;
    ErrorSystemMatrices scaled;
    Eigen::VectorXd scale;
    SynthesisMethod method;
    double alpha = 0.0, beta = 0.0;
    double gamma = 0.0, rho = 0.0, delta = 0.0, phi = 0.0;
    double kappa_rel = 1e-6;
    int p_var = -1, y_var = -1;
    std::vector<int> eps_vars;
};

namespace detail {

// Margins follow kappa = kappa_rel * (largest constant entry of the block);
// a global scale would be larger than the best achievable margin of the
// -beta^2 I corner whenever beta is small.
inline double block_margin(const Eigen::MatrixXd& constant, double kappa_rel) {
    return kappa_rel * constant.cwiseAbs().maxCoeff();
}

struct BlockLayout {
    int n, chan, total;
};

inline void assemble_core(SynthesisProblem& sp, bool sensitive, const Eigen::MatrixXd& e_chan,
                          const Eigen::MatrixXd& f_chan, double level, double c_sign,
                          int eps_lin, int eps_quad, double rho, double delta, double phi,
                          bool lipschitz, double gamma) {
    const auto& sys = sp.scaled;
    const int n = sys.states();
    const int p = sys.outputs();
    const int chan = static_cast<int>(e_chan.cols());
    const int total = 2 * n + chan;
    auto& vars = sp.lmi.vars;

    AffineBlock block;
    block.name = sensitive ? "sensitive" : "robust";
    block.constant = Eigen::MatrixXd::Zero(total, total);
    // constant parts: +-C'C in (1,1), C'F in (1,2), -level^2 I + F'F in (2,2)
    block.constant.topLeftCorner(n, n) = c_sign * sys.C.transpose() * sys.C;
    block.constant.block(0, n, n, chan) = c_sign * sys.C.transpose() * f_chan;
    block.constant.block(n, 0, chan, n) = c_sign * f_chan.transpose() * sys.C;
    block.constant.block(n, n, chan, chan) =
        -level * level * Eigen::MatrixXd::Identity(chan, chan) + f_chan.transpose() * f_chan;
    block.margin = block_margin(block.constant, sp.kappa_rel);

    // P terms: A'dP + dP A in (1,1), dP E in (1,2), dP in (1,3)
    for (int r = 0; r < n; ++r) {
        for (int c = r; c < n; ++c) {
            Eigen::MatrixXd dp = Eigen::MatrixXd::Zero(n, n);
            dp(r, c) = 1.0;
            dp(c, r) = 1.0;
            Eigen::MatrixXd coeff = Eigen::MatrixXd::Zero(total, total);
            coeff.topLeftCorner(n, n) = sys.A.transpose() * dp + dp * sys.A;
            coeff.block(0, n, n, chan) = dp * e_chan;
            coeff.block(n, 0, chan, n) = (dp * e_chan).transpose();
            coeff.block(0, n + chan, n, n) = dp;
            coeff.block(n + chan, 0, n, n) = dp;
            block.add_term(vars.index(sp.p_var, r, c), coeff);
        }
    }
    // Y terms: -(dY C + C'dY') in (1,1), -dY F in (1,2)
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < p; ++c) {
            Eigen::MatrixXd dy = Eigen::MatrixXd::Zero(n, p);
            dy(r, c) = 1.0;
            Eigen::MatrixXd coeff = Eigen::MatrixXd::Zero(total, total);
            coeff.topLeftCorner(n, n) = -(dy * sys.C) - (dy * sys.C).transpose();
            coeff.block(0, n, n, chan) = -dy * f_chan;
            coeff.block(n, 0, chan, n) = (-dy * f_chan).transpose();
            block.add_term(vars.index(sp.y_var, r, c), coeff);
        }
    }
    // multiplier terms
    const Eigen::MatrixXd id_n = Eigen::MatrixXd::Identity(n, n);
    if (lipschitz) {
        // eps_lin multiplies gamma^2 I in (1,1) and -I in (3,3)
        Eigen::MatrixXd coeff = Eigen::MatrixXd::Zero(total, total);
        coeff.topLeftCorner(n, n) = gamma * gamma * id_n;
        coeff.bottomRightCorner(n, n) = -id_n;
        block.add_term(vars.index(eps_lin, 0, 0), coeff);
    } else {
        // eps_lin: rho I in (1,1), -1/2 I in (1,3)
        Eigen::MatrixXd c1 = Eigen::MatrixXd::Zero(total, total);
        c1.topLeftCorner(n, n) = rho * id_n;
        c1.block(0, n + chan, n, n) = -0.5 * id_n;
        c1.block(n + chan, 0, n, n) = -0.5 * id_n;
        block.add_term(vars.index(eps_lin, 0, 0), c1);
        // eps_quad: delta I in (1,1), phi/2 I in (1,3), -I in (3,3)
        Eigen::MatrixXd c2 = Eigen::MatrixXd::Zero(total, total);
        c2.topLeftCorner(n, n) = delta * id_n;
        c2.block(0, n + chan, n, n) = 0.5 * phi * id_n;
        c2.block(n + chan, 0, n, n) = 0.5 * phi * id_n;
        c2.bottomRightCorner(n, n) = -id_n;
        block.add_term(vars.index(eps_quad, 0, 0), c2);
    }
    sp.lmi.blocks.push_back(std::move(block));
}

inline void add_scalar_floor(SynthesisProblem& sp, int var, double floor_value) {
    AffineBlock block;  // floor - eps <= 0
    block.name = "nonneg";
    block.constant = floor_value * Eigen::MatrixXd::Identity(1, 1);
    block.add_term(sp.lmi.vars.index(var, 0, 0), -Eigen::MatrixXd::Identity(1, 1));
    sp.lmi.blocks.push_back(std::move(block));
}

inline void add_p_floor(SynthesisProblem& sp, double floor_value) {
    const int n = sp.scaled.states();
    AffineBlock block;  // floor I - P <= 0
    block.name = "p-floor";
    block.constant = floor_value * Eigen::MatrixXd::Identity(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) {
            Eigen::MatrixXd dp = Eigen::MatrixXd::Zero(n, n);
            dp(r, c) = -1.0;
            dp(c, r) = -1.0;
            block.add_term(sp.lmi.vars.index(sp.p_var, r, c), dp);
        }
    sp.lmi.blocks.push_back(std::move(block));
}

inline double problem_scale(const ErrorSystemMatrices& sys) {
    return std::max({1.0, (sys.C.transpose() * sys.C).cwiseAbs().maxCoeff()});
}

}  // namespace detail

inline SynthesisProblem build_olqb_lmis(const ErrorSystemMatrices& sys_scaled, double rho,
                                        double delta, double phi, double alpha, double beta,
                                        double kappa_rel = 1e-6) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("alpha and beta must be strictly positive");
    sys_scaled.validate();
    SynthesisProblem sp;
    sp.scaled = sys_scaled;
    sp.method = SynthesisMethod::olqb;
    sp.alpha = alpha;
    sp.beta = beta;
    sp.rho = rho;
    sp.delta = delta;
    sp.phi = phi;
    sp.kappa_rel = kappa_rel;
    sp.lmi.description = "olqb observer synthesis";
    const int n = sys_scaled.states();
    sp.p_var = sp.lmi.vars.add_symmetric("P", n);
    sp.y_var = sp.lmi.vars.add_rectangular("Y", n, sys_scaled.outputs());
    for (const char* name : {"eps1", "eps2", "eps3", "eps4"})
        sp.eps_vars.push_back(sp.lmi.vars.add_scalar(name));

    detail::assemble_core(sp, false, sys_scaled.E_w, sys_scaled.F_w, alpha, +1.0, sp.eps_vars[0],
                          sp.eps_vars[1], rho, delta, phi, false, 0.0);
    detail::assemble_core(sp, true, sys_scaled.E_f, sys_scaled.F_f, beta, -1.0, sp.eps_vars[2],
                          sp.eps_vars[3], rho, delta, phi, false, 0.0);
    const double scale = detail::problem_scale(sys_scaled);
    detail::add_p_floor(sp, 1e-9 * scale);
    for (int v : sp.eps_vars) detail::add_scalar_floor(sp, v, 0.0);
    return sp;
}

inline SynthesisProblem build_lipschitz_lmis(const ErrorSystemMatrices& sys_scaled, double gamma,
                                             double alpha, double beta, double kappa_rel = 1e-6) {
    if (!(alpha > 0.0) || !(beta > 0.0))
        throw std::invalid_argument("alpha and beta must be strictly positive");
    if (gamma < 0.0) throw std::invalid_argument("gamma must be non-negative");
    sys_scaled.validate();
    SynthesisProblem sp;
    sp.scaled = sys_scaled;
    sp.method = SynthesisMethod::lipschitz;
    sp.alpha = alpha;
    sp.beta = beta;
    sp.gamma = gamma;
    sp.kappa_rel = kappa_rel;
    sp.lmi.description = "lipschitz observer synthesis";
    const int n = sys_scaled.states();
    sp.p_var = sp.lmi.vars.add_symmetric("P", n);
    sp.y_var = sp.lmi.vars.add_rectangular("Y", n, sys_scaled.outputs());
    for (const char* name : {"eps1", "eps2"})
        sp.eps_vars.push_back(sp.lmi.vars.add_scalar(name));

    detail::assemble_core(sp, false, sys_scaled.E_w, sys_scaled.F_w, alpha, +1.0, sp.eps_vars[0],
                          -1, 0.0, 0.0, 0.0, true, gamma);
    detail::assemble_core(sp, true, sys_scaled.E_f, sys_scaled.F_f, beta, -1.0, sp.eps_vars[1],
                          -1, 0.0, 0.0, 0.0, true, gamma);
    const double scale = detail::problem_scale(sys_scaled);
    detail::add_p_floor(sp, 1e-9 * scale);
    for (int v : sp.eps_vars) detail::add_scalar_floor(sp, v, 0.0);
    return sp;
}

struct ObserverDesign {
    SynthesisMethod method = SynthesisMethod::olqb;
    Eigen::MatrixXd gain;        // L in original coordinates
    Eigen::MatrixXd lyapunov;    // P in scaled coordinates
    Eigen::MatrixXd y_variable;  // Y = P * L_scaled
    Eigen::VectorXd multipliers;
    double alpha = 0.0, beta = 0.0;
    Eigen::VectorXd lmi_margins;  // lambda_max of each re-substituted block
    Eigen::VectorXd state_scale;
    double spectral_abscissa = 0.0;  // max Re eig(A - LC)

    bool margins_negative() const { return lmi_margins.maxCoeff() < 0.0; }

    void write(ini::Document& doc) const {
        doc.set_string("design", "method", to_string(method));
        doc.set_number("design", "alpha", alpha);
        doc.set_number("design", "beta", beta);
        doc.set_number("design", "spectral_abscissa", spectral_abscissa);
        doc.set_vector("design", "lmi_margins", lmi_margins);
        doc.set_vector("design", "multipliers", multipliers);
        doc.set_vector("design", "state_scale", state_scale);
        doc.set_matrix("design", "gain", gain);
        doc.set_matrix("design", "lyapunov_scaled", lyapunov);
        doc.set_matrix("design", "y_scaled", y_variable);
    }

    static ObserverDesign read(const ini::Document& doc) {
        ObserverDesign d;
        d.method = synthesis_method_from_string(doc.get_string("design", "method"));
        d.alpha = doc.get_number("design", "alpha");
        d.beta = doc.get_number("design", "beta");
        d.spectral_abscissa = doc.get_number("design", "spectral_abscissa");
        d.lmi_margins = doc.get_vector("design", "lmi_margins");
        d.multipliers = doc.get_vector("design", "multipliers");
        d.state_scale = doc.get_vector("design", "state_scale");
        d.gain = doc.get_matrix("design", "gain");
        d.lyapunov = doc.get_matrix("design", "lyapunov_scaled");
        d.y_variable = doc.get_matrix("design", "y_scaled");
        return d;
    }
};

// Dense re-evaluation of the two blocks from (P, L, eps) without the Y
// substitution; used to verify solver output and for the Theorem-2 transfer.
inline Eigen::VectorXd verification_margins(const ErrorSystemMatrices& sys_scaled,
                                            SynthesisMethod method, double gamma, double rho,
                                            double delta, double phi, double alpha, double beta,
                                            const Eigen::MatrixXd& p, const Eigen::MatrixXd& l,
                                            const Eigen::VectorXd& eps) {
    const int n = sys_scaled.states();
    const Eigen::MatrixXd abar = sys_scaled.A - l * sys_scaled.C;
    const Eigen::MatrixXd id_n = Eigen::MatrixXd::Identity(n, n);

    auto block_margin = [&](bool sensitive) {
        const Eigen::MatrixXd& e_chan = sensitive ? sys_scaled.E_f : sys_scaled.E_w;
        const Eigen::MatrixXd& f_chan = sensitive ? sys_scaled.F_f : sys_scaled.F_w;
        const double level = sensitive ? beta : alpha;
        const double c_sign = sensitive ? -1.0 : 1.0;
        const int chan = static_cast<int>(e_chan.cols());
        const int total = 2 * n + chan;
        const Eigen::MatrixXd ebar = e_chan - l * f_chan;

        double eps_lin, eps_quad;
        if (method == SynthesisMethod::lipschitz) {
            eps_lin = eps(sensitive ? 1 : 0);
            eps_quad = eps_lin;
        } else {
            eps_lin = eps(sensitive ? 2 : 0);
            eps_quad = eps(sensitive ? 3 : 1);
        }

        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(total, total);
        Eigen::MatrixXd omega = abar.transpose() * p + p * abar +
                                c_sign * sys_scaled.C.transpose() * sys_scaled.C;
        if (method == SynthesisMethod::lipschitz)
            omega += eps_lin * gamma * gamma * id_n;
        else
            omega += (eps_lin * rho + eps_quad * delta) * id_n;
        g.topLeftCorner(n, n) = omega;
        const Eigen::MatrixXd coupling = p * ebar + c_sign * sys_scaled.C.transpose() * f_chan;
        g.block(0, n, n, chan) = coupling;
        g.block(n, 0, chan, n) = coupling.transpose();
        g.block(n, n, chan, chan) =
            -level * level * Eigen::MatrixXd::Identity(chan, chan) + f_chan.transpose() * f_chan;
        Eigen::MatrixXd corner = p;
        if (method == SynthesisMethod::olqb) corner += 0.5 * (eps_quad * phi - eps_lin) * id_n;
        g.block(0, n + chan, n, n) = corner;
        g.block(n + chan, 0, n, n) = corner;
        g.bottomRightCorner(n, n) = -eps_quad * id_n;

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
        return es.eigenvalues().maxCoeff();
    };

    Eigen::VectorXd margins(2);
    margins(0) = block_margin(false);
    margins(1) = block_margin(true);
    return margins;
}

struct SynthesisOutcome {
    SolveStatus status = SolveStatus::numerical_failure;
    std::optional<ObserverDesign> design;
    double phase1_objective = std::numeric_limits<double>::quiet_NaN();
    int iterations = 0;
    std::string detail;
};

inline SynthesisOutcome solve_design(const SynthesisProblem& sp, const Eigen::VectorXd& scale,
                                     const SolverOptions& solver_opts = {}) {
    SynthesisOutcome out;
    const SolveResult res = solve_feasibility(sp.lmi, solver_opts);
    out.status = res.status;
    out.phase1_objective = res.phase1_objective;
    out.iterations = res.iterations;
    out.detail = res.detail;
    if (res.status != SolveStatus::feasible) return out;

    const Eigen::MatrixXd p = sp.lmi.vars.matrix_value(sp.p_var, res.z);
    const Eigen::MatrixXd y = sp.lmi.vars.matrix_value(sp.y_var, res.z);
    Eigen::VectorXd eps(sp.eps_vars.size());
    for (size_t i = 0; i < sp.eps_vars.size(); ++i)
        eps(static_cast<Eigen::Index>(i)) = sp.lmi.vars.scalar_value(sp.eps_vars[i], res.z);

    // L = P^-1 Y, then back to original coordinates.
    const Eigen::MatrixXd l_scaled = p.ldlt().solve(y);

    ObserverDesign design;
    design.method = sp.method;
    design.lyapunov = p;
    design.y_variable = y;
    design.multipliers = eps;
    design.alpha = sp.alpha;
    design.beta = sp.beta;
    design.state_scale = scale;
    design.gain = scale.asDiagonal() * l_scaled;

    design.lmi_margins = verification_margins(sp.scaled, sp.method, sp.gamma, sp.rho, sp.delta,
                                              sp.phi, sp.alpha, sp.beta, p, l_scaled, eps);

    // Each re-substituted block must keep at least half its assembly margin.
    int idx = 0;
    for (const auto& b : sp.lmi.blocks) {
        if (b.name != "robust" && b.name != "sensitive") continue;
        if (design.lmi_margins(idx) > -0.5 * b.margin) {
            out.status = SolveStatus::numerical_failure;
            out.detail = "re-substituted " + b.name + " block lost definiteness (margin " +
                         std::to_string(design.lmi_margins(idx)) + ")";
            return out;
        }
        ++idx;
    }

    const Eigen::MatrixXd abar = sp.scaled.A - l_scaled * sp.scaled.C;
    design.spectral_abscissa = abar.eigenvalues().real().maxCoeff();
    if (design.spectral_abscissa >= 0.0) {
        out.status = SolveStatus::numerical_failure;
        out.detail = "A - LC not Hurwitz after extraction";
        return out;
    }

    out.design = std::move(design);
    return out;
}

// Mapping of a feasible Lipschitz design onto the OL/QB conditions:
// rho = gamma, delta = gamma^2 - phi_choice*gamma, eps1 = eps1'*phi_choice,
// eps2 = eps1', eps3 = eps2'*phi_choice, eps4 = eps2'.  The transferred
// multipliers reproduce the Lipschitz blocks exactly, so the transferred
// design must carry negative margins whenever the source did.
struct Theorem2Result {
    double rho, delta, phi;
    Eigen::VectorXd multipliers;
    Eigen::VectorXd lmi_margins;
};

inline Theorem2Result theorem2_transfer(const ErrorSystemMatrices& sys_scaled,
                                        const ObserverDesign& lipschitz_design, double gamma,
                                        double phi_choice) {
    if (!(phi_choice > 0.0)) throw std::invalid_argument("phi_choice must be positive");
    if (lipschitz_design.method != SynthesisMethod::lipschitz)
        throw std::invalid_argument("theorem2_transfer expects a Lipschitz design");

    Theorem2Result out;
    out.rho = gamma;
    out.phi = phi_choice;
    out.delta = gamma * gamma - phi_choice * gamma;
    out.multipliers.resize(4);
    out.multipliers << lipschitz_design.multipliers(0) * phi_choice,
        lipschitz_design.multipliers(0), lipschitz_design.multipliers(1) * phi_choice,
        lipschitz_design.multipliers(1);

    const Eigen::MatrixXd l_scaled =
        lipschitz_design.state_scale.cwiseInverse().asDiagonal() * lipschitz_design.gain;
    out.lmi_margins = verification_margins(
        sys_scaled, SynthesisMethod::olqb, 0.0, out.rho, out.delta, out.phi,
        lipschitz_design.alpha, lipschitz_design.beta, lipschitz_design.lyapunov, l_scaled,
        out.multipliers);
    return out;
}

// Bisection on beta at fixed alpha: the optional maximize-b mode.  Each probe
// is one feasibility solve.
template <typename BuildFn>
std::pair<double, SynthesisOutcome> maximize_beta(BuildFn&& build, double beta_lo, double beta_hi,
                                                  const Eigen::VectorXd& scale, int iterations = 16,
                                                  const SolverOptions& solver_opts = {}) {
    SynthesisOutcome best;
    double best_beta = 0.0;
    for (int i = 0; i < iterations; ++i) {
        const double beta = (i == 0) ? beta_lo : 0.5 * (beta_lo + beta_hi);
        auto outcome = solve_design(build(beta), scale, solver_opts);
        if (outcome.status == SolveStatus::feasible) {
            best = outcome;
            best_beta = beta;
            beta_lo = beta;
        } else {
            beta_hi = beta;
        }
        if (i == 0 && outcome.status != SolveStatus::feasible) break;  // not even beta_lo works
    }
    return {best_beta, std::move(best)};
}

}  // namespace mgfd

#pragma once

// Deterministic vector-matrix fault models for the four internal fault types.
// Each fault enters the plant as  xdot += E_f f,  y += F_f f,  where f is
// built from the fault magnitudes and, for the state-dependent faults, the
// plant state itself.

#include "mgfd/gfm_model.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace mgfd {

enum class FaultKind { busbar, actuator_omega, actuator_vn, bridge };

inline const char* to_string(FaultKind kind) {
    switch (kind) {
        case FaultKind::busbar: return "busbar";
        case FaultKind::actuator_omega: return "actuator-omega";
        case FaultKind::actuator_vn: return "actuator-vn";
        case FaultKind::bridge: return "bridge";
    }
    return "?";
}

inline FaultKind fault_kind_from_string(const std::string& name) {
    if (name == "busbar") return FaultKind::busbar;
    if (name == "actuator-omega") return FaultKind::actuator_omega;
    if (name == "actuator-vn") return FaultKind::actuator_vn;
    if (name == "bridge") return FaultKind::bridge;
    throw std::invalid_argument("unknown fault kind '" + name + "'");
}

struct FaultMagnitudes {
    double dv_bd = 0.0;      // busbar voltage offset, d axis (V)
    double dv_bq = 0.0;      // busbar voltage offset, q axis (V)
    double d_omega = 0.0;    // frequency setpoint offset (rad/s)
    double d_vn = 0.0;       // voltage setpoint offset (V)
    double d_eta_vid = 0.0;  // bridge efficiency drop, d axis, in (0, 1]
    double d_eta_viq = 0.0;  // bridge efficiency drop, q axis, in (0, 1]
};

struct FaultSignature {
    FaultKind kind;
    int dimension;                 // k
    Eigen::MatrixXd state_matrix;  // E_f, 13 x k
    Eigen::MatrixXd output_matrix; // F_f, 7 x k

    Eigen::VectorXd vector(const StateVec& x, const InputVec& u,
                           const FaultMagnitudes& mags) const {
        using namespace state;
        Eigen::VectorXd f = Eigen::VectorXd::Zero(dimension);
        switch (kind) {
            case FaultKind::busbar:
                f << mags.dv_bd, mags.dv_bq;
                break;
            case FaultKind::actuator_omega:
                f << mags.d_omega, mags.d_omega * x(i_lq), mags.d_omega * x(i_ld),
                    mags.d_omega * x(v_oq), mags.d_omega * x(v_od), mags.d_omega * x(i_oq),
                    mags.d_omega * x(i_od);
                break;
            case FaultKind::actuator_vn:
                f << mags.d_vn;
                break;
            case FaultKind::bridge:
                f.head(9) = mags.d_eta_vid *
                            (Eigen::VectorXd(9) << x(reactive_power), x(phi_d), x(gamma_d),
                             x(i_ld), x(i_lq), x(v_od), x(v_oq), x(i_od),
                             u(input::voltage_set))
                                .finished();
                f.tail(7) = mags.d_eta_viq *
                            (Eigen::VectorXd(7) << x(phi_q), x(gamma_q), x(i_ld), x(i_lq),
                             x(v_od), x(v_oq), x(i_oq))
                                .finished();
                break;
        }
        return f;
    }
};

// Grounding of the PCC: only the connector current equations feel the
// busbar voltage offset; no direct output feedthrough.
inline FaultSignature busbar_signature(const GfmParameters& params) {
    params.validate();
    FaultSignature sig;
    sig.kind = FaultKind::busbar;
    sig.dimension = 2;
    sig.state_matrix = Eigen::MatrixXd::Zero(state::count, 2);
    sig.state_matrix(state::i_od, 0) = -1.0 / params.connector_inductance;
    sig.state_matrix(state::i_oq, 1) = -1.0 / params.connector_inductance;
    sig.output_matrix = Eigen::MatrixXd::Zero(output::count, 2);
    return sig;
}

// Offset on the frequency setpoint; it enters the angle equation linearly and
// the six frame-rotation products, so the fault vector is state-dependent.
inline FaultSignature actuator_omega_signature(const GfmParameters& params) {
    params.validate();
    FaultSignature sig;
    sig.kind = FaultKind::actuator_omega;
    sig.dimension = 7;
    sig.state_matrix = Eigen::MatrixXd::Zero(state::count, 7);
    sig.state_matrix(state::angle, 0) = 1.0;
    const double signs[6] = {1.0, -1.0, 1.0, -1.0, 1.0, -1.0};
    for (int i = 0; i < 6; ++i)
        sig.state_matrix(state::i_ld + i, 1 + i) = signs[i];
    sig.output_matrix = Eigen::MatrixXd::Zero(output::count, 7);
    sig.output_matrix(output::frequency, 0) = 1.0;
    return sig;
}

// Offset on the voltage magnitude setpoint; propagates through the cascaded
// voltage and current PI loops, affecting the linear part only.
inline FaultSignature actuator_vn_signature(const GfmParameters& params) {
    params.validate();
    FaultSignature sig;
    sig.kind = FaultKind::actuator_vn;
    sig.dimension = 1;
    sig.state_matrix = Eigen::MatrixXd::Zero(state::count, 1);
    sig.state_matrix(state::phi_d, 0) = 1.0;
    sig.state_matrix(state::gamma_d, 0) = params.voltage_kp;
    sig.state_matrix(state::i_ld, 0) =
        params.current_kp * params.voltage_kp / params.filter_inductance;
    sig.output_matrix = Eigen::MatrixXd::Zero(output::count, 1);
    sig.output_matrix(output::v_od_ref, 0) = 1.0;
    sig.output_matrix(output::i_ld_ref, 0) = params.voltage_kp;
    sig.output_matrix(output::v_id_ref, 0) = params.current_kp * params.voltage_kp;
    return sig;
}

// Abrupt efficiency drop of the inverter bridge:
// v_id = (1 - d_eta_vid) v_id_ref and the q-axis counterpart.  The 9- and
// 7-entry coefficient vectors are the expansion of -v_id_ref/L_f and
// -v_iq_ref/L_f over the fault-vector slots.
inline FaultSignature bridge_signature(const GfmParameters& params) {
    params.validate();
    const double l_f = params.filter_inductance;
    const double c_f = params.filter_capacitance;
    const double k_pv = params.voltage_kp;
    const double k_iv = params.voltage_ki;
    const double k_pc = params.current_kp;
    const double k_ic = params.current_ki;
    const double n_q = params.droop_q;
    const double w_b = params.nominal_frequency;
    const double ff = params.feedforward_gain;

    Eigen::VectorXd xi_vid(9);
    xi_vid << k_pc * k_pv * n_q / l_f, -k_pc * k_iv / l_f, -k_ic / l_f, k_pc / l_f, w_b,
        k_pc * k_pv / l_f, k_pc * w_b * c_f / l_f, -k_pc * ff / l_f, -k_pc * k_pv / l_f;
    Eigen::VectorXd tau_vid = l_f * xi_vid;

    Eigen::VectorXd xi_viq(7);
    xi_viq << -k_pc * k_iv / l_f, -k_ic / l_f, -w_b, k_pc / l_f, -k_pc * w_b * c_f / l_f,
        k_pc * k_pv / l_f, -k_pc * ff / l_f;
    Eigen::VectorXd tau_viq = l_f * xi_viq;

    FaultSignature sig;
    sig.kind = FaultKind::bridge;
    sig.dimension = 16;
    sig.state_matrix = Eigen::MatrixXd::Zero(state::count, 16);
    sig.state_matrix.row(state::i_ld).head(9) = xi_vid.transpose();
    sig.state_matrix.row(state::i_lq).tail(7) = xi_viq.transpose();
    sig.output_matrix = Eigen::MatrixXd::Zero(output::count, 16);
    sig.output_matrix.row(output::v_id_ref).head(9) = tau_vid.transpose();
    sig.output_matrix.row(output::v_iq_ref).tail(7) = tau_viq.transpose();
    return sig;
}

inline FaultSignature fault_signature(FaultKind kind, const GfmParameters& params) {
    switch (kind) {
        case FaultKind::busbar: return busbar_signature(params);
        case FaultKind::actuator_omega: return actuator_omega_signature(params);
        case FaultKind::actuator_vn: return actuator_vn_signature(params);
        case FaultKind::bridge: return bridge_signature(params);
    }
    throw std::logic_error("unreachable");
}

inline void validate_bridge_magnitudes(const FaultMagnitudes& mags) {
    auto in_range = [](double d) { return d == 0.0 || (d > 0.0 && d <= 1.0); };
    if (!in_range(mags.d_eta_vid) || !in_range(mags.d_eta_viq))
        throw std::invalid_argument("bridge efficiency deltas must lie in (0, 1]");
}

}  // namespace mgfd

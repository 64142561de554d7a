#pragma once

// 13-state nonlinear model of one droop-controlled grid-forming inverter,
// split as  xdot = A x + B u + phi(x, u),  y = C x + D u.
//
// A and B are constant, phi holds every product term (state*state and
// state*input), so the split is unique: phi(0,0) = 0 and phi is exactly
// quadratic in (x, u).

#include "mgfd/gfm_parameters.hpp"

#include <Eigen/Dense>

namespace mgfd {

namespace state {
enum Index : int {
    angle = 0,       // alpha, rad (power angle vs. common frame)
    active_power,    // P, W (low-pass filtered)
    reactive_power,  // Q, var (low-pass filtered, see sign note in GfmParameters)
    phi_d,           // voltage-PI integrator, d axis
    phi_q,           // voltage-PI integrator, q axis
    gamma_d,         // current-PI integrator, d axis
    gamma_q,         // current-PI integrator, q axis
    i_ld,            // bridge-side filter current, A
    i_lq,
    v_od,            // filter capacitor voltage, V
    v_oq,
    i_od,            // output connector current, A
    i_oq,
    count
};
}  // namespace state

namespace input {
enum Index : int {
    omega_common = 0,  // frequency of the common reference frame, rad/s
    omega_set,         // omega_n, frequency setpoint
    voltage_set,       // V_n, voltage magnitude setpoint
    v_bd,              // busbar voltage seen through the connector, local dq
    v_bq,
    count
};
}  // namespace input

namespace output {
enum Index : int {
    angle = 0,   // alpha
    frequency,   // omega = omega_n - m_P * P
    v_od_ref,    // V_n - n_Q * Q
    i_ld_ref,    // voltage-PI output, d axis
    i_lq_ref,
    v_id_ref,    // current-PI output, d axis (equals the bridge voltage when healthy)
    v_iq_ref,
    count
};
}  // namespace output

using StateVec = Eigen::Matrix<double, state::count, 1>;
using InputVec = Eigen::Matrix<double, input::count, 1>;
using OutputVec = Eigen::Matrix<double, output::count, 1>;
using StateMatrix = Eigen::Matrix<double, state::count, state::count>;
using InputMatrix = Eigen::Matrix<double, state::count, input::count>;
using OutputMatrix = Eigen::Matrix<double, output::count, state::count>;
using FeedthroughMatrix = Eigen::Matrix<double, output::count, input::count>;

struct InverterModel {
    StateMatrix A;
    InputMatrix B;
    OutputMatrix C;
    FeedthroughMatrix D;
    GfmParameters params;

    // phi(x, u): the product terms of the governing equations.  The operating
    // frequency omega = omega_n - m_P*P multiplies the six electrical states
    // (frame rotation), and the instantaneous powers multiply v_o with i_o.
    StateVec nonlinearity(const StateVec& x, const InputVec& u) const {
        using namespace state;
        const double omega = u(input::omega_set) - params.droop_p * x(active_power);
        const double wc = params.power_filter_cutoff;
        StateVec phi = StateVec::Zero();
        phi(active_power) = wc * (x(v_od) * x(i_od) + x(v_oq) * x(i_oq));
        phi(reactive_power) = wc * (x(v_od) * x(i_oq) - x(v_oq) * x(i_od));
        phi(i_ld) = omega * x(i_lq);
        phi(i_lq) = -omega * x(i_ld);
        phi(v_od) = omega * x(v_oq);
        phi(v_oq) = -omega * x(v_od);
        phi(i_od) = omega * x(i_oq);
        phi(i_oq) = -omega * x(i_od);
        return phi;
    }

    StateVec derivative(const StateVec& x, const InputVec& u) const {
        return A * x + B * u + nonlinearity(x, u);
    }

    OutputVec output(const StateVec& x, const InputVec& u) const { return C * x + D * u; }
};

inline InverterModel build_inverter_model(const GfmParameters& params) {
    params.validate();
    using namespace state;

    const double m_p = params.droop_p;
    const double n_q = params.droop_q;
    const double r_c = params.connector_resistance;
    const double l_c = params.connector_inductance;
    const double r_f = params.filter_resistance;
    const double l_f = params.filter_inductance;
    const double c_f = params.filter_capacitance;
    const double k_pv = params.voltage_kp;
    const double k_iv = params.voltage_ki;
    const double k_pc = params.current_kp;
    const double k_ic = params.current_ki;
    const double w_b = params.nominal_frequency;
    const double w_c = params.power_filter_cutoff;
    const double ff = params.feedforward_gain;

    InverterModel m;
    m.params = params;
    m.A.setZero();
    m.B.setZero();
    m.C.setZero();
    m.D.setZero();

    // alpha_dot = (omega_n - m_P P) - omega_com
    m.A(angle, active_power) = -m_p;
    m.B(angle, input::omega_set) = 1.0;
    m.B(angle, input::omega_common) = -1.0;

    // P_dot = w_c (v_o . i_o - P), Q_dot = w_c (v_od i_oq - v_oq i_od - Q);
    // the products live in phi.
    m.A(active_power, active_power) = -w_c;
    m.A(reactive_power, reactive_power) = -w_c;

    // Voltage PI:  phi_d_dot = (V_n - n_Q Q) - v_od,  phi_q_dot = -v_oq.
    m.A(phi_d, reactive_power) = -n_q;
    m.A(phi_d, v_od) = -1.0;
    m.B(phi_d, input::voltage_set) = 1.0;
    m.A(phi_q, v_oq) = -1.0;

    // i_ld_ref = F i_od - w_b C_f v_oq + K_PV (v_od_ref - v_od) + K_IV phi_d
    // i_lq_ref = F i_oq + w_b C_f v_od - K_PV v_oq + K_IV phi_q
    Eigen::RowVector<double, count> ild_ref = Eigen::RowVector<double, count>::Zero();
    ild_ref(i_od) = ff;
    ild_ref(v_oq) = -w_b * c_f;
    ild_ref(reactive_power) = -k_pv * n_q;
    ild_ref(v_od) = -k_pv;
    ild_ref(phi_d) = k_iv;
    const double ild_ref_vn = k_pv;  // coefficient of V_n

    Eigen::RowVector<double, count> ilq_ref = Eigen::RowVector<double, count>::Zero();
    ilq_ref(i_oq) = ff;
    ilq_ref(v_od) = w_b * c_f;
    ilq_ref(v_oq) = -k_pv;
    ilq_ref(phi_q) = k_iv;

    // gamma_d_dot = i_ld_ref - i_ld, gamma_q_dot = i_lq_ref - i_lq
    m.A.row(gamma_d) = ild_ref;
    m.A(gamma_d, i_ld) += -1.0;
    m.B(gamma_d, input::voltage_set) = ild_ref_vn;
    m.A.row(gamma_q) = ilq_ref;
    m.A(gamma_q, i_lq) += -1.0;

    // v_id_ref = -w_b L_f i_lq + K_PC (i_ld_ref - i_ld) + K_IC gamma_d
    // v_iq_ref =  w_b L_f i_ld + K_PC (i_lq_ref - i_lq) + K_IC gamma_q
    Eigen::RowVector<double, count> vid_ref = k_pc * ild_ref;
    vid_ref(i_lq) += -w_b * l_f;
    vid_ref(i_ld) += -k_pc;
    vid_ref(gamma_d) += k_ic;
    const double vid_ref_vn = k_pc * ild_ref_vn;

    Eigen::RowVector<double, count> viq_ref = k_pc * ilq_ref;
    viq_ref(i_ld) += w_b * l_f;
    viq_ref(i_lq) += -k_pc;
    viq_ref(gamma_q) += k_ic;

    // LC filter (bridge voltage = v_id_ref when healthy); omega couplings in phi.
    // L_f i_ld_dot = -R_f i_ld + v_id - v_od  (+ omega L_f i_lq)
    m.A.row(i_ld) = vid_ref / l_f;
    m.A(i_ld, i_ld) += -r_f / l_f;
    m.A(i_ld, v_od) += -1.0 / l_f;
    m.B(i_ld, input::voltage_set) = vid_ref_vn / l_f;
    m.A.row(i_lq) = viq_ref / l_f;
    m.A(i_lq, i_lq) += -r_f / l_f;
    m.A(i_lq, v_oq) += -1.0 / l_f;

    // C_f v_od_dot = i_ld - i_od  (+ omega C_f v_oq)
    m.A(v_od, i_ld) = 1.0 / c_f;
    m.A(v_od, i_od) = -1.0 / c_f;
    m.A(v_oq, i_lq) = 1.0 / c_f;
    m.A(v_oq, i_oq) = -1.0 / c_f;

    // Connector: L_c i_od_dot = -R_c i_od + v_od - v_bd  (+ omega L_c i_oq)
    m.A(i_od, i_od) = -r_c / l_c;
    m.A(i_od, v_od) = 1.0 / l_c;
    m.B(i_od, input::v_bd) = -1.0 / l_c;
    m.A(i_oq, i_oq) = -r_c / l_c;
    m.A(i_oq, v_oq) = 1.0 / l_c;
    m.B(i_oq, input::v_bq) = -1.0 / l_c;

    // Outputs.
    m.C(output::angle, angle) = 1.0;
    m.C(output::frequency, active_power) = -m_p;
    m.D(output::frequency, input::omega_set) = 1.0;
    m.C(output::v_od_ref, reactive_power) = -n_q;
    m.D(output::v_od_ref, input::voltage_set) = 1.0;
    m.C.row(output::i_ld_ref) = ild_ref;
    m.D(output::i_ld_ref, input::voltage_set) = ild_ref_vn;
    m.C.row(output::i_lq_ref) = ilq_ref;
    m.C.row(output::v_id_ref) = vid_ref;
    m.D(output::v_id_ref, input::voltage_set) = vid_ref_vn;
    m.C.row(output::v_iq_ref) = viq_ref;

    return m;
}

}  // namespace mgfd

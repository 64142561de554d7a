#pragma once

#include "mgfd/ini.hpp"

#include <stdexcept>
#include <string>

namespace mgfd {

// Physical and controller constants of one droop-controlled grid-forming
// inverter.  Field names below are the public contract for parameter files
// (section [gfm], one document per inverter).
//
// Sign conventions used throughout the library:
//   * dq frames rotate so that the d-axis derivative of every inductive
//     state picks up +omega * (q component), and the q-axis derivative
//     picks up -omega * (d component).
//   * the filtered reactive power state integrates
//     q_inst = v_od*i_oq - v_oq*i_od.  Under the frame handedness above this
//     is positive for capacitive export / inductive import; the droop law
//     v_od_ref = V_n - n_Q * Q acts on this quantity.
struct GfmParameters {
    double power_rating_kva = 45.0;
    double voltage_rating_v = 380.0;
    double droop_p = 9.4e-5;             // m_P, (rad/s)/W
    double droop_q = 1.3e-3;             // n_Q, V/var
    double connector_resistance = 0.03;  // R_c, ohm
    double connector_inductance = 0.35e-3;  // L_c, H
    double filter_resistance = 0.1;      // R_f, ohm
    double filter_inductance = 1.35e-3;  // L_f, H
    double filter_capacitance = 50e-6;   // C_f, F
    double voltage_kp = 0.1;             // K_PV
    double voltage_ki = 420.0;           // K_IV
    double current_kp = 15.0;            // K_PC
    double current_ki = 20000.0;         // K_IC
    double nominal_frequency = 314.16;   // omega_b, rad/s
    // Not printed in the reference tables; calibration knobs.
    double power_filter_cutoff = 31.41;  // omega_c, rad/s
    double feedforward_gain = 0.75;      // F, output-current feed-forward

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0))
                throw std::invalid_argument(std::string("GfmParameters: ") + name +
                                            " must be strictly positive");
        };
        positive(power_rating_kva, "power_rating_kva");
        positive(voltage_rating_v, "voltage_rating_v");
        positive(droop_p, "m_p");
        positive(droop_q, "n_q");
        positive(connector_resistance, "r_c");
        positive(connector_inductance, "l_c");
        positive(filter_resistance, "r_f");
        positive(filter_inductance, "l_f");
        positive(filter_capacitance, "c_f");
        positive(nominal_frequency, "omega_b");
        positive(power_filter_cutoff, "omega_c");
        if (feedforward_gain < 0.0)
            throw std::invalid_argument("GfmParameters: feedforward_f must be non-negative");
    }

    // 45 kVA unit (inverters #1 and #2 of the reference grid).
    static GfmParameters rating_45kva() { return GfmParameters{}; }

    // 34 kVA unit (inverters #3 and #4).
    static GfmParameters rating_34kva() {
        GfmParameters p;
        p.power_rating_kva = 34.0;
        p.droop_p = 12.5e-5;
        p.droop_q = 1.5e-3;
        p.voltage_kp = 0.05;
        p.voltage_ki = 390.0;
        p.current_kp = 10.5;
        p.current_ki = 16000.0;
        return p;
    }

    void write(ini::Document& doc, const std::string& section = "gfm") const {
        doc.set_number(section, "power_rating_kva", power_rating_kva);
        doc.set_number(section, "voltage_rating_v", voltage_rating_v);
        doc.set_number(section, "m_p", droop_p);
        doc.set_number(section, "n_q", droop_q);
        doc.set_number(section, "r_c", connector_resistance);
        doc.set_number(section, "l_c", connector_inductance);
        doc.set_number(section, "r_f", filter_resistance);
        doc.set_number(section, "l_f", filter_inductance);
        doc.set_number(section, "c_f", filter_capacitance);
        doc.set_number(section, "k_pv", voltage_kp);
        doc.set_number(section, "k_iv", voltage_ki);
        doc.set_number(section, "k_pc", current_kp);
        doc.set_number(section, "k_ic", current_ki);
        doc.set_number(section, "omega_b", nominal_frequency);
        doc.set_number(section, "omega_c", power_filter_cutoff);
        doc.set_number(section, "feedforward_f", feedforward_gain);
    }

    static GfmParameters read(const ini::Document& doc, const std::string& section = "gfm") {
        GfmParameters p;
        p.power_rating_kva = doc.get_number(section, "power_rating_kva");
        p.voltage_rating_v = doc.get_number(section, "voltage_rating_v");
        p.droop_p = doc.get_number(section, "m_p");
        p.droop_q = doc.get_number(section, "n_q");
        p.connector_resistance = doc.get_number(section, "r_c");
        p.connector_inductance = doc.get_number(section, "l_c");
        p.filter_resistance = doc.get_number(section, "r_f");
        p.filter_inductance = doc.get_number(section, "l_f");
        p.filter_capacitance = doc.get_number(section, "c_f");
        p.voltage_kp = doc.get_number(section, "k_pv");
        p.voltage_ki = doc.get_number(section, "k_iv");
        p.current_kp = doc.get_number(section, "k_pc");
        p.current_ki = doc.get_number(section, "k_ic");
        p.nominal_frequency = doc.get_number(section, "omega_b");
        p.power_filter_cutoff = doc.get_number_or(section, "omega_c", p.power_filter_cutoff);
        p.feedforward_gain = doc.get_number_or(section, "feedforward_f", p.feedforward_gain);
        p.validate();
        return p;
    }
};

}  // namespace mgfd

#pragma once

#include "mgfd/gfm_model.hpp"
#include "mgfd/ini.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace mgfd {

// Box D x U over which the sector constants of the nonlinearity are
// certified.
struct OperatingRegion {
    StateVec state_min, state_max;
    InputVec input_min, input_max;

    void validate() const {
        auto check = [](const auto& lo, const auto& hi, const char* what) {
            for (Eigen::Index i = 0; i < lo.size(); ++i) {
                if (!std::isfinite(lo(i)) || !std::isfinite(hi(i)))
                    throw std::invalid_argument(std::string("OperatingRegion: non-finite ") + what);
                if (lo(i) > hi(i))
                    throw std::invalid_argument(std::string("OperatingRegion: min > max in ") + what);
            }
        };
        check(state_min, state_max, "state bounds");
        check(input_min, input_max, "input bounds");
    }

    bool degenerate() const {
        return (state_max - state_min).minCoeff() <= 0.0;
    }

    StateVec state_halfwidth() const { return 0.5 * (state_max - state_min); }

    void write(ini::Document& doc, const std::string& section = "region") const {
        doc.set_vector(section, "state_min", state_min);
        doc.set_vector(section, "state_max", state_max);
        doc.set_vector(section, "input_min", input_min);
        doc.set_vector(section, "input_max", input_max);
    }

    static OperatingRegion read(const ini::Document& doc, const std::string& section = "region") {
        OperatingRegion r;
        r.state_min = doc.get_vector(section, "state_min");
        r.state_max = doc.get_vector(section, "state_max");
        r.input_min = doc.get_vector(section, "input_min");
        r.input_max = doc.get_vector(section, "input_max");
        r.validate();
        return r;
    }
};

// Default box around a settled operating point: every state within +-1.5x its
// steady-state magnitude, currents within +-2x rated, with floors for the
// slots that settle near zero.  Inputs get +-5% bands on the setpoints and a
// voltage-scaled band on the busbar voltage.
inline OperatingRegion default_region_around(const StateVec& x_ss, const InputVec& u_ss,
                                             const GfmParameters& params) {
    using namespace state;
    const double s_rated = 1000.0 * params.power_rating_kva;
    const double v_rated = params.voltage_rating_v;
    const double i_rated = s_rated / v_rated;

    StateVec hw;
    hw(angle) = std::max(1.5 * std::abs(x_ss(angle)), 0.2);
    hw(active_power) = std::max(1.5 * std::abs(x_ss(active_power)), 0.5 * s_rated);
    hw(reactive_power) = std::max(1.5 * std::abs(x_ss(reactive_power)), 0.5 * s_rated);
    hw(phi_d) = std::max(1.5 * std::abs(x_ss(phi_d)), 0.05);
    hw(phi_q) = std::max(1.5 * std::abs(x_ss(phi_q)), 0.05);
    hw(gamma_d) = std::max(1.5 * std::abs(x_ss(gamma_d)), 0.02);
    hw(gamma_q) = std::max(1.5 * std::abs(x_ss(gamma_q)), 0.02);
    for (int k : {i_ld, i_lq, i_od, i_oq}) hw(k) = 2.0 * i_rated;
    hw(v_od) = std::max(1.5 * std::abs(x_ss(v_od)), 0.25 * v_rated);
    hw(v_oq) = std::max(1.5 * std::abs(x_ss(v_oq)), 0.25 * v_rated);

    InputVec ihw;
    ihw(input::omega_common) = 0.05 * params.nominal_frequency;
    ihw(input::omega_set) = 0.05 * params.nominal_frequency;
    ihw(input::voltage_set) = 0.05 * v_rated;
    ihw(input::v_bd) = std::max(1.5 * std::abs(u_ss(input::v_bd)), 0.25 * v_rated);
    ihw(input::v_bq) = std::max(1.5 * std::abs(u_ss(input::v_bq)), 0.25 * v_rated);

    OperatingRegion region;
    region.state_min = x_ss - hw;
    region.state_max = x_ss + hw;
    region.input_min = u_ss - ihw;
    region.input_max = u_ss + ihw;
    region.validate();
    return region;
}

// Diagonal similarity used both by the constants estimators and the LMI
// assembler: one power of ten per state, sized from the region half-widths.
inline StateVec scale_from_region(const OperatingRegion& region) {
    const StateVec hw = region.state_halfwidth();
    StateVec s;
    for (int i = 0; i < state::count; ++i) {
        const double w = std::max(hw(i), 1e-12);
        s(i) = std::pow(10.0, std::round(std::log10(w)));
    }
    return s;
}

}  // namespace mgfd

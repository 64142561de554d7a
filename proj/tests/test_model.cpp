#include <catch2/catch_amalgamated.hpp>

#include "direct_model.hpp"

#include "mgfd/gfm_model.hpp"
#include "mgfd/ini.hpp"

using namespace mgfd;
using mgfd_test::BoxSampler;
using mgfd_test::direct_output;
using mgfd_test::direct_rhs;

TEST_CASE("matrix entries read off the governing equations", "[model]") {
    const auto m = build_inverter_model(GfmParameters::rating_45kva());
    CHECK(m.A(state::active_power, state::active_power) ==
          Catch::Approx(-m.params.power_filter_cutoff));
    CHECK(m.B(state::angle, input::omega_common) == -1.0);
    CHECK(m.B(state::angle, input::omega_set) == 1.0);
    CHECK(m.A(state::angle, state::active_power) == Catch::Approx(-9.4e-5));
    CHECK(m.A(state::i_od, state::i_od) == Catch::Approx(-0.03 / 0.35e-3));
    CHECK(m.B(state::i_od, input::v_bd) == Catch::Approx(-1.0 / 0.35e-3));
}

TEST_CASE("nonlinearity vanishes at the origin", "[model]") {
    const auto m = build_inverter_model(GfmParameters::rating_45kva());
    CHECK(m.nonlinearity(StateVec::Zero(), InputVec::Zero()).norm() == 0.0);
    CHECK(m.derivative(StateVec::Zero(), InputVec::Zero()).norm() == 0.0);
    CHECK(m.output(StateVec::Zero(), InputVec::Zero()).norm() == 0.0);
}

TEST_CASE("A/B/phi split matches the direct equations", "[model][oracle]") {
    for (auto params : {GfmParameters::rating_45kva(), GfmParameters::rating_34kva()}) {
        const auto m = build_inverter_model(params);
        BoxSampler sampler(0x5eed01);
        for (int i = 0; i < 1000; ++i) {
            const StateVec x = sampler.state();
            const InputVec u = sampler.input();
            const StateVec split = m.derivative(x, u);
            const StateVec direct = direct_rhs(params, x, u);
            REQUIRE((split - direct).norm() <= 1e-9 * direct.norm());
            const OutputVec y_split = m.output(x, u);
            const OutputVec y_direct = direct_output(params, x, u);
            REQUIRE((y_split - y_direct).norm() <= 1e-9 * (1.0 + y_direct.norm()));
        }
    }
}

TEST_CASE("phi is exactly quadratic per slot", "[model][property]") {
    const auto m = build_inverter_model(GfmParameters::rating_45kva());
    BoxSampler sampler(0x5eed02);
    for (int i = 0; i < 200; ++i) {
        const StateVec x = sampler.state();
        const InputVec u = sampler.input();
        for (double lambda : {0.5, 2.0, -3.0}) {
            const StateVec lhs = m.nonlinearity(lambda * x, lambda * u);
            const StateVec rhs = lambda * lambda * m.nonlinearity(x, u);
            for (int k = 0; k < state::count; ++k)
                REQUIRE(lhs(k) == Catch::Approx(rhs(k)).margin(1e-6 * (1.0 + std::abs(rhs(k)))));
        }
    }
}

TEST_CASE("output rows for angle and frequency have the documented sparsity", "[model]") {
    const auto m = build_inverter_model(GfmParameters::rating_45kva());
    for (int j = 0; j < state::count; ++j) {
        if (j != state::angle) CHECK(m.C(output::angle, j) == 0.0);
        if (j != state::active_power) CHECK(m.C(output::frequency, j) == 0.0);
    }
    for (int j = 0; j < input::count; ++j) {
        CHECK(m.D(output::angle, j) == 0.0);
        if (j != input::omega_set) CHECK(m.D(output::frequency, j) == 0.0);
    }
}

TEST_CASE("droop outputs at rated operating points", "[model]") {
    const auto m = build_inverter_model(GfmParameters::rating_45kva());
    StateVec x = StateVec::Zero();
    InputVec u = InputVec::Zero();

    x(state::active_power) = 45000.0;
    u(input::omega_set) = 314.16;
    CHECK(m.output(x, u)(output::frequency) == Catch::Approx(314.16 - 9.4e-5 * 45000.0));

    x.setZero();
    x(state::reactive_power) = 1000.0;
    u.setZero();
    u(input::voltage_set) = 380.0;
    CHECK(m.output(x, u)(output::v_od_ref) == Catch::Approx(380.0 - 1.3e-3 * 1000.0));
}

TEST_CASE("low-pass power filter slot", "[model]") {
    const auto m = build_inverter_model(GfmParameters::rating_45kva());
    StateVec x = StateVec::Zero();
    x(state::active_power) = 1000.0;
    const StateVec dx = m.derivative(x, InputVec::Zero());
    CHECK(dx(state::active_power) ==
          Catch::Approx(-m.params.power_filter_cutoff * 1000.0));
}

TEST_CASE("parameters round-trip bit-exactly through serialization", "[model][io]") {
    for (auto params : {GfmParameters::rating_45kva(), GfmParameters::rating_34kva()}) {
        ini::Document doc;
        params.write(doc);
        const auto parsed = GfmParameters::read(ini::Document::parse(doc.to_string()));
        CHECK(parsed.power_rating_kva == params.power_rating_kva);
        CHECK(parsed.droop_p == params.droop_p);
        CHECK(parsed.droop_q == params.droop_q);
        CHECK(parsed.connector_inductance == params.connector_inductance);
        CHECK(parsed.filter_capacitance == params.filter_capacitance);
        CHECK(parsed.voltage_ki == params.voltage_ki);
        CHECK(parsed.current_ki == params.current_ki);
        CHECK(parsed.nominal_frequency == params.nominal_frequency);
        CHECK(parsed.power_filter_cutoff == params.power_filter_cutoff);
        CHECK(parsed.feedforward_gain == params.feedforward_gain);
    }
}

TEST_CASE("non-positive physical constants are rejected", "[model][errors]") {
    auto params = GfmParameters::rating_45kva();
    params.filter_inductance = 0.0;
    CHECK_THROWS_AS(build_inverter_model(params), std::invalid_argument);
    params = GfmParameters::rating_45kva();
    params.droop_p = -1e-5;
    CHECK_THROWS_AS(build_inverter_model(params), std::invalid_argument);
    params = GfmParameters::rating_45kva();
    params.connector_resistance = -0.1;
    CHECK_THROWS_AS(build_inverter_model(params), std::invalid_argument);
}

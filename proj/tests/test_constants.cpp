#include <catch2/catch_amalgamated.hpp>

#include "mgfd/sector_constants.hpp"

#include <cmath>

using namespace mgfd;

namespace {

// -x^3 as a 1-state, 0-width-input nonlinearity.
auto cubic = [](const Eigen::VectorXd& x, const Eigen::VectorXd&) -> Eigen::VectorXd {
    Eigen::VectorXd out(1);
    out(0) = -x(0) * x(0) * x(0);
    return out;
};

Eigen::VectorXd scalar(double v) {
    Eigen::VectorXd out(1);
    out(0) = v;
    return out;
}

OperatingRegion plausible_region() {
    StateVec x_ss = StateVec::Zero();
    x_ss(state::active_power) = 2.0e4;
    x_ss(state::reactive_power) = 2.0e3;
    x_ss(state::phi_d) = 0.05;
    x_ss(state::gamma_d) = 0.015;
    x_ss(state::i_ld) = 55.0;
    x_ss(state::v_od) = 380.0;
    x_ss(state::i_od) = 52.0;
    InputVec u_ss = InputVec::Zero();
    u_ss(input::omega_common) = 312.0;
    u_ss(input::omega_set) = 314.16;
    u_ss(input::voltage_set) = 380.0;
    u_ss(input::v_bd) = 378.0;
    return default_region_around(x_ss, u_ss, GfmParameters::rating_45kva());
}

}  // namespace

TEST_CASE("zero nonlinearity has zero sector constants", "[constants]") {
    auto zero_fn = [](const Eigen::VectorXd& x, const Eigen::VectorXd&) {
        return Eigen::VectorXd::Zero(x.size()).eval();
    };
    const auto est = estimate_sector(zero_fn, scalar(-1.0), scalar(1.0), scalar(0.0), scalar(0.0),
                                     scalar(1.0), 1000, 7);
    CHECK(est.lipschitz_raw == 0.0);
    CHECK(est.one_sided_raw == 0.0);
    CHECK(est.qb_delta_raw <= 0.0 + 1e-12);
}

TEST_CASE("-x^3 Lipschitz constant approaches the grid oracle", "[constants][oracle]") {
    // oracle: max |f'(x)| on [-1,1] from a dense grid
    double oracle = 0.0;
    for (int i = 0; i <= 100000; ++i) {
        const double x = -1.0 + 2.0 * i / 100000.0;
        oracle = std::max(oracle, 3.0 * x * x);
    }
    REQUIRE(oracle == Catch::Approx(3.0));

    const auto est = estimate_sector(cubic, scalar(-1.0), scalar(1.0), scalar(0.0), scalar(0.0),
                                     scalar(1.0), 100000, 11);
    CHECK(est.lipschitz_raw >= 0.95 * 3.0);
    CHECK(est.lipschitz_raw <= 1.05 * 3.0);
}

TEST_CASE("-x^3 one-sided constant is zero", "[constants][oracle]") {
    // <f(x)-f(xh), x-xh> / |x-xh|^2 = -(x^2 + x*xh + xh^2), supremum 0 at the origin
    const auto est = estimate_sector(cubic, scalar(-1.0), scalar(1.0), scalar(0.0), scalar(0.0),
                                     scalar(1.0), 100000, 13);
    CHECK(std::abs(est.one_sided_raw) <= 0.01);
}

TEST_CASE("-x^3 quadratic bounds hold on a dense grid oracle", "[constants][oracle]") {
    const auto est = estimate_sector(cubic, scalar(-1.0), scalar(1.0), scalar(0.0), scalar(0.0),
                                     scalar(1.0), 100000, 17);
    const double margin = 0.05 * (std::abs(est.qb_delta_raw) + std::abs(est.qb_phi) * 3.0);
    const double delta = est.qb_delta_raw + margin;
    const double phi_c = est.qb_phi;

    int violations = 0;
    const int grid = 1000;
    for (int i = 0; i <= grid; ++i) {
        const double x = -1.0 + 2.0 * i / grid;
        for (int j = 0; j <= grid; ++j) {
            const double xh = -1.0 + 2.0 * j / grid;
            if (i == j) continue;
            const double dx = x - xh;
            const double df = -x * x * x + xh * xh * xh;
            const double lhs = df * df;
            const double rhs = phi_c * dx * df + delta * dx * dx;
            if (lhs > rhs + 1e-9 * (1.0 + std::abs(rhs))) ++violations;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("certified constants hold on fresh pairs", "[constants][holdout]") {
    const auto model = build_inverter_model(GfmParameters::rating_45kva());
    const auto region = plausible_region();
    const auto k = estimate_sector_constants(model, region, 40000, 101);
    const auto report = validate_on_holdout(model, k, 40000, 777);
    INFO("lip=" << report.lipschitz_violations << " os=" << report.one_sided_violations
                << " qb=" << report.qb_violations << " of " << report.pairs);
    CHECK(report.certified());
    CHECK(k.one_sided <= k.lipschitz);
}

TEST_CASE("sector constants never beat the Lipschitz corner on the same samples",
          "[constants][property]") {
    // For phi_c >= 0 the effective sector delta(phi_c) + phi_c*rho can reach
    // the Lipschitz-implied corner gamma^2 but never dip strictly below it.
    const auto model = build_inverter_model(GfmParameters::rating_45kva());
    const auto region = plausible_region();
    const StateVec metric = scale_from_region(region);
    std::vector<double> nonneg_grid;
    nonneg_grid.push_back(0.0);
    for (int i = 0; i <= 24; ++i) nonneg_grid.push_back(std::pow(10.0, -1.0 + 3.0 * i / 24.0));
    const auto est = estimate_sector(
        [&](const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
            return model.nonlinearity(StateVec(x), InputVec(u)).eval();
        },
        region.state_min, region.state_max, region.input_min, region.input_max, metric, 20000, 19,
        nonneg_grid);
    const double corner = est.lipschitz_raw * est.lipschitz_raw;
    const double effective = est.qb_delta_raw + std::max(est.qb_phi, 0.0) * est.one_sided_raw;
    CHECK(effective >= corner * (1.0 - 1e-9) - 1e-9);
}

TEST_CASE("region growth never shrinks gamma or rho", "[constants][property]") {
    const auto model = build_inverter_model(GfmParameters::rating_45kva());
    const auto base = plausible_region();
    const StateVec center = 0.5 * (base.state_min + base.state_max);
    const StateVec hw = base.state_halfwidth();
    const StateVec metric = scale_from_region(base);

    double prev_gamma = -1.0, prev_rho = -1e30;
    for (double scale : {0.5, 1.0, 1.5}) {
        OperatingRegion r = base;
        r.state_min = center - scale * hw;
        r.state_max = center + scale * hw;
        const double gamma = estimate_lipschitz(model, r, 20000, 23, 1.0, metric);
        const double rho = estimate_one_sided(model, r, 20000, 23, 1.0, metric);
        CHECK(gamma >= prev_gamma);
        CHECK(rho >= prev_rho - 1e-12);
        prev_gamma = gamma;
        prev_rho = rho;
    }
}

TEST_CASE("reference-table comparison is reported", "[constants][calibration]") {
    const auto model = build_inverter_model(GfmParameters::rating_45kva());
    const auto region = plausible_region();
    const auto k = estimate_sector_constants(model, region, 60000, 29);
    // Published values for the 45 kVA pair: gamma 44.7488, rho 22.3688,
    // delta -0.7493, phi 2.3599.  The certifying region/metric are not
    // published, so the estimates are compared and the deviation recorded;
    // the holdout certificate above is the binding invariant.
    WARN("sector constants: gamma=" << k.lipschitz << " (ref 44.7488), rho=" << k.one_sided
                                    << " (ref 22.3688), delta=" << k.qb_delta
                                    << " (ref -0.7493), phi=" << k.qb_phi << " (ref 2.3599)");
    CHECK(k.lipschitz > 0.0);
    CHECK(k.one_sided <= k.lipschitz);
}

TEST_CASE("degenerate regions and tiny sample counts are rejected", "[constants][errors]") {
    const auto model = build_inverter_model(GfmParameters::rating_45kva());
    auto region = plausible_region();
    region.state_min(state::v_od) = region.state_max(state::v_od);
    CHECK(region.degenerate());
    CHECK_THROWS_AS(estimate_lipschitz(model, region, 100, 1), std::invalid_argument);

    const auto good = plausible_region();
    CHECK_THROWS_AS(estimate_lipschitz(model, good, 1, 1), std::invalid_argument);
}

TEST_CASE("constants round-trip through their file format", "[constants][io]") {
    const auto model = build_inverter_model(GfmParameters::rating_45kva());
    const auto k = estimate_sector_constants(model, plausible_region(), 5000, 31);
    ini::Document doc;
    k.write(doc);
    const auto back = SectorConstants::read(ini::Document::parse(doc.to_string()));
    CHECK(back.lipschitz == k.lipschitz);
    CHECK(back.one_sided == k.one_sided);
    CHECK(back.qb_delta == k.qb_delta);
    CHECK(back.qb_phi == k.qb_phi);
    CHECK(back.seed == k.seed);
    CHECK((back.metric - k.metric).norm() == 0.0);
    CHECK((back.region.state_min - k.region.state_min).norm() == 0.0);
}

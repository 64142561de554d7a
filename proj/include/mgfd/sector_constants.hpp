#pragma once

// Sampling estimators for the Lipschitz constant gamma, the one-sided
// Lipschitz constant rho, and the quadratic inner-boundedness pair
// (delta, phi) of a nonlinearity over a box region.
//
// Quotients are measured in scaled coordinates x_tilde = x ./ metric (the
// same diagonal similarity the LMI assembler applies), so the constants
// certify the scaled nonlinearity that enters the synthesis problem.
//
// Estimation works on Jacobians sampled over the region:
//   gamma  = sup sigma_max(J),   rho = sup lambda_max((J + J')/2),
//   delta(phi_c) = sup lambda_max(J'J - phi_c (J + J')/2),
// evaluated at quasi-random interior points and at the box vertices of the
// coordinates the Jacobian actually depends on.  For product-form
// nonlinearities the Jacobian is affine in the evaluation point, each field
// above is convex, and the vertex sweep makes the supremum exact; definitional
// difference pairs are folded into the same maxima as a safety net for
// non-quadratic inputs.

#include "mgfd/gfm_model.hpp"
#include "mgfd/ini.hpp"
#include "mgfd/operating_region.hpp"
#include "mgfd/quasirandom.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace mgfd {

struct SectorConstants {
    double lipschitz = 0.0;   // gamma
    double one_sided = 0.0;   // rho
    double qb_delta = 0.0;    // delta
    double qb_phi = 0.0;      // phi
    OperatingRegion region;
    StateVec metric = StateVec::Ones();
    int samples = 0;
    uint64_t seed = 0;
    double safety = 1.05;

    void write(ini::Document& doc) const {
        doc.set_number("constants", "gamma", lipschitz);
        doc.set_number("constants", "rho", one_sided);
        doc.set_number("constants", "delta", qb_delta);
        doc.set_number("constants", "phi", qb_phi);
        doc.set_number("constants", "samples", samples);
        doc.set_number("constants", "seed", static_cast<double>(seed));
        doc.set_number("constants", "safety", safety);
        doc.set_vector("constants", "metric", metric);
        region.write(doc);
    }

    static SectorConstants read(const ini::Document& doc) {
        SectorConstants k;
        k.lipschitz = doc.get_number("constants", "gamma");
        k.one_sided = doc.get_number("constants", "rho");
        k.qb_delta = doc.get_number("constants", "delta");
        k.qb_phi = doc.get_number("constants", "phi");
        k.samples = static_cast<int>(doc.get_number_or("constants", "samples", 0));
        k.seed = static_cast<uint64_t>(doc.get_number_or("constants", "seed", 0));
        k.safety = doc.get_number_or("constants", "safety", 1.05);
        if (doc.has("constants", "metric")) k.metric = doc.get_vector("constants", "metric");
        if (doc.has_section("region")) k.region = OperatingRegion::read(doc);
        return k;
    }
};

namespace detail {

inline std::vector<double> default_phi_grid() {
    std::vector<double> grid;
    grid.push_back(0.0);
    for (int i = 0; i <= 24; ++i) {
        const double v = std::pow(10.0, -1.0 + 3.0 * i / 24.0);  // 0.1 .. 100
        grid.push_back(v);
        grid.push_back(-v);
    }
    return grid;
}

// Central finite differences of phi with respect to x, in metric coordinates.
template <typename Phi>
Eigen::MatrixXd scaled_jacobian(Phi&& phi, const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& width, const Eigen::VectorXd& metric) {
    const int nx = static_cast<int>(x.size());
    const int ny = static_cast<int>(phi(x, u).size());
    Eigen::MatrixXd jac(ny, nx);
    for (int k = 0; k < nx; ++k) {
        const double h = std::max(1e-6 * width(k), 1e-9);
        Eigen::VectorXd xp = x, xm = x;
        xp(k) += h;
        xm(k) -= h;
        jac.col(k) = (phi(xp, u) - phi(xm, u)) / (2.0 * h);
    }
    return metric.cwiseInverse().asDiagonal() * jac * metric.asDiagonal();
}

struct SectorAccumulator {
    double lipschitz = 0.0;
    double one_sided = -std::numeric_limits<double>::infinity();
    double one_sided_span = 0.0;
    std::vector<double> phi_grid;
    std::vector<double> delta;  // delta(phi_c) per grid entry
    bool any = false;

    explicit SectorAccumulator(std::vector<double> grid)
        : phi_grid(std::move(grid)), delta(phi_grid.size(), -std::numeric_limits<double>::infinity()) {}

    void add_jacobian(const Eigen::MatrixXd& jac) {
        any = true;
        const Eigen::MatrixXd sym = 0.5 * (jac + jac.transpose());
        const Eigen::MatrixXd gram = jac.transpose() * jac;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.compute(gram, Eigen::EigenvaluesOnly);
        lipschitz = std::max(lipschitz, std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff())));
        es.compute(sym, Eigen::EigenvaluesOnly);
        one_sided = std::max(one_sided, es.eigenvalues().maxCoeff());
        one_sided_span = std::max(one_sided_span, sym.cwiseAbs().maxCoeff() * sym.rows());
        for (size_t g = 0; g < phi_grid.size(); ++g) {
            es.compute(gram - phi_grid[g] * sym, Eigen::EigenvaluesOnly);
            delta[g] = std::max(delta[g], es.eigenvalues().maxCoeff());
        }
    }

    void add_pair(double quot_sq, double quot_inner) {
        any = true;
        lipschitz = std::max(lipschitz, std::sqrt(quot_sq));
        one_sided = std::max(one_sided, quot_inner);
        one_sided_span = std::max(one_sided_span, std::abs(quot_inner));
        for (size_t g = 0; g < phi_grid.size(); ++g)
            delta[g] = std::max(delta[g], quot_sq - phi_grid[g] * quot_inner);
    }
};

// Coordinates of (x, u) whose variation changes the Jacobian.  Holding the
// others at the box center makes the vertex sweep tractable.
template <typename Phi>
std::pair<std::vector<int>, std::vector<int>> active_coordinates(
    Phi&& phi, const Eigen::VectorXd& x_min, const Eigen::VectorXd& x_max,
    const Eigen::VectorXd& u_min, const Eigen::VectorXd& u_max, const Eigen::VectorXd& metric) {
    const Eigen::VectorXd xc = 0.5 * (x_min + x_max);
    const Eigen::VectorXd uc = 0.5 * (u_min + u_max);
    const Eigen::VectorXd width = (x_max - x_min).cwiseMax(1e-12);
    const Eigen::MatrixXd j0 = scaled_jacobian(phi, xc, uc, width, metric);
    const double scale = std::max(1.0, j0.cwiseAbs().maxCoeff());

    std::vector<int> ax, au;
    for (int k = 0; k < x_min.size(); ++k) {
        if (x_max(k) <= x_min(k)) continue;
        Eigen::VectorXd x = xc;
        x(k) = x_max(k);
        const Eigen::MatrixXd jk = scaled_jacobian(phi, x, uc, width, metric);
        if ((jk - j0).cwiseAbs().maxCoeff() > 1e-9 * scale) ax.push_back(k);
    }
    for (int k = 0; k < u_min.size(); ++k) {
        if (u_max(k) <= u_min(k)) continue;
        Eigen::VectorXd u = uc;
        u(k) = u_max(k);
        const Eigen::MatrixXd jk = scaled_jacobian(phi, xc, u, width, metric);
        if ((jk - j0).cwiseAbs().maxCoeff() > 1e-9 * scale) au.push_back(k);
    }
    return {ax, au};
}

}  // namespace detail

struct SectorEstimate {
    double lipschitz_raw = 0.0;
    double one_sided_raw = 0.0;
    double qb_delta_raw = 0.0;
    double qb_phi = 0.0;
    double one_sided_span = 0.0;  // scale of the inner quotients, for safety margins
};

template <typename Phi>
SectorEstimate estimate_sector(Phi&& phi, const Eigen::VectorXd& x_min,
                               const Eigen::VectorXd& x_max, const Eigen::VectorXd& u_min,
                               const Eigen::VectorXd& u_max, const Eigen::VectorXd& metric,
                               int n_samples, uint64_t seed,
                               const std::vector<double>& phi_grid = detail::default_phi_grid()) {
    if (phi_grid.empty()) throw std::invalid_argument("phi grid must be nonempty");
    if (n_samples < 2) throw std::invalid_argument("sector sampling requires n_samples >= 2");
    const int nx = static_cast<int>(x_min.size());
    const int nu = static_cast<int>(u_min.size());
    const Eigen::VectorXd width = x_max - x_min;
    if (width.minCoeff() <= 0.0)
        throw std::invalid_argument("sector sampling requires a non-degenerate state region");

    detail::SectorAccumulator acc(phi_grid);

    // Vertex sweep over the active coordinates (exact supremum for
    // product-form nonlinearities, whose Jacobian is affine in the point).
    const auto [ax, au] = detail::active_coordinates(phi, x_min, x_max, u_min, u_max, metric);
    const size_t n_active = ax.size() + au.size();
    const Eigen::VectorXd xc = 0.5 * (x_min + x_max);
    const Eigen::VectorXd uc = 0.5 * (u_min + u_max);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    if (n_active > 0) {
        const bool exhaustive = n_active <= 14;
        const uint64_t n_vertices = exhaustive ? (uint64_t{1} << n_active) : 16384;
        for (uint64_t v = 0; v < n_vertices; ++v) {
            const uint64_t bits = exhaustive ? v : rng();
            Eigen::VectorXd x = xc;
            Eigen::VectorXd u = uc;
            for (size_t b = 0; b < ax.size(); ++b)
                x(ax[b]) = (bits >> b) & 1 ? x_max(ax[b]) : x_min(ax[b]);
            for (size_t b = 0; b < au.size(); ++b)
                u(au[b]) = (bits >> (ax.size() + b)) & 1 ? u_max(au[b]) : u_min(au[b]);
            acc.add_jacobian(detail::scaled_jacobian(phi, x, u, width, metric));
        }
    }

    // Quasi-random interior points (covers interior suprema of non-quadratic
    // nonlinearities) and definitional difference pairs.
    HaltonSequence halton(2 * nx + nu, seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n_points = std::max(2, n_samples / 8);
    const int n_pairs = std::max(2, n_samples / 2);
    for (int i = 0; i < n_points; ++i) {
        const Eigen::VectorXd p = halton.next();
        const Eigen::VectorXd x = x_min + width.cwiseProduct(p.head(nx));
        const Eigen::VectorXd u = u_min + (u_max - u_min).cwiseProduct(p.tail(nu));
        acc.add_jacobian(detail::scaled_jacobian(phi, x, u, width, metric));
    }
    const double radii[3] = {1e-3, 1e-2, 1e-1};
    for (int i = 0; i < n_pairs; ++i) {
        const Eigen::VectorXd p = halton.next();
        const Eigen::VectorXd x = x_min + width.cwiseProduct(p.head(nx));
        const Eigen::VectorXd u = u_min + (u_max - u_min).cwiseProduct(p.tail(nu));
        Eigen::VectorXd x_hat(nx);
        if (i % 2 == 0) {
            x_hat = x_min + width.cwiseProduct(p.segment(nx, nx));
        } else {
            Eigen::VectorXd dir(nx);
            for (int k = 0; k < nx; ++k) dir(k) = gauss(rng);
            dir.normalize();
            x_hat = (x + radii[(i / 2) % 3] * width.cwiseProduct(dir)).cwiseMax(x_min).cwiseMin(x_max);
        }
        const Eigen::VectorXd dx = (x - x_hat).cwiseQuotient(metric);
        const double dx2 = dx.squaredNorm();
        if (dx2 <= 0.0) continue;
        const Eigen::VectorXd dphi = (phi(x, u) - phi(x_hat, u)).cwiseQuotient(metric);
        acc.add_pair(dphi.squaredNorm() / dx2, dphi.dot(dx) / dx2);
    }

    SectorEstimate est;
    if (!acc.any) return est;
    est.lipschitz_raw = acc.lipschitz;
    est.one_sided_raw = std::isfinite(acc.one_sided) ? acc.one_sided : 0.0;
    est.one_sided_span = acc.one_sided_span;

    // Smallest effective sector delta + max(phi_c, 0) * rho over the grid.
    double best = std::numeric_limits<double>::infinity();
    for (size_t g = 0; g < phi_grid.size(); ++g) {
        const double objective = acc.delta[g] + std::max(phi_grid[g], 0.0) * est.one_sided_raw;
        if (objective < best) {
            best = objective;
            est.qb_phi = phi_grid[g];
            est.qb_delta_raw = acc.delta[g];
        }
    }
    return est;
}

// --- Model-level wrappers -------------------------------------------------

namespace detail {
inline auto model_phi(const InverterModel& model) {
    return [&model](const Eigen::VectorXd& x, const Eigen::VectorXd& u) -> Eigen::VectorXd {
        return model.nonlinearity(StateVec(x), InputVec(u));
    };
}
}  // namespace detail

inline double estimate_lipschitz(const InverterModel& model, const OperatingRegion& region,
                                 int n_samples, uint64_t seed, double safety = 1.05,
                                 const StateVec& metric = StateVec::Ones()) {
    region.validate();
    const auto est = estimate_sector(detail::model_phi(model), region.state_min, region.state_max,
                                     region.input_min, region.input_max, metric, n_samples, seed);
    return est.lipschitz_raw * safety;
}

inline double estimate_one_sided(const InverterModel& model, const OperatingRegion& region,
                                 int n_samples, uint64_t seed, double safety = 1.05,
                                 const StateVec& metric = StateVec::Ones()) {
    region.validate();
    const auto est = estimate_sector(detail::model_phi(model), region.state_min, region.state_max,
                                     region.input_min, region.input_max, metric, n_samples, seed);
    const double rho = est.one_sided_raw;
    return rho >= 0.0 ? rho * safety : rho / safety;
}

inline std::pair<double, double> estimate_quadratic_bounds(
    const InverterModel& model, const OperatingRegion& region, int n_samples, uint64_t seed,
    double safety = 1.05, const StateVec& metric = StateVec::Ones(),
    const std::vector<double>& phi_grid = detail::default_phi_grid()) {
    region.validate();
    const auto est = estimate_sector(detail::model_phi(model), region.state_min, region.state_max,
                                     region.input_min, region.input_max, metric, n_samples, seed,
                                     phi_grid);
    const double margin = (safety - 1.0) * (std::abs(est.qb_delta_raw) +
                                            std::abs(est.qb_phi) * est.one_sided_span);
    return {est.qb_delta_raw + margin, est.qb_phi};
}

// One shared sampling pass for all four constants, so that rho <= gamma and
// the holdout certificate refer to the same sampled evidence.
inline SectorConstants estimate_sector_constants(const InverterModel& model,
                                                 const OperatingRegion& region, int n_samples,
                                                 uint64_t seed, double safety = 1.05) {
    region.validate();
    const StateVec metric = scale_from_region(region);
    const auto est = estimate_sector(detail::model_phi(model), region.state_min, region.state_max,
                                     region.input_min, region.input_max, metric, n_samples, seed);
    SectorConstants k;
    k.lipschitz = est.lipschitz_raw * safety;
    k.one_sided = est.one_sided_raw >= 0.0 ? est.one_sided_raw * safety : est.one_sided_raw / safety;
    const double margin = (safety - 1.0) * (std::abs(est.qb_delta_raw) +
                                            std::abs(est.qb_phi) * est.one_sided_span);
    k.qb_delta = est.qb_delta_raw + margin;
    k.qb_phi = est.qb_phi;
    k.region = region;
    k.metric = metric;
    k.samples = n_samples;
    k.seed = seed;
    k.safety = safety;
    return k;
}

struct HoldoutReport {
    int pairs = 0;
    int lipschitz_violations = 0;
    int one_sided_violations = 0;
    int qb_violations = 0;

    bool certified() const {
        return lipschitz_violations == 0 && one_sided_violations == 0 && qb_violations == 0;
    }
};

// Definitional inequalities re-checked on a fresh pair stream; the stored
// constants must hold with zero violations at 1e-9 relative tolerance.
inline HoldoutReport validate_on_holdout(const InverterModel& model, const SectorConstants& k,
                                         int n_pairs, uint64_t holdout_seed,
                                         double tolerance = 1e-9) {
    const auto& r = k.region;
    const Eigen::VectorXd width = r.state_max - r.state_min;
    auto phi = detail::model_phi(model);
    HaltonSequence halton(2 * state::count + input::count, holdout_seed);
    std::mt19937_64 rng(holdout_seed ^ 0x9e3779b97f4a7c15ull);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double radii[3] = {1e-3, 1e-2, 1e-1};

    HoldoutReport report;
    for (int i = 0; i < n_pairs; ++i) {
        const Eigen::VectorXd p = halton.next();
        const Eigen::VectorXd x = r.state_min + width.cwiseProduct(p.head(state::count));
        const Eigen::VectorXd u =
            r.input_min + (r.input_max - r.input_min).cwiseProduct(p.tail(input::count));
        Eigen::VectorXd x_hat(state::count);
        if (i % 2 == 0) {
            x_hat = r.state_min + width.cwiseProduct(p.segment(state::count, state::count));
        } else {
            Eigen::VectorXd dir(state::count);
            for (int j = 0; j < state::count; ++j) dir(j) = gauss(rng);
            dir.normalize();
            x_hat = (x + radii[(i / 2) % 3] * width.cwiseProduct(dir))
                        .cwiseMax(r.state_min)
                        .cwiseMin(r.state_max);
        }
        const Eigen::VectorXd dx = (x - x_hat).cwiseQuotient(k.metric);
        const double dx2 = dx.squaredNorm();
        if (dx2 <= 0.0) continue;
        ++report.pairs;
        const Eigen::VectorXd dphi = (phi(x, u) - phi(x_hat, u)).cwiseQuotient(k.metric);
        const double quot_sq = dphi.squaredNorm() / dx2;
        const double quot_inner = dphi.dot(dx) / dx2;
        if (std::sqrt(quot_sq) > k.lipschitz * (1.0 + tolerance) + tolerance)
            ++report.lipschitz_violations;
        if (quot_inner > k.one_sided + tolerance * (1.0 + std::abs(k.one_sided)))
            ++report.one_sided_violations;
        const double rhs = k.qb_phi * quot_inner + k.qb_delta;
        if (quot_sq > rhs + tolerance * (1.0 + std::abs(rhs)))
            ++report.qb_violations;
    }
    return report;
}

}  // namespace mgfd

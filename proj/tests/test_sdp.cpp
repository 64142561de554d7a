#include <catch2/catch_amalgamated.hpp>

#include "mgfd/lmi.hpp"
#include "mgfd/sdp.hpp"

#include <random>

using namespace mgfd;

namespace {

// Lyapunov feasibility: find P = P' with  A'P + PA <= -I  and  P >= l*I.
LmiProblem lyapunov_problem(const Eigen::MatrixXd& a, double p_floor = 1e-3) {
    const int n = static_cast<int>(a.rows());
    LmiProblem prob;
    const int pvar = prob.vars.add_symmetric("P", n);

    AffineBlock lyap;
    lyap.name = "lyapunov";
    lyap.constant = Eigen::MatrixXd::Identity(n, n);  // A'P + PA + I <= 0
    lyap.margin = 0.0;
    AffineBlock floor;
    floor.name = "floor";
    floor.constant = p_floor * Eigen::MatrixXd::Identity(n, n);  // l*I - P <= 0
    floor.margin = 0.0;

    for (int r = 0; r < n; ++r) {
        for (int c = r; c < n; ++c) {
            Eigen::MatrixXd dp = Eigen::MatrixXd::Zero(n, n);
            dp(r, c) = 1.0;
            dp(c, r) = 1.0;
            const int var = prob.vars.index(pvar, r, c);
            lyap.add_term(var, (a.transpose() * dp + dp * a).eval());
            floor.add_term(var, (-dp).eval());
        }
    }
    prob.blocks.push_back(std::move(lyap));
    prob.blocks.push_back(std::move(floor));
    return prob;
}

}  // namespace

TEST_CASE("scalar one-sided constraint", "[sdp]") {
    LmiProblem prob;
    const int zvar = prob.vars.add_scalar("z");
    AffineBlock b;
    b.name = "z-negative";
    b.constant = Eigen::MatrixXd::Zero(1, 1);
    b.margin = 1e-6;
    b.add_term(prob.vars.index(zvar, 0, 0), Eigen::MatrixXd::Identity(1, 1));
    prob.blocks.push_back(b);

    const auto res = solve_feasibility(prob);
    REQUIRE(res.status == SolveStatus::feasible);
    CHECK(res.z(0) < -1e-6);
    CHECK(res.worst_margin < 0.0);
}

TEST_CASE("contradictory scalar constraints are infeasible", "[sdp]") {
    LmiProblem prob;
    const int zvar = prob.vars.add_scalar("z");
    const int zi = prob.vars.index(zvar, 0, 0);

    AffineBlock below;  // 1 + z <= 0, i.e. z <= -1
    below.constant = Eigen::MatrixXd::Identity(1, 1);
    below.add_term(zi, Eigen::MatrixXd::Identity(1, 1));
    AffineBlock above;  // 1 - z <= 0, i.e. z >= 1
    above.constant = Eigen::MatrixXd::Identity(1, 1);
    above.add_term(zi, -Eigen::MatrixXd::Identity(1, 1));
    prob.blocks.push_back(below);
    prob.blocks.push_back(above);

    const auto res = solve_feasibility(prob);
    CHECK(res.status == SolveStatus::infeasible);
}

TEST_CASE("Lyapunov LMI for a stable matrix", "[sdp]") {
    Eigen::MatrixXd a(3, 3);
    a << -1.0, 0.5, 0.0, -0.2, -2.0, 0.3, 0.1, 0.0, -0.7;
    const auto prob = lyapunov_problem(a);
    const auto res = solve_feasibility(prob);
    REQUIRE(res.status == SolveStatus::feasible);
    CHECK(res.worst_margin < 0.0);

    const Eigen::MatrixXd p = prob.vars.matrix_value(0, res.z);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(p);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> lyap(
        (a.transpose() * p + p * a + Eigen::MatrixXd::Identity(3, 3)).eval());
    CHECK(lyap.eigenvalues().maxCoeff() <= 1e-9);
}

TEST_CASE("Lyapunov LMI for an unstable matrix is infeasible", "[sdp]") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
    const auto res = solve_feasibility(lyapunov_problem(a));
    CHECK(res.status == SolveStatus::infeasible);
}

TEST_CASE("random stable systems are Lyapunov-feasible", "[sdp][property]") {
    std::mt19937_64 rng(0x5d9);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 4);
        Eigen::MatrixXd a(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) a(r, c) = gauss(rng);
        // shift to make it comfortably Hurwitz
        const double shift = a.eigenvalues().real().maxCoeff() + 0.5;
        a -= shift * Eigen::MatrixXd::Identity(n, n);

        const auto res = solve_feasibility(lyapunov_problem(a));
        REQUIRE(res.status == SolveStatus::feasible);
        CHECK(res.worst_margin < 0.0);
    }
}

TEST_CASE("unused variables do not break the solve", "[sdp]") {
    LmiProblem prob;
    const int zvar = prob.vars.add_scalar("z");
    prob.vars.add_scalar("unused");
    AffineBlock b;
    b.constant = Eigen::MatrixXd::Zero(1, 1);
    b.margin = 1e-8;
    b.add_term(prob.vars.index(zvar, 0, 0), Eigen::MatrixXd::Identity(1, 1));
    prob.blocks.push_back(b);

    const auto res = solve_feasibility(prob);
    REQUIRE(res.status == SolveStatus::feasible);
    CHECK(res.z(1) == 0.0);
}

TEST_CASE("affine block evaluation matches its triplet form", "[sdp]") {
    VariableSpace vars;
    const int pvar = vars.add_symmetric("P", 2);
    AffineBlock b;
    b.constant = (Eigen::MatrixXd(2, 2) << 1.0, 0.0, 0.0, -1.0).finished();
    Eigen::MatrixXd coeff(2, 2);
    coeff << 2.0, 1.0, 1.0, 0.0;
    b.add_term(vars.index(pvar, 0, 0), coeff);

    Eigen::VectorXd z = Eigen::VectorXd::Zero(vars.dimension());
    z(vars.index(pvar, 0, 0)) = 3.0;
    const Eigen::MatrixXd g = b.evaluate(z);
    CHECK(g(0, 0) == Catch::Approx(1.0 + 6.0));
    CHECK(g(0, 1) == Catch::Approx(3.0));
    CHECK(g(1, 0) == Catch::Approx(3.0));
}

TEST_CASE("symmetric variable indexing", "[sdp]") {
    VariableSpace vars;
    const int p = vars.add_symmetric("P", 3);
    CHECK(vars.dimension() == 6);
    CHECK(vars.index(p, 0, 0) == 0);
    CHECK(vars.index(p, 0, 2) == 2);
    CHECK(vars.index(p, 1, 1) == 3);
    CHECK(vars.index(p, 2, 1) == 4);  // lower triangle maps to upper
    CHECK(vars.index(p, 2, 2) == 5);

    Eigen::VectorXd z(6);
    z << 1, 2, 3, 4, 5, 6;
    const Eigen::MatrixXd m = vars.matrix_value(p, z);
    CHECK(m(0, 1) == 2.0);
    CHECK(m(1, 0) == 2.0);
    CHECK(m(2, 2) == 6.0);
}

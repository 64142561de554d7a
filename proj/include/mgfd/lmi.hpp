#pragma once

// Representation of semidefinite feasibility problems: a flat vector of
// scalar decision variables grouped into named symmetric / rectangular /
// scalar blocks, and a list of affine symmetric matrix constraints
//   G_j(z) = F0_j + sum_i z_i F_ij  required  <= -margin_j * I.

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace mgfd {

class VariableSpace {
public:
    enum class Kind { symmetric, rectangular, scalar };

    struct Block {
        std::string name;
        Kind kind;
        int rows, cols;
        int offset, size;
    };

    int add_symmetric(const std::string& name, int n) {
        return add(name, Kind::symmetric, n, n, n * (n + 1) / 2);
    }
    int add_rectangular(const std::string& name, int rows, int cols) {
        return add(name, Kind::rectangular, rows, cols, rows * cols);
    }
    int add_scalar(const std::string& name) { return add(name, Kind::scalar, 1, 1, 1); }

    int dimension() const { return total_; }
    int block_count() const { return static_cast<int>(blocks_.size()); }
    const Block& block(int id) const { return blocks_.at(id); }

    const Block& block_named(const std::string& name) const {
        for (const auto& b : blocks_)
            if (b.name == name) return b;
        throw std::invalid_argument("no variable block named '" + name + "'");
    }

    // Scalar index of entry (r, c) of a block; symmetric blocks are stored as
    // the upper triangle in row-major order.
    int index(int block_id, int r, int c) const {
        const Block& b = blocks_.at(block_id);
        switch (b.kind) {
            case Kind::scalar:
                return b.offset;
            case Kind::rectangular:
                return b.offset + r * b.cols + c;
            case Kind::symmetric: {
                if (r > c) std::swap(r, c);
                // row-major upper triangle: offset of row r is r*n - r(r-1)/2
                return b.offset + r * b.cols - r * (r - 1) / 2 + (c - r);
            }
        }
        throw std::logic_error("unreachable");
    }

    Eigen::MatrixXd matrix_value(int block_id, const Eigen::VectorXd& z) const {
        const Block& b = blocks_.at(block_id);
        Eigen::MatrixXd m(b.rows, b.cols);
        for (int r = 0; r < b.rows; ++r)
            for (int c = 0; c < b.cols; ++c)
                m(r, c) = z(index(block_id, r, c));
        return m;
    }

    double scalar_value(int block_id, const Eigen::VectorXd& z) const {
        return z(blocks_.at(block_id).offset);
    }

private:
    int add(const std::string& name, Kind kind, int rows, int cols, int size) {
        blocks_.push_back({name, kind, rows, cols, total_, size});
        total_ += size;
        return static_cast<int>(blocks_.size()) - 1;
    }

    std::vector<Block> blocks_;
    int total_ = 0;
};

// One affine symmetric constraint block.  Coefficient matrices are stored as
// symmetric triplet lists; most LMI coefficients here are very sparse.
struct AffineBlock {
    struct Triplet {
        int row, col;
        double value;
    };

    std::string name;
    Eigen::MatrixXd constant;  // F0
    std::vector<std::pair<int, std::vector<Triplet>>> terms;  // (scalar var, F_i)
    double margin = 0.0;  // require G(z) <= -margin I

    int dim() const { return static_cast<int>(constant.rows()); }

    // Adds var coefficient F_i from a dense symmetric matrix, dropping zeros.
    void add_term(int var, const Eigen::MatrixXd& coeff, double drop_tol = 0.0) {
        std::vector<Triplet> trips;
        for (int r = 0; r < coeff.rows(); ++r)
            for (int c = 0; c < coeff.cols(); ++c)
                if (std::abs(coeff(r, c)) > drop_tol) trips.push_back({r, c, coeff(r, c)});
        if (!trips.empty()) terms.emplace_back(var, std::move(trips));
    }

    Eigen::MatrixXd evaluate(const Eigen::VectorXd& z) const {
        Eigen::MatrixXd g = constant;
        for (const auto& [var, trips] : terms)
            for (const auto& t : trips) g(t.row, t.col) += z(var) * t.value;
        return 0.5 * (g + g.transpose());
    }
};

struct LmiProblem {
    VariableSpace vars;
    std::vector<AffineBlock> blocks;
    std::string description;

    // Largest eigenvalue of G_j(z) + margin_j I over all blocks: the problem
    // is (strictly) feasible at z iff this is (strictly) negative.
    double worst_margin(const Eigen::VectorXd& z) const {
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto& b : blocks) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b.evaluate(z),
                                                              Eigen::EigenvaluesOnly);
            worst = std::max(worst, es.eigenvalues().maxCoeff() + b.margin);
        }
        return worst;
    }
};

}  // namespace mgfd

#pragma once

// Halton low-discrepancy sequence (radical inverse in the first k prime
// bases) with a seed-derived start offset so that different seeds give
// different but deterministic point sets.

#include <Eigen/Dense>

#include <cstdint>

namespace mgfd {

inline double radical_inverse(uint64_t base, uint64_t index) {
    double r = 0.0;
    double digit = 1.0 / static_cast<double>(base);
    uint64_t rest = index;
    while (rest > 0) {
        r += digit * static_cast<double>(rest % base);
        rest /= base;
        digit /= static_cast<double>(base);
    }
    return r;
}

class HaltonSequence {
public:
    HaltonSequence(int dimension, uint64_t seed)
        : bases_(first_primes(dimension)), index_(1000 + (seed % 100003) * 17) {}

    Eigen::VectorXd next() {
        ++index_;
        Eigen::VectorXd p(static_cast<Eigen::Index>(bases_.size()));
        for (size_t d = 0; d < bases_.size(); ++d)
            p(static_cast<Eigen::Index>(d)) = radical_inverse(bases_[d], index_);
        return p;
    }

private:
    static std::vector<uint64_t> first_primes(int count) {
        std::vector<uint64_t> primes;
        uint64_t candidate = 2;
        while (static_cast<int>(primes.size()) < count) {
            bool is_prime = true;
            for (uint64_t p : primes) {
                if (p * p > candidate) break;
                if (candidate % p == 0) {
                    is_prime = false;
                    break;
                }
            }
            if (is_prime) primes.push_back(candidate);
            ++candidate;
        }
        return primes;
    }

    std::vector<uint64_t> bases_;
    uint64_t index_;
};

}  // namespace mgfd

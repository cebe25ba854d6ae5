#pragma once

#include "ermo/operator.hpp"

#include <random>

namespace ermo {

// Random points and test functions for operator identities.
class Sampler {
public:
    Sampler(const AffineRootDatum& d, std::uint64_t seed);

    std::mt19937_64& rng() { return rng_; }
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }

    // Real parts in [-1/2, 1/2), imaginary parts in [-imag, imag).
    CVec point(double imag = 0.15);
    // Complex weight with pairings against every coroot at least margin away from each value in avoid.
    CVec generic_weight(const std::vector<cplx>& avoid, double margin = 0.05);

    // Sum of c_m exp(2 pi i (m . x)) over random integer m with |m_i| <= max_freq.
    TestFunction exponential_sum(int terms = 4, int max_freq = 2);
    // Sum over the finite Weyl group of f(w x).
    TestFunction symmetrize(TestFunction f) const;

private:
    const AffineRootDatum& d_;
    std::mt19937_64 rng_;
    std::vector<Eigen::MatrixXd> weyl_;
};

}  // namespace ermo

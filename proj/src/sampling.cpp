#include "ermo/sampling.hpp"

#include <cmath>

namespace ermo {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

Sampler::Sampler(const AffineRootDatum& d, std::uint64_t seed) : d_(d), rng_(seed)
{
    for (const auto& w : finite_weyl_group(d)) {
        Eigen::MatrixXd m(d.rank(), d.rank());
        for (int i = 0; i < d.rank(); ++i)
            for (int j = 0; j < d.rank(); ++j) m(i, j) = to_double(w.finite(i, j));
        weyl_.push_back(m);
    }
}

CVec Sampler::point(double imag)
{
    CVec x(d_.rank());
    for (int i = 0; i < d_.rank(); ++i) x[i] = cplx(uniform(-0.5, 0.5), uniform(-imag, imag));
    return x;
}

CVec Sampler::generic_weight(const std::vector<cplx>& avoid, double margin)
{
    for (int attempt = 0; attempt < 1000; ++attempt) {
        CVec xi(d_.rank());
        for (int i = 0; i < d_.rank(); ++i) xi[i] = cplx(uniform(-0.6, 0.6), uniform(-0.1, 0.1));
        bool ok = true;
        for (const auto& a : d_.positive_finite_roots()) {
            const cplx p = 2.0 * pair_c(d_, a, xi) / to_double(d_.norm2(a));
            for (cplx v : avoid)
                if (std::abs(p - v) < margin || std::abs(p + v) < margin) ok = false;
        }
        if (ok) return xi;
    }
    throw std::runtime_error("could not sample a generic weight");
}

TestFunction Sampler::exponential_sum(int terms, int max_freq)
{
    std::uniform_int_distribution<int> freq(-max_freq, max_freq);
    std::vector<std::pair<Eigen::VectorXd, cplx>> parts;
    for (int t = 0; t < terms; ++t) {
        Eigen::VectorXd m(d_.rank());
        for (int i = 0; i < d_.rank(); ++i) m[i] = freq(rng_);
        parts.push_back({m, cplx(uniform(-1, 1), uniform(-1, 1))});
    }
    return [parts](const CVec& x) {
        cplx s = 0.0;
        for (const auto& [m, c] : parts) s += c * std::exp(cplx(0.0, kTwoPi) * m.cast<cplx>().dot(x));
        return s;
    };
}

TestFunction Sampler::symmetrize(TestFunction f) const
{
    return [w = weyl_, f = std::move(f)](const CVec& x) {
        cplx s = 0.0;
        for (const auto& m : w) s += f(m.cast<cplx>() * x);
        return s;
    };
}

}  // namespace ermo

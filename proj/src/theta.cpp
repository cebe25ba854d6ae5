#include "ermo/theta.hpp"

#include "ermo/weyl.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>

namespace ermo {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

void require_upper_half(cplx tau)
{
    if (!(tau.imag() > 0)) throw std::invalid_argument("tau must lie in the upper half plane");
}

// Bilateral Gaussian series sum_m sign(m) exp(i pi tau m^2 + 2 pi i m z), m in Z + offset.
ThetaValue gaussian_series(cplx z, cplx tau, double offset, bool alternating, const SeriesConfig& cfg)
{
    require_upper_half(tau);
    const double t = tau.imag(), y = std::abs(z.imag());
    cplx sum = 0;
    double mag = 0;
    for (int r = 0;; ++r) {
        double shell = 0;
        // index n and exponent m = n + offset, taken symmetrically in m
        const int ns[2] = {r, offset == 0.0 ? -r : -r - 1};
        for (int side = 0; side < 2; ++side) {
            if (side == 1 && offset == 0.0 && r == 0) break;
            const int n = ns[side];
            const double m = n + offset;
            cplx term = std::exp(I * kPi * tau * m * m + 2.0 * kPi * I * m * z);
            if (alternating && (n % 2 != 0)) term = -term;
            sum += term;
            shell += std::abs(term);
        }
        mag += shell;
        const double m_next = r + 1 + offset;
        const double ratio = std::exp(-kPi * t * (2 * m_next + 1) + 2 * kPi * y);
        if (ratio < 1) {
            double next = 2 * std::exp(-kPi * t * m_next * m_next + 2 * kPi * y * m_next);
            double bound = next / (1 - ratio);
            if (bound <= cfg.tail_tol * std::max(mag, 1e-300)) break;
            if (r >= cfg.max_terms) throw TruncationError("theta series tail bound not met", bound / mag);
        } else if (r >= cfg.max_terms) {
            throw TruncationError("theta series not converging within max_terms", INFINITY);
        }
    }
    return {sum, mag};
}

}  // namespace

SeriesConfig SeriesConfig::from_env()
{
    SeriesConfig c;
    if (const char* s = std::getenv("ERMO_SERIES_TOL")) {
        char* end = nullptr;
        double v = std::strtod(s, &end);
        if (end == s || !(v > 0)) throw std::invalid_argument("ERMO_SERIES_TOL must be a positive number");
        c.tail_tol = v;
    }
    return c;
}

ThetaValue jacobi_theta_ex(int j, cplx z, cplx tau, const SeriesConfig& cfg)
{
    switch (j) {
    case 1: {
        auto v = gaussian_series(z, tau, 0.5, true, cfg);
        v.value *= -I;
        return v;
    }
    case 2: return gaussian_series(z, tau, 0.5, false, cfg);
    case 3: return gaussian_series(z, tau, 0.0, false, cfg);
    case 0:
    case 4: return gaussian_series(z, tau, 0.0, true, cfg);
    default: throw std::invalid_argument("theta index must be 0..4");
    }
}

cplx jacobi_theta(int j, cplx z, cplx tau, const SeriesConfig& cfg) { return jacobi_theta_ex(j, z, tau, cfg).value; }

cplx theta1_derivative_series(cplx tau, const SeriesConfig& cfg)
{
    require_upper_half(tau);
    cplx sum = 0;
    for (int n = 0; n <= cfg.max_terms; ++n) {
        double m = n + 0.5;
        cplx term = 2.0 * m * std::exp(I * kPi * tau * m * m);
        sum += (n % 2 ? -term : term);
        if (std::abs(term) < cfg.tail_tol * std::abs(sum) * 1e-3) return 2.0 * kPi * sum;
    }
    throw TruncationError("theta_1' series tail bound not met", 1.0);
}

cplx eta(cplx tau, const SeriesConfig& cfg)
{
    require_upper_half(tau);
    const cplx q = std::exp(2.0 * kPi * I * tau);
    cplx prod = 1, qn = 1;
    for (int n = 1; n <= 100 * cfg.max_terms; ++n) {
        qn *= q;
        prod *= (1.0 - qn);
        if (std::abs(qn) < cfg.tail_tol * 1e-2) return std::exp(kPi * I * tau / 12.0) * prod;
    }
    throw TruncationError("eta product did not converge", std::abs(qn));
}

cplx theta1_prime_zero(double gamma, cplx tau, const SeriesConfig& cfg)
{
    cplx e = eta(gamma * tau, cfg);
    return e * e * e;
}

cplx theta1_prime_classical(cplx tau, const SeriesConfig& cfg) { return 2.0 * kPi * theta1_prime_zero(1.0, tau, cfg); }

cplx theta_gamma(int j, cplx z, double gamma, cplx tau, const SeriesConfig& cfg)
{
    cplx v = jacobi_theta(j, z, gamma * tau, cfg);
    return j == 1 ? -I * v : v;
}

namespace {

cplx guarded_theta1(cplx z, double gamma, cplx tau, const SeriesConfig& cfg, const char* what)
{
    ThetaValue v = jacobi_theta_ex(1, z, gamma * tau, cfg);
    if (std::abs(v.value) < cfg.pole_guard * v.magnitude) {
        double dist = std::abs(v.value) / std::abs(theta1_prime_classical(gamma * tau, cfg));
        throw PoleError(std::string("pole: theta_1 vanishes in ") + what, dist);
    }
    return -I * v.value;
}

}  // namespace

cplx sigma_nu(cplx nu, cplx z, double gamma, cplx tau, const SeriesConfig& cfg)
{
    cplx den = guarded_theta1(z, gamma, tau, cfg, "sigma denominator") * guarded_theta1(-nu, gamma, tau, cfg, "sigma coupling");
    return theta_gamma(1, z - nu, gamma, tau, cfg) * theta1_prime_zero(gamma, tau, cfg) / den;
}

cplx wp0(cplx z, double gamma, cplx tau, const SeriesConfig& cfg)
{
    cplx r = theta_gamma(0, z, gamma, tau, cfg) * theta1_prime_zero(gamma, tau, cfg) /
             (guarded_theta1(z, gamma, tau, cfg, "wp0") * theta_gamma(0, 0.0, gamma, tau, cfg));
    return r * r;
}

ThetaBasisElement::ThetaBasisElement(const AffineRootDatum& d, int k, RVec shift, cplx tau, const SeriesConfig& cfg)
    : k_(k), shift_(std::move(shift)), tau_(tau), cfg_(cfg)
{
    if (k < 1) throw std::invalid_argument("level must be positive");
    require_upper_half(tau);
    const int l = d.rank();
    s_.resize(l);
    B_.resize(l, l);
    G_.resize(l, l);
    for (int i = 0; i < l; ++i) {
        s_[i] = to_double(shift_[i]);
        for (int j = 0; j < l; ++j) {
            B_(j, i) = k * to_double(d.M_basis()(i, j));
            G_(i, j) = to_double(d.form()(i, j));
        }
    }
    Binv_ = B_.inverse();
}

cplx ThetaBasisElement::operator()(const CVec& x) const
{
    const Eigen::Index l = x.size();
    const double t = tau_.imag();
    // The real part of the exponent, -pi t |w|^2/k - 2 pi (w|Im x), peaks at w = -k Im x / t.
    Eigen::VectorXd peak = -double(k_) * x.imag() / t;
    Eigen::VectorXd c0 = (Binv_ * (peak - s_)).array().round().matrix();
    const Eigen::VectorXcd gx = G_.cast<cplx>() * x;
    cplx sum = 0;
    double top = 0;
    for (int r = 0;; ++r) {
        double shell_max = 0;
        std::vector<int> n(static_cast<std::size_t>(l), -r);
        for (;;) {
            int mx = 0;
            for (int v : n) mx = std::max(mx, std::abs(v));
            if (mx == r) {
                Eigen::VectorXd c = c0;
                for (Eigen::Index i = 0; i < l; ++i) c[i] += n[static_cast<std::size_t>(i)];
                Eigen::VectorXd w = s_ + B_ * c;
                double w2 = w.dot(G_ * w);
                cplx e = std::exp(I * kPi * tau_ * w2 / double(k_) + 2.0 * kPi * I * w.cast<cplx>().dot(gx));
                sum += e;
                shell_max = std::max(shell_max, std::abs(e));
            }
            std::size_t p = 0;
            while (p < n.size() && ++n[p] > r) n[p++] = -r;
            if (p == n.size()) break;
        }
        top = std::max(top, shell_max);
        if (r > 0 && shell_max <= cfg_.tail_tol * top) break;
        if (r > cfg_.max_terms) throw TruncationError("theta lattice sum did not converge", shell_max / top);
    }
    return sum;
}

std::vector<RVec> level_classes(const AffineRootDatum& d, int k)
{
    const int l = d.rank();
    std::vector<RVec> fund;
    RMatrix ginv = d.form().inverse();
    for (int i = 0; i < l; ++i) {
        RVec rhs(l, Rational(0));
        rhs[i] = d.form()(i, i) / 2;
        fund.push_back(ginv * rhs);
    }
    std::vector<RVec> gens;
    for (int i = 0; i < l; ++i) {
        RVec b(l), c(l);
        for (int j = 0; j < l; ++j) b[j] = Rational(k) * d.M_basis()(i, j);
        for (int j = 0; j < l; ++j) c[j] = d.coroot_pairing(b, d.unit(j));
        gens.push_back(c);
    }
    RMatrix tri = lattice_basis(gens, l);
    std::vector<std::int64_t> diag(l);
    for (int i = 0; i < l; ++i) diag[i] = std::llabs(tri(i, i).numerator());
    std::vector<RVec> out;
    std::vector<std::int64_t> c(l, 0);
    for (;;) {
        RVec w(l, Rational(0));
        for (int i = 0; i < l; ++i) w = w + Rational(c[i]) * fund[i];
        out.push_back(w);
        int p = l - 1;
        while (p >= 0 && ++c[p] >= diag[p]) c[p--] = 0;
        if (p < 0) break;
    }
    return out;
}

bool same_level_class(const AffineRootDatum& d, int k, const RVec& a, const RVec& b)
{
    RMatrix km = d.M_basis();
    for (auto& x : km.a) x *= k;
    return in_lattice(km, a - b);
}

std::vector<ThetaBasisElement> theta_basis(const AffineRootDatum& d, int k, cplx tau, const SeriesConfig& cfg)
{
    std::vector<ThetaBasisElement> out;
    for (auto& c : level_classes(d, k)) out.emplace_back(d, k, c, tau, cfg);
    return out;
}

cplx SymmetricTheta::operator()(const CVec& x) const
{
    cplx s = 0;
    for (const auto& p : parts) s += p(x);
    return s;
}

std::vector<SymmetricTheta> symmetrize_basis(const AffineRootDatum& d, int k, cplx tau, const SeriesConfig& cfg)
{
    auto classes = level_classes(d, k);
    std::vector<int> orbit_of(classes.size(), -1);
    std::vector<SymmetricTheta> out;
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (orbit_of[i] >= 0) continue;
        const int id = static_cast<int>(out.size());
        SymmetricTheta f;
        for (const auto& p : finite_orbit(d, classes[i])) {
            for (std::size_t j = 0; j < classes.size(); ++j) {
                if (orbit_of[j] < 0 && same_level_class(d, k, p.point, classes[j])) {
                    orbit_of[j] = id;
                    f.parts.emplace_back(d, k, classes[j], tau, cfg);
                }
            }
        }
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace ermo

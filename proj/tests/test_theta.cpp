#include "ermo/theta.hpp"
#include "ermo/weyl.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ermo;

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0, 1);

// Jacobi triple product forms, independent of the Gaussian series.
cplx theta1_product(cplx z, cplx tau)
{
    cplx q = std::exp(I * kPi * tau), p = 2.0 * std::exp(I * kPi * tau / 4.0) * std::sin(kPi * z);
    cplx q2n = 1;
    for (int n = 1; n < 200; ++n) {
        q2n *= q * q;
        p *= (1.0 - q2n) * (1.0 - 2.0 * q2n * std::cos(2 * kPi * z) + q2n * q2n);
    }
    return p;
}

cplx theta3_product(cplx z, cplx tau)
{
    cplx q = std::exp(I * kPi * tau), p = 1;
    for (int n = 1; n < 200; ++n) {
        cplx a = std::pow(q, 2 * n), b = std::pow(q, 2 * n - 1);
        p *= (1.0 - a) * (1.0 + 2.0 * b * std::cos(2 * kPi * z) + b * b);
    }
    return p;
}

// wp(z) - wp(w) for periods (1, T): the lattice sum with the sum over the real period done in closed form.
cplx wp_difference(cplx z, cplx w, cplx T)
{
    cplx s = 0;
    for (int n = -60; n <= 60; ++n) {
        cplx a = std::sin(kPi * (z + double(n) * T)), b = std::sin(kPi * (w + double(n) * T));
        s += 1.0 / (a * a) - 1.0 / (b * b);
    }
    return kPi * kPi * s;
}

struct Rng {
    std::mt19937_64 g{12345};
    double u(double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }
    cplx tau() { return {u(-0.5, 0.5), u(0.6, 1.6)}; }
    cplx z() { return {u(-1, 1), u(-0.3, 0.3)}; }
};

}  // namespace

TEST_CASE("theta series against triple products and parity")
{
    Rng r;
    for (int i = 0; i < 50; ++i) {
        cplx tau = r.tau(), z = r.z();
        CHECK(std::abs(jacobi_theta(1, z, tau) - theta1_product(z, tau)) < 1e-12 * std::abs(theta1_product(z, tau)) + 1e-14);
        CHECK(std::abs(jacobi_theta(3, z, tau) - theta3_product(z, tau)) < 1e-12 * std::abs(theta3_product(z, tau)));
        CHECK(std::abs(jacobi_theta(1, -z, tau) + jacobi_theta(1, z, tau)) < 1e-14);
        for (int j : {0, 2, 3}) CHECK(std::abs(jacobi_theta(j, -z, tau) - jacobi_theta(j, z, tau)) < 1e-13);
        CHECK(std::abs(jacobi_theta(1, z + 1.0, tau) + jacobi_theta(1, z, tau)) < 1e-13);
        cplx f = -std::exp(-I * kPi * tau - 2.0 * kPi * I * z);
        CHECK(std::abs(jacobi_theta(1, z + tau, tau) - f * jacobi_theta(1, z, tau)) < 1e-12 * std::abs(jacobi_theta(1, z + tau, tau)));
    }
    CHECK(jacobi_theta(1, 0.0, I) == cplx(0, 0));
}

TEST_CASE("eta and the derivative of theta_1")
{
    CHECK(std::abs(eta(I) - std::tgamma(0.25) / (2 * std::pow(kPi, 0.75))) < 1e-14);
    Rng r;
    for (int i = 0; i < 10; ++i) {
        cplx tau = r.tau();
        CHECK(std::abs(eta(tau + 1.0) - std::exp(I * kPi / 12.0) * eta(tau)) < 1e-14);
        cplx ratio = theta1_derivative_series(tau) / std::pow(eta(tau), 3);
        CHECK(std::abs(ratio - 2 * kPi) < 1e-12);
    }
    CHECK(theta1_prime_zero(2, I) == std::pow(eta(2.0 * I), 3));
    CHECK(std::abs(theta1_prime_classical(I) - theta1_derivative_series(I)) < 1e-13);
}

TEST_CASE("truncation error carries the bound")
{
    SeriesConfig c;
    c.max_terms = 1;
    CHECK_THROWS_AS(jacobi_theta(3, 0.1, cplx(0, 0.01), c), TruncationError);
    CHECK_THROWS_AS(jacobi_theta(3, 0.1, cplx(0, -1)), std::invalid_argument);
}

TEST_CASE("sigma_nu: residue, antisymmetry, pole guard")
{
    Rng r;
    cplx tau(0.1, 1.1);
    for (int i = 0; i < 20; ++i) {
        cplx nu = r.z(), z = r.z();
        CHECK(std::abs(sigma_nu(nu, z, 1, tau) + sigma_nu(z, nu, 1, tau)) < 1e-10 * std::abs(sigma_nu(nu, z, 1, tau)));
    }
    cplx nu = 1e-6, z(0.3, 0.1);
    cplx lhs = sigma_nu(nu, z, 2, tau) * theta_gamma(1, -nu, 2, tau);
    CHECK(std::abs(lhs - theta1_prime_zero(2, tau)) < 1e-5 * std::abs(theta1_prime_zero(2, tau)));
    CHECK_THROWS_AS(sigma_nu(0.3, 0.0, 1, tau), PoleError);
    CHECK_THROWS_AS(sigma_nu(0.3, tau, 1, tau), PoleError);
}

TEST_CASE("wp0 against the Weierstrass lattice sum")
{
    Rng r;
    for (int i = 0; i < 20; ++i) {
        cplx tau = r.tau(), z = r.z();
        double gamma = (i % 3) + 1;
        cplx T = gamma * tau;
        cplx expect = -wp_difference(z, T / 2.0, T) / (4 * kPi * kPi);
        CHECK(std::abs(wp0(z, gamma, tau) - expect) < 1e-10 * std::max(1.0, std::abs(expect)));
        CHECK(std::abs(wp0(-z, gamma, tau) - wp0(z, gamma, tau)) < 1e-12 * std::abs(wp0(z, gamma, tau)));
    }
    CHECK(std::abs(wp0(I / 2.0, 1, I)) < 1e-14);
}

TEST_CASE("level-k theta basis sizes and symmetric rank")
{
    cplx tau(0.1, 0.9);
    AffineRootDatum a1("A1~1");
    CHECK(theta_basis(a1, 2, tau).size() == 4);
    CHECK(theta_basis(a1, 1, tau).size() == 2);
    CHECK(symmetrize_basis(a1, 2, tau).size() == 3);
    CHECK(symmetrize_basis(a1, 1, tau).size() == 2);
    CHECK(theta_basis(AffineRootDatum("A2~1"), 1, tau).size() == 3);
    CHECK(theta_basis(AffineRootDatum("A2~2"), 1, tau).size() == 1);

    Rng r;
    for (int k : {1, 2, 3}) {
        auto sym = symmetrize_basis(a1, k, tau);
        Eigen::MatrixXcd m(12, static_cast<Eigen::Index>(sym.size()));
        for (int p = 0; p < 12; ++p) {
            CVec x(1);
            x[0] = r.z();
            for (std::size_t j = 0; j < sym.size(); ++j) m(p, static_cast<Eigen::Index>(j)) = sym[j](x);
        }
        CHECK(Eigen::FullPivLU<Eigen::MatrixXcd>(m).rank() == static_cast<Eigen::Index>(sym.size()));
    }
}

TEST_CASE("Heisenberg quasi-periodicity and Weyl invariance")
{
    Rng r;
    cplx tau(-0.2, 0.8);
    for (const char* t : {"A1~1", "A2~1", "C2~1", "A2~2", "A4~2", "G2~1"}) {
        AffineRootDatum d(t);
        const int l = d.rank();
        for (int k : {1, 2}) {
            for (const auto& th : theta_basis(d, k, tau)) {
                CVec x(l);
                for (int i = 0; i < l; ++i) x[i] = r.z() / double(l);
                const cplx v = th(x);
                for (int i = 0; i < l; ++i) {
                    RVec cv = d.coroot(d.unit(i));
                    CVec y = x;
                    for (int j = 0; j < l; ++j) y[j] += to_double(cv[j]);
                    CHECK_MESSAGE(std::abs(th(y) - v) < 1e-10 * std::abs(v), t);
                    RVec b(l);
                    for (int j = 0; j < l; ++j) b[j] = d.M_basis()(i, j);
                    CVec z = x;
                    cplx bx = 0;
                    for (int j = 0; j < l; ++j) {
                        z[j] += tau * to_double(b[j]);
                        bx += to_double(d.pair(b, d.unit(j))) * x[j];
                    }
                    cplx factor = std::exp(-I * kPi * tau * double(k) * to_double(d.norm2(b)) - 2.0 * kPi * I * double(k) * bx);
                    CHECK_MESSAGE(std::abs(th(z) - factor * v) < 1e-10 * std::abs(th(z)), t);
                }
            }
            for (const auto& f : symmetrize_basis(d, k, tau)) {
                CVec x(l);
                for (int i = 0; i < l; ++i) x[i] = r.z() / double(l);
                for (int i = 1; i <= l; ++i) {
                    CVec y = x;
                    auto w = simple_reflection(d, i).finite;
                    for (int a = 0; a < l; ++a) {
                        y[a] = 0;
                        for (int b = 0; b < l; ++b) y[a] += to_double(w(a, b)) * x[b];
                    }
                    CHECK_MESSAGE(std::abs(f(y) - f(x)) < 1e-11 * std::max(1.0, std::abs(f(x))), t);
                }
            }
        }
    }
}

TEST_CASE("A^(1)_1 level-2 antisymmetrization is proportional to theta^1")
{
    AffineRootDatum d("A1~1");
    cplx tau(0.15, 0.7);
    ThetaBasisElement p(d, 2, {Rational(1, 2)}, tau), m(d, 2, {Rational(-1, 2)}, tau);
    Rng r;
    cplx first = 0;
    for (int i = 0; i < 10; ++i) {
        CVec x(1);
        x[0] = r.z();
        cplx a = to_double(d.form()(0, 0)) * x[0];
        cplx ratio = (p(x) - m(x)) / theta_gamma(1, a, 1, tau);
        if (i == 0) first = ratio;
        CHECK(std::abs(ratio - first) < 1e-12 * std::abs(first));
    }
}

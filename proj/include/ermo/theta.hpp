#pragma once

#include "ermo/root_system.hpp"

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ermo {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;

struct SeriesConfig {
    int max_terms = 400;
    // Relative bound on the discarded Gaussian tail.
    double tail_tol = 1e-17;
    double im_tau_floor = 0.3;
    // |theta_1| below pole_guard times the series magnitude counts as a pole.
    double pole_guard = 1e-8;

    // Defaults, with tail_tol overridden by ERMO_SERIES_TOL when set.
    static SeriesConfig from_env();
};

struct TruncationError : std::runtime_error {
    double bound;
    TruncationError(const std::string& what, double b) : std::runtime_error(what), bound(b) {}
};

struct PoleError : std::runtime_error {
    double distance;
    PoleError(const std::string& what, double d) : std::runtime_error(what), distance(d) {}
};

struct ThetaValue {
    cplx value;
    double magnitude;  // sum of absolute values of the series terms
};

// Classical Jacobi theta functions; j = 1, 2, 3 and j = 0 for theta_4.
ThetaValue jacobi_theta_ex(int j, cplx z, cplx tau, const SeriesConfig& cfg = {});
cplx jacobi_theta(int j, cplx z, cplx tau, const SeriesConfig& cfg = {});
// d/dz theta_1 at z = 0 from the differentiated series.
cplx theta1_derivative_series(cplx tau, const SeriesConfig& cfg = {});

cplx eta(cplx tau, const SeriesConfig& cfg = {});
// Normalized derivative: theta^{1'}(0; gamma) := eta(gamma tau)^3.
cplx theta1_prime_zero(double gamma, cplx tau, const SeriesConfig& cfg = {});
// Classical value 2 pi eta(tau)^3.
cplx theta1_prime_classical(cplx tau, const SeriesConfig& cfg = {});

// theta^j(z; gamma) with theta^1 = -i theta_1, theta^0 = theta_4, nome gamma tau.
cplx theta_gamma(int j, cplx z, double gamma, cplx tau, const SeriesConfig& cfg = {});

// sigma_nu(z; gamma) = theta^1(z - nu) theta^{1'}(0) / (theta^1(z) theta^1(-nu)).
cplx sigma_nu(cplx nu, cplx z, double gamma, cplx tau, const SeriesConfig& cfg = {});
// wp0(z; gamma) = (theta^0(z) theta^{1'}(0) / (theta^1(z) theta^0(0)))^2.
cplx wp0(cplx z, double gamma, cplx tau, const SeriesConfig& cfg = {});

// Level-k theta function Theta_{k Lambda_0 + shift} at fixed tau:
// sum over w in shift + kM of exp(pi i tau |w|^2 / k + 2 pi i (w|x)),
// truncated in shells around the Gaussian maximum for the given x.
class ThetaBasisElement {
public:
    ThetaBasisElement(const AffineRootDatum& d, int k, RVec shift, cplx tau, const SeriesConfig& cfg = {});
    int level() const { return k_; }
    const RVec& shift() const { return shift_; }
    cplx operator()(const CVec& x) const;

private:
    int k_;
    RVec shift_;
    cplx tau_;
    SeriesConfig cfg_;
    Eigen::VectorXd s_;     // shift
    Eigen::MatrixXd B_;     // columns: basis of kM
    Eigen::MatrixXd G_;     // form
    Eigen::MatrixXd Binv_;
};

// One element per class of P/kM (P the finite weight lattice).
std::vector<ThetaBasisElement> theta_basis(const AffineRootDatum& d, int k, cplx tau, const SeriesConfig& cfg = {});

// Finite Weyl orbit sums of the basis, one per orbit of classes.
struct SymmetricTheta {
    std::vector<ThetaBasisElement> parts;
    cplx operator()(const CVec& x) const;
};
std::vector<SymmetricTheta> symmetrize_basis(const AffineRootDatum& d, int k, cplx tau, const SeriesConfig& cfg = {});

// Class representatives of P/kM in the fundamental-weight basis.
std::vector<RVec> level_classes(const AffineRootDatum& d, int k);
bool same_level_class(const AffineRootDatum& d, int k, const RVec& a, const RVec& b);

}  // namespace ermo

#pragma once

#include "ermo/rational.hpp"

#include <json.hpp>

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ermo {

// Affine type X_N^(r) in Kac's classification, written "A4~2".
struct AffineType {
    char family = 'A';
    int N = 1;
    int r = 1;

    static AffineType parse(std::string_view s);
    std::string name() const;
    // A^(2)_{2l}: the only type with half roots.
    bool has_half_roots() const { return family == 'A' && r == 2 && N % 2 == 0; }
    bool operator==(const AffineType&) const = default;
};

// Real affine root: finite part in the simple-root basis plus delta coefficient.
// Half roots of A^(2)_{2l} carry a half-integral finite part and delta.
struct AffineRoot {
    RVec fin;
    Rational delta{0};

    bool positive() const;
    AffineRoot operator-() const { return {ermo::operator-(fin), -delta}; }
    bool operator==(const AffineRoot&) const = default;
    bool operator<(const AffineRoot& o) const;
};

std::string to_string(const AffineRoot& a);

struct NEntry {
    Rational m;
    Rational n;
};
using NAlphaRow = std::array<std::optional<NEntry>, 4>;

class AffineRootDatum {
public:
    explicit AffineRootDatum(AffineType t);
    explicit AffineRootDatum(std::string_view s) : AffineRootDatum(AffineType::parse(s)) {}

    const AffineType& type() const { return type_; }
    int rank() const { return l_; }

    // Generalized Cartan matrix a_ij = <alpha_i^vee, alpha_j>, index 0 is alpha_0.
    const std::vector<std::vector<int>>& cartan() const { return cartan_; }
    const std::vector<int>& labels() const { return labels_; }
    const std::vector<int>& colabels() const { return colabels_; }

    // Gram matrix (alpha_i|alpha_j) of the finite simple roots.
    const RMatrix& form() const { return form_; }
    Rational pair(const RVec& a, const RVec& b) const;
    Rational norm2(const RVec& a) const { return pair(a, a); }
    // nu(f^vee) = 2f/(f|f)
    RVec coroot(const RVec& f) const;
    // <lambda, f^vee>
    Rational coroot_pairing(const RVec& lambda, const RVec& f) const;

    const RVec& theta() const { return theta_; }
    int a0() const { return labels_[0]; }
    AffineRoot simple_root(int i) const;
    RVec unit(int i) const;

    // Ordered by height, then lexicographically.
    const std::vector<RVec>& positive_finite_roots() const { return pos_roots_; }
    std::vector<RVec> finite_roots() const;
    bool is_finite_root(const RVec& f) const;

    // gamma_alpha of an affine root with finite part f.
    int gamma(const RVec& f) const;
    bool is_half_root(const RVec& f) const;
    bool is_long(const RVec& f) const;

    // Positive real roots with delta coefficient at most max_delta, canonical order.
    std::vector<AffineRoot> positive_real_roots(const Rational& max_delta) const;

    // Root classes: distinct root lengths, longest first. Couplings are keyed by class.
    int num_classes() const { return static_cast<int>(class_norms_.size()); }
    const Rational& class_norm(int c) const { return class_norms_[c]; }
    int root_class(const RVec& f) const;
    int simple_class(int i) const;
    std::string class_name(int c) const;

    // lambda_i: nu(Lambda_i^vee) for r = 1, Lambda_i otherwise.
    const std::vector<RVec>& weight_basis() const { return weights_; }
    bool in_M_hat(const RVec& v) const;
    bool in_M(const RVec& v) const;
    bool in_coroot_lattice(const RVec& v) const;
    bool is_antidominant(const RVec& v) const;
    const RMatrix& M_basis() const { return m_basis_; }
    const RMatrix& coroot_lattice() const { return qv_basis_; }
    const RMatrix& M_hat_basis() const { return mhat_basis_; }
    // nu(theta^vee)
    RVec quasi_minuscule_weight() const { return coroot(theta_); }

    // Orthonormal-realization vectors e_j in the simple-root basis (types A^(1), B, C, D and their
    // twisted relatives). For A^(1)_l these are the projections e_j - mean.
    std::vector<RVec> orthogonal_vectors() const;

    NAlphaRow n_alpha_table(const RVec& root_fin) const;
    bool satisfies_cond_theta(const RVec& root_fin, const NEntry& e) const;

    std::vector<AffineRoot> translation_inversion_set(const RVec& lambda) const;
    int translation_length(const RVec& lambda) const;

    nlohmann::json to_json() const;

private:
    AffineType type_;
    int l_ = 0;
    std::vector<std::vector<int>> cartan_;
    std::vector<int> labels_, colabels_;
    RMatrix form_;
    RVec theta_;
    std::vector<RVec> pos_roots_;
    std::vector<Rational> class_norms_;
    Rational long_norm_;
    std::vector<RVec> weights_;
    RMatrix m_basis_, qv_basis_, mhat_basis_;
    std::vector<std::vector<int>> ortho_simple_;  // simple roots in orthogonal coordinates
    int ortho_dim_ = 0;
};

// rho_mu = 1/2 sum over positive finite roots of mu_alpha alpha.
template <class S>
std::vector<S> rho_mu(const AffineRootDatum& d, const std::vector<S>& mu)
{
    std::vector<S> out(static_cast<std::size_t>(d.rank()), S(0));
    for (const auto& a : d.positive_finite_roots()) {
        S m = mu[static_cast<std::size_t>(d.root_class(a))];
        for (int i = 0; i < d.rank(); ++i) out[i] += m * S(a[i].numerator()) / S(a[i].denominator()) / S(2);
    }
    return out;
}

template <class S>
S pair_with(const AffineRootDatum& d, const std::vector<S>& v, const RVec& w)
{
    S out(0);
    for (int i = 0; i < d.rank(); ++i)
        for (int j = 0; j < d.rank(); ++j) {
            const Rational& g = d.form()(i, j);
            if (g == 0 || w[j] == 0) continue;
            Rational c = g * w[j];
            out += v[i] * S(c.numerator()) / S(c.denominator());
        }
    return out;
}

// h^vee_mu as sum mu_{alpha_i} a_i^vee.
template <class S>
S h_vee_mu(const AffineRootDatum& d, const std::vector<S>& mu)
{
    S out(0);
    for (int i = 0; i <= d.rank(); ++i) out += mu[static_cast<std::size_t>(d.simple_class(i))] * S(d.colabels()[i]);
    return out;
}

// h^vee_mu as (rho_mu|theta) + mu_{alpha_0}.
template <class S>
S h_vee_mu_via_rho(const AffineRootDatum& d, const std::vector<S>& mu)
{
    return pair_with(d, rho_mu(d, mu), d.theta()) + mu[static_cast<std::size_t>(d.simple_class(0))];
}

}  // namespace ermo

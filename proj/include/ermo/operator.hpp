#pragma once

#include "ermo/theta.hpp"
#include "ermo/weyl.hpp"

#include <json.hpp>

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace ermo {

// Couplings keyed by root class (see AffineRootDatum::root_class).
struct CouplingParams {
    std::vector<cplx> mu;
    std::vector<std::array<cplx, 4>> zeta;

    // mu_c = value for every class, zeta = (1, 0, 0, 0).
    static CouplingParams uniform(const AffineRootDatum& d, cplx value);
    // Throws std::invalid_argument on size mismatch or a nonzero zeta^j outside N_alpha.
    void validate(const AffineRootDatum& d) const;
};

struct SpectralParams {
    CVec xi;  // simple-root coordinates
    cplx kappa;
};

struct OperatorContext {
    std::shared_ptr<const AffineRootDatum> datum;
    CouplingParams couplings;
    SpectralParams spectral;
    cplx tau{0.0, 1.0};
    SeriesConfig series;
    // Test fixture hook: -1 pulls back by w^{-1}(x - kappa lambda) instead of w^{-1}x - kappa lambda.
    double translation_sign = 1.0;

    const AffineRootDatum& d() const { return *datum; }
    cplx mu(const RVec& fin) const { return couplings.mu[static_cast<std::size_t>(datum->root_class(fin))]; }
    cplx mu_alpha0() const { return couplings.mu[static_cast<std::size_t>(datum->simple_class(0))]; }
    // <xi, f^vee> = 2 (xi|f) / (f|f)
    cplx xi_pairing(const RVec& fin) const;
    CVec rho_mu() const;
    cplx h_vee() const;
    // Xi = (xi + rho_mu) / h_vee
    CVec big_xi() const;
    // xi = -rho_mu and kappa = h_vee / k.
    static OperatorContext invariant(std::shared_ptr<const AffineRootDatum> d, CouplingParams c, int k, cplx tau,
                                     SeriesConfig cfg = {});
};

// Complex vector helpers in simple-root coordinates.
CVec to_cvec(const RVec& v);
cplx pair_c(const AffineRootDatum& d, const RVec& a, const CVec& x);
cplx pair_cc(const AffineRootDatum& d, const CVec& a, const CVec& b);

// g = finite * t_{translation + shift}; g^{-1} x = finite^{-1} x - kappa (translation + shift).
struct GroupElement {
    ExtendedWeylElement w;
    CVec shift;  // complex part of the translation

    static GroupElement identity(int l);
    static GroupElement from(const ExtendedWeylElement& w);
    static GroupElement complex_translation(const CVec& c);
    bool is_pure_translation() const;
};
GroupElement compose(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& a);
// g^{-1} x
CVec pull_back(const GroupElement& g, const CVec& x, cplx kappa);

// (f|x) + kappa n + z0
struct LinearArg {
    RVec fin;
    Rational n;
    cplx z0;
};

struct Atom {
    enum class Kind { H, Theta };
    Kind kind = Kind::H;
    LinearArg arg;
    // H_{arg}(nu) with couplings of the class of arg.fin.
    cplx nu;
    // theta_j(arg; nome * tau)^power, classical Jacobi theta with j = 1..4.
    int j = 1;
    int nome = 1;
    int power = 1;
};

struct Monomial {
    cplx scalar;
    std::vector<int> atoms;  // sorted, repeated for powers
};

struct Term {
    GroupElement g;
    std::vector<Monomial> monomials;
};

using TestFunction = std::function<cplx(const CVec&)>;

namespace detail {

struct HPart {
    double m;
    double g;     // n gamma
    cplx coeff;   // zeta theta_1(-g mu/m) / theta_1(-g nu/m)
    cplx shift;   // g nu / m
};

struct AtomData {
    Eigen::VectorXcd gf;  // form * fin
    double n = 0.0;
    std::vector<HPart> parts;
};

struct TermData {
    Eigen::MatrixXcd finv;
    CVec offset;  // translation + complex shift
    std::map<std::vector<int>, std::size_t> index;
};

bool atom_less(const Atom& a, const Atom& b);
bool group_less(const GroupElement& a, const GroupElement& b);

}  // namespace detail

struct Applied {
    cplx value;
    double scale;  // sum of |monomial| |f| over all monomials of all terms
};

// Finite sum of coefficient * group element acting by (g F)(x) = F(g^{-1} x).
class DROperator {
public:
    explicit DROperator(std::shared_ptr<const OperatorContext> ctx);

    static DROperator identity(std::shared_ptr<const OperatorContext> ctx);
    static DROperator element(std::shared_ptr<const OperatorContext> ctx, const GroupElement& g, cplx scalar = 1.0);
    static DROperator multiplication(std::shared_ptr<const OperatorContext> ctx, const Atom& a, cplx scalar = 1.0);

    const OperatorContext& context() const { return *ctx_; }
    std::shared_ptr<const OperatorContext> context_ptr() const { return ctx_; }
    const std::vector<Term>& terms() const { return terms_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    std::size_t monomial_count() const;

    int intern(const Atom& a);
    // Adds scalar * prod(atoms) * g, merging into an existing term with the same key.
    void add(const GroupElement& g, Monomial m);

    Applied apply(const TestFunction& f, const CVec& x) const;
    cplx operator()(const TestFunction& f, const CVec& x) const { return apply(f, x).value; }
    TestFunction as_function(TestFunction f) const;

    // Value of the coefficient of the term keyed by g at x (0 when absent).
    cplx coefficient(const GroupElement& g, const CVec& x) const;
    const Term* find(const GroupElement& g) const;

    cplx eval_atom(const Atom& a, const CVec& x) const;

    nlohmann::json to_json() const;

private:
    std::shared_ptr<const OperatorContext> ctx_;
    std::vector<Atom> atoms_;
    std::vector<Term> terms_;
    std::vector<detail::AtomData> atom_data_;
    std::vector<detail::TermData> term_data_;
    std::map<Atom, int, bool (*)(const Atom&, const Atom&)> atom_index_{detail::atom_less};
    std::map<GroupElement, std::size_t, bool (*)(const GroupElement&, const GroupElement&)> term_index_{detail::group_less};
};

DROperator compose(const DROperator& a, const DROperator& b);
DROperator sum(const DROperator& a, const DROperator& b, cplx sb = 1.0);
// g A g^{-1}
DROperator conjugate(const GroupElement& g, const DROperator& a);
// Atom transported so that its value at x equals the original at g^{-1} x.
Atom transport(const AffineRootDatum& d, const Atom& a, const GroupElement& g, cplx kappa);

// H_alpha(nu) evaluated directly from sigma_nu and the normalized theta functions (theta^1 = -i theta_1).
cplx H_alpha(const OperatorContext& ctx, const AffineRoot& root, cplx nu, const CVec& x);
// R_alpha = H_alpha(mu_alpha) - H_alpha(<xi, alpha^vee>) r_alpha
DROperator r_matrix(std::shared_ptr<const OperatorContext> ctx, const AffineRoot& root);
// Product of R-matrices over the given roots, left to right.
DROperator r_product(std::shared_ptr<const OperatorContext> ctx, const std::vector<AffineRoot>& roots);
DROperator translation_operator(std::shared_ptr<const OperatorContext> ctx, const RVec& lambda);
// Y^lambda = R_{alpha^1} ... R_{alpha^l} t_lambda along the given (or greedy) reduced word of t_lambda.
DROperator y_operator(std::shared_ptr<const OperatorContext> ctx, const RVec& lambda);
DROperator y_operator(std::shared_ptr<const OperatorContext> ctx, const RVec& lambda, const ReducedWord& word);

// Scalar u_alpha with R_alpha R_{-alpha} = u_alpha Id.
cplx unitarity_scalar(const OperatorContext& ctx, const AffineRoot& root);

// Coefficient of t_lambda in Y^lambda: product of H_alpha(mu_alpha) over the inversion set of t_lambda.
DROperator leading_term(std::shared_ptr<const OperatorContext> ctx, const RVec& lambda);

// Closed forms on W-invariant functions (xi = -rho_mu).
DROperator minuscule_closed_form(std::shared_ptr<const OperatorContext> ctx, const RVec& lambda);
DROperator quasi_minuscule_closed_form(std::shared_ptr<const OperatorContext> ctx);
int stabilizer_size(const AffineRootDatum& d, const RVec& lambda);

// Sum over the finite Weyl group of g X g^{-1}, divided by the stabilizer size.
DROperator weyl_average(const DROperator& x, int stabilizer);

// Elliptic Macdonald-Ruijsenaars operator of type A_{l-1}^(1) in orthogonal coordinates.
DROperator explicit_a1_operator(std::shared_ptr<const OperatorContext> ctx);

// kappa is taken from the context.
struct A2lParams {
    std::array<cplx, 4> nu{};
    std::array<cplx, 4> nubar{};
    cplx mu;
};
// Type A_{2l}^(2) operator with eight boundary couplings. The default reading uses
// theta_{r+1}(-kappa/2 - nu) and a plus sign in the constant part; literal = true keeps the
// printed theta_{r+1}(-kappa - nu) with a minus sign.
DROperator explicit_a2_2l_operator(std::shared_ptr<const OperatorContext> ctx, const A2lParams& p,
                                   bool literal = false);
cplx a2_2l_level_kappa(const A2lParams& p, int l, int k);

// Bar representation: R_bar = t_{eps1} R_{alpha bar} t_{eps2}.
DROperator bar_r_matrix(std::shared_ptr<const OperatorContext> ctx, const AffineRoot& root, const CVec& eta);
// Product of R_bar along a reduced word with the eta_n gauge.
DROperator bar_product(std::shared_ptr<const OperatorContext> ctx, const ReducedWord& word);
// t_{-Xi} R_{alpha^1} ... R_{alpha^l} t_{lambda'} t_{Xi}
DROperator bar_product_expected(std::shared_ptr<const OperatorContext> ctx, const ReducedWord& word);
// R_bar product along the reduced word of t_lambda.
DROperator bar_y_operator(std::shared_ptr<const OperatorContext> ctx, const RVec& lambda);
// eta_n for each letter of the word.
std::vector<CVec> bar_gauge(const OperatorContext& ctx, const ReducedWord& word);

}  // namespace ermo

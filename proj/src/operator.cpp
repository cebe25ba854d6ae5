#include "ermo/operator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace ermo {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::MatrixXd to_dmat(const RMatrix& m)
{
    Eigen::MatrixXd out(m.n, m.n);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) out(i, j) = to_double(m(i, j));
    return out;
}

Eigen::VectorXd form_times(const AffineRootDatum& d, const RVec& f)
{
    Eigen::VectorXd out = Eigen::VectorXd::Zero(d.rank());
    for (int i = 0; i < d.rank(); ++i)
        for (int j = 0; j < d.rank(); ++j) out[i] += to_double(d.form()(i, j) * f[j]);
    return out;
}

template <class A, class B>
int cmp3(const A& a, const B& b)
{
    return a < b ? -1 : (b < a ? 1 : 0);
}

int cmp_cplx(cplx a, cplx b)
{
    if (int c = cmp3(a.real(), b.real())) return c;
    return cmp3(a.imag(), b.imag());
}

int cmp_cvec(const CVec& a, const CVec& b)
{
    if (int c = cmp3(a.size(), b.size())) return c;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (int c = cmp_cplx(a[i], b[i])) return c;
    return 0;
}

}  // namespace

bool detail::atom_less(const Atom& a, const Atom& b)
{
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.arg.fin != b.arg.fin) return a.arg.fin < b.arg.fin;
    if (a.arg.n != b.arg.n) return a.arg.n < b.arg.n;
    if (int c = cmp_cplx(a.arg.z0, b.arg.z0)) return c < 0;
    if (int c = cmp_cplx(a.nu, b.nu)) return c < 0;
    return std::tie(a.j, a.nome, a.power) < std::tie(b.j, b.nome, b.power);
}

bool detail::group_less(const GroupElement& a, const GroupElement& b)
{
    if (a.w.finite.a != b.w.finite.a) return a.w.finite.a < b.w.finite.a;
    if (a.w.translation != b.w.translation) return a.w.translation < b.w.translation;
    return cmp_cvec(a.shift, b.shift) < 0;
}

namespace {

cplx guarded(cplx value, double magnitude, const SeriesConfig& cfg, const char* what)
{
    if (std::abs(value) < cfg.pole_guard * magnitude)
        throw PoleError(std::string(what) + ": argument within pole guard of a theta zero", std::abs(value) / magnitude);
    return value;
}

}  // namespace

// ---------------------------------------------------------------- parameters

CouplingParams CouplingParams::uniform(const AffineRootDatum& d, cplx value)
{
    CouplingParams c;
    c.mu.assign(static_cast<std::size_t>(d.num_classes()), value);
    c.zeta.assign(static_cast<std::size_t>(d.num_classes()), {1.0, 0.0, 0.0, 0.0});
    return c;
}

void CouplingParams::validate(const AffineRootDatum& d) const
{
    const auto n = static_cast<std::size_t>(d.num_classes());
    if (mu.size() != n || zeta.size() != n)
        throw std::invalid_argument("couplings need one mu and one zeta row per root class (" + std::to_string(n) + ")");
    for (const auto& f : d.finite_roots()) {
        for (const RVec& g : {f, Rational(1, 2) * f}) {
            if (g != f && !(d.type().has_half_roots() && d.is_long(f))) continue;
            const NAlphaRow row = d.n_alpha_table(g);
            const auto& z = zeta[static_cast<std::size_t>(d.root_class(g))];
            for (int j = 0; j < 4; ++j)
                if (!row[static_cast<std::size_t>(j)] && z[static_cast<std::size_t>(j)] != cplx(0.0))
                    throw std::invalid_argument("zeta^" + std::to_string(j + 1) + " must vanish for class " +
                                                d.class_name(d.root_class(g)));
        }
    }
}

CVec to_cvec(const RVec& v)
{
    CVec out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = to_double(v[i]);
    return out;
}

cplx pair_c(const AffineRootDatum& d, const RVec& a, const CVec& x)
{
    return form_times(d, a).cast<cplx>().dot(x);
}

cplx pair_cc(const AffineRootDatum& d, const CVec& a, const CVec& b)
{
    cplx out = 0.0;
    for (int i = 0; i < d.rank(); ++i)
        for (int j = 0; j < d.rank(); ++j) out += a[i] * to_double(d.form()(i, j)) * b[j];
    return out;
}

cplx OperatorContext::xi_pairing(const RVec& fin) const
{
    return 2.0 * pair_c(*datum, fin, spectral.xi) / to_double(datum->norm2(fin));
}

CVec OperatorContext::rho_mu() const
{
    auto r = ermo::rho_mu<cplx>(*datum, couplings.mu);
    return Eigen::Map<CVec>(r.data(), static_cast<Eigen::Index>(r.size()));
}

cplx OperatorContext::h_vee() const { return h_vee_mu<cplx>(*datum, couplings.mu); }

CVec OperatorContext::big_xi() const
{
    const cplx h = h_vee();
    if (std::abs(h) == 0.0) throw std::invalid_argument("h_vee_mu vanishes");
    return (spectral.xi + rho_mu()) / h;
}

OperatorContext OperatorContext::invariant(std::shared_ptr<const AffineRootDatum> d, CouplingParams c, int k, cplx tau,
                                           SeriesConfig cfg)
{
    if (k <= 0) throw std::invalid_argument("level must be positive");
    OperatorContext ctx{std::move(d), std::move(c), {}, tau, cfg};
    ctx.couplings.validate(*ctx.datum);
    ctx.spectral.xi = -ctx.rho_mu();
    ctx.spectral.kappa = ctx.h_vee() / static_cast<double>(k);
    return ctx;
}

// ---------------------------------------------------------------- group elements

GroupElement GroupElement::identity(int l) { return {ExtendedWeylElement::identity(l), CVec::Zero(l)}; }

GroupElement GroupElement::from(const ExtendedWeylElement& w)
{
    return {w, CVec::Zero(static_cast<Eigen::Index>(w.translation.size()))};
}

GroupElement GroupElement::complex_translation(const CVec& c)
{
    return {ExtendedWeylElement::identity(static_cast<int>(c.size())), c};
}

bool GroupElement::is_pure_translation() const { return w.finite.a == RMatrix::identity(w.finite.n).a; }

GroupElement compose(const GroupElement& a, const GroupElement& b)
{
    const RMatrix binv = b.w.finite.inverse();
    CVec s = b.shift;
    if (a.shift.squaredNorm() != 0.0) s += to_dmat(binv).cast<cplx>() * a.shift;
    return {compose(a.w, b.w), s};
}

GroupElement inverse(const GroupElement& a)
{
    CVec s = CVec::Zero(a.shift.size());
    if (a.shift.squaredNorm() != 0.0) s = -(to_dmat(a.w.finite).cast<cplx>() * a.shift);
    return {inverse(a.w), s};
}

CVec pull_back(const GroupElement& g, const CVec& x, cplx kappa)
{
    CVec lam = to_cvec(g.w.translation) + g.shift;
    return to_dmat(g.w.finite.inverse()).cast<cplx>() * x - kappa * lam;
}

// ---------------------------------------------------------------- atoms

namespace {

std::vector<detail::HPart> h_parts(const OperatorContext& ctx, const RVec& fin, cplx nu)
{
    const auto& d = ctx.d();
    const int cls = d.root_class(fin);
    const NAlphaRow row = d.n_alpha_table(fin);
    const auto& zeta = ctx.couplings.zeta[static_cast<std::size_t>(cls)];
    const cplx mu = ctx.couplings.mu[static_cast<std::size_t>(cls)];
    const double gamma = d.gamma(fin);
    std::vector<detail::HPart> out;
    for (std::size_t j = 0; j < 4; ++j) {
        if (!row[j] || zeta[j] == cplx(0.0)) continue;
        const double m = to_double(row[j]->m);
        const double g = to_double(row[j]->n) * gamma;
        const cplx nome = g * ctx.tau;
        const auto den = jacobi_theta_ex(1, -g * nu / m, nome, ctx.series);
        const cplx c = zeta[j] * jacobi_theta(1, -g * mu / m, nome, ctx.series) /
                       guarded(den.value, den.magnitude, ctx.series, "H coupling");
        out.push_back({m, g, c, g * nu / m});
    }
    return out;
}

detail::AtomData atom_data(const OperatorContext& ctx, const Atom& a)
{
    detail::AtomData data;
    data.gf = form_times(ctx.d(), a.arg.fin).cast<cplx>();
    data.n = to_double(a.arg.n);
    if (a.kind == Atom::Kind::H) data.parts = h_parts(ctx, a.arg.fin, a.nu);
    return data;
}

cplx atom_value(const OperatorContext& ctx, const Atom& a, const detail::AtomData& data, const CVec& x)
{
    const cplx arg = data.gf.dot(x) + ctx.spectral.kappa * data.n + a.arg.z0;
    const auto& cfg = ctx.series;
    if (a.kind == Atom::Kind::H) {
        cplx v = 0.0;
        for (const auto& p : data.parts) {
            const cplx nome = p.g * ctx.tau;
            const auto den = jacobi_theta_ex(1, p.m * arg, nome, cfg);
            v += p.coeff * jacobi_theta(1, p.m * arg - p.shift, nome, cfg) /
                 guarded(den.value, den.magnitude, cfg, "H denominator");
        }
        return v;
    }
    const auto t = jacobi_theta_ex(a.j == 4 ? 0 : a.j, arg, static_cast<double>(a.nome) * ctx.tau, cfg);
    if (a.power >= 0) return std::pow(t.value, a.power);
    return std::pow(guarded(t.value, t.magnitude, cfg, "theta denominator"), a.power);
}

Atom h_atom(const RVec& fin, const Rational& n, cplx nu)
{
    Atom a;
    a.kind = Atom::Kind::H;
    a.arg = {fin, n, 0.0};
    a.nu = nu;
    return a;
}

Atom theta_atom(int j, const RVec& fin, const Rational& n, cplx z0, int power)
{
    Atom a;
    a.kind = Atom::Kind::Theta;
    a.arg = {fin, n, z0};
    a.j = j;
    a.power = power;
    return a;
}

}  // namespace

Atom transport(const AffineRootDatum& d, const Atom& a, const GroupElement& g, cplx kappa)
{
    // (f | w^{-1} x - kappa (lambda + c)) = (w f | x) - kappa (f|lambda) - kappa (f|c)
    Atom out = a;
    out.arg.fin = g.w.finite * a.arg.fin;
    out.arg.n = a.arg.n - d.pair(a.arg.fin, g.w.translation);
    if (g.shift.squaredNorm() != 0.0) out.arg.z0 = a.arg.z0 - kappa * pair_c(d, a.arg.fin, g.shift);
    return out;
}

// ---------------------------------------------------------------- operator

DROperator::DROperator(std::shared_ptr<const OperatorContext> ctx) : ctx_(std::move(ctx)) {}

DROperator DROperator::identity(std::shared_ptr<const OperatorContext> ctx)
{
    const int l = ctx->d().rank();
    return element(std::move(ctx), GroupElement::identity(l));
}

DROperator DROperator::element(std::shared_ptr<const OperatorContext> ctx, const GroupElement& g, cplx scalar)
{
    DROperator op(std::move(ctx));
    op.add(g, {scalar, {}});
    return op;
}

DROperator DROperator::multiplication(std::shared_ptr<const OperatorContext> ctx, const Atom& a, cplx scalar)
{
    const int l = ctx->d().rank();
    DROperator op(std::move(ctx));
    const int id = op.intern(a);
    op.add(GroupElement::identity(l), {scalar, {id}});
    return op;
}

std::size_t DROperator::monomial_count() const
{
    std::size_t n = 0;
    for (const auto& t : terms_) n += t.monomials.size();
    return n;
}

int DROperator::intern(const Atom& a)
{
    auto it = atom_index_.find(a);
    if (it != atom_index_.end()) return it->second;
    const int id = static_cast<int>(atoms_.size());
    atom_data_.push_back(atom_data(*ctx_, a));
    atoms_.push_back(a);
    atom_index_.emplace(a, id);
    return id;
}

void DROperator::add(const GroupElement& g, Monomial m)
{
    std::sort(m.atoms.begin(), m.atoms.end());
    auto it = term_index_.find(g);
    std::size_t t;
    if (it == term_index_.end()) {
        t = terms_.size();
        terms_.push_back({g, {}});
        term_data_.push_back({to_dmat(g.w.finite.inverse()).cast<cplx>(), to_cvec(g.w.translation) + g.shift, {}});
        term_index_.emplace(g, t);
    } else {
        t = it->second;
    }
    auto& idx = term_data_[t].index;
    auto mit = idx.find(m.atoms);
    if (mit == idx.end()) {
        idx.emplace(m.atoms, terms_[t].monomials.size());
        terms_[t].monomials.push_back(std::move(m));
    } else {
        terms_[t].monomials[mit->second].scalar += m.scalar;
    }
}

cplx DROperator::eval_atom(const Atom& a, const CVec& x) const { return atom_value(*ctx_, a, atom_data(*ctx_, a), x); }

Applied DROperator::apply(const TestFunction& f, const CVec& x) const
{
    std::vector<cplx> vals(atoms_.size());
    std::vector<char> done(atoms_.size(), 0);
    auto value = [&](int id) {
        const auto k = static_cast<std::size_t>(id);
        if (!done[k]) {
            vals[k] = atom_value(*ctx_, atoms_[k], atom_data_[k], x);
            done[k] = 1;
        }
        return vals[k];
    };
    Applied out{0.0, 0.0};
    for (std::size_t t = 0; t < terms_.size(); ++t) {
        cplx c = 0.0;
        double mag = 0.0;
        for (const auto& m : terms_[t].monomials) {
            cplx p = m.scalar;
            for (int id : m.atoms) p *= value(id);
            c += p;
            mag += std::abs(p);
        }
        if (mag == 0.0) continue;
        const auto& data = term_data_[t];
        // translation_sign < 0 applies the translation before the finite part (test fixture)
        const cplx fy = ctx_->translation_sign < 0 ? f(data.finv * (x - ctx_->spectral.kappa * data.offset))
                                                   : f(data.finv * x - ctx_->spectral.kappa * data.offset);
        out.value += c * fy;
        out.scale += mag * std::abs(fy);
    }
    return out;
}

TestFunction DROperator::as_function(TestFunction f) const
{
    auto self = std::make_shared<const DROperator>(*this);
    return [self, f = std::move(f)](const CVec& x) { return self->apply(f, x).value; };
}

const Term* DROperator::find(const GroupElement& g) const
{
    auto it = term_index_.find(g);
    return it == term_index_.end() ? nullptr : &terms_[it->second];
}

cplx DROperator::coefficient(const GroupElement& g, const CVec& x) const
{
    auto it = term_index_.find(g);
    if (it == term_index_.end()) return 0.0;
    cplx c = 0.0;
    for (const auto& m : terms_[it->second].monomials) {
        cplx p = m.scalar;
        for (int id : m.atoms) {
            const auto k = static_cast<std::size_t>(id);
            p *= atom_value(*ctx_, atoms_[k], atom_data_[k], x);
        }
        c += p;
    }
    return c;
}

nlohmann::json DROperator::to_json() const
{
    using nlohmann::json;
    auto rvec = [](const RVec& v) {
        json a = json::array();
        for (const auto& q : v) a.push_back(to_string(q));
        return a;
    };
    auto cnum = [](cplx z) { return json::array({z.real(), z.imag()}); };
    const auto& d = ctx_->d();
    json atoms = json::array();
    for (const auto& a : atoms_) {
        json j{{"fin", rvec(a.arg.fin)}, {"delta", to_string(a.arg.n)}, {"z0", cnum(a.arg.z0)}};
        if (a.kind == Atom::Kind::H) {
            j["kind"] = "H";
            j["class"] = d.class_name(d.root_class(a.arg.fin));
            j["nu"] = cnum(a.nu);
        } else {
            j["kind"] = "theta";
            j["j"] = a.j;
            j["nome"] = a.nome;
            j["power"] = a.power;
        }
        atoms.push_back(j);
    }
    json terms = json::array();
    for (const auto& t : terms_) {
        ExtendedWeylElement fin = t.g.w;
        fin.translation = RVec(static_cast<std::size_t>(d.rank()), Rational(0));
        json shift = json::array();
        for (Eigen::Index i = 0; i < t.g.shift.size(); ++i) shift.push_back(cnum(t.g.shift[i]));
        json monos = json::array();
        for (const auto& m : t.monomials) monos.push_back({{"scalar", cnum(m.scalar)}, {"factors", m.atoms}});
        terms.push_back({{"weyl_word", reduced_word(d, fin).letters},
                         {"translation", rvec(t.g.w.translation)},
                         {"complex_shift", shift},
                         {"monomials", monos}});
    }
    return {{"type", d.type().name()}, {"atoms", atoms}, {"terms", terms}};
}

DROperator compose(const DROperator& a, const DROperator& b)
{
    const auto& ctx = a.context();
    const auto& d = ctx.d();
    DROperator out(a.context_ptr());
    std::vector<int> amap;
    for (const auto& at : a.atoms()) amap.push_back(out.intern(at));
    for (const auto& ta : a.terms()) {
        std::vector<int> bmap;
        for (const auto& at : b.atoms()) bmap.push_back(out.intern(transport(d, at, ta.g, ctx.spectral.kappa)));
        for (const auto& tb : b.terms()) {
            const GroupElement g = compose(ta.g, tb.g);
            for (const auto& ma : ta.monomials)
                for (const auto& mb : tb.monomials) {
                    Monomial m{ma.scalar * mb.scalar, {}};
                    m.atoms.reserve(ma.atoms.size() + mb.atoms.size());
                    for (int id : ma.atoms) m.atoms.push_back(amap[static_cast<std::size_t>(id)]);
                    for (int id : mb.atoms) m.atoms.push_back(bmap[static_cast<std::size_t>(id)]);
                    out.add(g, std::move(m));
                }
        }
    }
    return out;
}

DROperator sum(const DROperator& a, const DROperator& b, cplx sb)
{
    DROperator out = a;
    std::vector<int> bmap;
    for (const auto& at : b.atoms()) bmap.push_back(out.intern(at));
    for (const auto& t : b.terms())
        for (const auto& m : t.monomials) {
            Monomial mm{sb * m.scalar, {}};
            for (int id : m.atoms) mm.atoms.push_back(bmap[static_cast<std::size_t>(id)]);
            out.add(t.g, std::move(mm));
        }
    return out;
}

DROperator conjugate(const GroupElement& g, const DROperator& a)
{
    auto ctx = a.context_ptr();
    return compose(compose(DROperator::element(ctx, g), a), DROperator::element(ctx, inverse(g)));
}

// ---------------------------------------------------------------- R-matrices and Y

cplx H_alpha(const OperatorContext& ctx, const AffineRoot& root, cplx nu, const CVec& x)
{
    const auto& d = ctx.d();
    const int cls = d.root_class(root.fin);
    const NAlphaRow row = d.n_alpha_table(root.fin);
    const auto& zeta = ctx.couplings.zeta[static_cast<std::size_t>(cls)];
    const cplx mu = ctx.couplings.mu[static_cast<std::size_t>(cls)];
    const double gamma = d.gamma(root.fin);
    // iota(alpha) evaluated at x: (alpha bar | x) + kappa * delta-coefficient
    const cplx arg = pair_c(d, root.fin, x) + ctx.spectral.kappa * to_double(root.delta);
    cplx out = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
        if (!row[j]) continue;
        const double m = to_double(row[j]->m);
        const double g = to_double(row[j]->n) * gamma;
        out += zeta[j] * theta_gamma(1, -g * mu / m, g, ctx.tau, ctx.series) / theta1_prime_zero(g, ctx.tau, ctx.series) *
               sigma_nu(g * nu / m, m * arg, g, ctx.tau, ctx.series);
    }
    return out;
}

DROperator r_matrix(std::shared_ptr<const OperatorContext> ctx, const AffineRoot& root)
{
    const auto& d = ctx->d();
    DROperator op(ctx);
    const int h_mu = op.intern(h_atom(root.fin, root.delta, ctx->mu(root.fin)));
    const int h_xi = op.intern(h_atom(root.fin, root.delta, ctx->xi_pairing(root.fin)));
    op.add(GroupElement::identity(d.rank()), {1.0, {h_mu}});
    op.add(GroupElement::from(reflection(d, root)), {-1.0, {h_xi}});
    return op;
}

DROperator r_product(std::shared_ptr<const OperatorContext> ctx, const std::vector<AffineRoot>& roots)
{
    DROperator out = DROperator::identity(ctx);
    for (const auto& r : roots) out = compose(out, r_matrix(ctx, r));
    return out;
}

DROperator translation_operator(std::shared_ptr<const OperatorContext> ctx, const RVec& lambda)
{
    return DROperator::element(ctx, GroupElement::from(translation(lambda)));
}

DROperator y_operator(std::shared_ptr<const OperatorContext> ctx, const RVec& lambda, const ReducedWord& word)
{
    const auto& d = ctx->d();
    if (!(evaluate(d, word) == translation(lambda))) throw std::invalid_argument("word does not evaluate to t_lambda");
    return compose(r_product(ctx, inversion_sequence(d, word)), translation_operator(ctx, lambda));
}

DROperator y_operator(std::shared_ptr<const OperatorContext> ctx, const RVec& lambda)
{
    const auto& d = ctx->d();
    if (!d.in_M_hat(lambda) || !d.is_antidominant(lambda))
        throw std::invalid_argument("y_operator needs an antidominant weight in M-hat");
    return y_operator(ctx, lambda, reduced_word(d, translation(lambda)));
}

cplx unitarity_scalar(const OperatorContext& ctx, const AffineRoot& root)
{
    static const double S[4][4] = {{1, 0, 0, 0}, {-1, 0, 0, 1}, {-1, 4, 0, 0}, {1, -4, 4, -1}};
    static const double P[4][4] = {{2, 1, 1, 2}, {0, 0, 1, 2}, {0, 1, 1, 0}, {0, 0, 1, 0}};
    const auto& d = ctx.d();
    const int cls = d.root_class(root.fin);
    const NAlphaRow row = d.n_alpha_table(root.fin);
    const auto& zeta = ctx.couplings.zeta[static_cast<std::size_t>(cls)];
    const cplx mu = ctx.couplings.mu[static_cast<std::size_t>(cls)];
    const cplx nu = ctx.xi_pairing(root.fin);
    const double gamma = d.gamma(root.fin);
    cplx zt[4] = {}, dv[4] = {};
    for (std::size_t j = 0; j < 4; ++j) {
        if (!row[j]) continue;
        const double m = to_double(row[j]->m);
        const double g = to_double(row[j]->n) * gamma;
        zt[j] = zeta[j] * theta_gamma(1, -g * mu / m, g, ctx.tau, ctx.series) / theta1_prime_zero(g, ctx.tau, ctx.series);
        dv[j] = wp0(g * mu / m, g, ctx.tau, ctx.series) - wp0(g * nu / m, g, ctx.tau, ctx.series);
    }
    cplx u = 0.0;
    for (int i = 0; i < 4; ++i) {
        cplx p = 0.0, sd = 0.0;
        for (int j = 0; j < 4; ++j) {
            p += P[i][j] * zt[j];
            sd += S[i][j] / 4.0 * dv[j];
        }
        u += p * p * sd;
    }
    return u;
}

DROperator leading_term(std::shared_ptr<const OperatorContext> ctx, const RVec& lambda)
{
    const auto& d = ctx->d();
    DROperator op(ctx);
    Monomial m{1.0, {}};
    for (const auto& a : inversion_set(d, translation(lambda))) m.atoms.push_back(op.intern(h_atom(a.fin, a.delta, ctx->mu(a.fin))));
    op.add(GroupElement::from(translation(lambda)), std::move(m));
    return op;
}

// ---------------------------------------------------------------- closed forms

int stabilizer_size(const AffineRootDatum& d, const RVec& lambda)
{
    int n = 0;
    for (const auto& w : finite_weyl_group(d))
        if (w.finite * lambda == lambda) ++n;
    return n;
}

DROperator weyl_average(const DROperator& x, int stabilizer)
{
    const auto& d = x.context().d();
    DROperator out(x.context_ptr());
    for (const auto& w : finite_weyl_group(d)) out = sum(out, conjugate(GroupElement::from(w), x), 1.0 / stabilizer);
    return out;
}

DROperator minuscule_closed_form(std::shared_ptr<const OperatorContext> ctx, const RVec& lambda)
{
    const auto& d = ctx->d();
    if (!d.in_M_hat(lambda) || !is_minuscule(d, -lambda)) throw std::invalid_argument("minuscule_closed_form needs -lambda minuscule");
    DROperator x(ctx);
    Monomial m{1.0, {}};
    for (const auto& a : d.positive_finite_roots())
        if (d.pair(lambda, a) == -d.gamma(a)) m.atoms.push_back(x.intern(h_atom(a, Rational(0), ctx->mu(a))));
    x.add(GroupElement::from(translation(lambda)), std::move(m));
    return weyl_average(x, stabilizer_size(d, lambda));
}

DROperator quasi_minuscule_closed_form(std::shared_ptr<const OperatorContext> ctx)
{
    const auto& d = ctx->d();
    if (d.type().family == 'A' && d.type().r == 1)
        throw std::invalid_argument("type A^(1) has minuscule weights; use minuscule_closed_form");
    const RVec nu_theta = d.quasi_minuscule_weight();
    const RVec theta_v = d.coroot(d.theta());
    const AffineRoot beta0{Rational(1, d.a0()) * d.theta(), Rational(1, d.a0())};
    // constant part uses <xi, beta0^vee> = -(rho_mu|theta) at xi = -rho_mu
    const cplx rho_theta = pair_c(d, d.theta(), ctx->rho_mu());
    DROperator x(ctx);
    std::vector<int> prod;
    for (const auto& a : d.positive_finite_roots())
        if (d.pair(a, theta_v) > 0) prod.push_back(x.intern(h_atom(a, Rational(0), ctx->mu(a))));
    Monomial shifted{1.0, prod}, constant{-1.0, prod};
    shifted.atoms.push_back(x.intern(h_atom(beta0.fin, beta0.delta, ctx->mu_alpha0())));
    constant.atoms.push_back(x.intern(h_atom(beta0.fin, beta0.delta, -rho_theta)));
    x.add(GroupElement::from(translation(-nu_theta)), std::move(shifted));
    x.add(GroupElement::identity(d.rank()), std::move(constant));
    return weyl_average(x, stabilizer_size(d, nu_theta));
}

DROperator explicit_a1_operator(std::shared_ptr<const OperatorContext> ctx)
{
    const auto& d = ctx->d();
    if (d.type().family != 'A' || d.type().r != 1) throw std::invalid_argument("explicit_a1_operator needs type A^(1)");
    const auto e = d.orthogonal_vectors();
    const cplx mu = ctx->couplings.mu[0];
    DROperator op(ctx);
    for (std::size_t j = 0; j < e.size(); ++j) {
        Monomial m{1.0, {}};
        for (std::size_t k = 0; k < e.size(); ++k) {
            if (k == j) continue;
            const RVec f = e[j] - e[k];
            m.atoms.push_back(op.intern(theta_atom(1, f, Rational(0), -mu, 1)));
            m.atoms.push_back(op.intern(theta_atom(1, f, Rational(0), 0.0, -1)));
        }
        // t_j(kappa) prod_k t_k(-kappa/l): x -> x + kappa (e_j - mean)
        op.add(GroupElement::from(translation(-e[j])), std::move(m));
    }
    return op;
}

cplx a2_2l_level_kappa(const A2lParams& p, int l, int k)
{
    cplx s = 2.0 * static_cast<double>(l - 1) * p.mu;
    for (int r = 0; r < 4; ++r) s += p.nu[static_cast<std::size_t>(r)] + p.nubar[static_cast<std::size_t>(r)];
    return s / static_cast<double>(k);
}

DROperator explicit_a2_2l_operator(std::shared_ptr<const OperatorContext> ctx, const A2lParams& p, bool literal)
{
    static const int perm[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    const auto& d = ctx->d();
    if (!d.type().has_half_roots()) throw std::invalid_argument("explicit_a2_2l_operator needs type A_{2l}^(2)");
    const auto e = d.orthogonal_vectors();
    const cplx kappa = ctx->spectral.kappa;
    const cplx tau = ctx->tau;
    const auto& cfg = ctx->series;
    const Rational half(1, 2);
    DROperator op(ctx);
    auto ratio = [&](Monomial& m, int j, const RVec& f, const Rational& n, cplx shift) {
        m.atoms.push_back(op.intern(theta_atom(j, f, n, shift, 1)));
        m.atoms.push_back(op.intern(theta_atom(j, f, n, 0.0, -1)));
    };
    for (std::size_t j = 0; j < e.size(); ++j) {
        for (int s : {1, -1}) {
            const RVec xj = Rational(s) * e[j];
            Monomial m{1.0, {}};
            for (std::size_t k = 0; k < e.size(); ++k) {
                if (k == j) continue;
                ratio(m, 1, xj - e[k], Rational(0), -p.mu);
                ratio(m, 1, xj + e[k], Rational(0), -p.mu);
            }
            for (int r = 0; r < 4; ++r) {
                ratio(m, r + 1, xj, Rational(0), -p.nu[static_cast<std::size_t>(r)]);
                ratio(m, r + 1, xj, half, -p.nubar[static_cast<std::size_t>(r)]);
            }
            // t_j(s kappa): x_j -> x_j + s kappa
            const RVec shift = (Rational(1) / d.norm2(e[j])) * e[j];
            op.add(GroupElement::from(translation(Rational(-s) * shift)), std::move(m));
        }
    }
    const cplx th1p = theta1_prime_classical(tau, cfg);
    const cplx pref = std::pow(kPi / th1p, 2) * 2.0 /
                      (jacobi_theta(1, -p.mu, tau, cfg) * jacobi_theta(1, -kappa - p.mu, tau, cfg));
    const cplx kshift = literal ? kappa : kappa / 2.0;
    for (int q = 0; q < 4; ++q) {
        cplx c = pref * (literal ? -1.0 : 1.0);
        for (int r = 0; r < 4; ++r) {
            const auto pr = static_cast<std::size_t>(perm[q][r]);
            const int jj = r + 1 == 4 ? 0 : r + 1;
            c *= jacobi_theta(jj, -kshift - p.nu[pr], tau, cfg) * jacobi_theta(jj, -p.nubar[pr], tau, cfg);
        }
        Monomial m{c, {}};
        for (std::size_t j = 0; j < e.size(); ++j) {
            ratio(m, q + 1, e[j], -half, -p.mu);
            ratio(m, q + 1, -e[j], -half, -p.mu);
        }
        op.add(GroupElement::identity(d.rank()), std::move(m));
    }
    return op;
}

// ---------------------------------------------------------------- bar representation

DROperator bar_r_matrix(std::shared_ptr<const OperatorContext> ctx, const AffineRoot& root, const CVec& eta)
{
    const cplx h = ctx->h_vee();
    if (std::abs(h) == 0.0) throw std::invalid_argument("bar representation needs h_vee_mu != 0");
    const CVec a = to_cvec(root.fin);
    const cplx mu = ctx->mu(root.fin);
    const CVec eps1 = (-0.5 * mu * a - ctx->spectral.xi + eta) / h;
    const CVec eps2 = (-0.5 * mu * a + ctx->spectral.xi - eta) / h;
    DROperator out = DROperator::element(ctx, GroupElement::complex_translation(eps1));
    out = compose(out, r_matrix(ctx, {root.fin, Rational(0)}));
    return compose(out, DROperator::element(ctx, GroupElement::complex_translation(eps2)));
}

std::vector<CVec> bar_gauge(const OperatorContext& ctx, const ReducedWord& word)
{
    const auto& d = ctx.d();
    const auto roots = inversion_sequence(d, word);
    const cplx rho_theta = pair_c(d, d.theta(), ctx.rho_mu());
    std::vector<CVec> out;
    CVec acc = -ctx.rho_mu();
    for (std::size_t n = 0; n < roots.size(); ++n) {
        const cplx nu = word.letters[n] == 0 ? -rho_theta : ctx.mu(roots[n].fin);
        const CVec a = to_cvec(roots[n].fin);
        out.push_back(acc + 0.5 * nu * a);
        acc += nu * a;
    }
    return out;
}

DROperator bar_product(std::shared_ptr<const OperatorContext> ctx, const ReducedWord& word)
{
    const auto roots = inversion_sequence(ctx->d(), word);
    const auto eta = bar_gauge(*ctx, word);
    DROperator out = DROperator::identity(ctx);
    for (std::size_t n = 0; n < roots.size(); ++n) out = compose(out, bar_r_matrix(ctx, roots[n], eta[n]));
    return out;
}

DROperator bar_product_expected(std::shared_ptr<const OperatorContext> ctx, const ReducedWord& word)
{
    const auto roots = inversion_sequence(ctx->d(), word);
    const cplx h = ctx->h_vee();
    const CVec xi_big = ctx->big_xi();
    CVec lam = CVec::Zero(ctx->d().rank());
    for (const auto& r : roots) lam -= ctx->mu(r.fin) * to_cvec(r.fin) / h;
    DROperator out = DROperator::element(ctx, GroupElement::complex_translation(-xi_big));
    out = compose(out, r_product(ctx, roots));
    out = compose(out, DROperator::element(ctx, GroupElement::complex_translation(lam)));
    return compose(out, DROperator::element(ctx, GroupElement::complex_translation(xi_big)));
}

DROperator bar_y_operator(std::shared_ptr<const OperatorContext> ctx, const RVec& lambda)
{
    const auto& d = ctx->d();
    if (!d.in_M_hat(lambda) || !d.is_antidominant(lambda))
        throw std::invalid_argument("bar_y_operator needs an antidominant weight in M-hat");
    return bar_product(ctx, reduced_word(d, translation(lambda)));
}

}  // namespace ermo

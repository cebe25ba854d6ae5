#include "ermo/root_system.hpp"

#include <algorithm>
#include <map>
#include <regex>
#include <stdexcept>

namespace ermo {

namespace {

using IVec = std::vector<int>;

IVec e_minus(int dim, int i, int j)
{
    IVec v(dim, 0);
    v[i] += 1;
    v[j] -= 1;
    return v;
}

// Simple roots of the finite type in orthogonal coordinates (scaled to integers).
// Rank-2 non-simply-laced systems are numbered with alpha_1 long.
std::vector<IVec> orthogonal_simple_roots(char X, int l, int& dim)
{
    std::vector<IVec> s;
    switch (X) {
    case 'A':
        dim = l + 1;
        for (int i = 0; i < l; ++i) s.push_back(e_minus(dim, i, i + 1));
        break;
    case 'B':
        dim = l;
        for (int i = 0; i + 1 < l; ++i) s.push_back(e_minus(dim, i, i + 1));
        s.push_back(IVec(dim, 0));
        s.back()[l - 1] = 1;
        break;
    case 'C':
        dim = l;
        if (l == 2) {
            s = {{0, 2}, {1, -1}};
            break;
        }
        for (int i = 0; i + 1 < l; ++i) s.push_back(e_minus(dim, i, i + 1));
        s.push_back(IVec(dim, 0));
        s.back()[l - 1] = 2;
        break;
    case 'D':
        dim = l;
        for (int i = 0; i + 1 < l; ++i) s.push_back(e_minus(dim, i, i + 1));
        s.push_back(IVec(dim, 0));
        s.back()[l - 2] = 1;
        s.back()[l - 1] = 1;
        break;
    case 'G':
        dim = 3;
        s = {{-2, 1, 1}, {1, -1, 0}};
        break;
    case 'F':
        dim = 4;
        s = {{0, 2, -2, 0}, {0, 0, 2, -2}, {0, 0, 0, 2}, {1, -1, -1, -1}};
        break;
    case 'E': {
        dim = 8;
        std::vector<IVec> e8 = {{1, -1, -1, -1, -1, -1, -1, 1}, {2, 2, 0, 0, 0, 0, 0, 0}};
        for (int i = 0; i < 6; ++i) e8.push_back(e_minus(8, i + 1, i));
        // the spinor root is stored doubled, so double the others to keep one scale
        for (std::size_t k = 2; k < e8.size(); ++k)
            for (auto& x : e8[k]) x *= 2;
        s.assign(e8.begin(), e8.begin() + l);
        break;
    }
    default:
        throw std::invalid_argument("unknown family");
    }
    return s;
}

int dot(const IVec& a, const IVec& b)
{
    int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

bool lex_greater(const RVec& a, const RVec& b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] > b[i];
    return false;
}

Rational height(const RVec& a)
{
    Rational h = 0;
    for (const auto& x : a) h += x;
    return h;
}

}  // namespace

AffineType AffineType::parse(std::string_view s)
{
    static const std::regex re(R"(^([A-G])(\d+)~([123])$)");
    std::string str(s);
    std::smatch m;
    if (!std::regex_match(str, m, re)) throw std::invalid_argument("malformed affine type '" + str + "' (expected e.g. A4~2)");
    AffineType t{m[1].str()[0], std::stoi(m[2].str()), std::stoi(m[3].str())};
    const char X = t.family;
    const int N = t.N;
    bool ok = false;
    if (t.r == 1) {
        ok = (X == 'A' && N >= 1) || (X == 'B' && N >= 3) || (X == 'C' && N >= 2) || (X == 'D' && N >= 4) ||
             (X == 'E' && N >= 6 && N <= 8) || (X == 'F' && N == 4) || (X == 'G' && N == 2);
    } else if (t.r == 2) {
        ok = (X == 'A' && ((N % 2 == 0 && N >= 2) || N >= 5)) || (X == 'D' && N >= 3) || (X == 'E' && N == 6);
    } else {
        ok = X == 'D' && N == 4;
    }
    if (!ok) throw std::invalid_argument("affine type '" + str + "' is not in Kac's tables");
    return t;
}

std::string AffineType::name() const { return std::string(1, family) + std::to_string(N) + "~" + std::to_string(r); }

bool AffineRoot::positive() const
{
    if (delta != 0) return delta > 0;
    for (const auto& x : fin)
        if (x != 0) return x > 0;
    return false;
}

bool AffineRoot::operator<(const AffineRoot& o) const
{
    if (delta != o.delta) return delta < o.delta;
    Rational h1 = height(fin), h2 = height(o.fin);
    if (h1 != h2) return h1 < h2;
    return lex_greater(fin, o.fin);
}

std::string to_string(const AffineRoot& a)
{
    std::string s = "[";
    for (std::size_t i = 0; i < a.fin.size(); ++i) s += (i ? "," : "") + to_string(a.fin[i]);
    return s + "]+" + to_string(a.delta) + "d";
}

AffineRootDatum::AffineRootDatum(AffineType t) : type_(t)
{
    // Finite part and choice of theta.
    char X = t.family;
    int a0 = 1;
    bool theta_short = false;
    if (t.r == 1) {
        l_ = t.N;
    } else if (t.has_half_roots()) {
        X = 'C';
        l_ = t.N / 2;
        a0 = 2;
    } else if (t.family == 'A') {
        X = 'C';
        l_ = (t.N + 1) / 2;
        theta_short = true;
    } else if (t.family == 'D' && t.r == 2) {
        X = 'B';
        l_ = t.N - 1;
        theta_short = true;
    } else if (t.family == 'E') {
        X = 'F';
        l_ = 4;
        theta_short = true;
    } else {
        X = 'G';
        l_ = 2;
        theta_short = true;
    }
    if (X == 'C' && l_ == 1) X = 'A';
    if (X == 'A' && l_ == 1 && t.has_half_roots()) {
        // C_1: a single long root 2e_1.
        ortho_dim_ = 1;
        ortho_simple_ = {{2}};
    } else {
        ortho_simple_ = orthogonal_simple_roots(X, l_, ortho_dim_);
    }

    // Positive roots from the finite Cartan matrix.
    std::vector<std::vector<int>> fc(l_, std::vector<int>(l_));
    for (int i = 0; i < l_; ++i)
        for (int j = 0; j < l_; ++j)
            fc[i][j] = 2 * dot(ortho_simple_[i], ortho_simple_[j]) / dot(ortho_simple_[i], ortho_simple_[i]);
    std::vector<IVec> roots;
    for (int i = 0; i < l_; ++i) {
        IVec v(l_, 0);
        v[i] = 1;
        roots.push_back(v);
    }
    std::map<IVec, bool> seen;
    for (auto& r : roots) seen[r] = true;
    for (std::size_t k = 0; k < roots.size(); ++k) {
        IVec b = roots[k];
        for (int i = 0; i < l_; ++i) {
            int p = 0;
            IVec c = b;
            for (;;) {
                c[i] -= 1;
                if (!seen.count(c)) break;
                ++p;
            }
            int pair = 0;
            for (int j = 0; j < l_; ++j) pair += b[j] * fc[i][j];
            int q = p - pair;
            if (q > 0) {
                IVec n = b;
                n[i] += 1;
                if (!seen.count(n)) {
                    seen[n] = true;
                    roots.push_back(n);
                }
            }
        }
    }
    for (auto& r : roots) {
        RVec v;
        for (int x : r) v.emplace_back(x);
        pos_roots_.push_back(v);
    }
    std::sort(pos_roots_.begin(), pos_roots_.end(), [](const RVec& a, const RVec& b) {
        Rational ha = height(a), hb = height(b);
        if (ha != hb) return ha < hb;
        return lex_greater(a, b);
    });

    // Form from the orthogonal realization, later rescaled.
    form_ = RMatrix(l_);
    for (int i = 0; i < l_; ++i)
        for (int j = 0; j < l_; ++j) form_(i, j) = dot(ortho_simple_[i], ortho_simple_[j]);
    auto n2 = [&](const RVec& v) { return pair(v, v); };
    Rational maxn = 0, minn = -1;
    for (const auto& r : pos_roots_) {
        maxn = std::max(maxn, n2(r));
        if (minn < 0 || n2(r) < minn) minn = n2(r);
    }
    for (auto it = pos_roots_.rbegin(); it != pos_roots_.rend(); ++it) {
        if (!theta_short || n2(*it) == minn) {
            theta_ = *it;
            break;
        }
    }
    // Kac normalization: (theta|theta) = 2 a_0.
    Rational scale = Rational(2 * a0) / n2(theta_);
    for (auto& x : form_.a) x *= scale;
    long_norm_ = maxn * scale;

    // Affine Cartan matrix and labels.
    std::vector<RVec> simple(l_ + 1);
    simple[0] = Rational(-1, a0) * theta_;
    for (int i = 1; i <= l_; ++i) simple[i] = unit(i - 1);
    cartan_.assign(l_ + 1, std::vector<int>(l_ + 1));
    for (int i = 0; i <= l_; ++i)
        for (int j = 0; j <= l_; ++j) {
            Rational c = 2 * pair(simple[i], simple[j]) / n2(simple[i]);
            if (!is_integer(c)) throw std::logic_error("non-integral Cartan entry");
            cartan_[i][j] = static_cast<int>(c.numerator());
        }
    labels_.assign(l_ + 1, 0);
    labels_[0] = a0;
    for (int i = 1; i <= l_; ++i) labels_[i] = static_cast<int>(theta_[i - 1].numerator());
    colabels_.assign(l_ + 1, 0);
    Rational c0 = Rational(labels_[0]) * n2(simple[0]) / 2;
    for (int i = 0; i <= l_; ++i) {
        Rational c = Rational(labels_[i]) * n2(simple[i]) / 2 / c0;
        if (!is_integer(c)) throw std::logic_error("non-integral colabel");
        colabels_[i] = static_cast<int>(c.numerator());
    }

    // Root classes.
    std::vector<Rational> norms;
    for (const auto& r : pos_roots_) norms.push_back(n2(r));
    if (t.has_half_roots()) norms.push_back(long_norm_ / 4);
    std::sort(norms.begin(), norms.end(), std::greater<>());
    norms.erase(std::unique(norms.begin(), norms.end()), norms.end());
    class_norms_ = norms;

    // Weight basis.
    RMatrix ginv = form_.inverse();
    for (int i = 0; i < l_; ++i) {
        RVec rhs(l_, Rational(0));
        rhs[i] = t.r == 1 ? Rational(1) : form_(i, i) / 2;
        weights_.push_back(ginv * rhs);
    }
    mhat_basis_ = lattice_basis(weights_, l_);
    std::vector<RVec> qv, mg;
    for (int i = 0; i < l_; ++i) qv.push_back(coroot(unit(i)));
    for (const auto& r : pos_roots_)
        if (n2(r) == n2(theta_)) mg.push_back(coroot(r));
    qv_basis_ = lattice_basis(qv, l_);
    m_basis_ = lattice_basis(mg, l_);
}

RVec AffineRootDatum::unit(int i) const
{
    RVec v(l_, Rational(0));
    v[i] = 1;
    return v;
}

Rational AffineRootDatum::pair(const RVec& a, const RVec& b) const
{
    Rational s = 0;
    for (int i = 0; i < l_; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < l_; ++j)
            if (b[j] != 0) s += a[i] * form_(i, j) * b[j];
    }
    return s;
}

RVec AffineRootDatum::coroot(const RVec& f) const { return (Rational(2) / norm2(f)) * f; }

Rational AffineRootDatum::coroot_pairing(const RVec& lambda, const RVec& f) const { return 2 * pair(lambda, f) / norm2(f); }

AffineRoot AffineRootDatum::simple_root(int i) const
{
    if (i == 0) return {Rational(-1, labels_[0]) * theta_, Rational(1, labels_[0])};
    return {unit(i - 1), Rational(0)};
}

std::vector<RVec> AffineRootDatum::finite_roots() const
{
    std::vector<RVec> out = pos_roots_;
    for (const auto& r : pos_roots_) out.push_back(-r);
    return out;
}

bool AffineRootDatum::is_finite_root(const RVec& f) const
{
    for (const auto& r : pos_roots_)
        if (r == f || r == -f) return true;
    return false;
}

bool AffineRootDatum::is_half_root(const RVec& f) const
{
    return type_.has_half_roots() && norm2(f) == long_norm_ / 4;
}

bool AffineRootDatum::is_long(const RVec& f) const { return norm2(f) == long_norm_; }

int AffineRootDatum::gamma(const RVec& f) const
{
    if (type_.r == 1 || is_half_root(f)) return 1;
    return is_long(f) ? type_.r : 1;
}

int AffineRootDatum::root_class(const RVec& f) const
{
    Rational n = norm2(f);
    for (int c = 0; c < num_classes(); ++c)
        if (class_norms_[c] == n) return c;
    throw std::invalid_argument("vector is not a real root");
}

int AffineRootDatum::simple_class(int i) const { return root_class(simple_root(i).fin); }

std::string AffineRootDatum::class_name(int c) const
{
    if (num_classes() == 1) return "all";
    if (c == 0) return "long";
    if (c == num_classes() - 1) return "short";
    return "medium";
}

std::vector<AffineRoot> AffineRootDatum::positive_real_roots(const Rational& max_delta) const
{
    std::vector<AffineRoot> out;
    for (const auto& f : finite_roots()) {
        int g = gamma(f);
        bool pos = AffineRoot{f, 0}.positive();
        for (int n = pos ? 0 : 1; Rational(n * g) <= max_delta; ++n) out.push_back({f, Rational(n * g)});
        if (type_.has_half_roots() && is_long(f))
            for (int n = 1; Rational(2 * n - 1, 2) <= max_delta; ++n) out.push_back({Rational(1, 2) * f, Rational(2 * n - 1, 2)});
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool AffineRootDatum::in_M_hat(const RVec& v) const
{
    for (const auto& f : pos_roots_) {
        if (!is_integer(pair(f, v) / gamma(f))) return false;
        if (type_.has_half_roots() && is_long(f) && !is_integer(pair(f, v) / 2)) return false;
    }
    return true;
}

bool AffineRootDatum::in_M(const RVec& v) const { return in_lattice(m_basis_, v); }
bool AffineRootDatum::in_coroot_lattice(const RVec& v) const { return in_lattice(qv_basis_, v); }

bool AffineRootDatum::is_antidominant(const RVec& v) const
{
    for (int i = 0; i < l_; ++i)
        if (pair(unit(i), v) > 0) return false;
    return true;
}

std::vector<RVec> AffineRootDatum::orthogonal_vectors() const
{
    if (type_.family == 'E' || type_.family == 'F' || type_.family == 'G' || (type_.family == 'D' && type_.r == 3))
        throw std::invalid_argument("no orthogonal realization provided for " + type_.name());
    RMatrix g(l_);
    for (int i = 0; i < l_; ++i)
        for (int j = 0; j < l_; ++j) g(i, j) = dot(ortho_simple_[i], ortho_simple_[j]);
    RMatrix ginv = g.inverse();
    std::vector<RVec> out;
    for (int j = 0; j < ortho_dim_; ++j) {
        RVec rhs(l_);
        for (int k = 0; k < l_; ++k) rhs[k] = ortho_simple_[k][j];
        out.push_back(ginv * rhs);
    }
    return out;
}

NAlphaRow AffineRootDatum::n_alpha_table(const RVec& f) const
{
    auto e = [](Rational m, Rational n) { return std::optional<NEntry>(NEntry{m, n}); };
    const Rational h(1, 2), q(1, 4);
    NAlphaRow row;
    const auto& t = type_;
    if (t.family == 'C' && t.r == 1 && is_long(f)) {
        row = {e(1, 1), e(1, 2), e(h, 1), e(h, h)};
    } else if (t.family == 'A' && t.r == 2 && t.N % 2 == 1 && is_long(f)) {
        row = {e(1, 1), std::nullopt, std::nullopt, e(h, h)};
    } else if (t.family == 'D' && t.r == 2 && !is_long(f)) {
        row = {e(1, 1), e(1, 2), std::nullopt, std::nullopt};
    } else if (t.has_half_roots() && is_half_root(f)) {
        row = {e(2, 1), e(2, 2), e(1, 1), e(1, h)};
    } else if (t.has_half_roots() && is_long(f)) {
        row = {e(1, h), e(1, 1), e(h, h), e(h, q)};
    } else {
        row = {e(1, 1), std::nullopt, std::nullopt, std::nullopt};
    }
    for (const auto& x : row)
        if (x && !satisfies_cond_theta(f, *x)) throw std::logic_error("N_alpha entry violates the theta condition");
    return row;
}

bool AffineRootDatum::satisfies_cond_theta(const RVec& f, const NEntry& e) const
{
    RVec fv = coroot(f);
    if (!in_coroot_lattice((Rational(1) / e.m) * fv)) return false;
    for (int j = 0; j < l_; ++j)
        if (!is_integer(e.m * pair(f, coroot(unit(j))))) return false;
    Rational g(gamma(f));
    if (!in_M((e.n * g / e.m) * fv)) return false;
    for (int i = 0; i < l_; ++i) {
        RVec b(l_);
        for (int j = 0; j < l_; ++j) b[j] = m_basis_(i, j);
        if (!is_integer(e.m * pair(b, f) / (e.n * g))) return false;
    }
    return true;
}

std::vector<AffineRoot> AffineRootDatum::translation_inversion_set(const RVec& lambda) const
{
    if (!in_M_hat(lambda) || !is_antidominant(lambda))
        throw std::invalid_argument("translation_inversion_set needs an antidominant weight in M-hat; use weyl length for the general case");
    std::vector<AffineRoot> out;
    for (const auto& a : pos_roots_) {
        int g = gamma(a);
        Rational c = pair(lambda, a);
        for (int m = 0; Rational(m * g) < -c; ++m) out.push_back({a, Rational(m * g)});
        if (type_.has_half_roots() && is_long(a))
            for (int n = 0; Rational(n) > c / 2; --n) out.push_back({Rational(1, 2) * a, Rational(1 - 2 * n, 2)});
    }
    std::sort(out.begin(), out.end());
    return out;
}

int AffineRootDatum::translation_length(const RVec& lambda) const
{
    return static_cast<int>(translation_inversion_set(lambda).size());
}

nlohmann::json AffineRootDatum::to_json() const
{
    auto vec = [](const RVec& v) {
        nlohmann::json a = nlohmann::json::array();
        for (const auto& x : v) a.push_back(to_string(x));
        return a;
    };
    nlohmann::json j;
    j["type"] = type_.name();
    j["rank"] = l_;
    j["cartan"] = cartan_;
    j["labels"] = labels_;
    j["colabels"] = colabels_;
    nlohmann::json form = nlohmann::json::array();
    for (int i = 0; i < l_; ++i) {
        RVec row(form_.a.begin() + i * l_, form_.a.begin() + (i + 1) * l_);
        form.push_back(vec(row));
    }
    j["form"] = form;
    j["theta"] = vec(theta_);
    nlohmann::json roots = nlohmann::json::array();
    for (const auto& r : pos_roots_) roots.push_back({{"root", vec(r)}, {"class", root_class(r)}, {"gamma", gamma(r)}});
    j["roots"] = roots;
    nlohmann::json classes = nlohmann::json::array();
    for (int c = 0; c < num_classes(); ++c) classes.push_back({{"name", class_name(c)}, {"norm", to_string(class_norms_[c])}});
    j["classes"] = classes;
    return j;
}

}  // namespace ermo

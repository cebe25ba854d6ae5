#include "ermo/weyl.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace ermo {

ExtendedWeylElement ExtendedWeylElement::identity(int l) { return {RMatrix::identity(l), RVec(l, Rational(0))}; }

bool ExtendedWeylElement::operator<(const ExtendedWeylElement& o) const
{
    if (finite.a != o.finite.a) return finite.a < o.finite.a;
    return translation < o.translation;
}

ExtendedWeylElement compose(const ExtendedWeylElement& a, const ExtendedWeylElement& b)
{
    // w t_l w' t_l' = w w' t_{w'^{-1} l + l'}
    return {a.finite * b.finite, b.finite.inverse() * a.translation + b.translation};
}

ExtendedWeylElement inverse(const ExtendedWeylElement& a)
{
    return {a.finite.inverse(), -(a.finite * a.translation)};
}

ExtendedWeylElement translation(const RVec& lambda)
{
    auto e = ExtendedWeylElement::identity(static_cast<int>(lambda.size()));
    e.translation = lambda;
    return e;
}

ExtendedWeylElement finite_reflection(const AffineRootDatum& d, const RVec& f)
{
    const int l = d.rank();
    ExtendedWeylElement e = ExtendedWeylElement::identity(l);
    for (int j = 0; j < l; ++j) {
        Rational c = d.coroot_pairing(d.unit(j), f);
        for (int i = 0; i < l; ++i) e.finite(i, j) -= c * f[i];
    }
    return e;
}

ExtendedWeylElement reflection(const AffineRootDatum& d, const AffineRoot& root)
{
    ExtendedWeylElement e = finite_reflection(d, root.fin);
    e.translation = root.delta * d.coroot(root.fin);
    return e;
}

ExtendedWeylElement simple_reflection(const AffineRootDatum& d, int i) { return reflection(d, d.simple_root(i)); }

AffineRoot act(const AffineRootDatum& d, const ExtendedWeylElement& w, const AffineRoot& root)
{
    return {w.finite * root.fin, root.delta - d.pair(root.fin, w.translation)};
}

std::vector<AffineRoot> inversion_set(const AffineRootDatum& d, const ExtendedWeylElement& w)
{
    const ExtendedWeylElement winv = inverse(w);
    std::vector<AffineRoot> out;
    auto scan = [&](const RVec& f, Rational first, Rational step) {
        const Rational shift = d.pair(f, winv.translation);
        const bool image_negative = !AffineRoot{winv.finite * f, Rational(0)}.positive();
        for (Rational n = first; n - shift <= 0; n += step) {
            if (n - shift < 0 || image_negative) out.push_back({f, n});
        }
    };
    for (const auto& f : d.finite_roots()) {
        const Rational g(d.gamma(f));
        scan(f, AffineRoot{f, Rational(0)}.positive() ? Rational(0) : g, g);
        if (d.type().has_half_roots() && d.is_long(f)) scan(Rational(1, 2) * f, Rational(1, 2), Rational(1));
    }
    std::sort(out.begin(), out.end());
    return out;
}

int length(const AffineRootDatum& d, const ExtendedWeylElement& w) { return static_cast<int>(inversion_set(d, w).size()); }

ReducedWord reduced_word(const AffineRootDatum& d, const ExtendedWeylElement& w)
{
    ReducedWord out;
    ExtendedWeylElement cur = w;
    for (;;) {
        const ExtendedWeylElement inv = inverse(cur);
        int descent = -1;
        for (int i = 0; i <= d.rank() && descent < 0; ++i)
            if (!act(d, inv, d.simple_root(i)).positive()) descent = i;
        if (descent < 0) break;
        out.letters.push_back(descent);
        cur = compose(simple_reflection(d, descent), cur);
        if (out.letters.size() > 100000) throw std::runtime_error("reduced_word: descent did not terminate");
    }
    out.omega = cur;
    return out;
}

ExtendedWeylElement evaluate(const AffineRootDatum& d, const ReducedWord& word)
{
    ExtendedWeylElement e = ExtendedWeylElement::identity(d.rank());
    for (int i : word.letters) e = compose(e, simple_reflection(d, i));
    return compose(e, word.omega);
}

std::vector<AffineRoot> inversion_sequence(const AffineRootDatum& d, const ReducedWord& word)
{
    std::vector<AffineRoot> out;
    ExtendedWeylElement prefix = ExtendedWeylElement::identity(d.rank());
    for (int i : word.letters) {
        out.push_back(act(d, prefix, d.simple_root(i)));
        prefix = compose(prefix, simple_reflection(d, i));
    }
    return out;
}

std::vector<int> omega_permutation(const AffineRootDatum& d, const ExtendedWeylElement& omega)
{
    std::vector<int> perm;
    for (int i = 0; i <= d.rank(); ++i) {
        AffineRoot img = act(d, omega, d.simple_root(i));
        int found = -1;
        for (int j = 0; j <= d.rank(); ++j)
            if (d.simple_root(j) == img) found = j;
        if (found < 0) throw std::invalid_argument("element does not have length zero");
        perm.push_back(found);
    }
    return perm;
}

bool is_minuscule(const AffineRootDatum& d, const RVec& lambda)
{
    for (const auto& a : inversion_set(d, translation(-lambda)))
        if (a.delta != 0) return false;
    return true;
}

std::vector<OrbitPoint> finite_orbit(const AffineRootDatum& d, const RVec& v)
{
    std::vector<OrbitPoint> out{{v, ExtendedWeylElement::identity(d.rank())}};
    std::set<RVec> seen{v};
    for (std::size_t k = 0; k < out.size(); ++k) {
        for (int i = 1; i <= d.rank(); ++i) {
            ExtendedWeylElement r = simple_reflection(d, i);
            RVec p = r.finite * out[k].point;
            if (seen.insert(p).second) out.push_back({p, compose(r, out[k].element)});
        }
    }
    return out;
}

std::vector<ExtendedWeylElement> finite_weyl_group(const AffineRootDatum& d, std::size_t cap)
{
    std::vector<ExtendedWeylElement> out{ExtendedWeylElement::identity(d.rank())};
    std::set<std::vector<Rational>> seen{out[0].finite.a};
    for (std::size_t k = 0; k < out.size(); ++k) {
        for (int i = 1; i <= d.rank(); ++i) {
            ExtendedWeylElement w = compose(simple_reflection(d, i), out[k]);
            if (seen.insert(w.finite.a).second) {
                out.push_back(w);
                if (out.size() > cap) throw std::length_error("finite Weyl group exceeds enumeration cap");
            }
        }
    }
    return out;
}

nlohmann::json to_json(const ReducedWord& w)
{
    nlohmann::json fin = nlohmann::json::array();
    const int l = w.omega.finite.n;
    for (int i = 0; i < l; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < l; ++j) row.push_back(to_string(w.omega.finite(i, j)));
        fin.push_back(row);
    }
    nlohmann::json tr = nlohmann::json::array();
    for (const auto& x : w.omega.translation) tr.push_back(to_string(x));
    return {{"letters", w.letters}, {"omega", {{"finite", fin}, {"translation", tr}}}};
}

ReducedWord reduced_word_from_json(const nlohmann::json& j)
{
    ReducedWord w;
    w.letters = j.at("letters").get<std::vector<int>>();
    const auto& fin = j.at("omega").at("finite");
    const int l = static_cast<int>(fin.size());
    w.omega.finite = RMatrix(l);
    for (int i = 0; i < l; ++i)
        for (int k = 0; k < l; ++k) w.omega.finite(i, k) = parse_rational(fin.at(i).at(k).get<std::string>());
    for (const auto& x : j.at("omega").at("translation")) w.omega.translation.push_back(parse_rational(x.get<std::string>()));
    return w;
}

}  // namespace ermo

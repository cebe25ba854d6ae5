#pragma once

#include "ermo/root_system.hpp"

#include <json.hpp>

#include <vector>

namespace ermo {

// w = finite * t_translation, acting on affine roots by
// w(f + n delta) = finite(f) + (n - (f|translation)) delta.
struct ExtendedWeylElement {
    RMatrix finite;  // columns are images of the simple roots
    RVec translation;

    static ExtendedWeylElement identity(int l);
    bool operator==(const ExtendedWeylElement& o) const { return finite.a == o.finite.a && translation == o.translation; }
    bool operator<(const ExtendedWeylElement& o) const;
};

ExtendedWeylElement compose(const ExtendedWeylElement& a, const ExtendedWeylElement& b);
ExtendedWeylElement inverse(const ExtendedWeylElement& a);
ExtendedWeylElement translation(const RVec& lambda);
ExtendedWeylElement finite_reflection(const AffineRootDatum& d, const RVec& f);
// Reflection in a real affine root (including half roots).
ExtendedWeylElement reflection(const AffineRootDatum& d, const AffineRoot& root);
ExtendedWeylElement simple_reflection(const AffineRootDatum& d, int i);

AffineRoot act(const AffineRootDatum& d, const ExtendedWeylElement& w, const AffineRoot& root);

// Positive real roots made negative by w^{-1}; window derived from the translation part.
std::vector<AffineRoot> inversion_set(const AffineRootDatum& d, const ExtendedWeylElement& w);
int length(const AffineRootDatum& d, const ExtendedWeylElement& w);

struct ReducedWord {
    std::vector<int> letters;   // w = r_{i1} ... r_{il} omega
    ExtendedWeylElement omega;  // length-zero residue
};

ReducedWord reduced_word(const AffineRootDatum& d, const ExtendedWeylElement& w);
ExtendedWeylElement evaluate(const AffineRootDatum& d, const ReducedWord& word);
// alpha^1 = alpha_{i1}, alpha^k = r_{i1} ... r_{i(k-1)} alpha_{ik}
std::vector<AffineRoot> inversion_sequence(const AffineRootDatum& d, const ReducedWord& word);
// Permutation of the nodes induced by a length-zero element.
std::vector<int> omega_permutation(const AffineRootDatum& d, const ExtendedWeylElement& omega);

bool is_minuscule(const AffineRootDatum& d, const RVec& lambda);

// Finite Weyl orbit of v with one group element per orbit point (first found by breadth-first search).
struct OrbitPoint {
    RVec point;
    ExtendedWeylElement element;
};
std::vector<OrbitPoint> finite_orbit(const AffineRootDatum& d, const RVec& v);
std::vector<ExtendedWeylElement> finite_weyl_group(const AffineRootDatum& d, std::size_t cap = 200000);

nlohmann::json to_json(const ReducedWord& w);
ReducedWord reduced_word_from_json(const nlohmann::json& j);

}  // namespace ermo

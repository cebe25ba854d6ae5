#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <vector>

// Boost 1.74 recurses without bound when rational<int64_t> meets a plain int;
// these exact overloads win overload resolution.
namespace boost {
#define ERMO_RAT_INT_OPS(OP, RET)                                                                                   \
    inline RET operator OP(const rational<std::int64_t>& a, int b) { return a OP rational<std::int64_t>(b); }   \
    inline RET operator OP(int a, const rational<std::int64_t>& b) { return rational<std::int64_t>(a) OP b; }
ERMO_RAT_INT_OPS(==, bool)
ERMO_RAT_INT_OPS(!=, bool)
ERMO_RAT_INT_OPS(<, bool)
ERMO_RAT_INT_OPS(>, bool)
ERMO_RAT_INT_OPS(<=, bool)
ERMO_RAT_INT_OPS(>=, bool)
ERMO_RAT_INT_OPS(+, rational<std::int64_t>)
ERMO_RAT_INT_OPS(-, rational<std::int64_t>)
ERMO_RAT_INT_OPS(*, rational<std::int64_t>)
ERMO_RAT_INT_OPS(/, rational<std::int64_t>)
#undef ERMO_RAT_INT_OPS
}  // namespace boost

namespace ermo {

using Rational = boost::rational<std::int64_t>;
using RVec = std::vector<Rational>;

inline double to_double(const Rational& q) { return boost::rational_cast<double>(q); }

inline std::string to_string(const Rational& q)
{
    if (q.denominator() == 1) return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

Rational parse_rational(const std::string& s);

inline bool is_integer(const Rational& q) { return q.denominator() == 1; }

inline RVec operator+(RVec a, const RVec& b)
{
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

inline RVec operator-(RVec a, const RVec& b)
{
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

inline RVec operator-(RVec a)
{
    for (auto& x : a) x = -x;
    return a;
}

inline RVec operator*(const Rational& s, RVec a)
{
    for (auto& x : a) x *= s;
    return a;
}

inline bool is_zero(const RVec& a)
{
    for (const auto& x : a)
        if (x != 0) return false;
    return true;
}

// Square matrix stored row-major.
struct RMatrix {
    int n = 0;
    std::vector<Rational> a;

    RMatrix() = default;
    explicit RMatrix(int n_) : n(n_), a(static_cast<std::size_t>(n_ * n_), Rational(0)) {}
    static RMatrix identity(int n);

    Rational& operator()(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
    const Rational& operator()(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }

    RVec operator*(const RVec& v) const;
    RMatrix operator*(const RMatrix& o) const;
    // Throws std::domain_error when singular.
    RMatrix inverse() const;
};

// Z-basis (rows) of the lattice generated by rational vectors; full rank assumed.
RMatrix lattice_basis(const std::vector<RVec>& generators, int dim);

// True when v has integer coordinates in the given row basis.
bool in_lattice(const RMatrix& basis_rows, const RVec& v);

}  // namespace ermo

#include "ermo/rational.hpp"

#include <numeric>
#include <stdexcept>

namespace ermo {

Rational parse_rational(const std::string& s)
{
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(std::stoll(s));
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational: '" + s + "'");
    }
}

RMatrix RMatrix::identity(int n)
{
    RMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RVec RMatrix::operator*(const RVec& v) const
{
    RVec out(static_cast<std::size_t>(n), Rational(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
}

RMatrix RMatrix::operator*(const RMatrix& o) const
{
    RMatrix out(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if ((*this)(i, k) == 0) continue;
            for (int j = 0; j < n; ++j) out(i, j) += (*this)(i, k) * o(k, j);
        }
    return out;
}

RMatrix RMatrix::inverse() const
{
    RMatrix m = *this, inv = identity(n);
    for (int c = 0; c < n; ++c) {
        int p = c;
        while (p < n && m(p, c) == 0) ++p;
        if (p == n) throw std::domain_error("singular rational matrix");
        if (p != c)
            for (int j = 0; j < n; ++j) {
                std::swap(m(p, j), m(c, j));
                std::swap(inv(p, j), inv(c, j));
            }
        Rational piv = m(c, c);
        for (int j = 0; j < n; ++j) {
            m(c, j) /= piv;
            inv(c, j) /= piv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || m(r, c) == 0) continue;
            Rational f = m(r, c);
            for (int j = 0; j < n; ++j) {
                m(r, j) -= f * m(c, j);
                inv(r, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

RMatrix lattice_basis(const std::vector<RVec>& generators, int dim)
{
    // Clear denominators, then integer row reduction (Hermite style).
    std::int64_t den = 1;
    for (const auto& g : generators)
        for (const auto& x : g) den = std::lcm(den, x.denominator());
    std::vector<std::vector<std::int64_t>> rows;
    for (const auto& g : generators) {
        std::vector<std::int64_t> r(static_cast<std::size_t>(dim));
        for (int i = 0; i < dim; ++i) r[i] = (g[i] * den).numerator();
        rows.push_back(std::move(r));
    }
    std::vector<std::vector<std::int64_t>> basis;
    for (int c = 0; c < dim; ++c) {
        // Euclid on column c among remaining rows.
        for (;;) {
            int best = -1;
            for (int i = 0; i < static_cast<int>(rows.size()); ++i)
                if (rows[i][c] != 0 && (best < 0 || std::llabs(rows[i][c]) < std::llabs(rows[best][c]))) best = i;
            if (best < 0) break;
            bool reduced = false;
            for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
                if (i == best || rows[i][c] == 0) continue;
                std::int64_t q = rows[i][c] / rows[best][c];
                for (int j = 0; j < dim; ++j) rows[i][j] -= q * rows[best][j];
                reduced = true;
            }
            bool others = false;
            for (int i = 0; i < static_cast<int>(rows.size()); ++i)
                if (i != best && rows[i][c] != 0) others = true;
            if (!others) {
                basis.push_back(rows[best]);
                rows.erase(rows.begin() + best);
                break;
            }
            if (!reduced) break;
        }
    }
    if (static_cast<int>(basis.size()) != dim) throw std::domain_error("lattice generators are not full rank");
    RMatrix out(dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) out(i, j) = Rational(basis[i][j], den);
    return out;
}

bool in_lattice(const RMatrix& basis_rows, const RVec& v)
{
    // v = c^T B  =>  c = B^{-T} v
    RMatrix bt(basis_rows.n);
    for (int i = 0; i < bt.n; ++i)
        for (int j = 0; j < bt.n; ++j) bt(i, j) = basis_rows(j, i);
    RVec c = bt.inverse() * v;
    for (const auto& x : c)
        if (!is_integer(x)) return false;
    return true;
}

}  // namespace ermo

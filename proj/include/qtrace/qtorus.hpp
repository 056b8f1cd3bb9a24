#pragma once

#include "qtrace/omega_ring.hpp"
#include "qtrace/surface.hpp"

#include <map>
#include <string>
#include <vector>

namespace qtrace {

// Exponent per (triangle, side) pair, flattened as 3*tri + side.
using HalfEdgeExponent = std::vector<int>;

// Element of the tensor product of triangle algebras, stored in the Weyl
// normal form: sum_k c_k [Z^k]_W.
class QTElement {
public:
    QTElement() = default;
    explicit QTElement(int num_triangles) : m_(num_triangles) {}

    static QTElement zero(int m) { return QTElement(m); }
    static QTElement one(int m);

    int num_triangles() const { return m_; }
    int dim() const { return 3 * m_; }
    const std::map<HalfEdgeExponent, OmegaPoly>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(const HalfEdgeExponent& k, const OmegaPoly& c);
    QTElement& operator+=(const QTElement& o);
    QTElement scaled(const OmegaPoly& c) const;

    friend bool operator==(const QTElement& a, const QTElement& b) {
        return a.m_ == b.m_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const QTElement& a, const QTElement& b) { return !(a == b); }

private:
    int m_ = 0;
    std::map<HalfEdgeExponent, OmegaPoly> terms_;
};

// sigma(k, l) = sum_{u,v} eps_hat(u, v) k_u l_v.
std::int64_t sigma(const HalfEdgeExponent& k, const HalfEdgeExponent& l);

QTElement weyl_monomial(int m, const HalfEdgeExponent& k, const OmegaPoly& c = 1);
QTElement qt_multiply(const QTElement& a, const QTElement& b);

// Unit vector sum of the slots carrying edge e.
HalfEdgeExponent edge_vector(const Triangulation& T, int e);
QTElement edge_generator(const SplitStructure& S, int e, int power = 1);

bool is_balanced(const QTElement& a);

// Zero if the clockwise-first side has sign - and the second has +, else
// [Z_{side1}^{s1} Z_{side2}^{s2}]_W.  Sides may be given in either order.
QTElement corner_factor(int m, int tri, int side_in, int side_out, int s_in, int s_out);

// One line per term: `(t1,1)^1 (t1,2)^-1 : 1*w^0`; `1 : c` for the empty
// exponent; `1` for the identity and `0` for the zero element.  Slots are printed 1-based.
std::string to_text(const QTElement& a, const Triangulation& T);

}  // namespace qtrace

#include "qtrace/qtorus.hpp"

#include "qtrace/errors.hpp"

namespace qtrace {

QTElement QTElement::one(int m) {
    QTElement r(m);
    r.add_term(HalfEdgeExponent(3 * m, 0), 1);
    return r;
}

void QTElement::add_term(const HalfEdgeExponent& k, const OmegaPoly& c) {
    if (static_cast<int>(k.size()) != dim())
        throw MismatchedAlgebra("exponent of length " + std::to_string(k.size()) +
                                " in an algebra of dimension " + std::to_string(dim()));
    if (c.is_zero()) return;
    auto [it, fresh] = terms_.try_emplace(k, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

QTElement& QTElement::operator+=(const QTElement& o) {
    if (o.m_ != m_) throw MismatchedAlgebra("adding elements over different triangulations");
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
}

QTElement QTElement::scaled(const OmegaPoly& c) const {
    QTElement r(m_);
    for (const auto& [k, v] : terms_) r.add_term(k, v * c);
    return r;
}

std::int64_t sigma(const HalfEdgeExponent& k, const HalfEdgeExponent& l) {
    if (k.size() != l.size()) throw MismatchedAlgebra("exponent lengths differ");
    std::int64_t s = 0;
    for (std::size_t t = 0; t + 2 < k.size(); t += 3) {
        for (int i = 0; i < 3; ++i) {
            std::size_t u = t + i, v = t + (i + 1) % 3;
            s += std::int64_t{k[u]} * l[v] - std::int64_t{k[v]} * l[u];
        }
    }
    return s;
}

QTElement weyl_monomial(int m, const HalfEdgeExponent& k, const OmegaPoly& c) {
    QTElement r(m);
    r.add_term(k, c);
    return r;
}

QTElement qt_multiply(const QTElement& a, const QTElement& b) {
    if (a.num_triangles() != b.num_triangles())
        throw MismatchedAlgebra("multiplying elements over different triangulations");
    QTElement r(a.num_triangles());
    HalfEdgeExponent sum(a.dim());
    for (const auto& [k, ca] : a.terms())
        for (const auto& [l, cb] : b.terms()) {
            for (int i = 0; i < a.dim(); ++i)
                sum[i] = checked_exponent(std::int64_t{k[i]} + l[i]);
            r.add_term(sum, (ca * cb).shifted(sigma(k, l)));
        }
    return r;
}

HalfEdgeExponent edge_vector(const Triangulation& T, int e) {
    if (e < 0 || e >= T.num_edges()) throw UnknownEdge("edge index " + std::to_string(e));
    HalfEdgeExponent v(3 * T.num_triangles(), 0);
    for (const auto& slot : T.occurrences[e]) v[3 * slot.tri + slot.side] += 1;
    return v;
}

QTElement edge_generator(const SplitStructure& S, int e, int power) {
    HalfEdgeExponent v = edge_vector(*S.T, e);
    for (auto& x : v) x = checked_exponent(std::int64_t{x} * power);
    return weyl_monomial(S.T->num_triangles(), v);
}

bool is_balanced(const QTElement& a) {
    for (const auto& [k, c] : a.terms())
        for (int t = 0; t < a.num_triangles(); ++t)
            if ((k[3 * t] + k[3 * t + 1] + k[3 * t + 2]) % 2 != 0) return false;
    return true;
}

QTElement corner_factor(int m, int tri, int side_in, int side_out, int s_in, int s_out) {
    if (side_in == side_out)
        throw DegenerateCorner("corner with both ends on side " + std::to_string(side_in + 1));
    if (tri < 0 || tri >= m || side_in < 0 || side_in > 2 || side_out < 0 || side_out > 2)
        throw MismatchedAlgebra("corner outside the algebra");
    bool in_first = side_out == (side_in + 1) % 3;
    int s_first = in_first ? s_in : s_out;
    int s_second = in_first ? s_out : s_in;
    if (s_first < 0 && s_second > 0) return QTElement::zero(m);
    HalfEdgeExponent k(3 * m, 0);
    k[3 * tri + side_in] = s_in;
    k[3 * tri + side_out] = s_out;
    return weyl_monomial(m, k);
}

std::string to_text(const QTElement& a, const Triangulation& T) {
    if (a.is_zero()) return "0\n";
    if (a == QTElement::one(a.num_triangles())) return "1\n";
    std::string out;
    for (const auto& [k, c] : a.terms()) {
        std::string line;
        for (int i = 0; i < a.dim(); ++i) {
            if (k[i] == 0) continue;
            if (!line.empty()) line += ' ';
            line += "(" + T.triangles.at(i / 3).name + "," + std::to_string(i % 3 + 1) + ")^" +
                    std::to_string(k[i]);
        }
        if (line.empty()) line = "1";
        out += line + " : " + c.to_string() + "\n";
    }
    return out;
}

}  // namespace qtrace

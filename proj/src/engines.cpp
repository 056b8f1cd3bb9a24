#include "qtrace/engines.hpp"

#include "qtrace/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qtrace {

namespace {

std::vector<int> signs_at(const JunctureState& J, const std::vector<int>& ids) {
    std::vector<int> s;
    s.reserve(ids.size());
    for (int id : ids) s.push_back(J[id]);
    return s;
}

Chord segment_chord(const TanglePresentation& P, int seg) {
    const auto& S = P.split();
    const auto& s = P.segments()[seg];
    auto count = [&](int side) {
        return static_cast<int>(P.copy_junctures(S.slot_copy[s.tri][side]).size());
    };
    Chord c;
    c.side_a = s.side_from;
    c.pos_a = count(s.side_from) - 1 - s.from.slot;
    c.side_b = s.side_to;
    c.pos_b = count(s.side_to) - 1 - s.to.slot;
    c.a_to_b = s.fwd;
    c.level = s.level;
    return c;
}

// Sum over states, optionally in parallel.  Terms are exact, so the result
// does not depend on how states are split between threads.
template <class TermFn>
QTElement state_sum(const TanglePresentation& P, int threads, bool parallel, TermFn term) {
    std::vector<JunctureState> states = enumerate_states(P);
    int m = P.triangulation().num_triangles();
    QTElement total(m);
    if (!parallel) {
        for (const auto& J : states) total += term(J);
        return total;
    }
#ifdef _OPENMP
    int nthreads = threads > 0 ? threads : omp_get_max_threads();
    std::vector<QTElement> partial(nthreads, QTElement(m));
    long n = static_cast<long>(states.size());
#pragma omp parallel for num_threads(nthreads) schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) partial[omp_get_thread_num()] += term(states[i]);
    for (const auto& p : partial) total += p;
#else
    (void)threads;
    for (const auto& J : states) total += term(J);
#endif
    return total;
}

}  // namespace

EngineContext::EngineContext(const TanglePresentation& P) : P_(&P) {
    int n = P.triangulation().num_edges();
    for (int e = 0; e < n; ++e) {
        F_.push_back(evaluate_word(P.words()[e], Invariant::F));
        G_.push_back(evaluate_word(P.words()[e], Invariant::G));
    }
    for (int t = 0; t < P.triangulation().num_triangles(); ++t) {
        const auto& segs = P.triangle_segments(t);
        for (std::size_t i = 0; i < segs.size(); ++i)
            for (std::size_t j = i + 1; j < segs.size(); ++j) {
                int ids[2] = {segs[i], segs[j]};
                Chord c[2] = {segment_chord(P, ids[0]), segment_chord(P, ids[1])};
                PairConfig pc = classify_pair(c[0], c[1]);
                PairTerm pt{pc.pcase, pc.k1_lower, pc.parallel, {}};
                for (int k = 0; k < 4; ++k) {
                    auto [which, end] = pc.eps[k];
                    const auto& seg = P.segments()[ids[which]];
                    pt.eps[k] = P.juncture_id(end == 0 ? seg.from : seg.to);
                }
                pairs_.push_back(pt);
            }
    }
    twist_ = twist_factor(P);
}

QTElement bw_term(const EngineContext& ctx, const JunctureState& J) {
    const auto& P = ctx.presentation();
    int m = P.triangulation().num_triangles();
    OmegaPoly coeff = 1;
    for (int e = 0; e < P.triangulation().num_edges(); ++e) {
        if (P.words()[e].slices.empty()) continue;
        coeff *= matrix_element(ctx.F(e), signs_at(J, P.word_in_junctures(e)),
                                signs_at(J, P.word_out_junctures(e)));
        if (coeff.is_zero()) return QTElement::zero(m);
    }
    QTElement r = weyl_monomial(m, HalfEdgeExponent(3 * m, 0), coeff);
    for (int t = 0; t < m; ++t)
        for (int si : P.triangle_segments(t)) {
            const auto& s = P.segments()[si];
            r = qt_multiply(r, corner_factor(m, t, s.side_from, s.side_to, J[P.juncture_id(s.from)],
                                             J[P.juncture_id(s.to)]));
            if (r.is_zero()) return r;
        }
    return r;
}

QTElement bw_term(const TanglePresentation& P, const JunctureState& J) {
    return bw_term(EngineContext(P), J);
}

QTElement bw_trace(const TanglePresentation& P, int threads) {
    EngineContext ctx(P);
    return state_sum(P, threads, true, [&](const JunctureState& J) { return bw_term(ctx, J); });
}

QTElement bw_trace_serial(const TanglePresentation& P) {
    EngineContext ctx(P);
    return state_sum(P, 1, false, [&](const JunctureState& J) { return bw_term(ctx, J); });
}

int pair_cover_writhe(PairCase c, const std::array<int, 4>& eps, bool parallel, bool k1_lower) {
    for (int e : eps)
        if (e != 1 && e != -1) throw BadConfig("pair states must be +1 or -1");
    int e1 = eps[0], e2 = eps[1], e3 = eps[2], e4 = eps[3];
    int v = 0;
    switch (c) {
        case PairCase::SameCornerNested:
        case PairCase::SameCornerCrossed:
            v = -((e1 - e2) * (e3 + e4)) / 4;
            break;
        case PairCase::DistinctCornerConcordant:
        case PairCase::DistinctCornerCrossed:
            v = -((e1 - e2) * (e3 - e4)) / 4;
            break;
        default:
            throw BadConfig("unknown pair configuration");
    }
    if (c == PairCase::SameCornerCrossed) {
        if (parallel && e1 == e3) v += 1;
        if (!parallel && e1 != e3) v -= 1;
    } else if (c == PairCase::DistinctCornerCrossed) {
        if (parallel && e2 == e3) v -= 1;
        if (!parallel && e2 != e3) v += 1;
    }
    return k1_lower ? v : -v;
}

int cover_writhe(const EngineContext& ctx, const JunctureState& J) {
    int wr = 0;
    for (const auto& p : ctx.pairs())
        wr += pair_cover_writhe(p.pcase, {J[p.eps[0]], J[p.eps[1]], J[p.eps[2]], J[p.eps[3]]},
                                p.parallel, p.k1_lower);
    return wr;
}

int cover_writhe(const TanglePresentation& P, const JunctureState& J) {
    return cover_writhe(EngineContext(P), J);
}

int pair_deviation(const Chord& c1, const Chord& c2, int s1a, int s1b, int s2a, int s2b) {
    QTElement f1 = corner_factor(1, 0, c1.side_a, c1.side_b, s1a, s1b);
    QTElement f2 = corner_factor(1, 0, c2.side_a, c2.side_b, s2a, s2b);
    if (f1.is_zero() || f2.is_zero()) throw ZeroFactor("a corner factor of the pair vanishes");
    QTElement prod = c1.level < c2.level ? qt_multiply(f1, f2) : qt_multiply(f2, f1);
    const auto& [k, c] = *prod.terms().begin();
    if (prod.size() != 1 || !c.is_monomial() || c.terms().begin()->second != 1)
        throw ZeroFactor("unexpected product of corner factors");
    return c.min_exponent();
}

HalfEdgeExponent gabella_exponent(const TanglePresentation& P, const JunctureState& J) {
    const auto& T = P.triangulation();
    HalfEdgeExponent k(3 * T.num_triangles(), 0);
    for (int e = 0; e < T.num_edges(); ++e) {
        int b_out = 0, b_in = 0;
        for (int id : P.copy_junctures(SplitStructure::out_copy(e))) b_out += J[id];
        for (int id : P.copy_junctures(SplitStructure::in_copy(e))) b_in += J[id];
        if (b_out != b_in)
            throw UnbalancedJuncture("edge '" + T.edge_names[e] + "': sign sums " +
                                     std::to_string(b_out) + " and " + std::to_string(b_in));
        HalfEdgeExponent v = edge_vector(T, e);
        for (std::size_t i = 0; i < k.size(); ++i) k[i] += b_out * v[i];
    }
    return k;
}

QTElement gabella_monomial(const TanglePresentation& P, const JunctureState& J) {
    return weyl_monomial(P.triangulation().num_triangles(), gabella_exponent(P, J));
}

OmegaPoly gabella_coefficient(const EngineContext& ctx, const JunctureState& J) {
    const auto& P = ctx.presentation();
    OmegaPoly coeff = 1;
    for (int e = 0; e < P.triangulation().num_edges(); ++e) {
        if (P.words()[e].slices.empty()) continue;
        coeff *= matrix_element(ctx.G(e), signs_at(J, P.word_in_junctures(e)),
                                signs_at(J, P.word_out_junctures(e)));
        if (coeff.is_zero()) return coeff;
    }
    return coeff.shifted(-4 * static_cast<std::int64_t>(cover_writhe(ctx, J)));
}

namespace {

QTElement gabella_term(const EngineContext& ctx, const JunctureState& J, bool original) {
    const auto& P = ctx.presentation();
    int m = P.triangulation().num_triangles();
    OmegaPoly c = gabella_coefficient(ctx, J);
    if (c.is_zero()) return QTElement::zero(m);
    HalfEdgeExponent k = gabella_exponent(P, J);
    if (original) {
        // X_e = Z_e^2, exponent (b_e + |b_e|) / 2 per edge
        const auto& T = P.triangulation();
        std::fill(k.begin(), k.end(), 0);
        for (int e = 0; e < T.num_edges(); ++e) {
            int b = 0;
            const auto& ids = P.copy_junctures(SplitStructure::out_copy(e));
            for (int id : ids) b += J[id];
            int total = b + static_cast<int>(ids.size());
            if (total % 2 != 0) throw ParityError("odd X-exponent on edge '" + T.edge_names[e] + "'");
            HalfEdgeExponent v = edge_vector(T, e);
            for (std::size_t i = 0; i < k.size(); ++i) k[i] += total * v[i];
        }
    }
    return weyl_monomial(m, k, c);
}

}  // namespace

QTElement trhol(const TanglePresentation& P, int threads) {
    EngineContext ctx(P);
    return state_sum(P, threads, true, [&](const JunctureState& J) { return gabella_term(ctx, J, false); });
}

QTElement trhol_serial(const TanglePresentation& P) {
    EngineContext ctx(P);
    return state_sum(P, 1, false, [&](const JunctureState& J) { return gabella_term(ctx, J, false); });
}

QTElement gabella_original(const TanglePresentation& P, int threads) {
    EngineContext ctx(P);
    return state_sum(P, threads, true, [&](const JunctureState& J) { return gabella_term(ctx, J, true); });
}

OmegaPoly twist_factor(const TanglePresentation& P) {
    return OmegaPoly::omega(2 * static_cast<std::int64_t>(writhe_surface(P)) + boundary_correction(P));
}

std::vector<TermReport> term_reports(const TanglePresentation& P) {
    EngineContext ctx(P);
    std::vector<TermReport> out;
    for (const auto& J : enumerate_states(P)) {
        TermReport r;
        r.J = J;
        r.bw = bw_term(ctx, J);
        r.monomial = gabella_monomial(P, J);
        r.cover_writhe = cover_writhe(ctx, J);
        r.coeff = gabella_coefficient(ctx, J);
        r.pass = r.bw == r.monomial.scaled(ctx.twist() * r.coeff);
        out.push_back(std::move(r));
    }
    return out;
}

MainTheoremReport check_main_theorem(const TanglePresentation& P, int threads) {
    MainTheoremReport rep;
    rep.writhe = writhe_surface(P);
    rep.boundary_correction = boundary_correction(P);
    rep.twist = twist_factor(P);
    rep.bw_trace = bw_trace(P, threads);
    rep.trhol = trhol(P, threads);
    rep.global_pass = rep.bw_trace == rep.trhol.scaled(rep.twist);
    rep.terms = term_reports(P);
    rep.pass = rep.global_pass;
    for (const auto& t : rep.terms) rep.pass = rep.pass && t.pass;
    return rep;
}

std::vector<int> edge_exponents(const HalfEdgeExponent& k, const Triangulation& T) {
    std::vector<int> out(T.num_edges(), 0);
    HalfEdgeExponent rebuilt(k.size(), 0);
    for (int e = 0; e < T.num_edges(); ++e) {
        const auto& slot = T.occurrences[e][0];
        out[e] = k.at(3 * slot.tri + slot.side);
        for (const auto& s : T.occurrences[e]) rebuilt[3 * s.tri + s.side] += out[e];
    }
    if (rebuilt != k) throw MismatchedAlgebra("exponent is not a product of edge generators");
    return out;
}

std::optional<HighestTerm> highest_term(const QTElement& a, const Triangulation& T) {
    std::vector<std::pair<std::vector<int>, const OmegaPoly*>> terms;
    for (const auto& [k, c] : a.terms()) terms.emplace_back(edge_exponents(k, T), &c);
    for (const auto& [ex, c] : terms) {
        bool dominates = true;
        for (const auto& [other, oc] : terms)
            for (std::size_t i = 0; i < ex.size() && dominates; ++i)
                if (other[i] > ex[i]) dominates = false;
        if (dominates) return HighestTerm{ex, *c};
    }
    return std::nullopt;
}

std::vector<int> intersection_numbers(const Curve& c, const Triangulation& T) {
    std::vector<int> a(T.num_edges(), 0);
    for (const auto& st : c) a[T.triangles.at(st.tri).edges[st.out_side]] += 1;
    return a;
}

CommPoly CommPoly::constant(int nvars, const Integer& c) {
    return monomial(std::vector<int>(nvars, 0), c);
}

CommPoly CommPoly::monomial(const std::vector<int>& exps, const Integer& c) {
    CommPoly p;
    p.nvars = static_cast<int>(exps.size());
    if (c != 0) p.terms[exps] = c;
    return p;
}

CommPoly& CommPoly::operator+=(const CommPoly& o) {
    if (nvars == 0) nvars = o.nvars;
    for (const auto& [k, c] : o.terms) {
        auto& v = terms[k];
        v += c;
        if (v == 0) terms.erase(k);
    }
    return *this;
}

CommPoly operator*(const CommPoly& a, const CommPoly& b) {
    CommPoly r;
    r.nvars = std::max(a.nvars, b.nvars);
    for (const auto& [ka, ca] : a.terms)
        for (const auto& [kb, cb] : b.terms) {
            std::vector<int> k(ka.size());
            for (std::size_t i = 0; i < k.size(); ++i) k[i] = checked_exponent(std::int64_t{ka[i]} + kb[i]);
            r += CommPoly::monomial(k, ca * cb);
        }
    return r;
}

CommPoly CommPoly::normalized() const {
    if (terms.empty() || terms.rbegin()->second > 0) return *this;
    CommPoly r = *this;
    for (auto& [k, c] : r.terms) c = -c;
    return r;
}

std::string CommPoly::to_string(const Triangulation& T) const {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
        const auto& [k, c] = *it;
        Integer mag = c < 0 ? Integer(-c) : c;
        out += first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + ");
        first = false;
        std::string mono;
        for (std::size_t i = 0; i < k.size(); ++i) {
            if (k[i] == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += "Z_" + T.edge_names[i];
            if (k[i] != 1) mono += "^" + std::to_string(k[i]);
        }
        if (mono.empty())
            out += mag.str();
        else
            out += (mag == 1 ? "" : mag.str() + "*") + mono;
    }
    return out;
}

namespace {

using Mat2 = std::array<CommPoly, 4>;  // row-major

Mat2 mat_mul(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

}  // namespace

CommPoly classical_trace(const Curve& c, const Triangulation& T) {
    validate_curve(c, T);
    int n = T.num_edges();
    CommPoly zero = CommPoly::constant(n, 0), one = CommPoly::constant(n, 1);
    Mat2 M = {one, zero, zero, one};
    const Mat2 left = {one, one, zero, one};
    const Mat2 right = {one, zero, one, one};
    for (const auto& st : c) {
        M = mat_mul(M, (st.in_side + 1) % 3 == st.out_side ? left : right);
        std::vector<int> ex(n, 0);
        ex[T.triangles[st.tri].edges[st.out_side]] = 1;
        CommPoly z = CommPoly::monomial(ex);
        ex[T.triangles[st.tri].edges[st.out_side]] = -1;
        CommPoly zinv = CommPoly::monomial(ex);
        M = mat_mul(M, Mat2{z, zero, zero, zinv});
    }
    return (M[0] + M[3]).normalized();
}

CommPoly classical_trace(const std::vector<Curve>& curves, const Triangulation& T) {
    CommPoly r = CommPoly::constant(T.num_edges(), 1);
    for (const auto& c : curves) r = r * classical_trace(c, T);
    return r.normalized();
}

CommPoly classical_limit(const QTElement& a, const Triangulation& T) {
    CommPoly r = CommPoly::constant(T.num_edges(), 0);
    for (const auto& [k, c] : a.terms()) r += CommPoly::monomial(edge_exponents(k, T), c.specialize_one());
    return r;
}

}  // namespace qtrace

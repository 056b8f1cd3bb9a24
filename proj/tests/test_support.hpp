#pragma once

// Helpers shared by the unit tests and the acceptance binary.  The oracles
// here are written against the definitions directly and only call into the
// library for parsing and arithmetic.

#include "qtrace/engines.hpp"
#include "qtrace/errors.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace qtest {

using namespace qtrace;

inline std::string data_path(const std::string& name) {
    return std::string(QTRACE_DATA_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Owns the triangulation and split structure a presentation points into.
struct Instance {
    std::string surface, tangle;
    std::unique_ptr<Triangulation> T;
    std::unique_ptr<SplitStructure> S;
    std::unique_ptr<TanglePresentation> P;
};

inline Instance load_text(const std::string& surf, const std::string& tng_text) {
    Instance I;
    I.surface = surf;
    I.T = std::make_unique<Triangulation>(parse_surface(slurp(data_path(surf))));
    I.S = std::make_unique<SplitStructure>(split(*I.T));
    I.P = std::make_unique<TanglePresentation>(parse_tangle(tng_text, *I.S));
    return I;
}

inline Instance load(const std::string& surf, const std::string& tng) {
    Instance I = load_text(surf, slurp(data_path(tng)));
    I.tangle = tng;
    return I;
}

struct CorpusEntry {
    std::string surface, tangle;
    bool simple_loop = false;  // one simple closed curve given by a curve line
};

// The main-theorem corpus.
inline std::vector<CorpusEntry> corpus() {
    return {
        {"torus.surf", "loop10.tng", true},
        {"torus.surf", "loop_ab.tng", true},
        {"torus.surf", "loop_ac.tng", true},
        {"torus.surf", "loop112.tng", true},
        {"torus.surf", "loop112_rot.tng", true},
        {"torus.surf", "loop_long.tng", true},
        {"torus.surf", "loop6.tng", true},
        {"torus.surf", "loop6_rot.tng", true},
        {"torus.surf", "loop112_hx.tng"},
        {"torus.surf", "loop_long_hx.tng"},
        {"torus.surf", "two_loops10.tng"},
        {"torus.surf", "two_loops10_rot.tng"},
        {"torus.surf", "two_loops10_hx.tng"},
        {"torus.surf", "torus_xpos.tng"},
        {"torus.surf", "torus_xneg.tng"},
        {"torus.surf", "empty.tng"},
        {"triangle.surf", "contractible.tng"},
        {"triangle.surf", "corner_pp.tng"},
        {"triangle.surf", "corner_pm.tng"},
        {"triangle.surf", "corner_mp.tng"},
        {"triangle.surf", "corner_mm.tng"},
        {"triangle.surf", "corner_pair_xpos.tng"},
        {"triangle.surf", "corner_pair_xneg.tng"},
        {"triangle.surf", "corner_pair_slid.tng"},
        {"triangle.surf", "arcs_cross.tng"},
        {"triangle.surf", "arcs_slid.tng"},
        {"triangle.surf", "uturn.tng"},
        {"selffolded.surf", "selffolded_pp.tng"},
        {"selffolded.surf", "selffolded_pm.tng"},
        {"selffolded.surf", "selffolded_mp.tng"},
        {"selffolded.surf", "selffolded_mm.tng"},
    };
}

// ---------------------------------------------------------------- words

// Vertical ranks of generator points, from the printed correction values.
inline std::vector<int> ranks_in(Gen g) {
    switch (g) {
        case Gen::IdFwd:
        case Gen::IdBwd: return {0};
        case Gen::CupU:
        case Gen::CupD: return {};
        case Gen::Hx2: return {0, 1};
        default: return {1, 0};
    }
}

inline std::vector<int> ranks_out(Gen g) {
    switch (g) {
        case Gen::IdFwd:
        case Gen::IdBwd: return {0};
        case Gen::CapU:
        case Gen::CapD: return {};
        case Gen::Hx1: return {0, 1};
        default: return {1, 0};
    }
}

// Bottom-to-top stacking: later generators sit above earlier ones.
inline std::vector<int> stack_ranks(const Slice& s, bool in) {
    std::vector<int> r;
    int base = 0;
    for (Gen g : s) {
        auto v = in ? ranks_in(g) : ranks_out(g);
        for (int x : v) r.push_back(base + x);
        base += static_cast<int>(v.size());
    }
    return r;
}

inline int word_crossings(const BiangleWord& w) {
    int wr = 0;
    for (const auto& s : w.slices)
        for (Gen g : s) wr += g == Gen::XPos ? 1 : g == Gen::XNeg ? -1 : 0;
    return wr;
}

// Random vertically composable word: every slice agrees with its neighbour
// on the vertical order along the shared line.
inline BiangleWord random_word(std::mt19937& rng, int max_slices = 6, int max_points = 4) {
    static const Gen pool[] = {Gen::IdFwd, Gen::CupU, Gen::CapU, Gen::Hx1,
                               Gen::Hx2,   Gen::XPos, Gen::XNeg, Gen::IdFwd};
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    BiangleWord w;
    int n = pick(0, max_points);
    std::vector<int> need;  // vertical order the next slice must take in
    bool first = true;
    int slices = pick(1, max_slices);
    for (int k = 0; k < slices; ++k) {
        bool found = false;
        for (int attempt = 0; attempt < 2000 && !found; ++attempt) {
            Slice s;
            int filled = 0, out = 0;
            while (filled < n || (n == 0 && s.empty())) {
                Gen g = pool[pick(0, 7)];
                int a = static_cast<int>(ranks_in(g).size());
                if (filled + a > n) continue;
                s.push_back(g);
                filled += a;
                out += static_cast<int>(ranks_out(g).size());
                if (n == 0 && pick(0, 1)) break;
            }
            if (out > max_points || s.empty()) continue;
            if (!first && stack_ranks(s, true) != need) continue;
            w.slices.push_back(s);
            need = stack_ranks(s, false);
            n = out;
            found = true;
        }
        if (!found) break;
        first = false;
    }
    return w;
}

// Correction amount C(b; Z, s): pairs (x lower, y higher) weighted by the
// sign of x -> y along the arc orientation (+1: increasing position).
inline int correction(const std::vector<int>& ranks, int orientation, const std::vector<int>& s) {
    int c = 0;
    for (std::size_t x = 0; x < ranks.size(); ++x)
        for (std::size_t y = 0; y < ranks.size(); ++y)
            if (ranks[x] < ranks[y]) c += (y > x ? orientation : -orientation) * s[x] * s[y];
    return c;
}

inline std::vector<int> signs_of(LinearOp::Index idx, int n) {
    std::vector<int> s(n);
    for (int i = 0; i < n; ++i) s[i] = (idx >> i) & 1 ? -1 : 1;
    return s;
}

// w^{2 wr} C(out) o G o C(in), with the in line oriented by decreasing position.
inline LinearOp twisted_gabella(const BiangleWord& w) {
    LinearOp G = evaluate_word(w, Invariant::G);
    std::vector<int> rin = w.slices.empty() ? std::vector<int>{} : stack_ranks(w.slices.front(), true);
    std::vector<int> rout = w.slices.empty() ? std::vector<int>{} : stack_ranks(w.slices.back(), false);
    LinearOp r(G.n_in(), G.n_out());
    for (const auto& [in, col] : G.columns())
        for (const auto& [out, c] : col) {
            int e = 2 * word_crossings(w) + correction(rout, 1, signs_of(out, G.n_out())) +
                    correction(rin, -1, signs_of(in, G.n_in()));
            r.add(out, in, c.shifted(e));
        }
    return r;
}

inline bool charge_conserving(const LinearOp& op) {
    for (const auto& [in, col] : op.columns())
        for (const auto& [out, c] : col) {
            if (c.is_zero()) continue;
            int qin = op.n_in() - 2 * __builtin_popcount(in);
            int qout = op.n_out() - 2 * __builtin_popcount(out);
            if (qin != qout) return false;
        }
    return true;
}

// ---------------------------------------------------------------- golden tables

struct GoldenResult {
    int checked = 0;
    std::vector<std::string> failures;
};

inline Invariant parse_invariant(const std::string& s) {
    if (s == "F") return Invariant::F;
    if (s == "G") return Invariant::G;
    throw std::runtime_error("bad invariant " + s);
}

inline LinearOp::Index index_of(const std::string& signs) {
    LinearOp::Index idx = 0;
    if (signs == ".") return 0;
    for (std::size_t i = 0; i < signs.size(); ++i)
        if (signs[i] == '-') idx |= LinearOp::Index{1} << i;
    return idx;
}

inline int count_of(const std::string& signs) { return signs == "." ? 0 : static_cast<int>(signs.size()); }

inline LinearOp position_exchange() {
    LinearOp P(2, 2);
    for (LinearOp::Index i = 0; i < 4; ++i) P.add(((i & 1) << 1) | (i >> 1), i, 1);
    return P;
}

// Checks the library tables against a golden file of transcribed values.
inline GoldenResult check_golden_tables(const std::string& path) {
    GoldenResult res;
    std::istringstream in(slurp(path));
    std::string line;
    // Transcribed operators, keyed by (invariant, generator).
    std::map<std::pair<std::string, std::string>, LinearOp> table;
    std::map<std::pair<int, std::string>, OmegaPoly> lines_table;  // (eps, x1x2y1y2)
    struct LemmaRow { int eps; std::string pin, pout, inv, gen; };
    std::vector<LemmaRow> lemma_rows;
    auto fail = [&](const std::string& m) { res.failures.push_back(m); };

    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "F" || head == "G") {
            std::string gen, sin, sout, colon;
            ls >> gen >> sin >> sout >> colon;
            std::string value;
            std::getline(ls, value);
            auto key = std::make_pair(head, gen);
            if (!table.count(key)) table[key] = LinearOp(count_of(sin), count_of(sout));
            table[key].add(index_of(sout), index_of(sin), OmegaPoly::parse(value));
        } else if (head == "inverse" || head == "swap") {
            std::string i1, g1, i2, g2;
            ls >> i1 >> g1 >> i2 >> g2;
            LinearOp a = elementary(parse_gen(g1), parse_invariant(i1));
            auto key = std::make_pair(i2, g2);
            LinearOp b = table.count(key) ? table[key] : elementary(parse_gen(g2), parse_invariant(i2));
            ++res.checked;
            if (head == "inverse") {
                LinearOp id = LinearOp::identity(a.n_in());
                if (compose(a, b) != id || compose(b, a) != id) fail(line);
            } else {
                // line reads: swap <golden> <library>; golden o library = P
                LinearOp lib = elementary(parse_gen(g2), parse_invariant(i2));
                LinearOp gold = table.at(std::make_pair(i1, g1));
                if (compose(gold, lib) != position_exchange()) fail(line);
            }
        } else if (head == "lines") {
            std::string eps, xs, ys, colon, value;
            ls >> eps >> xs >> ys >> colon;
            std::getline(ls, value);
            lines_table[{std::stoi(eps), xs + ys}] = OmegaPoly::parse(value);
        } else if (head == "lemma") {
            LemmaRow r;
            std::string eps;
            ls >> eps >> r.pin >> r.pout >> r.inv >> r.gen;
            r.eps = std::stoi(eps);
            lemma_rows.push_back(r);
        } else {
            fail("unrecognized golden line: " + line);
        }
    }

    for (const auto& [key, op] : table) {
        LinearOp lib = elementary(parse_gen(key.second), parse_invariant(key.first));
        ++res.checked;
        if (lib != op) fail(key.first + " " + key.second + " differs from the golden table");
    }
    for (const auto& r : lemma_rows) {
        LinearOp lib = elementary(parse_gen(r.gen), parse_invariant(r.inv));
        for (LinearOp::Index i = 0; i < 4; ++i)
            for (LinearOp::Index o = 0; o < 4; ++o) {
                auto si = signs_of(i, 2), so = signs_of(o, 2);
                // x_k is the generator point named by the k-th digit of the perm
                std::string key;
                for (char d : r.pin) key += si[d - '1'] > 0 ? '+' : '-';
                for (char d : r.pout) key += so[d - '1'] > 0 ? '+' : '-';
                ++res.checked;
                if (lib.get(o, i) != lines_table.at({r.eps, key}))
                    fail("lemma row " + r.inv + " " + r.gen + " entry " + key);
            }
    }
    return res;
}

// ---------------------------------------------------------------- pair geometry

// A chord between two sides with explicit positions; n is filled in from
// the pair.  Positions follow the clockwise orientation of each side.
struct CanonicalPair {
    PairCase expected;
    Chord c1, c2;
};

inline Chord chord(int sa, int pa, int sb, int pb) {
    Chord c;
    c.side_a = sa;
    c.pos_a = pa;
    c.side_b = sb;
    c.pos_b = pb;
    return c;
}

// One realization per configuration.  The corner between sides 0 and 1 sits
// at the end of side 0 and the start of side 1.
inline std::vector<CanonicalPair> canonical_pairs() {
    return {
        {PairCase::SameCornerNested, chord(0, 1, 1, 0), chord(0, 0, 1, 1)},
        {PairCase::SameCornerCrossed, chord(0, 1, 1, 1), chord(0, 0, 1, 0)},
        {PairCase::DistinctCornerConcordant, chord(0, 0, 1, 0), chord(1, 1, 2, 0)},
        {PairCase::DistinctCornerCrossed, chord(0, 0, 1, 1), chord(1, 0, 2, 0)},
    };
}

inline std::array<int, 3> side_counts(const Chord& c1, const Chord& c2) {
    std::array<int, 3> n{};
    ++n[c1.side_a];
    ++n[c1.side_b];
    ++n[c2.side_a];
    ++n[c2.side_b];
    return n;
}

// Sign of the projected crossing of two straight chords in the triangle
// V0 = (0,0), V1 = (1,2), V2 = (2,0), side i running from V_i to V_{i+1};
// over = higher level.  Computed with exact rationals scaled to integers.
inline int crossing_sign_oracle(const Chord& c1, const Chord& c2, const std::array<int, 3>& n) {
    static const long V[3][2] = {{0, 0}, {1, 2}, {2, 0}};
    auto point = [&](int side, int pos, long out[2]) {
        // (pos + 1) / (n + 1) along the side, scaled by 60 to stay integral
        long num = pos + 1, den = n[side] + 1;
        const long* a = V[side];
        const long* b = V[(side + 1) % 3];
        out[0] = 60 * (a[0] * (den - num) + b[0] * num) / den;
        out[1] = 60 * (a[1] * (den - num) + b[1] * num) / den;
    };
    long p[2], q[2], r[2], s[2];
    point(c1.side_a, c1.pos_a, p);
    point(c1.side_b, c1.pos_b, q);
    point(c2.side_a, c2.pos_a, r);
    point(c2.side_b, c2.pos_b, s);
    auto orient = [](const long* a, const long* b, const long* c) {
        long v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
        return v > 0 ? 1 : v < 0 ? -1 : 0;
    };
    if (orient(p, q, r) * orient(p, q, s) >= 0 || orient(r, s, p) * orient(r, s, q) >= 0) return 0;
    long d1[2] = {q[0] - p[0], q[1] - p[1]}, d2[2] = {s[0] - r[0], s[1] - r[1]};
    if (!c1.a_to_b) d1[0] = -d1[0], d1[1] = -d1[1];
    if (!c2.a_to_b) d2[0] = -d2[0], d2[1] = -d2[1];
    const long* over = c1.level > c2.level ? d1 : d2;
    const long* under = c1.level > c2.level ? d2 : d1;
    long cr = over[0] * under[1] - over[1] * under[0];
    return cr > 0 ? 1 : -1;
}

// ---------------------------------------------------------------- classical

// Trace of prod (T_turn D_e) over a closed curve, summed over the cyclic
// sequences of diagonal states: T_L allows 0->0, 0->1, 1->1 and T_R allows
// 0->0, 1->0, 1->1; state 0 picks up Z_e and state 1 picks up Z_e^-1.
inline std::map<std::vector<int>, long long> classical_oracle(const Curve& c, const Triangulation& T) {
    std::map<std::vector<int>, long long> r;
    int L = static_cast<int>(c.size());
    for (unsigned m = 0; m < (1u << L); ++m) {
        // state entering step k is bit k-1 (cyclically); state after the turn is bit k
        bool ok = true;
        std::vector<int> ex(T.num_edges(), 0);
        for (int k = 0; k < L && ok; ++k) {
            int before = (m >> ((k + L - 1) % L)) & 1, after = (m >> k) & 1;
            bool left = (c[k].in_side + 1) % 3 == c[k].out_side;
            if (left && before == 1 && after == 0) ok = false;
            if (!left && before == 0 && after == 1) ok = false;
            ex[T.triangles[c[k].tri].edges[c[k].out_side]] += after ? -1 : 1;
        }
        if (ok) r[ex] += 1;
    }
    std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
    if (!r.empty() && r.rbegin()->second < 0)
        for (auto& kv : r) kv.second = -kv.second;
    return r;
}

inline std::map<std::vector<int>, long long> to_map(const CommPoly& p) {
    std::map<std::vector<int>, long long> r;
    for (const auto& [k, c] : p.terms) r[k] = static_cast<long long>(c);
    return r;
}

// Edge-by-edge count of the sides a curve leaves through.
inline std::vector<int> intersection_oracle(const Curve& c, const Triangulation& T) {
    std::vector<int> a(T.num_edges(), 0);
    for (const auto& st : c) ++a[T.triangles[st.tri].edges[st.out_side]];
    return a;
}

// Positive integral Laurent polynomial in q = w^4.
inline bool q_positive_oracle(const OmegaPoly& p) {
    if (p.is_zero()) return false;
    for (const auto& [e, c] : p.terms())
        if (e % 4 != 0 || c <= 0) return false;
    return true;
}

inline bool star_invariant_oracle(const OmegaPoly& p) {
    for (const auto& [e, c] : p.terms())
        if (p.coefficient(-e) != c) return false;
    return true;
}

}  // namespace qtest

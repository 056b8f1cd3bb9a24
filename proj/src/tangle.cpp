#include "qtrace/tangle.hpp"

#include "qtrace/errors.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace qtrace {

namespace {

std::string trim(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

int parse_int(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        long v = std::stol(s, &used);
        if (used != s.size() || v > 1000000000L || v < -1000000000L) throw std::invalid_argument(s);
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw ParseError(where + "bad integer '" + s + "'");
    }
}

Endpoint parse_endpoint(const std::string& s, const SplitStructure& S, const std::string& where) {
    auto colon = s.rfind(':');
    if (colon == std::string::npos) throw ParseError(where + "expected <copy>:<slot>, got '" + s + "'");
    Endpoint p;
    try {
        p.copy = S.copy_index(s.substr(0, colon));
    } catch (const UnknownEdge& e) {
        throw UnknownEdge(where + e.message());
    }
    p.slot = parse_int(s.substr(colon + 1), where) - 1;
    if (p.slot < 0) throw ParseError(where + "slots are numbered from 1");
    return p;
}

// key=value fields of a segment line
std::map<std::string, std::string> parse_fields(std::istringstream& ls, const std::string& where) {
    std::map<std::string, std::string> f;
    for (std::string tok; ls >> tok;) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw ParseError(where + "expected key=value, got '" + tok + "'");
        if (!f.emplace(tok.substr(0, eq), tok.substr(eq + 1)).second)
            throw ParseError(where + "duplicate field '" + tok.substr(0, eq) + "'");
    }
    return f;
}

// Horizontal blocks of a line order: the points must be increasing in rank
// except for disjoint adjacent reversed pairs.  Returns the block sizes, with
// 2 meaning a reversed pair, or nullopt.
std::optional<std::vector<int>> matching_blocks(const std::vector<int>& ranks) {
    std::vector<int> blocks;
    int n = static_cast<int>(ranks.size());
    for (int h = 0; h < n;) {
        if (ranks[h] == h) {
            blocks.push_back(1);
            h += 1;
        } else if (h + 1 < n && ranks[h] == h + 1 && ranks[h + 1] == h) {
            blocks.push_back(2);
            h += 2;
        } else {
            return std::nullopt;
        }
    }
    return blocks;
}

std::vector<int> ranks_of(const std::vector<int>& levels) {
    std::vector<int> order(levels.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return levels[a] < levels[b]; });
    std::vector<int> ranks(levels.size());
    for (std::size_t r = 0; r < order.size(); ++r) ranks[order[r]] = static_cast<int>(r);
    return ranks;
}

using P2 = std::array<long long, 2>;

}  // namespace

// ------------------------------------------------------------------ parsing

Curve parse_curve(std::string_view text, const Triangulation& T) {
    Curve c;
    std::istringstream ss{std::string(text)};
    for (std::string tok; ss >> tok;) {
        auto colon = tok.find(':');
        auto gt = tok.find('>');
        if (colon == std::string::npos || gt == std::string::npos || gt < colon)
            throw ParseError("curve step '" + tok + "' is not <triangle>:<in>><out>");
        CurveStep st;
        st.tri = T.triangle_index(tok.substr(0, colon));
        st.in_side = parse_int(tok.substr(colon + 1, gt - colon - 1), "curve step: ") - 1;
        st.out_side = parse_int(tok.substr(gt + 1), "curve step: ") - 1;
        c.push_back(st);
    }
    validate_curve(c, T);
    return c;
}

void validate_curve(const Curve& c, const Triangulation& T) {
    if (c.empty()) throw ParseError("curve has no steps");
    for (std::size_t k = 0; k < c.size(); ++k) {
        const auto& st = c[k];
        if (st.tri < 0 || st.tri >= T.num_triangles()) throw ParseError("curve step in unknown triangle");
        if (st.in_side < 0 || st.in_side > 2 || st.out_side < 0 || st.out_side > 2)
            throw ParseError("curve sides are numbered 1..3");
        if (st.in_side == st.out_side)
            throw ParseError("curve step enters and leaves " + T.triangles[st.tri].name +
                             " through the same side");
        const auto& nx = c[(k + 1) % c.size()];
        int e = T.triangles[st.tri].edges[st.out_side];
        if (T.is_boundary(e))
            throw ParseError("curve crosses boundary edge '" + T.edge_names[e] + "'");
        SideSlot here{st.tri, st.out_side};
        const auto& occ = T.occurrences[e];
        SideSlot other = occ[0] == here ? occ[1] : occ[0];
        if (!(other == SideSlot{nx.tri, nx.in_side}))
            throw ParseError("curve does not close up after step " + std::to_string(k + 1) +
                             ": edge '" + T.edge_names[e] + "' leads to " +
                             T.triangles[other.tri].name + " side " + std::to_string(other.side + 1));
    }
}

RawTangle parse_tangle_raw(std::string_view text, const SplitStructure& S) {
    const Triangulation& T = *S.T;
    RawTangle raw;
    std::map<int, std::map<int, Slice>> slices;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    bool explicit_data = false;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        std::string where = "line " + std::to_string(lineno) + ": ";
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "segment") {
            explicit_data = true;
            TriangleSegment seg;
            if (!(ls >> seg.id)) throw ParseError(where + "missing segment id");
            auto f = parse_fields(ls, where);
            for (const char* key : {"tri", "level", "from", "to", "dir"})
                if (!f.count(key)) throw ParseError(where + "missing field '" + key + "'");
            if (f.size() != 5) throw ParseError(where + "unexpected segment field");
            try {
                seg.tri = T.triangle_index(f["tri"]);
            } catch (const ParseError& e) {
                throw ParseError(where + e.message());
            }
            seg.level = parse_int(f["level"], where);
            seg.from = parse_endpoint(f["from"], S, where);
            seg.to = parse_endpoint(f["to"], S, where);
            if (f["dir"] != "fwd" && f["dir"] != "bwd")
                throw ParseError(where + "dir must be fwd or bwd");
            seg.fwd = f["dir"] == "fwd";
            raw.segments.push_back(seg);
        } else if (kw == "biangle") {
            explicit_data = true;
            std::string edge, sl, rest;
            ls >> edge >> sl;
            std::getline(ls, rest);
            auto colon = rest.find(':');
            if (sl != "slice" || colon == std::string::npos)
                throw ParseError(where + "expected 'biangle <edge> slice <k>: <gen>,...'");
            int e;
            try {
                e = T.edge_index(edge);
            } catch (const UnknownEdge& err) {
                throw UnknownEdge(where + err.message());
            }
            int k = parse_int(trim(rest.substr(0, colon)), where);
            if (k < 1) throw ParseError(where + "slices are numbered from 1");
            Slice s;
            std::string gens = rest.substr(colon + 1);
            std::istringstream gs(gens);
            for (std::string g; std::getline(gs, g, ',');) {
                g = trim(g);
                try {
                    s.push_back(parse_gen(g));
                } catch (const ParseError& err) {
                    throw ParseError(where + err.message());
                }
            }
            if (s.empty()) throw ParseError(where + "empty slice");
            if (!slices[e].emplace(k - 1, s).second)
                throw ParseError(where + "slice " + std::to_string(k) + " of '" + edge + "' given twice");
        } else if (kw == "state") {
            explicit_data = true;
            std::string pt, sign, extra;
            ls >> pt >> sign;
            if (ls >> extra || (sign != "+" && sign != "-"))
                throw ParseError(where + "expected 'state <copy>:<slot> +|-'");
            Endpoint p = parse_endpoint(pt, S, where);
            if (!raw.states.emplace(p, sign == "+" ? 1 : -1).second)
                throw ParseError(where + "state given twice for " + pt);
        } else if (kw == "curve") {
            std::string rest;
            std::getline(ls, rest);
            try {
                raw.curves.push_back(parse_curve(rest, T));
            } catch (const ParseError& e) {
                throw ParseError(where + e.message());
            }
        } else {
            throw ParseError(where + "unknown directive '" + kw + "'");
        }
    }
    if (explicit_data && !raw.curves.empty())
        throw ParseError("curve lines cannot be mixed with segment/biangle/state lines");
    for (auto& [e, m] : slices) {
        BiangleWord w;
        int expect = 0;
        for (auto& [k, s] : m) {
            if (k != expect)
                throw ParseError("biangle '" + T.edge_names[e] + "' is missing slice " +
                                 std::to_string(expect + 1));
            w.slices.push_back(s);
            ++expect;
        }
        raw.words[e] = w;
    }
    if (!raw.curves.empty()) return compile_simple_multicurve_raw(S, raw.curves);
    return raw;
}

TanglePresentation parse_tangle(std::string_view text, const SplitStructure& S) {
    return build_presentation(S, parse_tangle_raw(text, S));
}

std::string to_tng_text(const RawTangle& raw, const SplitStructure& S) {
    const Triangulation& T = *S.T;
    std::ostringstream os;
    auto ep = [&](const Endpoint& p) { return S.copies[p.copy].name + ":" + std::to_string(p.slot + 1); };
    for (const auto& s : raw.segments)
        os << "segment " << s.id << " tri=" << T.triangles[s.tri].name << " level=" << s.level
           << " from=" << ep(s.from) << " to=" << ep(s.to) << " dir=" << (s.fwd ? "fwd" : "bwd") << "\n";
    for (const auto& [e, w] : raw.words)
        for (std::size_t k = 0; k < w.slices.size(); ++k) {
            os << "biangle " << T.edge_names[e] << " slice " << k + 1 << ":";
            for (std::size_t j = 0; j < w.slices[k].size(); ++j)
                os << (j ? "," : " ") << gen_name(w.slices[k][j]);
            os << "\n";
        }
    for (const auto& [p, s] : raw.states) os << "state " << ep(p) << " " << (s > 0 ? "+" : "-") << "\n";
    return os.str();
}

// ------------------------------------------------------------------ geometry

int chord_crossing_sign(const Chord& c1, const Chord& c2, const std::array<int, 3>& n) {
    const int big = 1 << 20;
    auto cyc = [&](int side, int pos) { return side * big + pos; };
    int a = cyc(c1.side_a, c1.pos_a), b = cyc(c1.side_b, c1.pos_b);
    int c = cyc(c2.side_a, c2.pos_a), d = cyc(c2.side_b, c2.pos_b);
    if (a > b) std::swap(a, b);
    bool c_in = a < c && c < b, d_in = a < d && d < b;
    if (c_in == d_in) return 0;

    static constexpr P2 V[3] = {{0, 0}, {1, 2}, {2, 0}};  // clockwise
    long long D = static_cast<long long>(n[0] + 1) * (n[1] + 1) * (n[2] + 1);
    auto point = [&](int side, int pos) {
        const P2& u = V[side];
        const P2& v = V[(side + 1) % 3];
        long long step = D / (n[side] + 1) * (pos + 1);
        return P2{u[0] * D + step * (v[0] - u[0]), u[1] * D + step * (v[1] - u[1])};
    };
    auto dir = [&](const Chord& ch) {
        P2 pa = point(ch.side_a, ch.pos_a), pb = point(ch.side_b, ch.pos_b);
        P2 d = {pb[0] - pa[0], pb[1] - pa[1]};
        if (!ch.a_to_b) d = {-d[0], -d[1]};
        return d;
    };
    const Chord& over = c1.level > c2.level ? c1 : c2;
    const Chord& under = c1.level > c2.level ? c2 : c1;
    P2 o = dir(over), u = dir(under);
    __int128 cross = static_cast<__int128>(o[0]) * u[1] - static_cast<__int128>(o[1]) * u[0];
    return cross > 0 ? 1 : -1;
}

namespace {

// endpoint index (0 = a, 1 = b) of a chord on a side, or -1
int end_on(const Chord& c, int side) {
    if (c.side_a == side) return 0;
    if (c.side_b == side) return 1;
    return -1;
}

int pos_of(const Chord& c, int end) { return end == 0 ? c.pos_a : c.pos_b; }
int start_side(const Chord& c) { return c.a_to_b ? c.side_a : c.side_b; }

}  // namespace

PairConfig classify_pair(const Chord& c1, const Chord& c2) {
    const Chord* ch[2] = {&c1, &c2};
    for (const Chord* c : ch)
        if (c->side_a == c->side_b || c->side_a < 0 || c->side_a > 2 || c->side_b < 0 || c->side_b > 2)
            throw BadConfig("segment must join two distinct sides");
    if (c1.level == c2.level) throw BadConfig("segments at equal elevation");
    PairConfig pc;
    std::set<int> s1 = {c1.side_a, c1.side_b}, s2 = {c2.side_a, c2.side_b};
    if (s1 == s2) {
        int s = c1.side_a, t = c1.side_b;
        int e = (s + 1) % 3 == t ? s : t;
        int e2 = (e + 1) % 3;
        // inner = closer to the corner vertex, which ends side e and starts side e2
        int inner_e = pos_of(c1, end_on(c1, e)) > pos_of(c2, end_on(c2, e)) ? 0 : 1;
        int inner_e2 = pos_of(c1, end_on(c1, e2)) < pos_of(c2, end_on(c2, e2)) ? 0 : 1;
        pc.pcase = inner_e == inner_e2 ? PairCase::SameCornerNested : PairCase::SameCornerCrossed;
        pc.k1 = inner_e2;
        int k2 = 1 - pc.k1;
        pc.eps = {{{pc.k1, end_on(*ch[pc.k1], e)},
                   {pc.k1, end_on(*ch[pc.k1], e2)},
                   {k2, end_on(*ch[k2], e)},
                   {k2, end_on(*ch[k2], e2)}}};
        pc.parallel = start_side(c1) == start_side(c2);
    } else {
        int shared = -1;
        for (int x : s1)
            if (s2.count(x)) shared = x;
        int prev = (shared + 2) % 3;
        pc.k1 = s1.count(prev) ? 0 : 1;
        int k2 = 1 - pc.k1;
        const Chord& K1 = *ch[pc.k1];
        const Chord& K2 = *ch[k2];
        int k1_on = end_on(K1, shared), k2_on = end_on(K2, shared);
        pc.pcase = pos_of(K1, k1_on) < pos_of(K2, k2_on) ? PairCase::DistinctCornerConcordant
                                                          : PairCase::DistinctCornerCrossed;
        pc.eps = {{{pc.k1, 1 - k1_on}, {pc.k1, k1_on}, {k2, k2_on}, {k2, 1 - k2_on}}};
        pc.parallel = (start_side(K1) == shared) == (start_side(K2) == shared);
    }
    pc.k1_lower = ch[pc.k1]->level < ch[1 - pc.k1]->level;
    return pc;
}

int pair_side_correction(const Chord& c1, const Chord& c2, int s1a, int s1b, int s2a, int s2b) {
    const Chord* ch[2] = {&c1, &c2};
    int sg[2][2] = {{s1a, s1b}, {s2a, s2b}};
    int lo = c1.level < c2.level ? 0 : 1, hi = 1 - lo;
    int total = 0;
    for (int side = 0; side < 3; ++side) {
        int el = end_on(*ch[lo], side), eh = end_on(*ch[hi], side);
        if (el < 0 || eh < 0) continue;
        int sgn = pos_of(*ch[hi], eh) > pos_of(*ch[lo], el) ? 1 : -1;
        total += sgn * sg[lo][el] * sg[hi][eh];
    }
    return total;
}

// ------------------------------------------------------------ presentation

int TanglePresentation::juncture_id(const Endpoint& p) const {
    const auto& v = by_copy_.at(p.copy);
    if (p.slot < 0 || p.slot >= static_cast<int>(v.size()))
        throw StateDomainError("no juncture at " + S_->copies[p.copy].name + ":" + std::to_string(p.slot + 1));
    return v[p.slot];
}

std::vector<int> TanglePresentation::word_in_junctures(int edge) const {
    const auto& v = by_copy_.at(SplitStructure::in_copy(edge));
    return {v.rbegin(), v.rend()};  // h = k-1-slot
}

std::vector<int> TanglePresentation::word_out_junctures(int edge) const {
    return by_copy_.at(SplitStructure::out_copy(edge));
}

int TanglePresentation::biangle_writhe() const {
    int wr = 0;
    for (const auto& g : geom_) wr += g.writhe;
    return wr;
}

int TanglePresentation::triangle_writhe() const { return triangle_writhe_; }

namespace {

struct Piece {
    int p = -1, q = -1;
    int declared = 0;  // +1: p -> q, -1: q -> p
    int dir = 0;
};

class StrandGraph {
public:
    int add_point() {
        adj_.emplace_back();
        return static_cast<int>(adj_.size()) - 1;
    }
    int add_piece(int p, int q, int declared) {
        pieces_.push_back({p, q, declared, 0});
        int id = static_cast<int>(pieces_.size()) - 1;
        adj_[p].push_back(id);
        adj_[q].push_back(id);
        return id;
    }
    const Piece& piece(int i) const { return pieces_[i]; }
    std::size_t degree(int p) const { return adj_[p].size(); }

    void solve() {
        for (std::size_t i = 0; i < pieces_.size(); ++i)
            if (pieces_[i].declared != 0 && pieces_[i].dir == 0) {
                pieces_[i].dir = pieces_[i].declared;
                walk(static_cast<int>(i), true);
                walk(static_cast<int>(i), false);
            }
        for (const auto& pc : pieces_) {
            if (pc.dir == 0) throw OrientationError("a strand has no declared orientation");
            if (pc.declared != 0 && pc.declared != pc.dir)
                throw OrientationError("strand orientation declarations disagree");
        }
    }

private:
    int head(const Piece& pc) const { return pc.dir > 0 ? pc.q : pc.p; }
    int tail(const Piece& pc) const { return pc.dir > 0 ? pc.p : pc.q; }

    void walk(int start, bool forward) {
        int cur = start;
        while (true) {
            const Piece& pc = pieces_[cur];
            int pt = forward ? head(pc) : tail(pc);
            int next = -1;
            for (int o : adj_[pt])
                if (o != cur) next = o;
            if (next < 0) return;
            Piece& np = pieces_[next];
            int want = (np.p == pt) == forward ? 1 : -1;
            if (np.dir != 0) {
                if (np.dir != want) throw OrientationError("strand orientation declarations disagree");
                return;
            }
            np.dir = want;
            cur = next;
        }
    }

    std::vector<std::vector<int>> adj_;
    std::vector<Piece> pieces_;
};

}  // namespace

TanglePresentation build_presentation(const SplitStructure& S, RawTangle raw) {
    const Triangulation& T = *S.T;
    TanglePresentation P;
    P.S_ = &S;
    P.raw_ = raw;
    P.segments_ = raw.segments;
    P.curves_ = raw.curves;
    int n = T.num_edges();

    // Segments.
    std::set<std::string> ids;
    std::map<Endpoint, int> seg_at;  // endpoint -> segment
    P.by_tri_.assign(T.num_triangles(), {});
    for (int i = 0; i < static_cast<int>(P.segments_.size()); ++i) {
        auto& s = P.segments_[i];
        if (!ids.insert(s.id).second) throw ParseError("duplicate segment id '" + s.id + "'");
        auto side_in_tri = [&](const Endpoint& p) {
            if (p.copy < 0 || p.copy >= S.num_copies()) throw ParseError("segment '" + s.id + "': bad copy");
            const auto& f = S.copies[p.copy].facing;
            if (!f || f->tri != s.tri)
                throw JunctureMismatch("segment '" + s.id + "': copy " + S.copies[p.copy].name +
                                       " does not bound triangle " + T.triangles[s.tri].name);
            return f->side;
        };
        s.side_from = side_in_tri(s.from);
        s.side_to = side_in_tri(s.to);
        if (s.side_from == s.side_to)
            throw JunctureMismatch("segment '" + s.id + "' joins a side to itself");
        for (const Endpoint& p : {s.from, s.to})
            if (!seg_at.emplace(p, i).second)
                throw JunctureMismatch("two segment ends at " + S.copies[p.copy].name + ":" +
                                       std::to_string(p.slot + 1));
        for (int j : P.by_tri_[s.tri])
            if (P.segments_[j].level == s.level)
                throw ElevationClash("segments '" + P.segments_[j].id + "' and '" + s.id +
                                     "' share level " + std::to_string(s.level));
        P.by_tri_[s.tri].push_back(i);
    }
    for (auto& v : P.by_tri_)
        std::sort(v.begin(), v.end(),
                  [&](int a, int b) { return P.segments_[a].level < P.segments_[b].level; });

    // Words.
    P.words_.assign(n, {});
    P.geom_.assign(n, {});
    for (auto& [e, w] : raw.words) {
        if (e < 0 || e >= n) throw UnknownEdge("word for unknown edge");
        P.words_[e] = w;
    }
    for (int e = 0; e < n; ++e) {
        const auto& w = P.words_[e];
        auto& g = P.geom_[e];
        for (std::size_t k = 0; k + 1 < w.slices.size(); ++k) {
            if (slice_arity_out(w.slices[k]) != slice_arity_in(w.slices[k + 1]))
                throw JunctureMismatch("biangle '" + T.edge_names[e] + "': slice " + std::to_string(k + 1) +
                                       " has " + std::to_string(slice_arity_out(w.slices[k])) +
                                       " outputs but slice " + std::to_string(k + 2) + " has " +
                                       std::to_string(slice_arity_in(w.slices[k + 1])) + " inputs");
            if (slice_ranks_out(w.slices[k]) != slice_ranks_in(w.slices[k + 1]))
                throw JunctureMismatch("biangle '" + T.edge_names[e] + "': vertical orders of slices " +
                                       std::to_string(k + 1) + " and " + std::to_string(k + 2) +
                                       " disagree");
        }
        g.ranks_in = word_ranks_in(w);
        g.ranks_out = word_ranks_out(w);
        g.n_in = static_cast<int>(g.ranks_in.size());
        g.n_out = static_cast<int>(g.ranks_out.size());
        g.writhe = w.writhe();
    }

    // States only on surface boundary arcs.
    for (const auto& [p, s] : raw.states)
        if (p.copy < 0 || p.copy >= S.num_copies() || !S.is_surface_boundary(p.copy))
            throw StateDomainError("state given for a point that is not on a boundary arc");

    // Junctures.
    P.by_copy_.assign(S.num_copies(), {});
    for (int c = 0; c < S.num_copies(); ++c) {
        int e = S.copies[c].edge;
        const auto& g = P.geom_[e];
        bool out = c == SplitStructure::out_copy(e);
        int k = out ? g.n_out : g.n_in;
        const std::vector<int>& wr = out ? g.ranks_out : g.ranks_in;
        auto word_rank = [&](int slot) { return out ? wr[slot] : wr[k - 1 - slot]; };
        const std::string& cname = S.copies[c].name;
        if (S.is_surface_boundary(c)) {
            for (int slot = 0; slot < k; ++slot) {
                auto it = raw.states.find({c, slot});
                if (it == raw.states.end())
                    throw StateDomainError("boundary point " + cname + ":" + std::to_string(slot + 1) +
                                           " has no state");
                Juncture j{{c, slot}, word_rank(slot), out ? slot : k - 1 - slot, true, -1};
                P.boundary_state_[static_cast<int>(P.junctures_.size())] = it->second;
                P.by_copy_[c].push_back(static_cast<int>(P.junctures_.size()));
                P.junctures_.push_back(j);
            }
            for (const auto& [p, s] : raw.states)
                if (p.copy == c && p.slot >= k)
                    throw StateDomainError("state for " + cname + ":" + std::to_string(p.slot + 1) +
                                           " but the word has only " + std::to_string(k) + " points there");
            continue;
        }
        std::vector<int> levels;
        for (int slot = 0;; ++slot) {
            auto it = seg_at.find({c, slot});
            if (it == seg_at.end()) break;
            levels.push_back(P.segments_[it->second].level);
        }
        int count = 0;
        for (const auto& [p, s] : seg_at)
            if (p.copy == c) ++count;
        if (count != static_cast<int>(levels.size()))
            throw JunctureMismatch("segment slots on " + cname + " are not 1.." + std::to_string(count));
        if (count != k)
            throw JunctureMismatch(cname + " has " + std::to_string(count) +
                                   " segment ends but the biangle word has " + std::to_string(k) +
                                   " endpoints there");
        std::vector<int> ranks = ranks_of(levels);
        for (int slot = 0; slot < k; ++slot) {
            if (ranks[slot] != word_rank(slot))
                throw JunctureMismatch("vertical order on " + cname +
                                       " differs between segment levels and the biangle word");
            Juncture j{{c, slot}, ranks[slot], out ? slot : k - 1 - slot, false, seg_at[{c, slot}]};
            P.by_copy_[c].push_back(static_cast<int>(P.junctures_.size()));
            P.junctures_.push_back(j);
        }
    }

    // Orientation.
    StrandGraph G;
    std::vector<std::vector<std::vector<int>>> pts(n);  // edge -> line -> h -> point
    for (int e = 0; e < n; ++e) {
        const auto& w = P.words_[e];
        std::size_t ns = w.slices.size();
        pts[e].resize(ns + 1);
        for (std::size_t L = 0; L <= ns; ++L) {
            int size = L == 0 ? P.geom_[e].n_in : slice_arity_out(w.slices[L - 1]);
            for (int h = 0; h < size; ++h) pts[e][L].push_back(G.add_point());
        }
    }
    auto copy_point = [&](const Endpoint& p) {
        int e = S.copies[p.copy].edge;
        if (p.copy == SplitStructure::out_copy(e)) return pts[e].back().at(p.slot);
        return pts[e].front().at(P.geom_[e].n_in - 1 - p.slot);
    };
    struct CrossingRef {
        int edge, piece0, piece1;
    };
    std::vector<CrossingRef> crossings;
    for (int e = 0; e < n; ++e) {
        const auto& w = P.words_[e];
        for (std::size_t L = 0; L < w.slices.size(); ++L) {
            int a = 0, b = 0;
            const auto& lin = pts[e][L];
            const auto& lout = pts[e][L + 1];
            for (Gen g : w.slices[L]) {
                switch (g) {
                    case Gen::IdFwd:
                    case Gen::IdBwd:
                        G.add_piece(lin[a], lout[b], g == Gen::IdFwd ? 1 : -1);
                        break;
                    case Gen::CupU:
                    case Gen::CupD:
                        G.add_piece(lout[b], lout[b + 1], g == Gen::CupU ? 1 : -1);
                        break;
                    case Gen::CapU:
                    case Gen::CapD:
                        G.add_piece(lin[a], lin[a + 1], g == Gen::CapU ? 1 : -1);
                        break;
                    case Gen::Hx1:
                    case Gen::Hx2:
                        G.add_piece(lin[a], lout[b], 0);
                        G.add_piece(lin[a + 1], lout[b + 1], 0);
                        break;
                    case Gen::XPos:
                    case Gen::XNeg: {
                        int p0 = G.add_piece(lin[a], lout[b + 1], 0);
                        int p1 = G.add_piece(lin[a + 1], lout[b], 0);
                        crossings.push_back({e, p0, p1});
                        break;
                    }
                }
                a += gen_arity_in(g);
                b += gen_arity_out(g);
            }
        }
    }
    for (const auto& s : P.segments_) G.add_piece(copy_point(s.from), copy_point(s.to), s.fwd ? 1 : -1);
    G.solve();
    for (const auto& x : crossings)
        if (G.piece(x.piece0).dir != G.piece(x.piece1).dir)
            throw OrientationError("biangle '" + T.edge_names[x.edge] +
                                   "': crossing strands must be co-oriented");

    // Projected crossings inside triangles.
    int wr = 0;
    for (int t = 0; t < T.num_triangles(); ++t) {
        std::array<int, 3> cnt{};
        for (int s = 0; s < 3; ++s) cnt[s] = static_cast<int>(P.by_copy_[S.slot_copy[t][s]].size());
        const auto& segs = P.by_tri_[t];
        auto chord = [&](int i) {
            const auto& s = P.segments_[i];
            Chord c;
            c.side_a = s.side_from;
            c.pos_a = cnt[s.side_from] - 1 - s.from.slot;
            c.side_b = s.side_to;
            c.pos_b = cnt[s.side_to] - 1 - s.to.slot;
            c.a_to_b = s.fwd;
            c.level = s.level;
            return c;
        };
        for (std::size_t i = 0; i < segs.size(); ++i)
            for (std::size_t j = i + 1; j < segs.size(); ++j)
                wr += chord_crossing_sign(chord(segs[i]), chord(segs[j]), cnt);
    }
    P.triangle_writhe_ = wr;
    return P;
}

int writhe_surface(const TanglePresentation& P) { return P.biangle_writhe() + P.triangle_writhe(); }

int boundary_correction(const TanglePresentation& P, const std::vector<int>& J) {
    const SplitStructure& S = P.split();
    int total = 0;
    for (int c = 0; c < S.num_copies(); ++c) {
        if (!S.is_surface_boundary(c)) continue;
        const auto& ids = P.copy_junctures(c);
        for (int x : ids)
            for (int y : ids) {
                const auto& jx = P.junctures()[x];
                const auto& jy = P.junctures()[y];
                if (jx.vrank >= jy.vrank) continue;
                int sgn = jy.at.slot > jx.at.slot ? 1 : -1;
                total += sgn * J[x] * J[y];
            }
    }
    return total;
}

int boundary_correction(const TanglePresentation& P) {
    std::vector<int> J(P.junctures().size(), 1);
    for (const auto& [id, s] : P.boundary_state()) J[id] = s;
    return boundary_correction(P, J);
}

// ------------------------------------------------------------ enumeration

void for_each_state(const TanglePresentation& P, const std::function<void(const JunctureState&)>& f) {
    const auto& js = P.junctures();
    int N = static_cast<int>(js.size());
    JunctureState J(N, 0);
    std::vector<int> free_vars;
    for (int i = 0; i < N; ++i) {
        auto it = P.boundary_state().find(i);
        if (it != P.boundary_state().end())
            J[i] = it->second;
        else
            free_vars.push_back(i);
    }
    std::vector<int> var_pos(N, -1);
    for (std::size_t k = 0; k < free_vars.size(); ++k) var_pos[free_vars[k]] = static_cast<int>(k);

    // Constraints, attached to the last free variable they involve.
    struct Corner {
        int first, second;
    };
    struct Charge {
        std::vector<int> in, out;
    };
    std::vector<Corner> corners;
    std::vector<Charge> charges;
    for (const auto& s : P.segments()) {
        int a = P.juncture_id(s.from), b = P.juncture_id(s.to);
        bool a_first = (s.side_from + 1) % 3 == s.side_to;
        corners.push_back(a_first ? Corner{a, b} : Corner{b, a});
    }
    for (int e = 0; e < P.triangulation().num_edges(); ++e)
        charges.push_back({P.word_in_junctures(e), P.word_out_junctures(e)});

    std::size_t nv = free_vars.size();
    std::vector<std::vector<int>> corner_at(nv + 1), charge_at(nv + 1);
    auto last_var = [&](std::initializer_list<const std::vector<int>*> groups) {
        int last = -1;
        for (const auto* g : groups)
            for (int id : *g) last = std::max(last, var_pos[id]);
        return last + 1;  // 0 means "fixed"
    };
    for (std::size_t i = 0; i < corners.size(); ++i) {
        std::vector<int> v = {corners[i].first, corners[i].second};
        corner_at[last_var({&v})].push_back(static_cast<int>(i));
    }
    for (std::size_t i = 0; i < charges.size(); ++i)
        charge_at[last_var({&charges[i].in, &charges[i].out})].push_back(static_cast<int>(i));

    auto ok_at = [&](std::size_t level) {
        for (int i : corner_at[level])
            if (J[corners[i].first] < 0 && J[corners[i].second] > 0) return false;
        for (int i : charge_at[level]) {
            int s = 0;
            for (int id : charges[i].in) s += J[id];
            for (int id : charges[i].out) s -= J[id];
            if (s != 0) return false;
        }
        return true;
    };
    if (!ok_at(0)) return;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == nv) {
            f(J);
            return;
        }
        for (int s : {1, -1}) {
            J[free_vars[k]] = s;
            if (ok_at(k + 1)) rec(k + 1);
        }
        J[free_vars[k]] = 0;
    };
    rec(0);
}

std::vector<JunctureState> enumerate_states(const TanglePresentation& P) {
    std::vector<JunctureState> out;
    for_each_state(P, [&](const JunctureState& J) { out.push_back(J); });
    return out;
}

// ------------------------------------------------------------ compilation

RawTangle compile_simple_multicurve_raw(const SplitStructure& S, const std::vector<Curve>& curves) {
    const Triangulation& T = *S.T;
    RawTangle raw;
    raw.curves = curves;
    if (curves.empty()) return raw;
    int m = T.num_triangles();
    for (const auto& c : curves) validate_curve(c, T);

    auto corner_of = [](const CurveStep& st) {
        return (st.in_side + 1) % 3 == st.out_side ? st.in_side : st.out_side;
    };
    std::vector<std::array<int, 3>> cnt(m, {0, 0, 0});
    for (const auto& c : curves)
        for (const auto& st : c) cnt[st.tri][corner_of(st)] += 1;
    auto side_count = [&](int t, int s) { return cnt[t][(s + 2) % 3] + cnt[t][s]; };
    // position along the clockwise side of an arc (corner f, depth d)
    auto pos_on = [&](int t, int f, int d, int side) {
        return side == f ? side_count(t, f) - 1 - d : d;
    };

    // owner[t][f][d] = (curve, step)
    std::vector<std::array<std::vector<std::pair<int, int>>, 3>> owner(m);
    for (int t = 0; t < m; ++t)
        for (int f = 0; f < 3; ++f) owner[t][f].assign(cnt[t][f], {-1, -1});

    struct ArcRef {
        int t, f, d;
    };
    auto next_arc = [&](int t, int out_side, int pos) {
        int copy = S.slot_copy[t][out_side];
        int other = copy ^ 1;
        const auto& face = S.copies[other].facing;
        int t2 = face->tri, j = face->side;
        int k = side_count(t, out_side);
        int p2 = k - 1 - pos;
        int prev = (j + 2) % 3;
        if (p2 < cnt[t2][prev]) return std::pair<ArcRef, int>{{t2, prev, p2}, j};
        return std::pair<ArcRef, int>{{t2, j, side_count(t2, j) - 1 - p2}, j};
    };

    for (int ci = 0; ci < static_cast<int>(curves.size()); ++ci) {
        const Curve& c = curves[ci];
        int t0 = c[0].tri, f0 = corner_of(c[0]);
        bool placed = false;
        for (int d0 = 0; d0 < cnt[t0][f0] && !placed; ++d0) {
            if (owner[t0][f0][d0].first >= 0) continue;
            std::vector<ArcRef> path;
            ArcRef cur{t0, f0, d0};
            int in_side = c[0].in_side;
            bool ok = true;
            for (std::size_t k = 0; k < c.size() && ok; ++k) {
                int out_side = cur.f == in_side ? (cur.f + 1) % 3 : cur.f;
                CurveStep st{cur.t, in_side, out_side};
                if (!(st == c[k]) || owner[cur.t][cur.f][cur.d].first >= 0) {
                    ok = false;
                    break;
                }
                for (const auto& a : path)
                    if (a.t == cur.t && a.f == cur.f && a.d == cur.d) ok = false;
                path.push_back(cur);
                auto [nx, nin] = next_arc(cur.t, out_side, pos_on(cur.t, cur.f, cur.d, out_side));
                cur = nx;
                in_side = nin;
            }
            ok = ok && cur.t == t0 && cur.f == f0 && cur.d == d0 && in_side == c[0].in_side;
            if (!ok) continue;
            for (std::size_t k = 0; k < path.size(); ++k)
                owner[path[k].t][path[k].f][path[k].d] = {ci, static_cast<int>(k)};
            placed = true;
        }
        if (!placed)
            throw NotSimple("curve " + std::to_string(ci + 1) +
                            " cannot be drawn without crossings alongside the earlier curves");
    }

    std::size_t longest = 0;
    for (const auto& c : curves) longest = std::max(longest, c.size());
    int stride = static_cast<int>(longest) + 1;
    for (int t = 0; t < m; ++t)
        for (int f = 0; f < 3; ++f)
            for (int d = 0; d < cnt[t][f]; ++d) {
                auto [ci, k] = owner[t][f][d];
                const CurveStep& st = curves[ci][k];
                TriangleSegment seg;
                seg.id = "c" + std::to_string(ci + 1) + "s" + std::to_string(k + 1);
                seg.tri = t;
                seg.level = ci * stride + k;
                auto ep = [&](int side) {
                    int pos = pos_on(t, f, d, side);
                    return Endpoint{S.slot_copy[t][side], side_count(t, side) - 1 - pos};
                };
                seg.from = ep(st.in_side);
                seg.to = ep(st.out_side);
                seg.fwd = true;
                raw.segments.push_back(seg);
            }
    std::sort(raw.segments.begin(), raw.segments.end(),
              [](const TriangleSegment& a, const TriangleSegment& b) { return a.level < b.level; });

    std::map<Endpoint, const TriangleSegment*> at;
    for (const auto& s : raw.segments) {
        at[s.from] = &s;
        at[s.to] = &s;
    }
    for (int e = 0; e < T.num_edges(); ++e) {
        if (T.is_boundary(e)) continue;
        int oc = SplitStructure::out_copy(e), ic = SplitStructure::in_copy(e);
        const auto& face = *S.copies[oc].facing;
        int k = side_count(face.tri, face.side);
        if (k == 0) continue;
        std::vector<int> lin(k), lout(k);
        std::vector<bool> fwd(k);
        for (int h = 0; h < k; ++h) {
            const TriangleSegment* si = at.at({ic, k - 1 - h});
            const TriangleSegment* so = at.at({oc, h});
            lin[h] = si->level;
            lout[h] = so->level;
            fwd[h] = si->to == Endpoint{ic, k - 1 - h};
        }
        auto bin = matching_blocks(ranks_of(lin));
        auto bout = matching_blocks(ranks_of(lout));
        if (!bin || !bout)
            throw LayoutError("vertical order across edge '" + T.edge_names[e] +
                              "' needs more than adjacent height exchanges; reorder the components");
        auto make_slice = [&](const std::vector<int>& blocks, Gen pair_gen) {
            Slice s;
            int h = 0;
            for (int b : blocks) {
                if (b == 1)
                    s.push_back(fwd[h] ? Gen::IdFwd : Gen::IdBwd);
                else
                    s.push_back(pair_gen);
                h += b;
            }
            return s;
        };
        bool need_in = bin->size() != static_cast<std::size_t>(k);
        bool need_out = bout->size() != static_cast<std::size_t>(k);
        BiangleWord w;
        if (need_in) w.slices.push_back(make_slice(*bin, Gen::Hx1));
        if (need_out) w.slices.push_back(make_slice(*bout, Gen::Hx2));
        if (w.slices.empty()) w.slices.push_back(make_slice(*bin, Gen::Hx1));
        raw.words[e] = w;
    }
    return raw;
}

TanglePresentation compile_simple_multicurve(const SplitStructure& S, const std::vector<Curve>& curves) {
    return build_presentation(S, compile_simple_multicurve_raw(S, curves));
}

}  // namespace qtrace

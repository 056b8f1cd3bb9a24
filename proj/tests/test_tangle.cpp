#include "test_support.hpp"

#include <doctest.h>

#include <set>

using namespace qtrace;
using qtest::Instance;
using qtest::load;
using qtest::load_text;

namespace {

// States that restrict to the boundary state, keep every corner admissible
// and balance every biangle, found by brute force over all sign vectors.
std::vector<JunctureState> brute_force_states(const TanglePresentation& P) {
    int n = static_cast<int>(P.junctures().size());
    std::vector<JunctureState> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        JunctureState J(n);
        for (int i = 0; i < n; ++i) J[i] = (m >> (n - 1 - i)) & 1 ? -1 : 1;
        bool ok = true;
        for (const auto& [id, s] : P.boundary_state()) ok = ok && J[id] == s;
        for (const auto& seg : P.segments()) {
            int a = P.juncture_id(seg.from), b = P.juncture_id(seg.to);
            bool from_first = seg.side_to == (seg.side_from + 1) % 3;
            int first = from_first ? J[a] : J[b], second = from_first ? J[b] : J[a];
            ok = ok && !(first < 0 && second > 0);
        }
        const auto& S = P.split();
        for (int e = 0; e < S.num_biangles() && ok; ++e) {
            int sin = 0, sout = 0;
            for (int id : P.copy_junctures(S.in_copy(e))) sin += J[id];
            for (int id : P.copy_junctures(S.out_copy(e))) sout += J[id];
            ok = sin == sout;
        }
        if (ok) out.push_back(J);
    }
    return out;
}

// Reverses every strand of an explicit tangle file.
std::string reversed(std::string s) {
    auto swap_tokens = [&](const std::string& a, const std::string& b) {
        std::string out;
        for (std::size_t i = 0; i < s.size();) {
            if (s.compare(i, a.size(), a) == 0) {
                out += b;
                i += a.size();
            } else if (s.compare(i, b.size(), b) == 0) {
                out += a;
                i += b.size();
            } else {
                out += s[i++];
            }
        }
        s = out;
    };
    swap_tokens("dir=fwd", "dir=bwd");
    swap_tokens("id+", "id-");
    swap_tokens("cupU", "cupD");
    swap_tokens("capU", "capD");
    return s;
}

}  // namespace

TEST_CASE("tangle: empty file") {
    Instance I = load("torus.surf", "empty.tng");
    CHECK(I.P->segments().empty());
    CHECK(I.P->junctures().empty());
    auto states = enumerate_states(*I.P);
    REQUIRE(states.size() == 1);
    CHECK(states[0].empty());
    CHECK(writhe_surface(*I.P) == 0);
    CHECK(boundary_correction(*I.P) == 0);
}

TEST_CASE("tangle: compiled torus loops") {
    Instance I = load("torus.surf", "loop10.tng");
    CHECK(I.P->segments().size() == 2);
    CHECK(I.P->junctures().size() == 4);
    CHECK(enumerate_states(*I.P).size() == 3);
    CHECK(writhe_surface(*I.P) == 0);

    Instance two = load("torus.surf", "two_loops10.tng");
    CHECK(two.P->segments().size() == 4);
    CHECK(two.P->junctures().size() == 8);
    CHECK(writhe_surface(*two.P) == 0);
    // the two copies occupy nested slots on each side
    for (int tri = 0; tri < 2; ++tri) {
        const auto& segs = two.P->triangle_segments(tri);
        REQUIRE(segs.size() == 2);
        const auto& lo = two.P->segments()[segs[0]];
        const auto& hi = two.P->segments()[segs[1]];
        CHECK(lo.side_from == hi.side_from);
        CHECK(lo.side_to == hi.side_to);
        CHECK(lo.from.slot != hi.from.slot);
    }

    Triangulation T = parse_surface("triangle t1: a b c\ntriangle t2: a b c\n");
    SplitStructure S = split(T);
    TanglePresentation E = compile_simple_multicurve(S, {});
    CHECK(E.segments().empty());
}

TEST_CASE("tangle: curve parsing") {
    Triangulation T = parse_surface("triangle t1: a b c\ntriangle t2: a b c\n");
    Curve c = parse_curve("t1:2>3 t2:3>2", T);
    REQUIRE(c.size() == 2);
    CHECK(c[0] == CurveStep{0, 1, 2});
    CHECK_THROWS_AS(parse_curve("t1:2>3", T), ParseError);
    CHECK_THROWS_AS(parse_curve("t1:2>2 t2:2>2", T), ParseError);
    CHECK_THROWS_AS(parse_curve("t1:2>3 t2:1>2", T), ParseError);
    CHECK_THROWS_AS(parse_curve("t9:1>2", T), ParseError);
    Triangulation B = parse_surface("triangle t: a b c\n");
    CHECK_THROWS_AS(parse_curve("t:1>2", B), ParseError);
}

TEST_CASE("tangle: crossing curves are not simple") {
    Triangulation T = parse_surface("triangle t1: a b c\ntriangle t2: a b c\n");
    SplitStructure S = split(T);
    Curve ab = parse_curve("t1:1>2 t2:2>1", T), ac = parse_curve("t1:3>1 t2:1>3", T);
    CHECK_THROWS_AS(compile_simple_multicurve(S, {ab, ac}), NotSimple);
    Curve c = parse_curve("t1:2>3 t2:3>2", T);
    CHECK_THROWS_AS(compile_simple_multicurve(S, {c, c, c}), LayoutError);
}

TEST_CASE("tangle: parse errors") {
    auto T = parse_surface("triangle t: a b c\n");
    auto S = split(T);
    auto bad = [&](const std::string& text) { return parse_tangle(text, S); };
    CHECK_THROWS_AS(bad("segment s tri=t level=1 from=a:1\n"), ParseError);
    CHECK_THROWS_AS(bad("segment s tri=t level=1 from=a:1 to=b:1 dir=up\n"), ParseError);
    CHECK_THROWS_AS(bad("frobnicate\n"), ParseError);
    CHECK_THROWS_AS(bad("biangle a slice 1: zz\n"), ParseError);
    CHECK_THROWS_AS(bad("curve t:1>2\nbiangle a slice 1: id+\n"), ParseError);
    CHECK_THROWS_AS(bad("biangle q slice 1: cupU\nbiangle q slice 2: capD\n"), UnknownEdge);
    // one strand at a:1 meets a biangle word with two points on that side
    CHECK_THROWS_AS(bad("segment s tri=t level=1 from=a:1 to=b:1 dir=fwd\n"
                        "biangle a slice 1: id+,id+,id+\n"
                        "biangle b slice 1: id-\n"
                        "state a':1 +\nstate a':2 +\nstate a':3 +\nstate b':1 +\n"),
                    JunctureMismatch);
    CHECK_THROWS_AS(bad("segment s tri=t level=1 from=a:1 to=b:1 dir=fwd\n"
                        "segment u tri=t level=1 from=a:2 to=b:2 dir=fwd\n"
                        "biangle a slice 1: id+,id+\nbiangle b slice 1: id-,id-\n"),
                    ElevationClash);
    CHECK_THROWS_AS(bad("segment s tri=t level=1 from=a:1 to=b:1 dir=fwd\n"
                        "biangle a slice 1: id+\nbiangle b slice 1: id-\n"
                        "state a':1 +\nstate b':1 +\nstate b':2 +\n"),
                    StateDomainError);
    CHECK_THROWS_AS(bad("segment s tri=t level=1 from=a:1 to=b:1 dir=fwd\n"
                        "biangle a slice 1: id-\nbiangle b slice 1: id-\n"
                        "state a':1 +\nstate b':1 +\n"),
                    OrientationError);
}

TEST_CASE("tangle: text round trip") {
    for (const auto& e : qtest::corpus()) {
        Instance I = load(e.surface, e.tangle);
        std::string text = to_tng_text(I.P->raw(), *I.S);
        Instance J = load_text(e.surface, text);
        CHECK_MESSAGE(to_tng_text(J.P->raw(), *J.S) == text, e.tangle);
        CHECK(J.P->junctures().size() == I.P->junctures().size());
        CHECK(writhe_surface(*J.P) == writhe_surface(*I.P));
    }
}

TEST_CASE("tangle: writhe") {
    CHECK(writhe_surface(*load("torus.surf", "torus_xpos.tng").P) == 1);
    CHECK(writhe_surface(*load("torus.surf", "torus_xneg.tng").P) == -1);
    Instance slid = load("triangle.surf", "corner_pair_slid.tng");
    CHECK(slid.P->biangle_writhe() == 0);
    CHECK(slid.P->triangle_writhe() == -1);
    CHECK(writhe_surface(*load("triangle.surf", "corner_pair_xneg.tng").P) == -1);
    Instance arcs = load("triangle.surf", "arcs_slid.tng");
    CHECK(arcs.P->biangle_writhe() == 1);
    CHECK(arcs.P->triangle_writhe() == -1);
    for (const char* f : {"loop10.tng", "loop112.tng", "loop_long.tng", "loop6.tng", "two_loops10.tng"})
        CHECK(writhe_surface(*load("torus.surf", f).P) == 0);
}

TEST_CASE("tangle: writhe is unchanged by a height exchange pair") {
    for (auto [a, b] : {std::pair{"loop112.tng", "loop112_hx.tng"},
                        std::pair{"loop_long.tng", "loop_long_hx.tng"},
                        std::pair{"two_loops10.tng", "two_loops10_hx.tng"}}) {
        CHECK(writhe_surface(*load("torus.surf", a).P) == writhe_surface(*load("torus.surf", b).P));
    }
    // hx1 then hx2 after the crossing of torus_xpos
    std::string text = qtest::slurp(qtest::data_path("torus_xpos.tng"));
    Instance A = load_text("torus.surf", text);
    Instance B = load_text("torus.surf", text + "biangle c slice 2: hx1\nbiangle c slice 3: hx2\n");
    CHECK(writhe_surface(*B.P) == 1);
    CHECK(bw_trace(*A.P) == bw_trace(*B.P));
    // hx2 cannot follow xpos: the vertical orders disagree
    CHECK_THROWS_AS(load_text("torus.surf", text + "biangle c slice 2: hx2\nbiangle c slice 3: hx1\n"),
                    JunctureMismatch);
}

TEST_CASE("tangle: boundary correction") {
    CHECK(boundary_correction(*load("torus.surf", "loop10.tng").P) == 0);
    // two endpoints on a': flipping both states keeps the product
    Instance U = load("triangle.surf", "uturn.tng");
    JunctureState J(U.P->junctures().size(), 1);
    int both_plus = boundary_correction(*U.P, J);
    CHECK(std::abs(both_plus) == 1);
    for (auto& s : J) s = -s;
    CHECK(boundary_correction(*U.P, J) == both_plus);
    int a1 = U.P->juncture_id(Endpoint{U.S->copy_index("a'"), 0});
    J.assign(J.size(), 1);
    J[a1] = -1;
    CHECK(boundary_correction(*U.P, J) == -both_plus);
    CHECK(boundary_correction(*U.P) == -both_plus);  // file states are (+,-)

    // flip symmetry over every state of every corpus instance
    for (const auto& e : qtest::corpus()) {
        Instance I = load(e.surface, e.tangle);
        for (auto st : enumerate_states(*I.P)) {
            int c = boundary_correction(*I.P, st);
            for (auto& s : st) s = -s;
            CHECK(boundary_correction(*I.P, st) == c);
        }
    }
}

TEST_CASE("tangle: state enumeration matches brute force") {
    for (const auto& e : qtest::corpus()) {
        Instance I = load(e.surface, e.tangle);
        if (I.P->junctures().size() > 14) continue;
        auto got = enumerate_states(*I.P);
        auto want = brute_force_states(*I.P);
        CHECK_MESSAGE(got == want, e.tangle);
        // lexicographic with + before -
        CHECK(std::is_sorted(got.begin(), got.end(), [](const auto& x, const auto& y) {
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i] != y[i]) return x[i] > y[i];
            return false;
        }));
    }
    Instance C = load("triangle.surf", "corner_pp.tng");
    CHECK(enumerate_states(*C.P).size() == 1);
    Instance M = load("triangle.surf", "corner_mp.tng");
    CHECK(enumerate_states(*M.P).size() <= 1);
}

TEST_CASE("tangle: charge balance per edge for every enumerated state") {
    for (const auto& e : qtest::corpus()) {
        Instance I = load(e.surface, e.tangle);
        const auto& S = *I.S;
        for (const auto& J : enumerate_states(*I.P))
            for (int edge = 0; edge < S.num_biangles(); ++edge) {
                int sin = 0, sout = 0;
                for (int id : I.P->copy_junctures(S.in_copy(edge))) sin += J[id];
                for (int id : I.P->copy_junctures(S.out_copy(edge))) sout += J[id];
                CHECK(sin == sout);
            }
    }
}

TEST_CASE("tangle: reversing every strand changes nothing") {
    for (auto [surf, f] : {std::pair{"torus.surf", "torus_xpos.tng"}, std::pair{"torus.surf", "torus_xneg.tng"},
                           std::pair{"triangle.surf", "corner_pair_xpos.tng"},
                           std::pair{"triangle.surf", "uturn.tng"}, std::pair{"triangle.surf", "contractible.tng"},
                           std::pair{"selffolded.surf", "selffolded_pm.tng"},
                           std::pair{"triangle.surf", "arcs_slid.tng"}}) {
        std::string text = qtest::slurp(qtest::data_path(f));
        Instance A = load_text(surf, text), B = load_text(surf, reversed(text));
        CHECK_MESSAGE(writhe_surface(*A.P) == writhe_surface(*B.P), f);
        CHECK_MESSAGE(bw_trace(*A.P) == bw_trace(*B.P), f);
        CHECK_MESSAGE(trhol(*A.P) == trhol(*B.P), f);
    }
}

TEST_CASE("tangle: chord crossing signs agree with a geometric oracle") {
    int crossings = 0;
    for (int a1 = 0; a1 < 3; ++a1)
        for (int b1 = 0; b1 < 3; ++b1)
            for (int a2 = 0; a2 < 3; ++a2)
                for (int b2 = 0; b2 < 3; ++b2) {
                    if (a1 == b1 || a2 == b2) continue;
                    std::array<int, 3> n{};
                    ++n[a1], ++n[b1], ++n[a2], ++n[b2];
                    for (int o = 0; o < 8; ++o) {
                        auto pos = [&](int side, int chord) {
                            if (n[side] == 1) return 0;
                            int bit = (o >> side) & 1;
                            return chord == 0 ? bit : 1 - bit;
                        };
                        Chord c1 = qtest::chord(a1, pos(a1, 0), b1, pos(b1, 0));
                        Chord c2 = qtest::chord(a2, pos(a2, 1), b2, pos(b2, 1));
                        for (int f = 0; f < 8; ++f) {
                            c1.level = f & 1 ? 2 : 1;
                            c2.level = f & 1 ? 1 : 2;
                            c1.a_to_b = f & 2;
                            c2.a_to_b = f & 4;
                            int want = qtest::crossing_sign_oracle(c1, c2, n);
                            CHECK(chord_crossing_sign(c1, c2, n) == want);
                            crossings += want != 0;
                        }
                    }
                }
    CHECK(crossings > 0);
}

TEST_CASE("tangle: canonical pair configurations") {
    for (const auto& cp : qtest::canonical_pairs()) {
        for (int lv = 0; lv < 2; ++lv) {
            Chord c1 = cp.c1, c2 = cp.c2;
            c1.level = lv ? 2 : 1;
            c2.level = lv ? 1 : 2;
            CHECK(classify_pair(c1, c2).pcase == cp.expected);
            CHECK(classify_pair(c2, c1).pcase == cp.expected);
            bool crossed = cp.expected == PairCase::SameCornerCrossed ||
                           cp.expected == PairCase::DistinctCornerCrossed;
            CHECK((chord_crossing_sign(c1, c2, qtest::side_counts(c1, c2)) != 0) == crossed);
        }
    }
    Chord c = qtest::chord(0, 0, 1, 0);
    c.level = 1;
    Chord d = c;
    CHECK_THROWS_AS(classify_pair(c, d), BadConfig);
}

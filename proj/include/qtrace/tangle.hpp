#pragma once

#include "qtrace/biangle_ops.hpp"
#include "qtrace/surface.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qtrace {

// A point on a split edge copy; slot follows the biangle boundary orientation
// of the copy and is 0-based here (files use 1-based slots).
struct Endpoint {
    int copy = -1;
    int slot = -1;
    friend auto operator<=>(const Endpoint&, const Endpoint&) = default;
};

// One step of a closed curve: it crosses triangle `tri` entering through side
// `in_side` and leaving through `out_side` (sides 0-based, clockwise).
struct CurveStep {
    int tri = -1;
    int in_side = -1;
    int out_side = -1;
    friend bool operator==(const CurveStep&, const CurveStep&) = default;
};
using Curve = std::vector<CurveStep>;

struct TriangleSegment {
    std::string id;
    int tri = -1;
    int level = 0;
    Endpoint from, to;
    bool fwd = true;  // traversed from -> to
    int side_from = -1, side_to = -1;
};

// Unvalidated tangle data as read from a file or produced by a compiler.
struct RawTangle {
    std::vector<TriangleSegment> segments;
    std::map<int, BiangleWord> words;  // edge -> word
    std::map<Endpoint, int> states;    // boundary endpoints only
    std::vector<Curve> curves;         // kept when compiled from curves
};

struct Juncture {
    Endpoint at;
    int vrank = 0;         // vertical rank among the junctures of its copy
    int h = 0;             // horizontal position on the word boundary
    bool boundary = false; // lies on an outer boundary arc of the surface
    int segment = -1;      // owning triangle segment, -1 on boundary arcs
};

// Vertical rank of the point at each horizontal position, per word line.
struct WordGeometry {
    int n_in = 0, n_out = 0;
    std::vector<int> ranks_in, ranks_out;
    int writhe = 0;
};

class TanglePresentation {
public:
    const SplitStructure& split() const { return *S_; }
    const Triangulation& triangulation() const { return *S_->T; }
    const std::vector<TriangleSegment>& segments() const { return segments_; }
    const std::vector<BiangleWord>& words() const { return words_; }  // indexed by edge
    const std::vector<WordGeometry>& word_geometry() const { return geom_; }
    const std::vector<Juncture>& junctures() const { return junctures_; }
    // Juncture ids of a copy, indexed by slot.
    const std::vector<int>& copy_junctures(int copy) const { return by_copy_.at(copy); }
    int juncture_id(const Endpoint& p) const;
    // Juncture ids on the in (out) side of a word, indexed by horizontal position.
    std::vector<int> word_in_junctures(int edge) const;
    std::vector<int> word_out_junctures(int edge) const;
    const std::map<int, int>& boundary_state() const { return boundary_state_; }
    const std::vector<Curve>& curves() const { return curves_; }
    const RawTangle& raw() const { return raw_; }
    // Segments of a triangle sorted by increasing level.
    const std::vector<int>& triangle_segments(int tri) const { return by_tri_.at(tri); }
    int biangle_writhe() const;
    int triangle_writhe() const;

private:
    friend TanglePresentation build_presentation(const SplitStructure&, RawTangle);
    const SplitStructure* S_ = nullptr;
    RawTangle raw_;
    std::vector<TriangleSegment> segments_;
    std::vector<BiangleWord> words_;
    std::vector<WordGeometry> geom_;
    std::vector<Juncture> junctures_;
    std::vector<std::vector<int>> by_copy_;
    std::vector<std::vector<int>> by_tri_;
    std::map<int, int> boundary_state_;
    std::vector<Curve> curves_;
    int triangle_writhe_ = 0;
};

// Validates the raw data against the split structure.  The split structure
// must outlive the presentation.
TanglePresentation build_presentation(const SplitStructure& S, RawTangle raw);
RawTangle parse_tangle_raw(std::string_view text, const SplitStructure& S);
TanglePresentation parse_tangle(std::string_view text, const SplitStructure& S);
std::string to_tng_text(const RawTangle& raw, const SplitStructure& S);

RawTangle compile_simple_multicurve_raw(const SplitStructure& S, const std::vector<Curve>& curves);
TanglePresentation compile_simple_multicurve(const SplitStructure& S,
                                             const std::vector<Curve>& curves);
// Parses `t1:2>3 t2:3>2` (1-based sides) and checks that the steps close up.
Curve parse_curve(std::string_view text, const Triangulation& T);
void validate_curve(const Curve& c, const Triangulation& T);

int writhe_surface(const TanglePresentation& P);
int boundary_correction(const TanglePresentation& P);
int boundary_correction(const TanglePresentation& P, const std::vector<int>& J);

// Juncture signs (+1/-1) indexed by juncture id.
using JunctureState = std::vector<int>;

std::vector<JunctureState> enumerate_states(const TanglePresentation& P);
void for_each_state(const TanglePresentation& P, const std::function<void(const JunctureState&)>& f);

// ---- triangle geometry shared with the engines ----

// A chord in a triangle: endpoints as (side, position along the clockwise
// orientation of that side), with n[side] points on each side.
struct Chord {
    int side_a = 0, pos_a = 0;
    int side_b = 0, pos_b = 0;
    bool a_to_b = true;
    int level = 0;
};

// Sign of the projected crossing of two chords (over = higher level), 0 if
// they do not cross.
int chord_crossing_sign(const Chord& c1, const Chord& c2, const std::array<int, 3>& n);

enum class PairCase { SameCornerNested = 1, DistinctCornerConcordant = 2, SameCornerCrossed = 3,
                      DistinctCornerCrossed = 4 };

// Pair configuration in the labelling of the pair lemmas: k1 is the segment
// playing the role of the first segment; eps[0..3] are (k1 end, k1 end,
// k2 end, k2 end) as endpoint references into the two chords.
struct PairConfig {
    PairCase pcase = PairCase::SameCornerNested;
    int k1 = 0;          // 0 or 1: which input chord is k1
    bool k1_lower = true;
    bool parallel = false;
    // For each eps slot: (chord index, endpoint 0 = a / 1 = b)
    std::array<std::pair<int, int>, 4> eps{};
};

PairConfig classify_pair(const Chord& c1, const Chord& c2);

// Pair contribution to the signed order correction on the triangle sides.
int pair_side_correction(const Chord& c1, const Chord& c2, int s1a, int s1b, int s2a, int s2b);

}  // namespace qtrace

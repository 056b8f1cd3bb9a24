#pragma once

#include "qtrace/omega_ring.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace qtrace {

// Elementary boundary-ordered tangle diagrams in a biangle.  The in side is
// the source of a word and the out side its target; points on each side are
// indexed by horizontal position h = 0, 1, ...  In a two-point generator,
// x1/x2 are the in points and y1/y2 the out points in horizontal order.
enum class Gen {
    IdFwd,  // id+, one strand in -> out
    IdBwd,  // id-, one strand out -> in
    CupU,   // out-only arc y1 -> y2
    CupD,   // out-only arc y2 -> y1
    CapU,   // in-only arc x1 -> x2
    CapD,   // in-only arc x2 -> x1
    Hx1,    // height exchange: in points reversed, out points agreeing
    Hx2,    // inverse height exchange
    XPos,   // positive crossing, over strand x1 - y2
    XNeg,   // negative crossing
};

inline constexpr Gen kAllGens[] = {Gen::IdFwd, Gen::IdBwd, Gen::CupU, Gen::CupD, Gen::CapU,
                                   Gen::CapD,  Gen::Hx1,   Gen::Hx2,  Gen::XPos, Gen::XNeg};

std::string_view gen_name(Gen g);
Gen parse_gen(std::string_view name);  // throws ParseError

int gen_arity_in(Gen g);
int gen_arity_out(Gen g);
// Vertical rank of each in (out) point relative to the other points of the
// same generator; 0 is lowest.
std::vector<int> gen_ranks_in(Gen g);
std::vector<int> gen_ranks_out(Gen g);
bool is_crossing(Gen g);
int crossing_sign(Gen g);  // +1 xpos, -1 xneg, 0 otherwise

// A slice is a bottom-to-top stack of generators; slices[0] is innermost.
using Slice = std::vector<Gen>;

struct BiangleWord {
    std::vector<Slice> slices;
    int writhe() const;
};

// Sparse operator V^{(x)n_in} -> V^{(x)n_out}.  Basis vectors are indexed by
// bit masks: bit i set means xi_- in tensor factor i (horizontal position i).
class LinearOp {
public:
    using Index = std::uint32_t;
    using Column = std::map<Index, OmegaPoly>;

    LinearOp() = default;
    LinearOp(int n_in, int n_out);

    static LinearOp identity(int n);

    int n_in() const { return n_in_; }
    int n_out() const { return n_out_; }
    const std::map<Index, Column>& columns() const { return cols_; }

    void add(Index out, Index in, const OmegaPoly& c);
    OmegaPoly get(Index out, Index in) const;
    LinearOp scaled(const OmegaPoly& c) const;

    friend bool operator==(const LinearOp& a, const LinearOp& b) {
        return a.n_in_ == b.n_in_ && a.n_out_ == b.n_out_ && a.cols_ == b.cols_;
    }
    friend bool operator!=(const LinearOp& a, const LinearOp& b) { return !(a == b); }
    LinearOp& operator+=(const LinearOp& o);

private:
    int n_in_ = 0, n_out_ = 0;
    std::map<Index, Column> cols_;
};

// outer o inner
LinearOp compose(const LinearOp& outer, const LinearOp& inner);
// lower occupies the low tensor factors
LinearOp tensor(const LinearOp& lower, const LinearOp& upper);

// Index of a sign vector (+1 / -1 entries) in horizontal order.
LinearOp::Index sign_index(const std::vector<int>& signs);
std::vector<int> index_signs(LinearOp::Index idx, int n);

enum class Invariant { F, G };

LinearOp rt_elementary(Gen g);
LinearOp gabella_elementary(Gen g);
LinearOp elementary(Gen g, Invariant which);

LinearOp evaluate_slice(const Slice& s, Invariant which);
LinearOp evaluate_word(const BiangleWord& w, Invariant which);

// <xi^{out}, op xi^{in}>
OmegaPoly matrix_element(const LinearOp& op, const std::vector<int>& in_signs,
                         const std::vector<int>& out_signs);

// Diagonal operator xi^s -> w^{C(b; Z, s)} xi^s.  ranks[h] is the vertical
// rank of the point at horizontal position h; orientation is +1 when the arc
// runs in increasing h, -1 otherwise.
int correction_amount(const std::vector<int>& ranks, int orientation,
                      const std::vector<int>& signs);
LinearOp correction_operator(const std::vector<int>& ranks, int orientation, int sign = 1);

// Vertical ranks of the in side (slice 0) and out side (last slice) of a word.
std::vector<int> word_ranks_in(const BiangleWord& w);
std::vector<int> word_ranks_out(const BiangleWord& w);
std::vector<int> slice_ranks_in(const Slice& s);
std::vector<int> slice_ranks_out(const Slice& s);
int slice_arity_in(const Slice& s);
int slice_arity_out(const Slice& s);

// Replace the crossing at (slice, position) by one of its smoothings.  The
// A^-1 smoothing of xpos is the turnback capU then cupU, the A smoothing the
// parallel pair hx1 then hx2; the roles swap for xneg.
LinearOp smoothing_operator(Gen crossing, bool a_inverse_term);
bool kauffman_check_at(const BiangleWord& w, std::size_t slice, std::size_t pos);
bool kauffman_check(const BiangleWord& w);  // all crossings; throws NoCrossing

}  // namespace qtrace

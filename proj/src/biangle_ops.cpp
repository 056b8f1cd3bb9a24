#include "qtrace/biangle_ops.hpp"

#include "qtrace/errors.hpp"

#include <array>

namespace qtrace {

namespace {

constexpr std::array<std::string_view, 10> kNames = {"id+", "id-",  "cupU", "cupD", "capU",
                                                     "capD", "hx1", "hx2",  "xpos", "xneg"};

// Two-point basis indices: bit 0 is factor 0.
constexpr LinearOp::Index PP = 0;  // xi+ (x) xi+
constexpr LinearOp::Index MP = 1;  // xi- (x) xi+
constexpr LinearOp::Index PM = 2;  // xi+ (x) xi-
constexpr LinearOp::Index MM = 3;  // xi- (x) xi-

OmegaPoly w(int k) { return OmegaPoly::omega(k); }

}  // namespace

std::string_view gen_name(Gen g) { return kNames[static_cast<int>(g)]; }

Gen parse_gen(std::string_view name) {
    for (std::size_t i = 0; i < kNames.size(); ++i)
        if (kNames[i] == name) return static_cast<Gen>(i);
    throw ParseError("unknown biangle generator '" + std::string(name) + "'");
}

int gen_arity_in(Gen g) {
    switch (g) {
        case Gen::IdFwd:
        case Gen::IdBwd: return 1;
        case Gen::CupU:
        case Gen::CupD: return 0;
        default: return 2;
    }
}

int gen_arity_out(Gen g) {
    switch (g) {
        case Gen::IdFwd:
        case Gen::IdBwd: return 1;
        case Gen::CapU:
        case Gen::CapD: return 0;
        default: return 2;
    }
}

std::vector<int> gen_ranks_in(Gen g) {
    switch (g) {
        case Gen::IdFwd:
        case Gen::IdBwd: return {0};
        case Gen::CupU:
        case Gen::CupD: return {};
        case Gen::Hx2: return {0, 1};
        default: return {1, 0};
    }
}

std::vector<int> gen_ranks_out(Gen g) {
    switch (g) {
        case Gen::IdFwd:
        case Gen::IdBwd: return {0};
        case Gen::CapU:
        case Gen::CapD: return {};
        case Gen::Hx1: return {0, 1};
        default: return {1, 0};
    }
}

bool is_crossing(Gen g) { return g == Gen::XPos || g == Gen::XNeg; }
int crossing_sign(Gen g) { return g == Gen::XPos ? 1 : g == Gen::XNeg ? -1 : 0; }

int BiangleWord::writhe() const {
    int wr = 0;
    for (const auto& s : slices)
        for (Gen g : s) wr += crossing_sign(g);
    return wr;
}

LinearOp::LinearOp(int n_in, int n_out) : n_in_(n_in), n_out_(n_out) {
    if (n_in < 0 || n_out < 0 || n_in > 30 || n_out > 30)
        throw ArityMismatch("operator arity out of range");
}

LinearOp LinearOp::identity(int n) {
    LinearOp r(n, n);
    for (Index i = 0; i < (Index{1} << n); ++i) r.add(i, i, 1);
    return r;
}

void LinearOp::add(Index out, Index in, const OmegaPoly& c) {
    if (c.is_zero()) return;
    auto& col = cols_[in];
    auto [it, fresh] = col.try_emplace(out, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) {
            col.erase(it);
            if (col.empty()) cols_.erase(in);
        }
    }
}

OmegaPoly LinearOp::get(Index out, Index in) const {
    auto c = cols_.find(in);
    if (c == cols_.end()) return {};
    auto e = c->second.find(out);
    return e == c->second.end() ? OmegaPoly{} : e->second;
}

LinearOp LinearOp::scaled(const OmegaPoly& c) const {
    LinearOp r(n_in_, n_out_);
    for (const auto& [in, col] : cols_)
        for (const auto& [out, v] : col) r.add(out, in, v * c);
    return r;
}

LinearOp& LinearOp::operator+=(const LinearOp& o) {
    if (o.n_in_ != n_in_ || o.n_out_ != n_out_) throw ArityMismatch("adding operators of different arity");
    for (const auto& [in, col] : o.cols_)
        for (const auto& [out, v] : col) add(out, in, v);
    return *this;
}

LinearOp compose(const LinearOp& outer, const LinearOp& inner) {
    if (outer.n_in() != inner.n_out())
        throw ArityMismatch("composing " + std::to_string(inner.n_out()) + " outputs into " +
                            std::to_string(outer.n_in()) + " inputs");
    LinearOp r(inner.n_in(), outer.n_out());
    for (const auto& [in, col] : inner.columns())
        for (const auto& [mid, a] : col) {
            auto oc = outer.columns().find(mid);
            if (oc == outer.columns().end()) continue;
            for (const auto& [out, b] : oc->second) r.add(out, in, b * a);
        }
    return r;
}

LinearOp tensor(const LinearOp& lower, const LinearOp& upper) {
    LinearOp r(lower.n_in() + upper.n_in(), lower.n_out() + upper.n_out());
    for (const auto& [in1, col1] : lower.columns())
        for (const auto& [in2, col2] : upper.columns())
            for (const auto& [out1, a] : col1)
                for (const auto& [out2, b] : col2)
                    r.add(out1 | (out2 << lower.n_out()), in1 | (in2 << lower.n_in()), a * b);
    return r;
}

LinearOp::Index sign_index(const std::vector<int>& signs) {
    if (signs.size() > 30) throw StateArityMismatch("too many tensor factors");
    LinearOp::Index idx = 0;
    for (std::size_t i = 0; i < signs.size(); ++i)
        if (signs[i] < 0) idx |= LinearOp::Index{1} << i;
    return idx;
}

std::vector<int> index_signs(LinearOp::Index idx, int n) {
    std::vector<int> s(n);
    for (int i = 0; i < n; ++i) s[i] = (idx >> i) & 1 ? -1 : 1;
    return s;
}

LinearOp rt_elementary(Gen g) {
    switch (g) {
        case Gen::IdFwd:
        case Gen::IdBwd: return LinearOp::identity(1);
        case Gen::CupU:
        case Gen::CupD: {
            LinearOp r(0, 2);
            r.add(PM, 0, w(1));
            r.add(MP, 0, -w(5));
            return r;
        }
        case Gen::CapU:
        case Gen::CapD: {
            LinearOp r(2, 0);
            r.add(0, PM, -w(-5));
            r.add(0, MP, w(-1));
            return r;
        }
        case Gen::Hx1: {
            LinearOp r(2, 2);
            r.add(PP, PP, w(2));
            r.add(MM, MM, w(2));
            r.add(PM, PM, w(-2));
            r.add(MP, PM, w(2) - w(-6));
            r.add(MP, MP, w(-2));
            return r;
        }
        case Gen::Hx2: {
            LinearOp r(2, 2);
            r.add(PP, PP, w(-2));
            r.add(MM, MM, w(-2));
            r.add(PM, PM, w(2));
            r.add(MP, PM, w(-2) - w(6));
            r.add(MP, MP, w(2));
            return r;
        }
        case Gen::XPos: {
            LinearOp r(2, 2);
            r.add(PP, PP, w(-2));
            r.add(MM, MM, w(-2));
            r.add(MP, PM, w(2));
            r.add(PM, MP, w(2));
            r.add(MP, MP, w(-2) - w(6));
            return r;
        }
        case Gen::XNeg: {
            LinearOp r(2, 2);
            r.add(PP, PP, w(2));
            r.add(MM, MM, w(2));
            r.add(MP, PM, w(-2));
            r.add(PM, PM, w(2) - w(-6));
            r.add(PM, MP, w(-2));
            return r;
        }
    }
    throw ParseError("bad generator");
}

LinearOp gabella_elementary(Gen g) {
    switch (g) {
        case Gen::IdFwd:
        case Gen::IdBwd: return LinearOp::identity(1);
        case Gen::CupU:
        case Gen::CupD: {
            LinearOp r(0, 2);
            r.add(PM, 0, 1);
            r.add(MP, 0, -w(4));
            return r;
        }
        case Gen::CapU:
        case Gen::CapD: {
            LinearOp r(2, 0);
            r.add(0, PM, -w(-4));
            r.add(0, MP, 1);
            return r;
        }
        case Gen::Hx1:
        case Gen::Hx2: {
            int s = g == Gen::Hx1 ? 1 : -1;
            LinearOp r = LinearOp::identity(2);
            r.add(MP, PM, s * (w(4) - w(-4)));
            return r;
        }
        case Gen::XPos: {
            LinearOp r(2, 2);
            r.add(PP, PP, w(-4));
            r.add(MM, MM, w(-4));
            r.add(MP, PM, 1);
            r.add(PM, MP, 1);
            r.add(MP, MP, w(-4) - w(4));
            return r;
        }
        case Gen::XNeg: {
            LinearOp r(2, 2);
            r.add(PP, PP, w(4));
            r.add(MM, MM, w(4));
            r.add(PM, PM, w(4) - w(-4));
            r.add(MP, PM, 1);
            r.add(PM, MP, 1);
            return r;
        }
    }
    throw ParseError("bad generator");
}

LinearOp elementary(Gen g, Invariant which) {
    return which == Invariant::F ? rt_elementary(g) : gabella_elementary(g);
}

LinearOp evaluate_slice(const Slice& s, Invariant which) {
    LinearOp r = LinearOp::identity(0);
    for (Gen g : s) r = tensor(r, elementary(g, which));
    return r;
}

LinearOp evaluate_word(const BiangleWord& w, Invariant which) {
    LinearOp r;
    bool first = true;
    for (const auto& s : w.slices) {
        LinearOp op = evaluate_slice(s, which);
        r = first ? op : compose(op, r);
        first = false;
    }
    return first ? LinearOp::identity(0) : r;
}

OmegaPoly matrix_element(const LinearOp& op, const std::vector<int>& in_signs,
                         const std::vector<int>& out_signs) {
    if (static_cast<int>(in_signs.size()) != op.n_in() ||
        static_cast<int>(out_signs.size()) != op.n_out())
        throw StateArityMismatch("state has " + std::to_string(in_signs.size()) + "/" +
                                 std::to_string(out_signs.size()) + " signs, operator is " +
                                 std::to_string(op.n_in()) + "->" + std::to_string(op.n_out()));
    return op.get(sign_index(out_signs), sign_index(in_signs));
}

int correction_amount(const std::vector<int>& ranks, int orientation,
                      const std::vector<int>& signs) {
    int n = static_cast<int>(ranks.size());
    int c = 0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            if (ranks[a] >= ranks[b]) continue;  // a lower, b higher
            int sgn = (b > a ? 1 : -1) * orientation;
            c += sgn * signs[a] * signs[b];
        }
    return c;
}

LinearOp correction_operator(const std::vector<int>& ranks, int orientation, int sign) {
    int n = static_cast<int>(ranks.size());
    LinearOp r(n, n);
    for (LinearOp::Index i = 0; i < (LinearOp::Index{1} << n); ++i)
        r.add(i, i, w(sign * correction_amount(ranks, orientation, index_signs(i, n))));
    return r;
}

namespace {

std::vector<int> stack_ranks(const Slice& s, bool in_side) {
    std::vector<int> ranks;
    int base = 0;
    for (Gen g : s) {
        auto local = in_side ? gen_ranks_in(g) : gen_ranks_out(g);
        for (int r : local) ranks.push_back(base + r);
        base += static_cast<int>(local.size());
    }
    return ranks;
}

}  // namespace

std::vector<int> slice_ranks_in(const Slice& s) { return stack_ranks(s, true); }
std::vector<int> slice_ranks_out(const Slice& s) { return stack_ranks(s, false); }

int slice_arity_in(const Slice& s) {
    int n = 0;
    for (Gen g : s) n += gen_arity_in(g);
    return n;
}

int slice_arity_out(const Slice& s) {
    int n = 0;
    for (Gen g : s) n += gen_arity_out(g);
    return n;
}

std::vector<int> word_ranks_in(const BiangleWord& w) {
    return w.slices.empty() ? std::vector<int>{} : slice_ranks_in(w.slices.front());
}

std::vector<int> word_ranks_out(const BiangleWord& w) {
    return w.slices.empty() ? std::vector<int>{} : slice_ranks_out(w.slices.back());
}

LinearOp smoothing_operator(Gen crossing, bool a_inverse_term) {
    bool turnback = (crossing == Gen::XPos) == a_inverse_term;
    if (turnback) return compose(rt_elementary(Gen::CupU), rt_elementary(Gen::CapU));
    return compose(rt_elementary(Gen::Hx2), rt_elementary(Gen::Hx1));
}

bool kauffman_check_at(const BiangleWord& w, std::size_t slice, std::size_t pos) {
    if (slice >= w.slices.size() || pos >= w.slices[slice].size() ||
        !is_crossing(w.slices[slice][pos]))
        throw NoCrossing("no crossing at slice " + std::to_string(slice + 1) + " position " +
                         std::to_string(pos + 1));
    Gen x = w.slices[slice][pos];
    auto evaluate_with = [&](const LinearOp& replacement) {
        LinearOp r;
        for (std::size_t i = 0; i < w.slices.size(); ++i) {
            LinearOp op = LinearOp::identity(0);
            for (std::size_t j = 0; j < w.slices[i].size(); ++j)
                op = tensor(op, i == slice && j == pos ? replacement
                                                       : rt_elementary(w.slices[i][j]));
            r = i == 0 ? op : compose(op, r);
        }
        return r;
    };
    LinearOp lhs = evaluate_word(w, Invariant::F);
    LinearOp rhs = evaluate_with(smoothing_operator(x, true)).scaled(OmegaPoly::A(-1));
    rhs += evaluate_with(smoothing_operator(x, false)).scaled(OmegaPoly::A(1));
    return lhs == rhs;
}

bool kauffman_check(const BiangleWord& w) {
    bool found = false, ok = true;
    for (std::size_t i = 0; i < w.slices.size(); ++i)
        for (std::size_t j = 0; j < w.slices[i].size(); ++j)
            if (is_crossing(w.slices[i][j])) {
                found = true;
                ok = ok && kauffman_check_at(w, i, j);
            }
    if (!found) throw NoCrossing("word has no crossing generator");
    return ok;
}

}  // namespace qtrace

#pragma once

#include "qtrace/biangle_ops.hpp"
#include "qtrace/qtorus.hpp"
#include "qtrace/tangle.hpp"

#include <optional>
#include <vector>

namespace qtrace {

// Per-presentation data shared by all state-sum terms.
struct PairTerm {
    PairCase pcase;
    bool k1_lower;
    bool parallel;
    std::array<int, 4> eps;  // juncture ids
};

class EngineContext {
public:
    explicit EngineContext(const TanglePresentation& P);

    const TanglePresentation& presentation() const { return *P_; }
    const LinearOp& F(int edge) const { return F_[edge]; }
    const LinearOp& G(int edge) const { return G_[edge]; }
    const std::vector<PairTerm>& pairs() const { return pairs_; }
    const OmegaPoly& twist() const { return twist_; }

private:
    const TanglePresentation* P_;
    std::vector<LinearOp> F_, G_;
    std::vector<PairTerm> pairs_;
    OmegaPoly twist_;
};

QTElement bw_term(const EngineContext& ctx, const JunctureState& J);
QTElement bw_term(const TanglePresentation& P, const JunctureState& J);

// threads <= 0 uses the OpenMP default.
QTElement bw_trace(const TanglePresentation& P, int threads = 0);
QTElement bw_trace_serial(const TanglePresentation& P);

int pair_cover_writhe(PairCase c, const std::array<int, 4>& eps, bool parallel, bool k1_lower = true);
int cover_writhe(const EngineContext& ctx, const JunctureState& J);
int cover_writhe(const TanglePresentation& P, const JunctureState& J);

// Exponent d with (lower corner factor)(higher corner factor) = w^d [Z^sum]_W,
// computed by multiplying in a one-triangle algebra.  Signs are per chord end.
int pair_deviation(const Chord& c1, const Chord& c2, int s1a, int s1b, int s2a, int s2b);

HalfEdgeExponent gabella_exponent(const TanglePresentation& P, const JunctureState& J);
QTElement gabella_monomial(const TanglePresentation& P, const JunctureState& J);
OmegaPoly gabella_coefficient(const EngineContext& ctx, const JunctureState& J);

QTElement trhol(const TanglePresentation& P, int threads = 0);
QTElement trhol_serial(const TanglePresentation& P);
QTElement gabella_original(const TanglePresentation& P, int threads = 0);

OmegaPoly twist_factor(const TanglePresentation& P);

struct TermReport {
    JunctureState J;
    QTElement bw;
    QTElement monomial;
    OmegaPoly coeff;
    int cover_writhe = 0;
    bool pass = true;
};

struct MainTheoremReport {
    bool pass = true;         // global and every term
    bool global_pass = true;
    OmegaPoly twist;
    int writhe = 0;
    int boundary_correction = 0;
    QTElement bw_trace;
    QTElement trhol;
    std::vector<TermReport> terms;
};

MainTheoremReport check_main_theorem(const TanglePresentation& P, int threads = 0);
std::vector<TermReport> term_reports(const TanglePresentation& P);

// Edge exponents of a Weyl exponent whose slots carry equal powers per edge;
// throws MismatchedAlgebra otherwise.
std::vector<int> edge_exponents(const HalfEdgeExponent& k, const Triangulation& T);

struct HighestTerm {
    std::vector<int> exponents;  // per edge
    OmegaPoly coeff;
};
// nullopt when there is no unique maximal term (NoUniqueMax)
std::optional<HighestTerm> highest_term(const QTElement& a, const Triangulation& T);

std::vector<int> intersection_numbers(const Curve& c, const Triangulation& T);

// Commutative Laurent polynomial in the edge variables Z_e.
struct CommPoly {
    std::map<std::vector<int>, Integer> terms;
    int nvars = 0;

    static CommPoly constant(int nvars, const Integer& c);
    static CommPoly monomial(const std::vector<int>& exps, const Integer& c = 1);
    CommPoly& operator+=(const CommPoly& o);
    friend CommPoly operator+(CommPoly a, const CommPoly& b) { return a += b; }
    friend CommPoly operator*(const CommPoly& a, const CommPoly& b);
    friend bool operator==(const CommPoly&, const CommPoly&) = default;
    // Negate if the lexicographically largest term has a negative coefficient.
    CommPoly normalized() const;
    std::string to_string(const Triangulation& T) const;
};

CommPoly classical_trace(const Curve& c, const Triangulation& T);
CommPoly classical_trace(const std::vector<Curve>& curves, const Triangulation& T);
// specialize_one of a quantum torus element, in edge variables
CommPoly classical_limit(const QTElement& a, const Triangulation& T);

}  // namespace qtrace

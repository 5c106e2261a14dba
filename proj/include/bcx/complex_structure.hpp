#pragma once

// B-almost complex structures on standard charts: axioms, the Nijenhuis
// tensor, the dbar operator, CR eigenbundle splitting along strata, and
// normal-form verification.

#include "bcx/b_calculus.hpp"
#include "bcx/intlin.hpp"

#include <complex>
#include <map>
#include <string>
#include <utility>

namespace bcx {

struct BACS {
    Chart chart;
    std::vector<CoeffElement> mat; // 2n x 2n, row-major

    explicit BACS(Chart c);
    const CoeffElement& at(std::size_t r, std::size_t c) const;
    CoeffElement& at(std::size_t r, std::size_t c);
    BVectorField column(std::size_t c) const; // J(F_c)
    BVectorField apply(const BVectorField& v) const;
    BCovector pullback(const BCovector& om) const; // J^* omega
};

// The standard structure: J(v'_a) = w'_a, J(w'_a) = -v'_a.
BACS standard_structure(const Chart& chart);

// Validates J^2 = -id exactly and transversality at sampled stratum points
// (samples_per_stratum exact random points on every face stratum of Q).
// Raises on violation: std::invalid_argument for the algebraic axiom,
// TransversalityViolation with a witness for the sampled one.
BACS make_bacs(Chart chart, std::vector<CoeffElement> entries,
               std::uint64_t seed = 1, int samples_per_stratum = 5);

struct NijenhuisTensor {
    Chart chart;
    // components for i < j; N(F_j, F_i) = -N(F_i, F_j), N(F_i, F_i) = 0
    std::map<std::pair<std::size_t, std::size_t>, BVectorField> comp;

    BVectorField component(std::size_t i, std::size_t j) const;
    bool is_zero() const;
};

NijenhuisTensor nijenhuis(const BACS& J);
// N(u, v) on general fields (tensoriality and closure checks).
BVectorField nijenhuis_apply(const BACS& J, const BVectorField& u,
                             const BVectorField& v);
bool is_integrable(const BACS& J);

// ^b-dbar f = (1/2)(id + i J^*)(^bd f), a (0,1) covector (2n components).
BCovector dbar(const BACS& J, const CoeffElement& f);
BCovector proj01(const BACS& J, const BCovector& om);
bool is_holomorphic(const BACS& J, const CoeffElement& f);

// Components of a (0,1) covector in the antiholomorphic basis
//   dzbar~_a = w*_a + i v*_a (a < k),   dzbar~_{k+j} = v*_{k+j} - i w*_{k+j}:
// beta_a = xi_{n+a} for a < k, beta_{k+j} = xi_{k+j}.  The defect components
// xi_a - i xi_{n+a} and xi_{n+k+j} + i xi_{k+j} vanish exactly when xi is a
// genuine standard-(0,1) covector.
std::vector<CoeffElement> anti_basis_components(const BCovector& xi);
std::vector<CoeffElement> anti_basis_defect(const BCovector& xi);

struct CRSplitData {
    Chart chart;
    std::size_t depth = 0;    // stratum codimension at the point (0 or k)
    Mat<GRat> J_at;           // evaluated 2n x 2n matrix
    Mat<GRat> W_basis;        // (2n - depth) x n
    Mat<GRat> Wbar_basis;     // (2n - depth) x n
    Mat<GRat> intersection_basis; // (2n - depth) x depth
};

// Exact eigen-splitting at a point of the vertex stratum (depth k) or the
// interior (depth 0).  Raises TransversalityViolation if the anchor is not
// injective on an eigenbundle, UnsupportedFace for other strata.
CRSplitData cr_split_at(const BACS& J, const ChartPoint& pt);

struct NormalFormCandidate {
    std::vector<BVectorField> v;          // k flat normal fields
    std::vector<BVectorField> theta_lift; // k
    std::vector<BVectorField> x_lift;     // n - k
    std::vector<BVectorField> y_lift;     // n - k
};

struct NormalFormReport {
    bool normal_flat_ok = false;
    std::string normal_witness;
    bool commute_ok = false;
    std::string commute_witness;
    bool anchor_ok = false;
    std::string anchor_witness;
    bool j_relations_ok = false;
    std::string j_witness;
    // omega[a][b][c] for a, b z-part indices, c normal index
    std::vector<std::vector<std::vector<CoeffElement>>> omega;
    bool omega_zero = false;

    bool all_ok() const
    {
        return normal_flat_ok && commute_ok && anchor_ok && j_relations_ok &&
               omega_zero;
    }
};

NormalFormReport verify_normal_form(const BACS& J,
                                    const NormalFormCandidate& cand);

// The candidate frame of the standard structure itself.
NormalFormCandidate standard_candidate(const Chart& chart);

// Numeric cross-check: finite-difference Nijenhuis component N(F_i, F_j) at
// interior coordinates u (central differences, step h), and the symbolic
// tensor evaluated at the same point.
std::vector<std::complex<double>> nijenhuis_fd(const BACS& J,
                                               const std::vector<double>& u,
                                               std::size_t i, std::size_t j,
                                               double h);
std::vector<std::complex<double>> nijenhuis_eval(const NijenhuisTensor& N,
                                                 const std::vector<double>& u,
                                                 std::size_t i, std::size_t j);

} // namespace bcx

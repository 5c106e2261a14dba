#pragma once

// Exact b-calculus on a standard chart X_P x Hom(P^gp, R), P = Q x Z^(n-k).
//
// Frame convention (2n fields): index i in [0, n) is v'_i, index n+i is w'_i,
// for the standard basis alpha_1..alpha_n of Hom(P^gp, Z) adapted to the
// splitting (first k indices: gp-basis of Q; last n-k: the free Z factors).
// Acting on the coefficient ring:
//   v'_l, l <  k : multiplies each term by q_l            (mu-scaling)
//   v'_l, l >= k : d/dx_{l-k}   (Leibniz on z, zbar)
//   w'_l, l <  k : multiplies each term by i m_l          (theta-scaling)
//   w'_l, l >= k : d/dy_{l-k}   (z picks +i, zbar picks -i)

#include "bcx/coeff.hpp"

#include <vector>

namespace bcx {

// The action of the frame field with index i in [0, 2n) as a derivation.
CoeffElement frame_derive(const CoeffElement& f, std::size_t i);

struct BVectorField {
    Chart chart;
    std::vector<CoeffElement> comp; // 2n frame components

    explicit BVectorField(Chart c);
    static BVectorField frame_field(const Chart& c, std::size_t i);

    BVectorField operator+(const BVectorField& o) const;
    BVectorField operator-(const BVectorField& o) const;
    BVectorField operator*(const GRat& c) const;
    BVectorField operator*(const CoeffElement& f) const;
    bool operator==(const BVectorField& o) const;
    bool is_zero() const;
};

struct BCovector {
    Chart chart;
    std::vector<CoeffElement> comp; // 2n components xi_i = <omega, F_i>

    explicit BCovector(Chart c);
    BCovector operator+(const BCovector& o) const;
    BCovector operator-(const BCovector& o) const;
    BCovector operator*(const GRat& c) const;
    bool is_zero() const;
};

// v(f), extended from the frame derivations by C-linearity over coefficients.
CoeffElement derive(const BVectorField& v, const CoeffElement& f);

// [u, v]; the frame fields pairwise commute, so the bracket reduces to
// component-wise derivation terms u(v_j) - v(u_j).
BVectorField lie_bracket(const BVectorField& u, const BVectorField& v);

// ^bd f as a covector: component i equals the frame derivation F_i(f).
BCovector b_differential(const CoeffElement& f);

// Sections of ^bTX restricted to the vertex stratum V (all mu = 0):
// normal part = components of v'_1..v'_k, tangent part = remaining frame
// components in frame order (v'_{k+1}..v'_n, w'_1..w'_n); all coefficients
// have mu-key 0.
struct StratumAlgebroidElement {
    Chart chart;
    std::vector<CoeffElement> normal;  // size k
    std::vector<CoeffElement> tangent; // size 2n - k

    explicit StratumAlgebroidElement(Chart c);
    bool is_zero() const;
};

// Restriction to the vertex stratum of the sharp part; face must be the
// vertex face of Q (no generators), otherwise UnsupportedFace.
StratumAlgebroidElement restrict_to_stratum(const BVectorField& v,
                                            const Face& face);

// The induced bracket [ , ]_{S^k}: extend by the same coefficients, bracket,
// restrict.  Well-defined independently of the chosen extensions.
StratumAlgebroidElement algebroid_bracket(const StratumAlgebroidElement& u,
                                          const StratumAlgebroidElement& v);

// Re-embed a stratum element as the b-vector field with the same (mu-key 0)
// coefficients; inverse of restrict_to_stratum on restricted data.
BVectorField extend_from_stratum(const StratumAlgebroidElement& u);

} // namespace bcx

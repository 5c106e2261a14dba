#ifndef BCX_LATTICE_MONOID_HPP
#define BCX_LATTICE_MONOID_HPP

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "bcx/cone.hpp"
#include "bcx/error.hpp"
#include "bcx/intlin.hpp"
#include "bcx/rational.hpp"

namespace bcx {

// Presentation of a submonoid of Z^ambient_rank by generators and a
// (possibly incomplete) list of relations Σ a_i p_i = Σ b_i p_i.
struct MonoidPresentation {
    std::size_t ambient_rank = 0;
    std::vector<IVec> generators;
    std::vector<std::pair<IVec, IVec>> relations; // N-vectors of length generators.size()
};

struct Face {
    std::vector<std::size_t> generator_indices; // sorted
    std::size_t codim = 0;
};

struct FiltrationLayer {
    unsigned level = 0;
    std::vector<IVec> elements; // ambient coordinates, sorted
};

// A validated weakly toric monoid: finitely generated, integral, saturated,
// torsion-free submonoid of the ambient lattice. Sharp + weakly toric = toric.
class WeaklyToricMonoid {
public:
    // Performs the full battery of structural checks; throws Error with code
    // NotIntegral, HasTorsion or NotSaturated (each carrying a witness).
    static WeaklyToricMonoid validate(MonoidPresentation pres);

    const MonoidPresentation& presentation() const { return pres_; }
    std::size_t ambient_rank() const { return pres_.ambient_rank; }
    std::size_t gp_rank() const { return gp_basis_.cols(); }
    const RatCone& cone() const { return cone_; }

    // Basis of P^gp as a sublattice of the ambient lattice (columns).
    const IMat& gp_basis() const { return gp_basis_; }

    // Basis of the unit group P^x (ambient coordinates; columns of gp_basis
    // combinations). Empty for sharp monoids.
    const std::vector<IVec>& unit_lattice_basis() const { return unit_basis_; }
    std::size_t unit_rank() const { return unit_basis_.size(); }
    bool is_sharp() const { return unit_basis_.empty(); }

    // The toric monoid Q in the splitting P ≅ Q × Z^unit_rank; null when P is
    // already sharp.
    std::shared_ptr<const WeaklyToricMonoid> sharp_quotient() const { return sharp_quotient_; }

    // Projection P^gp -> Q^gp in gp coordinates (rows: quotient coords), and
    // an integral section of it. For sharp monoids the projection is the
    // identity.
    const IMat& quotient_map() const { return quotient_map_; }
    const IMat& quotient_section() const { return quotient_section_; }

    bool contains(const IVec& z) const; // membership in the validated monoid
    std::optional<IVec> gp_coords(const IVec& z) const;
    IVec from_gp_coords(const IVec& y) const;

    // Split a gp element into sharp-quotient coordinates and unit coordinates.
    std::pair<IVec, IVec> split_gp(const IVec& z) const;

    // Irreducible elements (the Hilbert basis for sharp monoids); requires a
    // sharp monoid.
    const std::vector<IVec>& irreducibles() const;

    // Largest N with q ∈ Q_N (sum of N nonzero elements); level(0) = 0.
    // Requires sharp; raises NotInMonoid if q is outside the monoid.
    unsigned level(const IVec& q) const;

private:
    WeaklyToricMonoid(MonoidPresentation pres, RatCone cone);

    MonoidPresentation pres_;
    RatCone cone_;
    IMat gp_basis_;
    std::vector<IVec> unit_basis_;
    IMat unit_coord_basis_; // n x u, gp coordinates of the unit basis
    IMat quotient_map_;     // (n-u) x n, gp coordinates
    IMat quotient_section_; // n x (n-u)
    std::shared_ptr<const WeaklyToricMonoid> sharp_quotient_;

    mutable std::vector<IVec> irreducibles_;
    mutable bool irreducibles_ready_ = false;
    mutable std::map<IVec, unsigned> level_memo_;
};

// All faces of P (index sets into presentation generators), deduplicated,
// sorted by (codim, indices). Includes P itself (codim 0).
std::vector<Face> enumerate_faces(const WeaklyToricMonoid& p);

// The splitting P ≅ Q × Z^n of Def 2.8: returns (Q, n). For sharp P returns
// (P, 0).
std::pair<WeaklyToricMonoid, std::size_t> split_units(const WeaklyToricMonoid& p);

// P^∨ = Hom(P, N) presented by the Hilbert basis of the dual cone, in
// coordinates dual to gp_basis(). box_limit caps the enumeration volume.
WeaklyToricMonoid dual_monoid(const WeaklyToricMonoid& p);

// The natural evaluation map η(P): P -> (P^∨)^∨ on generators; returns the
// image vectors in the double dual's ambient coordinates and checks they are
// members; used by tests to confirm the isomorphism for toric P.
struct EtaCheck {
    bool injective = false;
    bool surjective_on_generators = false;
    std::vector<IVec> images;
};
EtaCheck eta_double_dual(const WeaklyToricMonoid& p);

// Layers Q_N \ Q_{N+1} for N = 0..n_max; requires sharp Q (NotSharp).
std::vector<FiltrationLayer> filtration_layers(const WeaklyToricMonoid& q, unsigned n_max);

// Membership of z in the plain N-span of `gens` (no saturation assumed);
// exact bounded search. Exposed for the validation path and for test oracles.
bool nspan_contains(const std::vector<IVec>& gens, std::size_t ambient_dim, const IVec& z);

// One relation pair (a, b) per HNF kernel-basis vector of the generator
// matrix; a canonical, complete generating set of the relation lattice.
std::vector<std::pair<IVec, IVec>> canonical_relations(const std::vector<IVec>& gens,
                                                       std::size_t dim);

} // namespace bcx

#endif

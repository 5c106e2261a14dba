#ifndef BCX_CONE_HPP
#define BCX_CONE_HPP

#include <optional>
#include <vector>

#include "bcx/intlin.hpp"
#include "bcx/rational.hpp"

namespace bcx {

// Rational polyhedral cone spanned by integer generators inside an ambient
// lattice Z^dim. All facet data lives in coordinates relative to a basis of
// the linear span, so lower-dimensional cones are handled uniformly.
class RatCone {
public:
    RatCone(std::vector<IVec> generators, std::size_t ambient_dim);

    std::size_t ambient_dim() const { return ambient_dim_; }
    std::size_t dim() const { return span_basis_.cols(); } // dim of linear span
    const std::vector<IVec>& generators() const { return gens_; }

    // Integer basis of the linear span (columns), saturated in Z^dim.
    const IMat& span_basis() const { return span_basis_; }

    // Facet normals in span coordinates (primitive integer, >= 0 on the cone).
    const std::vector<IVec>& facet_normals() const { return facet_normals_; }

    // Span coordinates of an ambient vector, or nullopt if outside the span.
    std::optional<QVec> span_coords(const IVec& z) const;

    bool contains(const IVec& z) const;

    // Indices of facet normals vanishing on z; z must lie in the cone.
    std::vector<std::size_t> tight_facets(const IVec& z) const;

    // Lineality space basis (ambient coordinates, saturated lattice basis).
    IMat lineality_basis() const;

    bool pointed() const;

    // A functional (in span coordinates) strictly positive on cone \ lineality;
    // for a pointed cone this is strictly positive on every nonzero element.
    IVec positive_functional_span() const;

    // Evaluate a span-coordinate functional on an ambient lattice point that
    // lies in the span.
    Int eval_span_functional(const IVec& functional, const IVec& z) const;

private:
    std::size_t ambient_dim_;
    std::vector<IVec> gens_;
    IMat span_basis_;                  // ambient_dim x d
    QMat span_solve_;                  // d x ambient_dim left inverse of span basis
    std::vector<QVec> gen_coords_;     // generators in span coordinates
    std::vector<IVec> facet_normals_;  // primitive, in span coordinates
};

// Hilbert basis (minimal nonzero elements) of cone(rays) ∩ Z^d for a pointed
// cone given by integer ray generators in Z^d; exact via the zonotope bound.
std::vector<IVec> hilbert_basis_pointed(const std::vector<IVec>& rays, std::size_t dim);

} // namespace bcx

#endif

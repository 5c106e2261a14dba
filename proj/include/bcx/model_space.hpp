#ifndef BCX_MODEL_SPACE_HPP
#define BCX_MODEL_SPACE_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "bcx/lattice_monoid.hpp"

namespace bcx {

// X_P' ⊂ [0,∞)^m cut out by the presentation's binomial equations.
struct BinomialEmbedding {
    std::size_t ambient_dim = 0;
    std::vector<std::pair<IVec, IVec>> equations;
};

struct StratumDescriptor {
    Face face;
    std::size_t depth = 0; // codim of the support face
    std::size_t dim = 0;   // rank P − depth
};

// A point of X_P = Hom(P, [0,∞)), stored by generator values. Exact rational
// values by default; float values carry a 1e-9 relation tolerance and are
// used only by the numeric cross-check path.
class ModelPoint {
public:
    static ModelPoint make_exact(std::shared_ptr<const WeaklyToricMonoid> monoid,
                                 QVec values);
    static ModelPoint make_float(std::shared_ptr<const WeaklyToricMonoid> monoid,
                                 std::vector<double> values);

    const WeaklyToricMonoid& monoid() const { return *monoid_; }
    std::shared_ptr<const WeaklyToricMonoid> monoid_ptr() const { return monoid_; }
    bool exact() const { return exact_; }
    const QVec& exact_values() const { return qvals_; }
    const std::vector<double>& float_values() const { return fvals_; }

    // Indices of generators with nonzero value.
    std::vector<std::size_t> support() const;

private:
    ModelPoint() = default;
    std::shared_ptr<const WeaklyToricMonoid> monoid_;
    bool exact_ = true;
    QVec qvals_;
    std::vector<double> fvals_;
};

BinomialEmbedding embed(const WeaklyToricMonoid& p);

// x(p) for p ∈ P; exact points only (float points use eval_lambda_f).
Rat eval_lambda(const ModelPoint& x, const IVec& p);
double eval_lambda_f(const ModelPoint& x, const IVec& p);

StratumDescriptor support_and_depth(const ModelPoint& x);

// The face submonoid of P spanned by the generators in `face`, as a
// validated monoid in the same ambient lattice.
WeaklyToricMonoid face_submonoid(const WeaklyToricMonoid& p, const Face& face);

// i_F^P: extend a point over the face monoid by zero off the face.
ModelPoint face_inclusion(const std::shared_ptr<const WeaklyToricMonoid>& p,
                          const Face& face, const ModelPoint& y);

// Deterministic sampler: a point with support exactly the given face,
// constructed as a monoid homomorphism (hence always valid). Different seeds
// give different interior points.
ModelPoint sample_point_on_face(const std::shared_ptr<const WeaklyToricMonoid>& p,
                                const Face& face, std::uint64_t seed);

} // namespace bcx

#endif

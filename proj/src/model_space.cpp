#include "bcx/model_space.hpp"

#include <cmath>
#include <random>

namespace bcx {

namespace {

constexpr double kFloatTol = 1e-9;

IMat columns_of(const std::vector<IVec>& vecs, std::size_t dim)
{
    IMat m(dim, vecs.size());
    for (std::size_t j = 0; j < vecs.size(); ++j)
        for (std::size_t i = 0; i < dim; ++i)
            m.at(i, j) = vecs[j][i];
    return m;
}

// The minimal face of P containing the given generators: indices of all
// generators killed by every facet normal vanishing on the input set.
std::vector<std::size_t> face_closure(const WeaklyToricMonoid& p,
                                      const std::vector<std::size_t>& support)
{
    const auto& gens = p.presentation().generators;
    std::vector<std::size_t> tight_normals;
    for (std::size_t f = 0; f < p.cone().facet_normals().size(); ++f) {
        bool vanishes = true;
        for (std::size_t i : support)
            vanishes = vanishes &&
                       p.cone().eval_span_functional(p.cone().facet_normals()[f], gens[i]) == 0;
        if (vanishes)
            tight_normals.push_back(f);
    }
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        bool in = true;
        for (std::size_t f : tight_normals)
            in = in &&
                 p.cone().eval_span_functional(p.cone().facet_normals()[f], gens[i]) == 0;
        if (in)
            members.push_back(i);
    }
    return members;
}

Face face_record(const WeaklyToricMonoid& p, std::vector<std::size_t> members)
{
    std::vector<IVec> fg;
    for (std::size_t i : members)
        fg.push_back(p.presentation().generators[i]);
    std::size_t rank =
        fg.empty() ? 0 : rank_of(to_rational(columns_of(fg, p.ambient_rank())));
    return Face{std::move(members), p.gp_rank() - rank};
}

// Membership p ∈ face: p ∈ P and all normals vanishing on the face vanish on p.
bool in_face(const WeaklyToricMonoid& p, const std::vector<std::size_t>& members,
             const IVec& q)
{
    if (!p.contains(q))
        return false;
    const auto& gens = p.presentation().generators;
    for (const IVec& n : p.cone().facet_normals()) {
        bool vanishes_on_face = true;
        for (std::size_t i : members)
            vanishes_on_face = vanishes_on_face && p.cone().eval_span_functional(n, gens[i]) == 0;
        if (vanishes_on_face && p.cone().eval_span_functional(n, q) != 0)
            return false;
    }
    return true;
}

Rat pow_exact(const Rat& base, const Int& e)
{
    Rat out(1);
    Int n = boost::multiprecision::abs(e);
    Rat b = base;
    for (Int i = 0; i < n; ++i)
        out *= b;
    if (e < 0)
        return Rat(1) / out;
    return out;
}

double pow_double(double base, const Int& e)
{
    return std::pow(base, e.convert_to<double>());
}

} // namespace

BinomialEmbedding embed(const WeaklyToricMonoid& p)
{
    BinomialEmbedding e;
    e.ambient_dim = p.presentation().generators.size();
    e.equations = p.presentation().relations;
    return e;
}

ModelPoint ModelPoint::make_exact(std::shared_ptr<const WeaklyToricMonoid> monoid,
                                  QVec values)
{
    const auto& pres = monoid->presentation();
    if (values.size() != pres.generators.size())
        throw std::invalid_argument("ModelPoint: one value per generator required");
    for (const Rat& v : values)
        if (v < Rat(0))
            throw std::invalid_argument("ModelPoint: negative generator value");

    // listed relations
    for (const auto& [a, b] : pres.relations) {
        Rat lhs(1), rhs(1);
        for (std::size_t i = 0; i < values.size(); ++i) {
            lhs *= pow_exact(values[i], a[i]);
            rhs *= pow_exact(values[i], b[i]);
        }
        if (lhs != rhs)
            throw std::invalid_argument("ModelPoint: relation violated exactly");
    }

    ModelPoint x;
    x.monoid_ = std::move(monoid);
    x.exact_ = true;
    x.qvals_ = std::move(values);

    // support closure
    std::vector<std::size_t> supp = x.support();
    std::vector<std::size_t> closure = face_closure(*x.monoid_, supp);
    if (closure != supp)
        throw std::invalid_argument("ModelPoint: support is not a face");

    // evaluation well-definedness on the support face's full relation lattice
    std::vector<IVec> fgens;
    for (std::size_t i : supp)
        fgens.push_back(pres.generators[i]);
    for (const auto& [a, b] : canonical_relations(fgens, pres.ambient_rank)) {
        Rat lhs(1), rhs(1);
        for (std::size_t i = 0; i < fgens.size(); ++i) {
            lhs *= pow_exact(x.qvals_[supp[i]], a[i]);
            rhs *= pow_exact(x.qvals_[supp[i]], b[i]);
        }
        if (lhs != rhs)
            throw std::invalid_argument("ModelPoint: face relation violated exactly");
    }
    return x;
}

ModelPoint ModelPoint::make_float(std::shared_ptr<const WeaklyToricMonoid> monoid,
                                  std::vector<double> values)
{
    const auto& pres = monoid->presentation();
    if (values.size() != pres.generators.size())
        throw std::invalid_argument("ModelPoint: one value per generator required");
    for (double v : values)
        if (v < 0)
            throw std::invalid_argument("ModelPoint: negative generator value");
    for (const auto& [a, b] : pres.relations) {
        double lhs = 1, rhs = 1;
        for (std::size_t i = 0; i < values.size(); ++i) {
            lhs *= pow_double(values[i], a[i]);
            rhs *= pow_double(values[i], b[i]);
        }
        if (std::abs(lhs - rhs) >
            kFloatTol * std::max(1.0, std::max(std::abs(lhs), std::abs(rhs))))
            throw std::invalid_argument("ModelPoint: relation violated beyond tolerance");
    }
    ModelPoint x;
    x.monoid_ = std::move(monoid);
    x.exact_ = false;
    x.fvals_ = std::move(values);
    std::vector<std::size_t> supp = x.support();
    if (face_closure(*x.monoid_, supp) != supp)
        throw std::invalid_argument("ModelPoint: support is not a face");
    return x;
}

std::vector<std::size_t> ModelPoint::support() const
{
    std::vector<std::size_t> s;
    if (exact_) {
        for (std::size_t i = 0; i < qvals_.size(); ++i)
            if (!is_zero(qvals_[i]))
                s.push_back(i);
    } else {
        for (std::size_t i = 0; i < fvals_.size(); ++i)
            if (fvals_[i] != 0.0)
                s.push_back(i);
    }
    return s;
}

Rat eval_lambda(const ModelPoint& x, const IVec& p)
{
    if (!x.exact())
        throw std::invalid_argument("eval_lambda: float point; use eval_lambda_f");
    const WeaklyToricMonoid& mon = x.monoid();
    if (!mon.contains(p))
        raise(Errc::NotInMonoid, to_string(p));
    std::vector<std::size_t> supp = x.support();
    if (!in_face(mon, supp, p))
        return Rat(0); // some generator off the support appears in every decomposition
    std::vector<IVec> fgens;
    for (std::size_t i : supp)
        fgens.push_back(mon.presentation().generators[i]);
    auto c = solve_integer(columns_of(fgens, mon.ambient_rank()), p);
    if (!c)
        throw std::logic_error("eval_lambda: face decomposition failed");
    Rat out(1);
    for (std::size_t i = 0; i < fgens.size(); ++i)
        out *= pow_exact(x.exact_values()[supp[i]], (*c)[i]);
    return out;
}

double eval_lambda_f(const ModelPoint& x, const IVec& p)
{
    const WeaklyToricMonoid& mon = x.monoid();
    if (!mon.contains(p))
        raise(Errc::NotInMonoid, to_string(p));
    std::vector<std::size_t> supp = x.support();
    if (!in_face(mon, supp, p))
        return 0.0;
    std::vector<IVec> fgens;
    for (std::size_t i : supp)
        fgens.push_back(mon.presentation().generators[i]);
    auto c = solve_integer(columns_of(fgens, mon.ambient_rank()), p);
    if (!c)
        throw std::logic_error("eval_lambda_f: face decomposition failed");
    double out = 1;
    for (std::size_t i = 0; i < fgens.size(); ++i) {
        double v = x.exact() ? to_double(x.exact_values()[supp[i]])
                             : x.float_values()[supp[i]];
        out *= pow_double(v, (*c)[i]);
    }
    return out;
}

StratumDescriptor support_and_depth(const ModelPoint& x)
{
    Face f = face_record(x.monoid(), x.support());
    StratumDescriptor s;
    s.depth = f.codim;
    s.dim = x.monoid().gp_rank() - f.codim;
    s.face = std::move(f);
    return s;
}

WeaklyToricMonoid face_submonoid(const WeaklyToricMonoid& p, const Face& face)
{
    MonoidPresentation pres;
    pres.ambient_rank = p.ambient_rank();
    for (std::size_t i : face.generator_indices)
        pres.generators.push_back(p.presentation().generators[i]);
    if (pres.generators.empty())
        pres.generators.push_back(IVec(pres.ambient_rank, Int(0)));
    pres.relations = canonical_relations(pres.generators, pres.ambient_rank);
    return WeaklyToricMonoid::validate(std::move(pres));
}

ModelPoint face_inclusion(const std::shared_ptr<const WeaklyToricMonoid>& p,
                          const Face& face, const ModelPoint& y)
{
    const auto& pgens = p->presentation().generators;
    const auto& ygens = y.monoid().presentation().generators;
    // y must live over the face submonoid (same generators, same order),
    // except for the padded trivial monoid over the empty face.
    std::vector<IVec> expected;
    for (std::size_t i : face.generator_indices)
        expected.push_back(pgens[i]);
    bool trivial_face = expected.empty();
    if (!trivial_face && expected != ygens)
        throw std::invalid_argument("face_inclusion: point is not over the face monoid");

    if (y.exact()) {
        QVec vals(pgens.size(), Rat(0));
        if (!trivial_face)
            for (std::size_t j = 0; j < face.generator_indices.size(); ++j)
                vals[face.generator_indices[j]] = y.exact_values()[j];
        return ModelPoint::make_exact(p, std::move(vals));
    }
    std::vector<double> vals(pgens.size(), 0.0);
    if (!trivial_face)
        for (std::size_t j = 0; j < face.generator_indices.size(); ++j)
            vals[face.generator_indices[j]] = y.float_values()[j];
    return ModelPoint::make_float(p, std::move(vals));
}

ModelPoint sample_point_on_face(const std::shared_ptr<const WeaklyToricMonoid>& p,
                                const Face& face, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    const auto& gens = p->presentation().generators;
    std::vector<IVec> fgens;
    for (std::size_t i : face.generator_indices)
        fgens.push_back(gens[i]);
    QVec vals(gens.size(), Rat(0));
    if (!fgens.empty()) {
        IMat basis = lattice_basis(columns_of(fgens, p->ambient_rank()));
        QVec bases(basis.cols());
        for (std::size_t j = 0; j < basis.cols(); ++j) {
            Int num = 1 + Int(rng() % 6);
            Int den = 1 + Int(rng() % 4);
            bases[j] = Rat(num, den);
        }
        for (std::size_t j = 0; j < face.generator_indices.size(); ++j) {
            auto c = solve_integer(basis, fgens[j]);
            Rat v(1);
            for (std::size_t i = 0; i < bases.size(); ++i)
                v *= pow_exact(bases[i], (*c)[i]);
            vals[face.generator_indices[j]] = v;
        }
    }
    return ModelPoint::make_exact(p, std::move(vals));
}

} // namespace bcx

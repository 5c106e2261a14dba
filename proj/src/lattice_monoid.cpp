#include "bcx/lattice_monoid.hpp"

#include <algorithm>
#include <set>

namespace bcx {

namespace {

IMat vectors_as_columns(const std::vector<IVec>& vecs, std::size_t dim)
{
    IMat m(dim, vecs.size());
    for (std::size_t j = 0; j < vecs.size(); ++j)
        for (std::size_t i = 0; i < dim; ++i)
            m.at(i, j) = vecs[j][i];
    return m;
}

IVec vec_sub(const IVec& a, const IVec& b)
{
    IVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] - b[i];
    return out;
}

IVec vec_add(const IVec& a, const IVec& b)
{
    IVec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] + b[i];
    return out;
}

bool vec_is_zero(const IVec& v)
{
    for (const Int& x : v)
        if (x != 0)
            return false;
    return true;
}

struct NspanContext {
    const std::vector<IVec>* gens;
    std::vector<std::size_t> nonunit;
    IMat unit_cols;    // ambient x (#unit gens)
    const RatCone* cone;
    IVec height_fn;    // span coordinates
    std::set<IVec> visited;
};

bool nspan_dfs(NspanContext& ctx, const IVec& z)
{
    if (solve_integer(ctx.unit_cols, z).has_value())
        return true;
    if (!ctx.visited.insert(z).second)
        return false;
    for (std::size_t i : ctx.nonunit) {
        const IVec& g = (*ctx.gens)[i];
        IVec next = vec_sub(z, g);
        if (!ctx.cone->span_coords(next).has_value())
            continue;
        if (ctx.cone->eval_span_functional(ctx.height_fn, next) < 0)
            continue;
        if (nspan_dfs(ctx, next))
            return true;
    }
    return false;
}

} // namespace

std::vector<std::pair<IVec, IVec>> canonical_relations(const std::vector<IVec>& gens,
                                                       std::size_t dim)
{
    IMat k = integer_kernel(vectors_as_columns(gens, dim));
    std::vector<std::pair<IVec, IVec>> rels;
    for (std::size_t j = 0; j < k.cols(); ++j) {
        IVec a(gens.size(), Int(0)), b(gens.size(), Int(0));
        for (std::size_t i = 0; i < gens.size(); ++i) {
            if (k.at(i, j) > 0)
                a[i] = k.at(i, j);
            else
                b[i] = -k.at(i, j);
        }
        rels.emplace_back(std::move(a), std::move(b));
    }
    return rels;
}

bool nspan_contains(const std::vector<IVec>& gens, std::size_t ambient_dim, const IVec& z)
{
    RatCone cone(gens, ambient_dim);
    if (!cone.span_coords(z).has_value())
        return false;
    NspanContext ctx;
    ctx.gens = &gens;
    ctx.cone = &cone;
    std::vector<std::size_t> units;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        IVec neg(gens[i].size());
        for (std::size_t c = 0; c < neg.size(); ++c)
            neg[c] = -gens[i][c];
        if (cone.contains(neg))
            units.push_back(i);
        else
            ctx.nonunit.push_back(i);
    }
    std::vector<IVec> unit_vecs;
    for (std::size_t i : units)
        unit_vecs.push_back(gens[i]);
    ctx.unit_cols = vectors_as_columns(unit_vecs, ambient_dim);
    ctx.height_fn = cone.positive_functional_span();
    return nspan_dfs(ctx, z);
}

WeaklyToricMonoid::WeaklyToricMonoid(MonoidPresentation pres, RatCone cone)
    : pres_(std::move(pres)), cone_(std::move(cone))
{
}

WeaklyToricMonoid WeaklyToricMonoid::validate(MonoidPresentation pres)
{
    const std::size_t r = pres.ambient_rank;
    const std::size_t m = pres.generators.size();
    if (m == 0)
        throw std::invalid_argument("validate: empty generator list");
    for (const IVec& g : pres.generators)
        if (g.size() != r)
            throw std::invalid_argument("validate: generator rank mismatch");
    {
        std::set<IVec> seen;
        for (const IVec& g : pres.generators)
            if (!seen.insert(g).second)
                throw std::invalid_argument("validate: duplicate generator " + to_string(g));
    }

    // Relations must hold in the ambient lattice.
    for (std::size_t k = 0; k < pres.relations.size(); ++k) {
        const auto& [a, b] = pres.relations[k];
        if (a.size() != m || b.size() != m)
            throw std::invalid_argument("validate: relation arity mismatch");
        for (const Int& x : a)
            if (x < 0)
                throw std::invalid_argument("validate: negative relation coefficient");
        for (const Int& x : b)
            if (x < 0)
                throw std::invalid_argument("validate: negative relation coefficient");
        IVec diff(r, Int(0));
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t c = 0; c < r; ++c)
                diff[c] += (a[i] - b[i]) * pres.generators[i][c];
        if (!vec_is_zero(diff))
            raise(Errc::NotIntegral, "relation " + std::to_string(k + 1) +
                                         " fails in the ambient lattice; difference " +
                                         to_string(diff));
    }

    // Torsion-freeness of the presented group Z^m / (relation lattice).
    if (!pres.relations.empty()) {
        IMat rel(m, pres.relations.size());
        for (std::size_t k = 0; k < pres.relations.size(); ++k)
            for (std::size_t i = 0; i < m; ++i)
                rel.at(i, k) = pres.relations[k].first[i] - pres.relations[k].second[i];
        auto factors = snf_invariant_factors(rel);
        bool torsion = false;
        for (const Int& d : factors)
            if (d > 1)
                torsion = true;
        if (torsion) {
            IMat sat = saturate_lattice(rel);
            for (std::size_t j = 0; j < sat.cols(); ++j) {
                IVec w = sat.col(j);
                if (!solve_integer(rel, w).has_value()) {
                    Int order(2);
                    while (true) {
                        IVec dw(w.size());
                        for (std::size_t i = 0; i < w.size(); ++i)
                            dw[i] = order * w[i];
                        if (solve_integer(rel, dw).has_value())
                            break;
                        ++order;
                    }
                    raise(Errc::HasTorsion,
                          "combination " + to_string(w) + " of generators has order " +
                              order.str() + " in the presented group");
                }
            }
            raise(Errc::HasTorsion, "presented group has torsion");
        }
    }

    RatCone cone(pres.generators, r);

    // Saturation: every lattice point of the generator zonotope's coordinate
    // box lying in cone ∩ P^gp must be an N-combination of the generators.
    {
        IVec lo(r, Int(0)), hi(r, Int(0));
        for (const IVec& g : pres.generators)
            for (std::size_t c = 0; c < r; ++c) {
                if (g[c] < 0)
                    lo[c] += g[c];
                else
                    hi[c] += g[c];
            }
        Int count(1);
        for (std::size_t c = 0; c < r; ++c)
            count *= (hi[c] - lo[c] + 1);
        if (count > 4000000)
            raise(Errc::RankOverflow, "saturation check box has " + count.str() +
                                          " lattice points; presentation too large");
        IMat gen_cols = vectors_as_columns(pres.generators, r);
        std::vector<IVec> candidates;
        IVec cur = lo;
        while (true) {
            if (!vec_is_zero(cur) && cone.contains(cur) &&
                solve_integer(gen_cols, cur).has_value())
                candidates.push_back(cur);
            std::size_t c = 0;
            while (c < r && cur[c] == hi[c]) {
                cur[c] = lo[c];
                ++c;
            }
            if (c == r)
                break;
            ++cur[c];
        }
        std::sort(candidates.begin(), candidates.end(), [](const IVec& x, const IVec& y) {
            Int sx(0), sy(0);
            for (const Int& v : x)
                sx += boost::multiprecision::abs(v);
            for (const Int& v : y)
                sy += boost::multiprecision::abs(v);
            if (sx != sy)
                return sx < sy;
            return x < y;
        });
        for (const IVec& z : candidates)
            if (!nspan_contains(pres.generators, r, z))
                raise(Errc::NotSaturated, to_string(z));
    }

    WeaklyToricMonoid p(std::move(pres), std::move(cone));
    p.gp_basis_ = lattice_basis(vectors_as_columns(p.pres_.generators, r));
    const std::size_t n = p.gp_basis_.cols();

    // Unit lattice P^x = lineality ∩ P^gp, in gp coordinates.
    IMat lin = p.cone_.lineality_basis(); // ambient x l, saturated in Z^r
    {
        QMat lin_q = to_rational(lin);
        QMat left = kernel_basis(lin_q.transpose()); // normals to the lineality span
        IMat na(left.cols(), r);
        for (std::size_t j = 0; j < left.cols(); ++j) {
            IVec nv = to_integer_scaled(left.col(j));
            for (std::size_t c = 0; c < r; ++c)
                na.at(j, c) = nv[c];
        }
        // rows of (na * gp_basis) must vanish on gp coordinates of units
        IMat nb(na.rows(), n);
        for (std::size_t i = 0; i < na.rows(); ++i)
            for (std::size_t j = 0; j < n; ++j) {
                Int acc(0);
                for (std::size_t c = 0; c < r; ++c)
                    acc += na.at(i, c) * p.gp_basis_.at(c, j);
                nb.at(i, j) = acc;
            }
        p.unit_coord_basis_ = integer_kernel(nb); // n x u
    }
    const std::size_t u = p.unit_coord_basis_.cols();
    for (std::size_t j = 0; j < u; ++j) {
        IVec amb(r, Int(0));
        for (std::size_t c = 0; c < r; ++c)
            for (std::size_t i = 0; i < n; ++i)
                amb[c] += p.gp_basis_.at(c, i) * p.unit_coord_basis_.at(i, j);
        p.unit_basis_.push_back(std::move(amb));
    }

    // Projection to the sharp quotient in gp coordinates, with a section.
    if (u == 0) {
        p.quotient_map_ = IMat::identity(n);
        p.quotient_section_ = IMat::identity(n);
    } else {
        IMat t = integer_kernel(p.unit_coord_basis_.transpose()); // n x (n-u)
        p.quotient_map_ = t.transpose();                          // (n-u) x n
        p.quotient_section_ = IMat(n, n - u);
        for (std::size_t i = 0; i < n - u; ++i) {
            IVec e(n - u, Int(0));
            e[i] = 1;
            auto s = solve_integer(p.quotient_map_, e);
            if (!s)
                throw std::logic_error("validate: quotient projection not surjective");
            p.quotient_section_.set_col(i, *s);
        }
        // Build and validate the sharp quotient presentation.
        std::vector<IVec> qgens;
        std::set<IVec> seen;
        for (const IVec& g : p.pres_.generators) {
            IVec y = *solve_integer(p.gp_basis_, g);
            IVec img = p.quotient_map_ * y;
            if (seen.insert(img).second)
                qgens.push_back(img);
        }
        MonoidPresentation qpres;
        qpres.ambient_rank = n - u;
        qpres.generators = qgens;
        qpres.relations = canonical_relations(qgens, n - u);
        p.sharp_quotient_ =
            std::make_shared<const WeaklyToricMonoid>(validate(std::move(qpres)));
    }
    return p;
}

bool WeaklyToricMonoid::contains(const IVec& z) const
{
    return gp_coords(z).has_value() && cone_.contains(z);
}

std::optional<IVec> WeaklyToricMonoid::gp_coords(const IVec& z) const
{
    return solve_integer(gp_basis_, z);
}

IVec WeaklyToricMonoid::from_gp_coords(const IVec& y) const
{
    IVec z(pres_.ambient_rank, Int(0));
    for (std::size_t c = 0; c < pres_.ambient_rank; ++c)
        for (std::size_t i = 0; i < gp_basis_.cols(); ++i)
            z[c] += gp_basis_.at(c, i) * y[i];
    return z;
}

std::pair<IVec, IVec> WeaklyToricMonoid::split_gp(const IVec& z) const
{
    auto y = gp_coords(z);
    if (!y)
        raise(Errc::NotInMonoid, to_string(z) + " is not in P^gp");
    IVec q = quotient_map_ * *y;
    IVec back = quotient_section_ * q;
    IVec diff = vec_sub(*y, back);
    auto unit = solve_integer(unit_coord_basis_, diff);
    if (!unit)
        throw std::logic_error("split_gp: unit component failed");
    return {q, *unit};
}

const std::vector<IVec>& WeaklyToricMonoid::irreducibles() const
{
    if (!is_sharp())
        raise(Errc::NotSharp, "irreducibles require a sharp monoid; unit " +
                                  to_string(unit_basis_.front()) + " present");
    if (!irreducibles_ready_) {
        for (const IVec& g : pres_.generators) {
            if (vec_is_zero(g))
                continue;
            bool reducible = false;
            for (const IVec& h : pres_.generators) {
                if (vec_is_zero(h))
                    continue;
                IVec diff = vec_sub(g, h);
                if (!vec_is_zero(diff) && contains(diff)) {
                    reducible = true;
                    break;
                }
                if (vec_is_zero(diff) && &g != &h)
                    reducible = true;
            }
            if (!reducible)
                irreducibles_.push_back(g);
        }
        std::sort(irreducibles_.begin(), irreducibles_.end());
        irreducibles_ready_ = true;
    }
    return irreducibles_;
}

unsigned WeaklyToricMonoid::level(const IVec& q) const
{
    if (!is_sharp())
        raise(Errc::NotSharp, "level requires a sharp monoid");
    if (!contains(q))
        raise(Errc::NotInMonoid, to_string(q));
    if (vec_is_zero(q))
        return 0;
    auto it = level_memo_.find(q);
    if (it != level_memo_.end())
        return it->second;
    unsigned best = 1;
    for (const IVec& w : irreducibles()) {
        IVec rest = vec_sub(q, w);
        if (vec_is_zero(rest))
            continue; // level 1 via w = q already accounted
        if (contains(rest))
            best = std::max(best, 1 + level(rest));
    }
    level_memo_.emplace(q, best);
    return best;
}

std::vector<Face> enumerate_faces(const WeaklyToricMonoid& p)
{
    const auto& gens = p.presentation().generators;
    const auto& normals = p.cone().facet_normals();
    const std::size_t nf = normals.size();
    if (nf > 24)
        raise(Errc::RankOverflow, "face enumeration over " + std::to_string(nf) + " facets");

    // Precompute normal values on each generator (span coordinates).
    std::vector<std::vector<bool>> tight(nf, std::vector<bool>(gens.size()));
    for (std::size_t f = 0; f < nf; ++f)
        for (std::size_t i = 0; i < gens.size(); ++i)
            tight[f][i] = p.cone().eval_span_functional(normals[f], gens[i]) == 0;

    std::set<std::vector<std::size_t>> seen;
    std::vector<Face> faces;
    for (std::size_t mask = 0; mask < (std::size_t(1) << nf); ++mask) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < gens.size(); ++i) {
            bool in = true;
            for (std::size_t f = 0; f < nf; ++f)
                if ((mask >> f) & 1u)
                    in = in && tight[f][i];
            if (in)
                idx.push_back(i);
        }
        if (!seen.insert(idx).second)
            continue;
        std::vector<IVec> fg;
        for (std::size_t i : idx)
            fg.push_back(gens[i]);
        std::size_t rank = fg.empty() ? 0 : rank_of(to_rational(vectors_as_columns(
                                                fg, p.ambient_rank())));
        faces.push_back(Face{idx, p.gp_rank() - rank});
    }
    std::sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
        if (a.codim != b.codim)
            return a.codim < b.codim;
        return a.generator_indices < b.generator_indices;
    });
    return faces;
}

std::pair<WeaklyToricMonoid, std::size_t> split_units(const WeaklyToricMonoid& p)
{
    if (p.is_sharp())
        return {p, 0};
    return {*p.sharp_quotient(), p.unit_rank()};
}

WeaklyToricMonoid dual_monoid(const WeaklyToricMonoid& p)
{
    const std::size_t n = p.gp_rank();
    // Transport facet normals from span coordinates to functionals on the
    // gp basis: u' = M^T u with M = span coords of the gp basis columns.
    std::vector<IVec> rays;
    for (const IVec& u : p.cone().facet_normals()) {
        IVec ray(n, Int(0));
        for (std::size_t j = 0; j < n; ++j) {
            auto coords = p.cone().span_coords(p.gp_basis().col(j));
            Rat acc(0);
            for (std::size_t c = 0; c < u.size(); ++c)
                acc += (*coords)[c] * Rat(u[c]);
            if (acc.denominator() != 1)
                throw std::logic_error("dual_monoid: non-integral transported normal");
            ray[j] = acc.numerator();
        }
        rays.push_back(ray);
    }
    std::vector<IVec> hb = hilbert_basis_pointed(rays, n);
    MonoidPresentation dual;
    dual.ambient_rank = n;
    if (hb.empty())
        hb.push_back(IVec(n, Int(0)));
    dual.generators = hb;
    dual.relations = canonical_relations(hb, n);
    return WeaklyToricMonoid::validate(std::move(dual));
}

EtaCheck eta_double_dual(const WeaklyToricMonoid& p)
{
    EtaCheck out;
    WeaklyToricMonoid d1 = dual_monoid(p);
    WeaklyToricMonoid d2 = dual_monoid(d1);
    const IMat& b1 = d1.gp_basis(); // n x n1
    out.injective = rank_of(to_rational(b1)) == p.gp_rank();
    bool all_members = true;
    for (const IVec& g : p.presentation().generators) {
        auto y = p.gp_coords(g);
        IVec img(b1.cols(), Int(0));
        for (std::size_t j = 0; j < b1.cols(); ++j)
            for (std::size_t i = 0; i < b1.rows(); ++i)
                img[j] += b1.at(i, j) * (*y)[i];
        all_members = all_members && d2.contains(img);
        out.images.push_back(std::move(img));
    }
    out.injective = out.injective && all_members;
    // Surjectivity on generators: every generator of (P^∨)^∨ is the image of
    // a monoid element.
    IMat b1t = b1.transpose();
    out.surjective_on_generators = true;
    for (const IVec& h : d2.presentation().generators) {
        auto y = solve_integer(b1t, h);
        bool hit = y.has_value() && p.contains(p.from_gp_coords(*y));
        out.surjective_on_generators = out.surjective_on_generators && hit;
    }
    return out;
}

std::vector<FiltrationLayer> filtration_layers(const WeaklyToricMonoid& q, unsigned n_max)
{
    if (!q.is_sharp())
        raise(Errc::NotSharp, "filtration requires a sharp monoid; unit " +
                                  to_string(q.unit_lattice_basis().front()) + " present");
    std::vector<FiltrationLayer> layers;
    layers.push_back(FiltrationLayer{0, {IVec(q.ambient_rank(), Int(0))}});
    std::set<IVec> cands = {IVec(q.ambient_rank(), Int(0))};
    for (unsigned n = 1; n <= n_max; ++n) {
        std::set<IVec> next;
        for (const IVec& c : cands)
            for (const IVec& w : q.irreducibles())
                next.insert(vec_add(c, w));
        FiltrationLayer layer;
        layer.level = n;
        for (const IVec& z : next)
            if (q.level(z) == n)
                layer.elements.push_back(z);
        std::sort(layer.elements.begin(), layer.elements.end());
        layers.push_back(std::move(layer));
        cands = std::move(next);
    }
    return layers;
}

} // namespace bcx

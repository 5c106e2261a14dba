#include "bcx/formal_nn.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace bcx {

namespace {

unsigned level_of_key(const Chart& chart, const std::vector<std::int64_t>& q)
{
    bool zero = true;
    for (std::int64_t v : q)
        if (v != 0)
            zero = false;
    if (zero)
        return 0;
    IVec gp(q.size());
    for (std::size_t i = 0; i < q.size(); ++i)
        gp[i] = Int(q[i]);
    return chart.sharp->level(chart.sharp->from_gp_coords(gp));
}

void require_on_v(const CoeffElement& f, const char* what)
{
    for (const auto& [key, c] : f.terms())
        for (std::int64_t v : key.q)
            if (v != 0)
                throw std::invalid_argument(
                    std::string(what) + ": coefficient does not restrict to V");
}

void add_component(std::map<std::vector<std::size_t>, CoeffElement>& comps,
                   const std::vector<std::size_t>& idx, const CoeffElement& f)
{
    auto it = comps.find(idx);
    if (it == comps.end()) {
        if (!f.is_zero())
            comps.emplace(idx, f);
        return;
    }
    it->second += f;
    if (it->second.is_zero())
        comps.erase(it);
}

// D_l on functions on V: (1/2) d/dtheta_l for l < k, d/dzbar_{l-k} above.
CoeffElement stratum_derive(const CoeffElement& f, std::size_t l)
{
    const Chart& c = f.chart();
    GRat half(Rat(Int(1), Int(2)));
    if (l < c.k())
        return frame_derive(f, c.n() + l) * half;
    return (frame_derive(f, l) + frame_derive(f, c.n() + l) * grat_i()) * half;
}

GRat gpow_unit(const GRat& g, std::int64_t e)
{
    GRat base = e < 0 ? g.conj() : g; // |g| = 1, so conj is the inverse
    std::int64_t r = e < 0 ? -e : e;
    GRat out(1);
    for (std::int64_t i = 0; i < r; ++i)
        out *= base;
    return out;
}

} // namespace

JetIdealOrder ideal_order(const CoeffElement& f)
{
    JetIdealOrder out{f, std::nullopt};
    for (const auto& [key, c] : f.terms()) {
        unsigned lev = level_of_key(f.chart(), key.q);
        if (!out.order || lev < *out.order)
            out.order = lev;
    }
    return out;
}

std::map<std::vector<std::int64_t>, CoeffElement>
layer_decomposition(const CoeffElement& f, unsigned level)
{
    std::map<std::vector<std::int64_t>, CoeffElement> out;
    for (const auto& [key, c] : f.terms()) {
        if (level_of_key(f.chart(), key.q) != level)
            continue;
        auto it = out.find(key.q);
        if (it == out.end())
            it = out.emplace(key.q, CoeffElement(f.chart())).first;
        MonoKey cleared = key;
        cleared.q.assign(key.q.size(), 0);
        it->second.insert_term(cleared, c);
    }
    return out;
}

bool layer_independence_check(
    const Chart& chart,
    const std::vector<std::pair<std::vector<std::int64_t>, CoeffElement>>& terms,
    unsigned level)
{
    std::set<std::vector<std::int64_t>> seen;
    for (const auto& [q, f] : terms) {
        if (!seen.insert(q).second)
            throw std::invalid_argument(
                "layer_independence_check: duplicate mu-key");
        if (level_of_key(chart, q) != level)
            throw std::invalid_argument(
                "layer_independence_check: key not in the stated layer");
        require_same_chart(chart, f.chart());
    }

    CoeffElement sum(chart);
    std::map<std::vector<std::int64_t>, CoeffElement> expected;
    for (const auto& [q, f] : terms) {
        MonoKey mu;
        mu.q = q;
        mu.m.assign(chart.k(), 0);
        mu.a.assign(chart.extra, 0);
        mu.b.assign(chart.extra, 0);
        sum += CoeffElement::monomial(chart, mu, GRat(1)) * f;
        CoeffElement r = f.restrict_V();
        if (!r.is_zero())
            expected.emplace(q, std::move(r));
    }

    auto got = layer_decomposition(sum, level);
    if (got.size() != expected.size())
        return false;
    for (const auto& [q, f] : expected) {
        auto it = got.find(q);
        if (it == got.end() || !(it->second == f))
            return false;
    }
    return true;
}

StratumForm StratumForm::function(const Chart& c, const CoeffElement& f)
{
    StratumForm out(c, 0);
    out.insert({}, f);
    return out;
}

CoeffElement StratumForm::component(const std::vector<std::size_t>& idx) const
{
    auto it = components.find(idx);
    return it == components.end() ? CoeffElement(chart) : it->second;
}

void StratumForm::insert(const std::vector<std::size_t>& idx,
                         const CoeffElement& f)
{
    if (idx.size() != degree)
        throw std::invalid_argument("StratumForm: index tuple of wrong size");
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] >= chart.n())
            throw std::invalid_argument("StratumForm: index out of range");
        if (i + 1 < idx.size() && !(idx[i] < idx[i + 1]))
            throw std::invalid_argument(
                "StratumForm: index tuple not strictly increasing");
    }
    require_same_chart(chart, f.chart());
    require_on_v(f, "StratumForm");
    add_component(components, idx, f);
}

bool StratumForm::is_zero() const
{
    for (const auto& [idx, f] : components)
        if (!f.is_zero())
            return false;
    return true;
}

bool StratumForm::operator==(const StratumForm& o) const
{
    if (!same_chart(chart, o.chart) || degree != o.degree)
        return false;
    return components == o.components;
}

StratumForm dbar_Sk(const StratumForm& alpha)
{
    const Chart& c = alpha.chart;
    StratumForm out(c, alpha.degree + 1);
    for (const auto& [idx, f] : alpha.components) {
        for (std::size_t l = 0; l < c.n(); ++l) {
            if (std::find(idx.begin(), idx.end(), l) != idx.end())
                continue;
            CoeffElement df = stratum_derive(f, l);
            if (df.is_zero())
                continue;
            std::vector<std::size_t> target = idx;
            std::size_t before =
                std::lower_bound(target.begin(), target.end(), l) -
                target.begin();
            target.insert(target.begin() + before, l);
            bool negate = before % 2 == 1;
            add_component(out.components, target, negate ? -df : df);
        }
    }
    return out;
}

StratumForm poincare_solve(const StratumForm& beta, unsigned degree,
                           const GRat& constant_shift)
{
    if (degree < 1 || beta.degree != degree)
        throw std::invalid_argument("poincare_solve: degree mismatch");
    const Chart& chart = beta.chart;
    const std::size_t n = chart.n();
    const std::size_t nz = chart.extra;

    if (!dbar_Sk(beta).is_zero())
        raise(Errc::NotClosed, "input form is not dbar_Sk-closed");

    // block key: (Fourier index m, holomorphic z-exponent a)
    using Block = std::pair<std::vector<std::int64_t>, std::vector<std::uint32_t>>;
    // coordinate inside a block: (index tuple, zbar exponent b)
    using Coord = std::pair<std::vector<std::size_t>, std::vector<std::uint32_t>>;
    std::map<Block, std::map<Coord, GRat>> blocks;
    for (const auto& [idx, f] : beta.components)
        for (const auto& [key, c] : f.terms())
            blocks[{key.m, key.a}][{idx, key.b}] += c;

    // strictly increasing (degree-1)-tuples from {0..n-1}, lex order
    std::vector<std::vector<std::size_t>> tuples;
    std::vector<std::size_t> cur;
    auto gen = [&](auto&& self, std::size_t start) -> void {
        if (cur.size() == degree - 1) {
            tuples.push_back(cur);
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    gen(gen, 0);

    StratumForm out(chart, degree - 1);
    for (const auto& [bk, rhs] : blocks) {
        const auto& [mkey, akey] = bk;
        std::vector<std::uint32_t> bmax(nz, 0);
        for (const auto& [coord, c] : rhs)
            for (std::size_t j = 0; j < nz; ++j)
                bmax[j] = std::max(bmax[j], coord.second[j]);

        // enumerate candidate zbar exponents b' <= bmax + 1 componentwise
        std::vector<std::vector<std::uint32_t>> bexps;
        std::vector<std::uint32_t> bcur(nz, 0);
        auto genb = [&](auto&& self, std::size_t j) -> void {
            if (j == nz) {
                bexps.push_back(bcur);
                return;
            }
            for (std::uint32_t v = 0; v <= bmax[j] + 1; ++v) {
                bcur[j] = v;
                self(self, j + 1);
            }
            bcur[j] = 0;
        };
        genb(genb, 0);

        struct Unknown {
            std::vector<std::size_t> idx;
            std::vector<std::uint32_t> b;
            std::map<Coord, GRat> image;
        };
        std::vector<Unknown> unknowns;
        std::set<Coord> rows;
        for (const auto& [coord, c] : rhs)
            rows.insert(coord);
        for (const auto& S : tuples)
            for (const auto& b : bexps) {
                MonoKey key;
                key.q.assign(chart.k(), 0);
                key.m = mkey;
                key.a = akey;
                key.b = b;
                StratumForm basis(chart, degree - 1);
                basis.insert(S, CoeffElement::monomial(chart, key, GRat(1)));
                StratumForm img = dbar_Sk(basis);
                Unknown u{S, b, {}};
                for (const auto& [idx, f] : img.components)
                    for (const auto& [tkey, c] : f.terms()) {
                        u.image[{idx, tkey.b}] += c;
                        rows.insert({idx, tkey.b});
                    }
                unknowns.push_back(std::move(u));
            }

        std::vector<Coord> row_list(rows.begin(), rows.end());
        Mat<GRat> a(row_list.size(), unknowns.size());
        std::vector<GRat> rhsvec(row_list.size());
        for (std::size_t r = 0; r < row_list.size(); ++r) {
            auto it = rhs.find(row_list[r]);
            if (it != rhs.end())
                rhsvec[r] = it->second;
            for (std::size_t cu = 0; cu < unknowns.size(); ++cu) {
                auto jt = unknowns[cu].image.find(row_list[r]);
                if (jt != unknowns[cu].image.end())
                    a.at(r, cu) = jt->second;
            }
        }
        auto sol = solve_linear(a, rhsvec);
        if (!sol)
            raise(Errc::NotExact,
                  "closed form is not in the image (corrupted block)");
        for (std::size_t cu = 0; cu < unknowns.size(); ++cu) {
            if ((*sol)[cu].is_zero())
                continue;
            MonoKey key;
            key.q.assign(chart.k(), 0);
            key.m = mkey;
            key.a = akey;
            key.b = unknowns[cu].b;
            add_component(out.components, unknowns[cu].idx,
                          CoeffElement::monomial(chart, key, (*sol)[cu]));
        }
    }

    if (degree == 1 && !constant_shift.is_zero())
        add_component(out.components, {},
                      CoeffElement::constant(chart, constant_shift));
    return out;
}

CoeffElement truncate_order(const CoeffElement& f, unsigned n_target)
{
    CoeffElement out(f.chart());
    for (const auto& [key, c] : f.terms())
        if (level_of_key(f.chart(), key.q) < n_target)
            out.insert_term(key, c);
    return out;
}

CoeffElement exp_trunc(const CoeffElement& f, unsigned n_target)
{
    auto o = ideal_order(f).order;
    if (o && *o < 1)
        throw std::invalid_argument("exp_trunc: argument must lie in I^1");
    CoeffElement acc = CoeffElement::constant(f.chart(), GRat(1));
    CoeffElement term = acc;
    for (unsigned r = 1; r < n_target; ++r) {
        term = truncate_order(term * f, n_target) * GRat(Rat(Int(1), Int(r)));
        if (term.is_zero())
            break;
        acc += term;
    }
    return acc;
}

SeedChart standard_seed(const Chart& chart)
{
    SeedChart seed{chart, {}, {}, {}};
    const std::size_t n = chart.n();
    for (std::size_t a = 0; a < chart.k(); ++a) {
        BCovector om(chart);
        om.comp[a] = CoeffElement::constant(chart, GRat(1));
        seed.omega_star.push_back(om);
        BCovector dt(chart);
        dt.comp[n + a] = CoeffElement::constant(chart, GRat(1));
        seed.dtheta_star.push_back(dt);
    }
    for (std::size_t j = 0; j < chart.extra; ++j)
        seed.z_star.push_back(CoeffElement::z_var(chart, j));
    return seed;
}

CoeffElement
CorrectedChart::corrected_monomial(const std::vector<std::int64_t>& q) const
{
    CoeffElement t(chart);
    for (std::size_t a = 0; a < chart.k(); ++a)
        if (q[a] != 0)
            t += G[a] * GRat(Rat(Int(q[a])));
    CoeffElement out = CoeffElement::hol_monomial(chart, q) *
                       exp_trunc(t, truncation_order);
    GRat scale(1);
    for (std::size_t a = 0; a < chart.k(); ++a)
        scale *= gpow_unit(gauge[a], q[a]);
    return out * scale;
}

std::pair<CorrectionFamily, CorrectedChart>
correct_to_order(const BACS& J, const SeedChart& seed, unsigned n_target,
                 const std::vector<GRat>& gauge)
{
    const Chart& chart = J.chart;
    require_same_chart(chart, seed.chart);
    const std::size_t k = chart.k();
    const std::size_t n = chart.n();
    const std::size_t nz = chart.extra;
    if (seed.omega_star.size() != k || seed.dtheta_star.size() != k ||
        seed.z_star.size() != nz)
        throw std::invalid_argument("correct_to_order: seed sizes do not "
                                    "match the chart");
    std::vector<GRat> gvec = gauge.empty() ? std::vector<GRat>(k, GRat(1))
                                           : gauge;
    if (gvec.size() != k)
        throw std::invalid_argument("correct_to_order: gauge size");
    for (const GRat& g : gvec)
        if (g.norm2() != Rat(1))
            throw std::invalid_argument(
                "correct_to_order: gauge constants must have unit modulus");
    if (n_target < 1)
        throw std::invalid_argument("correct_to_order: order must be >= 1");

    GRat i1 = grat_i();
    std::vector<CoeffElement> G(k, CoeffElement(chart));
    std::vector<CoeffElement> h(nz, CoeffElement(chart));
    CorrectionFamily fam;

    auto residual = [&](std::size_t d) {
        if (d < k)
            return proj01(J, seed.omega_star[d] + seed.dtheta_star[d] * i1 +
                                 b_differential(G[d]));
        return proj01(J, b_differential(seed.z_star[d - k] + h[d - k]));
    };
    auto min_order = [&](const BCovector& xi) -> std::optional<unsigned> {
        std::optional<unsigned> best;
        for (const CoeffElement& f : xi.comp) {
            auto o = ideal_order(f).order;
            if (o && (!best || *o < *best))
                best = o;
        }
        return best;
    };
    auto dir_name = [&](std::size_t d) {
        return d < k ? "q-direction " + std::to_string(d + 1)
                     : "z_" + std::to_string(d - k + 1);
    };

    for (std::size_t d = 0; d < n; ++d) {
        auto mo = min_order(residual(d));
        if (mo && *mo < 1)
            raise(Errc::PreconditionResidual,
                  dir_name(d) + ": seed residual not in I^1");
    }

    for (unsigned m = 1; m < n_target; ++m) {
        for (std::size_t d = 0; d < n; ++d) {
            BCovector r = residual(d);
            std::set<std::vector<std::int64_t>> keys;
            for (const CoeffElement& f : r.comp)
                for (const auto& [key, c] : f.terms())
                    if (level_of_key(chart, key.q) == m)
                        keys.insert(key.q);
            for (const auto& q : keys) {
                BCovector xiq(chart);
                for (std::size_t l = 0; l < 2 * n; ++l)
                    for (const auto& [key, c] : r.comp[l].terms())
                        if (key.q == q)
                            xiq.comp[l].insert_term(key, c);
                for (const CoeffElement& def : anti_basis_defect(xiq))
                    if (!def.is_zero())
                        raise(Errc::PreconditionResidual,
                              dir_name(d) + " at order " + std::to_string(m) +
                                  ": residual layer is not a (0,1)-form");
                auto beta = anti_basis_components(xiq);
                StratumForm sigma(chart, 1);
                for (std::size_t idx = 0; idx < n; ++idx)
                    if (!beta[idx].is_zero())
                        sigma.insert({idx},
                                     -beta[idx].divide_hol_monomial(q));
                if (!dbar_Sk(sigma).is_zero())
                    raise(Errc::NotIntegrable,
                          "layer residual not dbar_Sk-closed at order " +
                              std::to_string(m) + ", " + dir_name(d) +
                              ", mu-key " + to_string(MonoKey{
                                  q, std::vector<std::int64_t>(k, 0),
                                  std::vector<std::uint32_t>(nz, 0),
                                  std::vector<std::uint32_t>(nz, 0)}));
                StratumForm u = poincare_solve(sigma, 1);
                CoeffElement ufun = u.component({});
                CoeffElement corr = ufun * CoeffElement::hol_monomial(chart, q);
                if (d < k) {
                    G[d] += corr;
                    fam.g.insert_or_assign({d, q}, ufun);
                } else {
                    h[d - k] += corr;
                    fam.h.insert_or_assign({d - k, q}, ufun);
                }
            }
        }
        for (std::size_t d = 0; d < n; ++d) {
            auto mo = min_order(residual(d));
            if (mo && *mo <= m)
                throw std::logic_error(
                    "correct_to_order: residual order did not improve at " +
                    dir_name(d));
        }
    }
    fam.order_reached = n_target;

    CorrectedChart cc{chart, n_target, gvec, G, {}, {}};
    for (std::size_t j = 0; j < nz; ++j)
        cc.z.push_back(seed.z_star[j] + h[j]);
    for (const FiltrationLayer& layer :
         filtration_layers(*chart.sharp, n_target - 1)) {
        if (layer.level == 0)
            continue;
        for (const IVec& amb : layer.elements) {
            IVec gp = *chart.sharp->gp_coords(amb);
            std::vector<std::int64_t> q(gp.size());
            for (std::size_t i = 0; i < gp.size(); ++i)
                q[i] = gp[i].convert_to<std::int64_t>();
            cc.mu.emplace(q, cc.corrected_monomial(q));
        }
    }

    // final certificate: corrected data is holomorphic mod I^{n_target}
    auto check = [&](const CoeffElement& f, const std::string& what) {
        BCovector d = dbar(J, f);
        for (const CoeffElement& comp : d.comp) {
            auto o = ideal_order(comp).order;
            if (o && *o < n_target)
                throw std::logic_error(
                    "correct_to_order: dbar(" + what +
                    ") not in I^" + std::to_string(n_target));
        }
    };
    for (const auto& [q, f] : cc.mu)
        check(f, "corrected monomial");
    for (std::size_t j = 0; j < nz; ++j)
        check(cc.z[j], "z_" + std::to_string(j + 1));

    return {std::move(fam), std::move(cc)};
}

CoeffElement substitution_element(const Chart& chart,
                                  const std::vector<SubstitutionTerm>& terms)
{
    CoeffElement s(chart);
    for (const SubstitutionTerm& t : terms) {
        if (level_of_key(chart, t.q) < 1)
            throw std::invalid_argument(
                "substitution term must lie in I^1 (q != 0)");
        if (t.m == t.q)
            throw std::invalid_argument(
                "substitution term must not be holomorphic (m != q)");
        MonoKey key;
        key.q = t.q;
        key.m = t.m;
        key.a.assign(chart.extra, 0);
        key.b.assign(chart.extra, 0);
        s += CoeffElement::monomial(chart, key, t.c);
    }
    return s;
}

BACS pullback_structure(const Chart& chart,
                        const std::vector<std::vector<SubstitutionTerm>>& subs,
                        std::uint64_t seed)
{
    const std::size_t k = chart.k();
    const std::size_t n = chart.n();
    if (subs.size() != chart.extra)
        throw std::invalid_argument(
            "pullback_structure: one substitution per z variable");

    GRat half(Rat(Int(1), Int(2)));
    GRat mhalf_i(Rat(0), Rat(Int(-1), Int(2)));
    // the differential D of the coordinate change in the frame basis
    std::vector<CoeffElement> dmat(4 * n * n, CoeffElement(chart));
    auto dref = [&](std::size_t r, std::size_t c) -> CoeffElement& {
        return dmat[r * 2 * n + c];
    };
    for (std::size_t j = 0; j < chart.extra; ++j) {
        CoeffElement s = substitution_element(chart, subs[j]);
        CoeffElement re = (s + s.conjugate()) * half;
        CoeffElement im = (s - s.conjugate()) * mhalf_i;
        for (std::size_t a = 0; a < k; ++a) {
            dref(k + j, a) = frame_derive(re, a);
            dref(k + j, n + a) = frame_derive(re, n + a);
            dref(n + k + j, a) = frame_derive(im, a);
            dref(n + k + j, n + a) = frame_derive(im, n + a);
        }
    }

    BACS jst = standard_structure(chart);
    std::vector<CoeffElement> entries = jst.mat;
    // J = J_st + D J_st - J_st D  (exact since D J_st D = 0 and D^2 = 0)
    for (std::size_t r = 0; r < 2 * n; ++r)
        for (std::size_t c = 0; c < 2 * n; ++c) {
            CoeffElement acc(chart);
            for (std::size_t l = 0; l < 2 * n; ++l)
                acc += dref(r, l) * jst.at(l, c) - jst.at(r, l) * dref(l, c);
            entries[r * 2 * n + c] += acc;
        }
    return make_bacs(chart, std::move(entries), seed);
}

BACS twisted_structure(const Chart& chart, std::size_t i0, std::size_t i1,
                       const std::vector<std::int64_t>& q0,
                       const std::vector<std::int64_t>& m0, const GRat& c,
                       std::uint64_t seed)
{
    const std::size_t n = chart.n();
    if (i0 >= n || i1 >= n || i0 == i1)
        throw std::invalid_argument("twisted_structure: need i0 != i1 < n");
    if (level_of_key(chart, q0) < 1)
        throw std::invalid_argument("twisted_structure: q0 must be nonzero");
    MonoKey pl, mi;
    pl.q = q0;
    pl.m = m0;
    pl.a.assign(chart.extra, 0);
    pl.b.assign(chart.extra, 0);
    mi = pl;
    for (auto& v : mi.m)
        v = -v;
    CoeffElement eps = CoeffElement::monomial(chart, pl, c) +
                       CoeffElement::monomial(chart, mi, c);
    BACS j = standard_structure(chart);
    j.at(i1, i0) += eps;
    j.at(n + i1, n + i0) += -eps;
    return make_bacs(chart, j.mat, seed);
}

} // namespace bcx

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bcx/complex_structure.hpp"
#include "oracles.hpp"

#include <complex>
#include <memory>
#include <random>

using namespace bcx;
using namespace bcx_tests;

namespace {

GRat grat(int re, int im = 0, int den = 1)
{
    return GRat{Rat(re, den), Rat(im, den)};
}

Chart chart_of(MonoidPresentation pres, std::size_t extra)
{
    auto p = std::make_shared<const WeaklyToricMonoid>(
        WeaklyToricMonoid::validate(std::move(pres)));
    return make_chart(p, extra);
}

CoeffElement mono(const Chart& c, std::vector<std::int64_t> q,
                  std::vector<std::int64_t> m, std::vector<std::uint32_t> a,
                  std::vector<std::uint32_t> b, const GRat& coeff)
{
    MonoKey key;
    key.q = std::move(q);
    key.m = std::move(m);
    key.a = std::move(a);
    key.b = std::move(b);
    return CoeffElement::monomial(c, key, coeff);
}

std::vector<std::vector<std::int64_t>> qkey_pool(const Chart& chart)
{
    std::vector<std::vector<std::int64_t>> pool;
    for (const FiltrationLayer& layer : filtration_layers(*chart.sharp, 2))
        for (const IVec& q : layer.elements) {
            IVec g = *chart.sharp->gp_coords(q);
            std::vector<std::int64_t> v(g.size());
            for (std::size_t i = 0; i < g.size(); ++i)
                v[i] = g[i].convert_to<std::int64_t>();
            pool.push_back(std::move(v));
        }
    return pool;
}

CoeffElement random_element(const Chart& chart,
                            const std::vector<std::vector<std::int64_t>>& pool,
                            std::mt19937_64& rng, int max_terms = 3)
{
    CoeffElement f(chart);
    int nterms = 1 + static_cast<int>(rng() % max_terms);
    for (int t = 0; t < nterms; ++t) {
        MonoKey key;
        key.q = pool[rng() % pool.size()];
        key.m.resize(chart.k());
        for (auto& mi : key.m)
            mi = static_cast<std::int64_t>(rng() % 5) - 2;
        key.a.resize(chart.extra);
        key.b.resize(chart.extra);
        for (auto& e : key.a)
            e = rng() % 3;
        for (auto& e : key.b)
            e = rng() % 3;
        int re = static_cast<int>(rng() % 7) - 3;
        int im = static_cast<int>(rng() % 7) - 3;
        int den = 1 + static_cast<int>(rng() % 3);
        f += CoeffElement::monomial(chart, key, GRat{Rat(re, den), Rat(im, den)});
    }
    return f;
}

BVectorField random_field(const Chart& chart,
                          const std::vector<std::vector<std::int64_t>>& pool,
                          std::mt19937_64& rng)
{
    BVectorField v(chart);
    for (std::size_t i = 0; i < 2 * chart.n(); ++i)
        if (rng() % 2)
            v.comp[i] = random_element(chart, pool, rng, 2);
    return v;
}

// The twisted test structure on a toric chart: standard except
// J F_{i0} = F_{n+i0} + eps F_{i1}, J F_{n+i0} = -F_{i0} - eps F_{n+i1}.
BACS twisted(const Chart& ch, std::size_t i0, std::size_t i1,
             const CoeffElement& eps)
{
    std::size_t n = ch.n();
    BACS j = standard_structure(ch);
    j.at(i1, i0) += eps;
    j.at(n + i1, n + i0) += -eps;
    return make_bacs(ch, j.mat, 7);
}

ChartPoint vertex_point(const Chart& ch, const GRat& t, std::vector<GRat> z)
{
    QVec vals(ch.sharp->presentation().generators.size(), Rat(0));
    ModelPoint base = ModelPoint::make_exact(ch.sharp, vals);
    std::vector<GRat> theta(ch.k(), t);
    return ChartPoint{base, theta, std::move(z)};
}

} // namespace

TEST_CASE("standard structure is integrable on toric charts")
{
    for (Chart ch : {chart_of(pres_nn(2), 0), chart_of(pres_ex_square(), 0),
                     chart_of(pres_ex_cross(), 1)}) {
        BACS j = make_bacs(ch, standard_structure(ch).mat, 3);
        NijenhuisTensor n = nijenhuis(j);
        CHECK(n.is_zero());
        CHECK(is_integrable(j));
        CHECK(n.comp.empty());
    }
}

TEST_CASE("constant frame permutations pass validation and are integrable")
{
    Chart ch = chart_of(pres_nn(2), 0);
    // J v'_1 = w'_2, J w'_2 = -v'_1, J v'_2 = w'_1, J w'_1 = -v'_2
    BACS j(ch);
    CoeffElement one = CoeffElement::constant(ch, GRat(1));
    j.at(3, 0) = one;
    j.at(0, 3) = -one;
    j.at(2, 1) = one;
    j.at(1, 2) = -one;
    BACS validated = make_bacs(ch, j.mat, 11);
    CHECK(is_integrable(validated));
}

TEST_CASE("make_bacs rejects broken axioms")
{
    Chart ch = chart_of(pres_nn(2), 0);
    CoeffElement one = CoeffElement::constant(ch, GRat(1));

    SUBCASE("J^2 != -id")
    {
        BACS j = standard_structure(ch);
        j.at(0, 2) = one; // sign flip: now J^2 = +id on the first pair
        CHECK_THROWS_AS(make_bacs(ch, j.mat, 1), std::invalid_argument);
    }

    SUBCASE("normal directions not transverse at the vertex")
    {
        // rotate inside the v-block and inside the w-block: J^2 = -id but
        // J maps b-normal directions to b-normal directions
        BACS j(ch);
        j.at(1, 0) = one;
        j.at(0, 1) = -one;
        j.at(3, 2) = one;
        j.at(2, 3) = -one;
        try {
            make_bacs(ch, j.mat, 1);
            FAIL("expected TransversalityViolation");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::TransversalityViolation);
        }
    }

    SUBCASE("entry count mismatch")
    {
        std::vector<CoeffElement> entries(3, one);
        CHECK_THROWS_AS(make_bacs(ch, entries, 1), std::invalid_argument);
    }
}

TEST_CASE("twisted structure matches the hand-computed Nijenhuis tensor")
{
    Chart ch = chart_of(pres_nn(2), 0);
    GRat one(1);
    CoeffElement A = mono(ch, {1, 1}, {1, 2}, {}, {}, one);
    CoeffElement B = mono(ch, {1, 1}, {-1, -2}, {}, {}, one);
    CoeffElement eps = A + B;      // real twist amplitude
    CoeffElement epst = A - B;     // its theta-odd partner
    CHECK(eps.is_real());

    BACS j = twisted(ch, 0, 1, eps);
    NijenhuisTensor n = nijenhuis(j);
    CHECK_FALSE(n.is_zero());
    CHECK_FALSE(is_integrable(j));

    auto f = [&](std::size_t i) { return BVectorField::frame_field(ch, i); };
    GRat i2 = grat(0, 2); // 2i

    // N(F_1, F_2) = 2i epst F_2 - eps F_4 (hand computation, 1-based frames)
    CHECK(n.component(0, 1) == f(1) * (epst * i2) - f(3) * eps);
    CHECK(n.component(0, 2) == f(3) * (eps * eps) - f(1) * (eps * epst * i2));
    CHECK(n.component(0, 3) == BVectorField(ch) - f(1) * eps - f(3) * (epst * i2));
    CHECK(n.component(1, 2) == f(1) * eps + f(3) * (epst * i2));
    CHECK(n.component(1, 3).is_zero());
    CHECK(n.component(2, 3) == f(3) * eps - f(1) * (epst * i2));

    // antisymmetry of the stored tensor
    CHECK(n.component(1, 0) == BVectorField(ch) - n.component(0, 1));
    CHECK(n.component(2, 2).is_zero());

    // every term of every component sits over mu-levels >= 2 (the twist layer)
    for (const auto& [ij, comp] : n.comp)
        for (const CoeffElement& c : comp.comp)
            for (const auto& [key, coeff] : c.terms()) {
                std::int64_t total = 0;
                for (std::int64_t qi : key.q)
                    total += qi;
                CHECK(total >= 2);
            }
}

TEST_CASE("nijenhuis_apply is antisymmetric, tensorial, and frame-consistent")
{
    Chart ch = chart_of(pres_nn(2), 0);
    CoeffElement eps = mono(ch, {1, 0}, {0, 1}, {}, {}, grat(1)) +
                       mono(ch, {1, 0}, {0, -1}, {}, {}, grat(1));
    BACS j = twisted(ch, 0, 1, eps);
    NijenhuisTensor n = nijenhuis(j);

    std::mt19937_64 rng(2024);
    auto pool = qkey_pool(ch);
    for (int trial = 0; trial < 4; ++trial) {
        BVectorField u = random_field(ch, pool, rng);
        BVectorField v = random_field(ch, pool, rng);
        CoeffElement f = random_element(ch, pool, rng);

        BVectorField nuv = nijenhuis_apply(j, u, v);
        CHECK(nijenhuis_apply(j, v, u) == BVectorField(ch) - nuv);
        CHECK(nijenhuis_apply(j, u * f, v) == nuv * f);
        CHECK(nijenhuis_apply(j, u, v * f) == nuv * f);
    }

    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t jj = 0; jj < 4; ++jj) {
            BVectorField direct =
                nijenhuis_apply(j, BVectorField::frame_field(ch, i),
                                BVectorField::frame_field(ch, jj));
            CHECK(direct == n.component(i, jj));
        }
}

TEST_CASE("T^{1,0} sections close under bracket exactly when N = 0")
{
    Chart ch = chart_of(pres_nn(2), 0);
    GRat ione = grat(0, 1);
    CoeffElement eps = mono(ch, {1, 1}, {2, 1}, {}, {}, grat(1)) +
                       mono(ch, {1, 1}, {-2, -1}, {}, {}, grat(1));

    for (bool twist : {false, true}) {
        BACS j = twist ? twisted(ch, 0, 1, eps)
                       : make_bacs(ch, standard_structure(ch).mat, 3);
        // sections P_i = F_i - i J F_i satisfy J P = i P
        bool closed = true;
        for (std::size_t a = 0; a < 4; ++a) {
            BVectorField pa = BVectorField::frame_field(ch, a) -
                              j.column(a) * ione;
            for (std::size_t b = a + 1; b < 4; ++b) {
                BVectorField pb = BVectorField::frame_field(ch, b) -
                                  j.column(b) * ione;
                BVectorField br = lie_bracket(pa, pb);
                // (0,1) projection of the bracket must vanish for closure
                BVectorField p01 = (br + j.apply(br) * ione) * grat(1, 0, 2);
                if (!p01.is_zero())
                    closed = false;
            }
        }
        CHECK(closed == !twist);
        CHECK(closed == is_integrable(j));
    }
}

TEST_CASE("dbar of the standard structure and the antiholomorphic basis")
{
    Chart ch = chart_of(pres_nn(1), 1); // k = 1, one z variable
    BACS j = standard_structure(ch);
    CoeffElement z = CoeffElement::z_var(ch, 0);
    CoeffElement zb = CoeffElement::zbar_var(ch, 0);

    SUBCASE("holomorphic elements are annihilated")
    {
        CHECK(is_holomorphic(j, CoeffElement::hol_monomial(ch, {2})));
        CHECK(is_holomorphic(j, z));
        CHECK(is_holomorphic(j, CoeffElement::hol_monomial(ch, {1}) * z * z));
        CHECK(is_holomorphic(j, CoeffElement::constant(ch, grat(3, -2, 5))));
    }

    SUBCASE("dbar zbar is the antiholomorphic coordinate differential")
    {
        BCovector xi = dbar(j, zb);
        auto beta = anti_basis_components(xi);
        REQUIRE(beta.size() == 2);
        CHECK(beta[0].is_zero());
        CHECK(beta[1] == CoeffElement::constant(ch, GRat(1)));
        for (const CoeffElement& d : anti_basis_defect(xi))
            CHECK(d.is_zero());
        CHECK_FALSE(is_holomorphic(j, zb));
    }

    SUBCASE("dbar of a Fourier monomial")
    {
        // mu^q e^{i m theta} with q = 1, m = 3: beta_1 = (i/2)(m - q) f = i f
        CoeffElement f = mono(ch, {1}, {3}, {0}, {0}, GRat(1));
        BCovector xi = dbar(j, f);
        auto beta = anti_basis_components(xi);
        CHECK(beta[0] == f * grat(0, 1));
        CHECK(beta[1].is_zero());
        for (const CoeffElement& d : anti_basis_defect(xi))
            CHECK(d.is_zero());

        // antiholomorphic monomial mu^q e^{-i q theta}: beta_1 = -i q f
        CoeffElement g = mono(ch, {2}, {-2}, {0}, {0}, GRat(1));
        auto beta2 = anti_basis_components(dbar(j, g));
        CHECK(beta2[0] == g * grat(0, -2));
    }

    SUBCASE("Leibniz rule and projector idempotence")
    {
        std::mt19937_64 rng(77);
        auto pool = qkey_pool(ch);
        for (int trial = 0; trial < 6; ++trial) {
            CoeffElement f = random_element(ch, pool, rng);
            CoeffElement g = random_element(ch, pool, rng);
            BCovector dfg = dbar(j, f * g);
            BCovector df = dbar(j, f);
            BCovector dg = dbar(j, g);
            for (std::size_t l = 0; l < 4; ++l)
                CHECK(dfg.comp[l] == df.comp[l] * g + dg.comp[l] * f);

            BCovector om(ch);
            for (std::size_t l = 0; l < 4; ++l)
                om.comp[l] = random_element(ch, pool, rng, 2);
            BCovector p = proj01(j, om);
            BCovector pp = proj01(j, p);
            for (std::size_t l = 0; l < 4; ++l)
                CHECK(pp.comp[l] == p.comp[l]);
            // projected covectors have vanishing anti-basis defect
            for (const CoeffElement& d : anti_basis_defect(p))
                CHECK(d.is_zero());
        }
    }
}

TEST_CASE("cr_split_at separates the CR directions along strata")
{
    Chart ch = chart_of(pres_nn(1), 1); // n = 2, k = 1
    BACS j = make_bacs(ch, standard_structure(ch).mat, 5);
    GRat t{Rat(3, 5), Rat(4, 5)}; // exact unit modulus

    SUBCASE("vertex stratum")
    {
        ChartPoint pt = vertex_point(ch, t, {grat(1, 1, 2)});
        CRSplitData d = cr_split_at(j, pt);
        CHECK(d.depth == 1);
        CHECK(d.W_basis.rows() == 3);
        CHECK(d.W_basis.cols() == 2);
        CHECK(rank_of(d.W_basis) == 2);
        REQUIRE(d.intersection_basis.cols() == 1);
        // intersection = the theta-direction: anchored rows are
        // (v'_2, w'_1, w'_2); only the w'_1 entry may be nonzero
        CHECK(d.intersection_basis.at(0, 0).is_zero());
        CHECK_FALSE(d.intersection_basis.at(1, 0).is_zero());
        CHECK(d.intersection_basis.at(2, 0).is_zero());
        // conjugate bases
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 2; ++c)
                CHECK(d.Wbar_basis.at(r, c) == d.W_basis.at(r, c).conj());
    }

    SUBCASE("interior")
    {
        ModelPoint base = ModelPoint::make_exact(ch.sharp, {Rat(3, 2)});
        ChartPoint pt{base, {t}, {grat(1, -1, 3)}};
        CRSplitData d = cr_split_at(j, pt);
        CHECK(d.depth == 0);
        CHECK(d.W_basis.rows() == 4);
        CHECK(rank_of(d.W_basis) == 2);
        CHECK(d.intersection_basis.cols() == 0);
        Mat<GRat> joint = d.W_basis;
        (void)joint;
    }

    SUBCASE("intermediate strata are rejected")
    {
        Chart sq = chart_of(pres_ex_square(), 0);
        BACS jsq = standard_structure(sq);
        Face side;
        for (const Face& f : enumerate_faces(*sq.sharp))
            if (f.codim == 1)
                side = f;
        ModelPoint base = sample_point_on_face(sq.sharp, side, 3);
        ChartPoint pt{base, {GRat(1), GRat(1)}, {}};
        try {
            cr_split_at(jsq, pt);
            FAIL("expected UnsupportedFace");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::UnsupportedFace);
        }
    }

    SUBCASE("anchor degeneracy is reported")
    {
        Chart c2 = chart_of(pres_nn(2), 0);
        // J^2 = -id but the eigenbundles are spanned by normal directions;
        // built directly because make_bacs would reject it
        BACS bad(c2);
        CoeffElement one = CoeffElement::constant(c2, GRat(1));
        bad.at(1, 0) = one;
        bad.at(0, 1) = -one;
        bad.at(3, 2) = one;
        bad.at(2, 3) = -one;
        ChartPoint pt = vertex_point(c2, GRat(1), {});
        try {
            cr_split_at(bad, pt);
            FAIL("expected TransversalityViolation");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::TransversalityViolation);
        }
    }

    SUBCASE("vertex of a toric chart with no free factor")
    {
        Chart sq = chart_of(pres_ex_square(), 0);
        BACS jsq = make_bacs(sq, standard_structure(sq).mat, 9);
        ChartPoint pt = vertex_point(sq, t, {});
        CRSplitData d = cr_split_at(jsq, pt);
        CHECK(d.depth == 2);
        CHECK(d.W_basis.rows() == 2);
        CHECK(rank_of(d.W_basis) == 2);
        CHECK(d.intersection_basis.cols() == 2);
        CHECK(rank_of(d.intersection_basis) == 2);
    }
}

TEST_CASE("verify_normal_form accepts the standard frame")
{
    for (Chart ch : {chart_of(pres_nn(1), 1), chart_of(pres_nn(2), 2)}) {
        BACS j = standard_structure(ch);
        NormalFormReport rep = verify_normal_form(j, standard_candidate(ch));
        CHECK(rep.normal_flat_ok);
        CHECK(rep.commute_ok);
        CHECK(rep.anchor_ok);
        CHECK(rep.j_relations_ok);
        CHECK(rep.omega_zero);
        CHECK(rep.all_ok());
    }

    // the twisted structure restricts to the standard one along V, so the
    // standard frame still verifies there
    Chart ch = chart_of(pres_nn(2), 0);
    CoeffElement eps = mono(ch, {1, 1}, {2, 1}, {}, {}, grat(1)) +
                       mono(ch, {1, 1}, {-2, -1}, {}, {}, grat(1));
    BACS jt = twisted(ch, 0, 1, eps);
    CHECK(verify_normal_form(jt, standard_candidate(ch)).all_ok());
}

TEST_CASE("verify_normal_form flags a curved frame through the obstruction")
{
    Chart ch = chart_of(pres_nn(1), 1); // k = 1, n = 2
    BACS j = standard_structure(ch);
    GRat half = grat(1, 0, 2);

    CoeffElement z = CoeffElement::z_var(ch, 0);
    CoeffElement zb = CoeffElement::zbar_var(ch, 0);
    CoeffElement x = (z + zb) * half;
    CoeffElement y = (z - zb) * grat(0, -1, 2);
    CoeffElement f = x * x * y * y;
    CoeffElement fx = x * y * y * grat(2);
    CoeffElement fy = x * x * y * grat(2);

    BVectorField v0 = BVectorField::frame_field(ch, 0);
    BVectorField xk = BVectorField::frame_field(ch, 1);
    BVectorField w0 = BVectorField::frame_field(ch, 2);
    BVectorField wk = BVectorField::frame_field(ch, 3);

    NormalFormCandidate cand;
    cand.v = {v0};
    cand.theta_lift = {w0};
    cand.x_lift = {xk - w0 * (fx * half) - v0 * (fy * half)};
    cand.y_lift = {wk - w0 * (fy * half) + v0 * (fx * half)};

    NormalFormReport rep = verify_normal_form(j, cand);
    CHECK(rep.normal_flat_ok);
    CHECK(rep.anchor_ok);
    CHECK(rep.j_relations_ok);
    CHECK_FALSE(rep.commute_ok);
    CHECK(rep.commute_witness == "[x_1,y_1] != 0");
    CHECK_FALSE(rep.omega_zero);
    CHECK_FALSE(rep.all_ok());

    // the obstruction equals 4i d^2 f / dz dzbar = 2i z zbar
    CoeffElement expected = z * zb * grat(0, 2);
    CHECK(rep.omega[0][0][0] == expected);

    // undoing the correction restores the standard frame, which verifies
    NormalFormCandidate fixed = cand;
    fixed.x_lift = {cand.x_lift[0] + w0 * (fx * half) + v0 * (fy * half)};
    fixed.y_lift = {cand.y_lift[0] + w0 * (fy * half) - v0 * (fx * half)};
    NormalFormReport rep2 = verify_normal_form(j, fixed);
    CHECK(rep2.all_ok());
    CHECK(rep2.omega[0][0][0].is_zero());
}

TEST_CASE("verify_normal_form reports the other defect classes")
{
    Chart ch = chart_of(pres_nn(1), 1);
    BACS j = standard_structure(ch);
    CoeffElement z = CoeffElement::z_var(ch, 0);
    CoeffElement zb = CoeffElement::zbar_var(ch, 0);
    CoeffElement x = (z + zb) * grat(1, 0, 2);
    NormalFormCandidate std_cand = standard_candidate(ch);

    SUBCASE("non-constant normal coefficient")
    {
        NormalFormCandidate c = std_cand;
        c.v[0] = c.v[0] * (CoeffElement::constant(ch, GRat(1)) + x);
        NormalFormReport rep = verify_normal_form(j, c);
        CHECK_FALSE(rep.normal_flat_ok);
        CHECK_FALSE(rep.all_ok());
    }

    SUBCASE("tangential part in a normal candidate")
    {
        NormalFormCandidate c = std_cand;
        c.v[0] = c.v[0] + BVectorField::frame_field(ch, 1);
        NormalFormReport rep = verify_normal_form(j, c);
        CHECK_FALSE(rep.normal_flat_ok);
    }

    SUBCASE("wrong J relation")
    {
        NormalFormCandidate c = std_cand;
        c.y_lift[0] = BVectorField(ch) - c.y_lift[0];
        NormalFormReport rep = verify_normal_form(j, c);
        CHECK_FALSE(rep.j_relations_ok);
        CHECK(rep.j_witness == "J(x_1) != y lift");
    }

    SUBCASE("non-commuting anchors")
    {
        NormalFormCandidate c = std_cand;
        c.y_lift[0] = c.y_lift[0] +
                      BVectorField::frame_field(ch, 2) * x;
        NormalFormReport rep = verify_normal_form(j, c);
        CHECK_FALSE(rep.anchor_ok);
    }

    SUBCASE("theta lift with the wrong anchor")
    {
        NormalFormCandidate c = std_cand;
        c.theta_lift[0] = BVectorField::frame_field(ch, 3);
        NormalFormReport rep = verify_normal_form(j, c);
        CHECK_FALSE(rep.anchor_ok);
    }
}

TEST_CASE("finite differences agree with the symbolic Nijenhuis tensor")
{
    Chart ch = chart_of(pres_nn(2), 0);
    CoeffElement eps = mono(ch, {1, 1}, {1, 2}, {}, {}, grat(1)) +
                       mono(ch, {1, 1}, {-1, -2}, {}, {}, grat(1));
    BACS j = twisted(ch, 0, 1, eps);
    NijenhuisTensor n = nijenhuis(j);

    for (std::vector<double> u :
         {std::vector<double>{0.3, -0.4, 0.7, 0.2},
          std::vector<double>{-0.1, 0.5, -1.2, 0.9}}) {
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t jj = i + 1; jj < 4; ++jj) {
                auto fd = nijenhuis_fd(j, u, i, jj, 1e-4);
                auto ev = nijenhuis_eval(n, u, i, jj);
                for (std::size_t l = 0; l < 4; ++l)
                    CHECK(std::abs(fd[l] - ev[l]) < 1e-6);
            }
    }
}

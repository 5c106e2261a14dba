#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bcx/cone.hpp"
#include "bcx/intlin.hpp"
#include "bcx/rational.hpp"

#include <random>

using namespace bcx;

namespace {

IMat make(std::size_t r, std::size_t c, std::initializer_list<int> vals)
{
    IMat m(r, c);
    auto it = vals.begin();
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m.at(i, j) = Int(*it++);
    return m;
}

IVec iv(std::initializer_list<int> vals)
{
    IVec v;
    for (int x : vals)
        v.emplace_back(x);
    return v;
}

} // namespace

TEST_CASE("rational parse and arithmetic")
{
    CHECK(rat_parse("3/6") == Rat(1, 2));
    CHECK(rat_parse("-4") == Rat(-4));
    CHECK_THROWS_AS(rat_parse("1/0"), Error);
    GRat a(Rat(1, 2), Rat(3));
    GRat b(Rat(2), Rat(-1, 3));
    CHECK((a * b) / b == a);
    CHECK(a.conj().conj() == a);
    CHECK((grat_i() * grat_i()) == GRat(-1));
}

TEST_CASE("rref, solve, kernel, inverse over Q")
{
    QMat a = to_rational(make(3, 3, {1, 1, 0, 0, 1, 1, 1, 0, 1}));
    auto ainv = inverse(a);
    REQUIRE(ainv.has_value());
    CHECK((a * *ainv) == QMat::identity(3));

    QMat b = to_rational(make(2, 4, {1, 2, 3, 4, 2, 4, 6, 8}));
    CHECK(rank_of(b) == 1);
    QMat k = kernel_basis(b);
    CHECK(k.cols() == 3);
    for (std::size_t j = 0; j < k.cols(); ++j) {
        QVec prod = b * k.col(j);
        for (const Rat& x : prod)
            CHECK(x == Rat(0));
    }

    auto sol = solve_linear(to_rational(make(2, 2, {1, 1, 1, -1})), QVec{Rat(3), Rat(1)});
    REQUIRE(sol.has_value());
    CHECK((*sol)[0] == Rat(2));
    CHECK((*sol)[1] == Rat(1));
    CHECK(!solve_linear(to_rational(make(2, 1, {1, 2})), QVec{Rat(1), Rat(3)}).has_value());
}

TEST_CASE("hermite column reduction gives a lattice basis")
{
    IMat a = make(2, 3, {2, 4, 6, 3, 1, 2});
    HnfResult h = hnf_columns(a);
    CHECK(h.rank == 2);
    // A * U == H must hold exactly
    IMat prod = a * h.u;
    CHECK(prod == h.h);
    // every original column lies in the lattice of the basis
    IMat basis = lattice_basis(a);
    for (std::size_t j = 0; j < a.cols(); ++j)
        CHECK(solve_integer(basis, a.col(j)).has_value());
    // and the basis columns lie in the original column lattice
    for (std::size_t j = 0; j < basis.cols(); ++j)
        CHECK(solve_integer(a, basis.col(j)).has_value());
}

TEST_CASE("integer solve distinguishes lattice membership")
{
    IMat a = make(2, 2, {2, 0, 0, 3});
    CHECK(solve_integer(a, iv({4, 9})).has_value());
    CHECK(!solve_integer(a, iv({1, 0})).has_value());
    CHECK(!solve_integer(a, iv({2, 1})).has_value());
    auto x = solve_integer(a, iv({-6, 12}));
    REQUIRE(x.has_value());
    CHECK((*x)[0] == Int(-3));
    CHECK((*x)[1] == Int(4));
}

TEST_CASE("integer kernel")
{
    IMat a = make(1, 3, {1, 2, 3});
    IMat k = integer_kernel(a);
    CHECK(k.cols() == 2);
    for (std::size_t j = 0; j < k.cols(); ++j) {
        IVec prod = a * k.col(j);
        CHECK(prod[0] == Int(0));
    }
    // (1,1,-1) is in the kernel and must be expressible over the basis
    CHECK(solve_integer(k, iv({1, 1, -1})).has_value());
}

TEST_CASE("smith invariant factors")
{
    auto d = snf_invariant_factors(make(2, 2, {2, 0, 0, 3}));
    REQUIRE(d.size() == 2);
    CHECK(d[0] == Int(1));
    CHECK(d[1] == Int(6));

    auto d2 = snf_invariant_factors(make(1, 2, {2, -2}));
    REQUIRE(d2.size() == 1);
    CHECK(d2[0] == Int(2));

    auto d3 = snf_invariant_factors(make(2, 2, {1, 0, 0, 0}));
    REQUIRE(d3.size() == 1);
    CHECK(d3[0] == Int(1));
}

TEST_CASE("lattice saturation")
{
    // columns span 2Z inside Z
    IMat a = make(1, 1, {2});
    IMat s = saturate_lattice(a);
    REQUIRE(s.cols() == 1);
    CHECK(boost::multiprecision::abs(s.at(0, 0)) == Int(1));

    // index-2 sublattice of Z^2 spanned by (1,1),(1,-1)
    IMat b = make(2, 2, {1, 1, 1, -1});
    IMat sb = saturate_lattice(b);
    CHECK(sb.cols() == 2);
    CHECK(solve_integer(sb, iv({1, 0})).has_value());
}

TEST_CASE("cone facets of the square-relation example")
{
    // generators (1,0),(1,2),(1,1): cone spanned by (1,0) and (1,2)
    RatCone c({iv({1, 0}), iv({1, 2}), iv({1, 1})}, 2);
    CHECK(c.dim() == 2);
    CHECK(c.facet_normals().size() == 2);
    CHECK(c.pointed());
    CHECK(c.contains(iv({3, 1})));
    CHECK(c.contains(iv({1, 2})));
    CHECK(!c.contains(iv({0, 1})));
    CHECK(!c.contains(iv({1, 3})));
    CHECK(!c.contains(iv({-1, 0})));
}

TEST_CASE("cone with lineality")
{
    RatCone c({iv({1, 0}), iv({-1, 0}), iv({0, 1})}, 2);
    CHECK(c.dim() == 2);
    CHECK(!c.pointed());
    IMat lin = c.lineality_basis();
    CHECK(lin.cols() == 1);
    CHECK(c.contains(iv({-7, 0})));
    CHECK(!c.contains(iv({0, -1})));
}

TEST_CASE("full-space cone has no facets")
{
    RatCone c({iv({1}), iv({-1})}, 1);
    CHECK(c.facet_normals().empty());
    CHECK(c.contains(iv({-5})));
    CHECK(!c.pointed());
}

TEST_CASE("hilbert basis via zonotope bound")
{
    // dual cone of the square-relation monoid: rays (0,1) and (2,-1)
    auto hb = hilbert_basis_pointed({iv({0, 1}), iv({2, -1})}, 2);
    REQUIRE(hb.size() == 3);
    std::set<IVec> got(hb.begin(), hb.end());
    CHECK(got.count(iv({0, 1})) == 1);
    CHECK(got.count(iv({1, 0})) == 1);
    CHECK(got.count(iv({2, -1})) == 1);

    // the (2,3)-numerical-semigroup cone saturates to N
    auto hb2 = hilbert_basis_pointed({iv({1})}, 1);
    REQUIRE(hb2.size() == 1);
    CHECK(hb2[0] == iv({1}));
}

TEST_CASE("randomized: kernel and hnf consistency")
{
    std::mt19937 rng(20260814);
    std::uniform_int_distribution<int> dist(-5, 5);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t r = 1 + rng() % 4, c = 1 + rng() % 5;
        IMat a(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                a.at(i, j) = Int(dist(rng));
        HnfResult h = hnf_columns(a);
        CHECK((a * h.u) == h.h);
        IMat k = integer_kernel(a);
        for (std::size_t j = 0; j < k.cols(); ++j)
            for (const Int& v : a * k.col(j))
                CHECK(v == Int(0));
        CHECK(k.cols() + rank_of(to_rational(a)) == c);
    }
}

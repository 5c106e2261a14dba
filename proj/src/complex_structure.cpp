#include "bcx/complex_structure.hpp"

#include "bcx/model_space.hpp"

#include <functional>
#include <random>
#include <stdexcept>

namespace bcx {

namespace {

std::size_t dim2n(const Chart& c) { return 2 * c.n(); }

CoeffElement const_one(const Chart& c) { return CoeffElement::constant(c, GRat(1)); }

bool is_constant_value(const CoeffElement& f, const GRat& c)
{
    CoeffElement d = f - CoeffElement::constant(f.chart(), c);
    return d.is_zero();
}

GRat constant_part(const CoeffElement& f)
{
    MonoKey zero;
    zero.q.assign(f.chart().k(), 0);
    zero.m.assign(f.chart().k(), 0);
    zero.a.assign(f.chart().extra, 0);
    zero.b.assign(f.chart().extra, 0);
    return f.coefficient(zero);
}

// Is f a plain constant (single all-zero key or zero)?
bool is_plain_constant(const CoeffElement& f)
{
    return is_constant_value(f, constant_part(f));
}

Mat<GRat> conj_mat(const Mat<GRat>& a)
{
    Mat<GRat> r(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            r.at(i, j) = a.at(i, j).conj();
    return r;
}

Mat<GRat> drop_rows(const Mat<GRat>& a, std::size_t from)
{
    Mat<GRat> r(a.rows() - from, a.cols());
    for (std::size_t i = from; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            r.at(i - from, j) = a.at(i, j);
    return r;
}

Mat<GRat> hcat(const Mat<GRat>& a, const Mat<GRat>& b)
{
    Mat<GRat> r(a.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j)
            r.at(i, j) = a.at(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j)
            r.at(i, a.cols() + j) = b.at(i, j);
    }
    return r;
}

bool mat_is_zero(const Mat<GRat>& a)
{
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!a.at(i, j).is_zero())
                return false;
    return true;
}

Mat<GRat> eval_matrix_at(const BACS& J, const ChartPoint& pt)
{
    const std::size_t d = dim2n(J.chart);
    Mat<GRat> m(d, d);
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c)
            m.at(r, c) = eval_coeff(J.at(r, c), pt);
    return m;
}

// Exact unit-modulus Gaussian rational from a Pythagorean pair.
GRat random_unit(std::mt19937_64& rng)
{
    Int a = Int(1 + static_cast<long>(rng() % 5));
    Int b = Int(static_cast<long>(rng() % 5));
    Rat n2(a * a + b * b);
    return GRat(Rat(a * a - b * b) / n2, Rat(2 * a * b) / n2);
}

GRat random_small(std::mt19937_64& rng)
{
    auto part = [&rng]() {
        long num = static_cast<long>(rng() % 5) - 2;
        long den = 1 + static_cast<long>(rng() % 3);
        return Rat(Int(num), Int(den));
    };
    return GRat(part(), part());
}

} // namespace

BACS::BACS(Chart c) : chart(std::move(c))
{
    mat.assign(dim2n(chart) * dim2n(chart), CoeffElement(chart));
}

const CoeffElement& BACS::at(std::size_t r, std::size_t c) const
{
    return mat[r * dim2n(chart) + c];
}

CoeffElement& BACS::at(std::size_t r, std::size_t c)
{
    return mat[r * dim2n(chart) + c];
}

BVectorField BACS::column(std::size_t c) const
{
    BVectorField v(chart);
    for (std::size_t r = 0; r < dim2n(chart); ++r)
        v.comp[r] = at(r, c);
    return v;
}

BVectorField BACS::apply(const BVectorField& v) const
{
    require_same_chart(chart, v.chart);
    BVectorField out(chart);
    const std::size_t d = dim2n(chart);
    for (std::size_t r = 0; r < d; ++r) {
        CoeffElement acc(chart);
        for (std::size_t c = 0; c < d; ++c)
            acc += at(r, c) * v.comp[c];
        out.comp[r] = acc;
    }
    return out;
}

BCovector BACS::pullback(const BCovector& om) const
{
    require_same_chart(chart, om.chart);
    BCovector out(chart);
    const std::size_t d = dim2n(chart);
    for (std::size_t c = 0; c < d; ++c) {
        CoeffElement acc(chart);
        for (std::size_t l = 0; l < d; ++l)
            acc += at(l, c) * om.comp[l];
        out.comp[c] = acc;
    }
    return out;
}

BACS standard_structure(const Chart& chart)
{
    BACS j(chart);
    const std::size_t n = chart.n();
    for (std::size_t a = 0; a < n; ++a) {
        j.at(n + a, a) = const_one(chart);          // J v'_a = w'_a
        j.at(a, n + a) = -const_one(chart);         // J w'_a = -v'_a
    }
    return j;
}

BACS make_bacs(Chart chart, std::vector<CoeffElement> entries,
               std::uint64_t seed, int samples_per_stratum)
{
    const std::size_t d = 2 * chart.n();
    if (entries.size() != d * d)
        throw std::invalid_argument("make_bacs: expected " +
                                    std::to_string(d * d) + " entries, got " +
                                    std::to_string(entries.size()));
    BACS j(chart);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        require_same_chart(chart, entries[i].chart());
        j.mat[i] = std::move(entries[i]);
    }

    // exact axiom: J^2 = -id in the coefficient ring
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            CoeffElement acc(chart);
            for (std::size_t l = 0; l < d; ++l)
                acc += j.at(r, l) * j.at(l, c);
            CoeffElement expect =
                (r == c) ? -const_one(chart) : CoeffElement(chart);
            if (!(acc == expect))
                throw std::invalid_argument(
                    "make_bacs: J^2 != -id at entry (" + std::to_string(r) +
                    "," + std::to_string(c) + ")");
        }
    }

    // sampled transversality along every stratum of the sharp factor
    const std::size_t k = chart.k();
    std::mt19937_64 rng(seed);
    for (const Face& face : enumerate_faces(*chart.sharp)) {
        // b-normal directions: v'_beta for integer beta orthogonal to the
        // gp-coordinates of every face generator
        std::vector<IVec> gens_gp;
        for (std::size_t gi : face.generator_indices) {
            auto gp = chart.sharp->gp_coords(
                chart.sharp->presentation().generators[gi]);
            gens_gp.push_back(*gp);
        }
        IMat normals;
        if (gens_gp.empty()) {
            normals = IMat::identity(k);
        } else {
            IMat a(gens_gp.size(), k);
            for (std::size_t i = 0; i < gens_gp.size(); ++i)
                for (std::size_t l = 0; l < k; ++l)
                    a.at(i, l) = gens_gp[i][l];
            normals = integer_kernel(a);
        }
        const std::size_t c = normals.cols();
        if (c == 0)
            continue;

        for (int s = 0; s < samples_per_stratum; ++s) {
            ChartPoint pt{sample_point_on_face(
                              chart.sharp, face,
                              seed * 977 + 31 * static_cast<std::uint64_t>(s) + 1),
                          {},
                          {}};
            for (std::size_t l = 0; l < k; ++l)
                pt.theta_exp.push_back(random_unit(rng));
            for (std::size_t l = 0; l < chart.extra; ++l)
                pt.z.push_back(random_small(rng));

            Mat<GRat> jx = eval_matrix_at(j, pt);
            Mat<GRat> nb(d, c);
            for (std::size_t col = 0; col < c; ++col)
                for (std::size_t l = 0; l < k; ++l)
                    nb.at(l, col) = GRat(Rat(normals.at(l, col)));
            Mat<GRat> both = hcat(nb, jx * nb);
            if (rank_of(both) != 2 * c) {
                std::string w = "face {";
                for (std::size_t gi : face.generator_indices)
                    w += " " + std::to_string(gi);
                w += " } sample " + std::to_string(s);
                raise(Errc::TransversalityViolation, w);
            }
        }
    }
    return j;
}

BVectorField NijenhuisTensor::component(std::size_t i, std::size_t j) const
{
    if (i == j)
        return BVectorField(chart);
    bool flip = i > j;
    if (flip)
        std::swap(i, j);
    auto it = comp.find({i, j});
    if (it == comp.end())
        return BVectorField(chart);
    return flip ? BVectorField(chart) - it->second : it->second;
}

bool NijenhuisTensor::is_zero() const
{
    for (const auto& [ij, v] : comp)
        if (!v.is_zero())
            return false;
    return true;
}

BVectorField nijenhuis_apply(const BACS& J, const BVectorField& u,
                             const BVectorField& v)
{
    BVectorField ju = J.apply(u);
    BVectorField jv = J.apply(v);
    return lie_bracket(u, v) +
           J.apply(lie_bracket(ju, v) + lie_bracket(u, jv)) -
           lie_bracket(ju, jv);
}

NijenhuisTensor nijenhuis(const BACS& J)
{
    NijenhuisTensor n;
    n.chart = J.chart;
    const std::size_t d = dim2n(J.chart);
    std::vector<BVectorField> jcol;
    jcol.reserve(d);
    for (std::size_t c = 0; c < d; ++c)
        jcol.push_back(J.column(c));
    for (std::size_t i = 0; i < d; ++i) {
        BVectorField fi = BVectorField::frame_field(J.chart, i);
        for (std::size_t j = i + 1; j < d; ++j) {
            BVectorField fj = BVectorField::frame_field(J.chart, j);
            // [F_i, F_j] = 0 for the commuting frame
            BVectorField val =
                J.apply(lie_bracket(jcol[i], fj) + lie_bracket(fi, jcol[j])) -
                lie_bracket(jcol[i], jcol[j]);
            if (!val.is_zero())
                n.comp.emplace(std::make_pair(i, j), std::move(val));
        }
    }
    return n;
}

bool is_integrable(const BACS& J) { return nijenhuis(J).is_zero(); }

BCovector proj01(const BACS& J, const BCovector& om)
{
    BCovector jstar = J.pullback(om);
    BCovector out(J.chart);
    GRat half(Rat(Int(1), Int(2)));
    GRat ihalf(Rat(0), Rat(Int(1), Int(2)));
    for (std::size_t l = 0; l < om.comp.size(); ++l)
        out.comp[l] = om.comp[l] * half + jstar.comp[l] * ihalf;
    return out;
}

BCovector dbar(const BACS& J, const CoeffElement& f)
{
    return proj01(J, b_differential(f));
}

bool is_holomorphic(const BACS& J, const CoeffElement& f)
{
    return dbar(J, f).is_zero();
}

std::vector<CoeffElement> anti_basis_components(const BCovector& xi)
{
    const Chart& c = xi.chart;
    const std::size_t k = c.k();
    const std::size_t n = c.n();
    std::vector<CoeffElement> beta;
    beta.reserve(n);
    for (std::size_t a = 0; a < k; ++a)
        beta.push_back(xi.comp[n + a]);
    for (std::size_t j = 0; j < c.extra; ++j)
        beta.push_back(xi.comp[k + j]);
    return beta;
}

std::vector<CoeffElement> anti_basis_defect(const BCovector& xi)
{
    const Chart& c = xi.chart;
    const std::size_t k = c.k();
    const std::size_t n = c.n();
    GRat i1 = grat_i();
    std::vector<CoeffElement> defect;
    defect.reserve(n);
    for (std::size_t a = 0; a < k; ++a)
        defect.push_back(xi.comp[a] - xi.comp[n + a] * i1);
    for (std::size_t j = 0; j < c.extra; ++j)
        defect.push_back(xi.comp[n + k + j] + xi.comp[k + j] * i1);
    return defect;
}

CRSplitData cr_split_at(const BACS& J, const ChartPoint& pt)
{
    const Chart& chart = J.chart;
    const std::size_t k = chart.k();
    const std::size_t n = chart.n();
    const std::size_t d = 2 * n;

    StratumDescriptor sd = support_and_depth(pt.base);
    if (sd.depth != 0 && sd.depth != k)
        raise(Errc::UnsupportedFace,
              "cr_split_at: depth " + std::to_string(sd.depth) +
                  " stratum (only interior and vertex supported)");

    CRSplitData out;
    out.chart = chart;
    out.depth = sd.depth;
    out.J_at = eval_matrix_at(J, pt);

    Mat<GRat> sq = out.J_at * out.J_at;
    Mat<GRat> minus_id(d, d);
    for (std::size_t i = 0; i < d; ++i)
        minus_id.at(i, i) = GRat(-1);
    if (!(sq == minus_id))
        throw std::invalid_argument("cr_split_at: J^2 != -id at the point");

    GRat i1 = grat_i();
    Mat<GRat> a10 = out.J_at;
    for (std::size_t i = 0; i < d; ++i)
        a10.at(i, i) -= i1;
    Mat<GRat> t10 = kernel_basis(a10); // d x n

    Mat<GRat> t01 = conj_mat(t10);
    {
        Mat<GRat> a01 = out.J_at;
        for (std::size_t i = 0; i < d; ++i)
            a01.at(i, i) += i1;
        if (!mat_is_zero(a01 * t01))
            t01 = kernel_basis(a01);
    }

    const std::size_t from = (sd.depth == 0) ? 0 : k;
    out.W_basis = drop_rows(t10, from);
    out.Wbar_basis = drop_rows(t01, from);
    if (rank_of(out.W_basis) != n)
        raise(Errc::TransversalityViolation,
              "cr_split_at: anchor not injective on T^{1,0}");
    if (rank_of(out.Wbar_basis) != n)
        raise(Errc::TransversalityViolation,
              "cr_split_at: anchor not injective on T^{0,1}");

    Mat<GRat> neg_wbar = out.Wbar_basis;
    for (std::size_t i = 0; i < neg_wbar.rows(); ++i)
        for (std::size_t j = 0; j < neg_wbar.cols(); ++j)
            neg_wbar.at(i, j) = -neg_wbar.at(i, j);
    Mat<GRat> ker = kernel_basis(hcat(out.W_basis, neg_wbar));
    Mat<GRat> u(n, ker.cols());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < ker.cols(); ++j)
            u.at(i, j) = ker.at(i, j);
    out.intersection_basis = out.W_basis * u;
    return out;
}

NormalFormCandidate standard_candidate(const Chart& chart)
{
    const std::size_t k = chart.k();
    const std::size_t n = chart.n();
    NormalFormCandidate cand;
    for (std::size_t i = 0; i < k; ++i) {
        cand.v.push_back(BVectorField::frame_field(chart, i));
        cand.theta_lift.push_back(BVectorField::frame_field(chart, n + i));
    }
    for (std::size_t j = 0; j < chart.extra; ++j) {
        cand.x_lift.push_back(BVectorField::frame_field(chart, k + j));
        cand.y_lift.push_back(BVectorField::frame_field(chart, n + k + j));
    }
    return cand;
}

namespace {

std::string cand_name(const Chart& chart, std::size_t idx)
{
    const std::size_t k = chart.k();
    const std::size_t e = chart.extra;
    if (idx < k)
        return "v_" + std::to_string(idx + 1);
    idx -= k;
    if (idx < k)
        return "theta_" + std::to_string(idx + 1);
    idx -= k;
    if (idx < e)
        return "x_" + std::to_string(idx + 1);
    idx -= e;
    return "y_" + std::to_string(idx + 1);
}

} // namespace

NormalFormReport verify_normal_form(const BACS& J,
                                    const NormalFormCandidate& cand)
{
    const Chart& chart = J.chart;
    const std::size_t k = chart.k();
    const std::size_t n = chart.n();
    const std::size_t e = chart.extra;
    if (cand.v.size() != k || cand.theta_lift.size() != k ||
        cand.x_lift.size() != e || cand.y_lift.size() != e)
        throw std::invalid_argument("verify_normal_form: candidate sizes do "
                                    "not match the chart");

    std::vector<const BVectorField*> all;
    for (const auto& f : cand.v) all.push_back(&f);
    for (const auto& f : cand.theta_lift) all.push_back(&f);
    for (const auto& f : cand.x_lift) all.push_back(&f);
    for (const auto& f : cand.y_lift) all.push_back(&f);
    for (const BVectorField* f : all)
        require_same_chart(chart, f->chart);

    Face vertex;
    vertex.codim = k;

    NormalFormReport rep;

    // (i) the v_i restrict to flat normal fields with constant coefficients
    // forming an invertible k x k matrix
    rep.normal_flat_ok = true;
    Mat<GRat> vmat(k, k);
    for (std::size_t i = 0; i < k && rep.normal_flat_ok; ++i) {
        StratumAlgebroidElement r = restrict_to_stratum(cand.v[i], vertex);
        for (std::size_t t = 0; t < r.tangent.size(); ++t) {
            if (!r.tangent[t].is_zero()) {
                rep.normal_flat_ok = false;
                rep.normal_witness =
                    "v_" + std::to_string(i + 1) + " has a tangential part";
                break;
            }
        }
        if (!rep.normal_flat_ok)
            break;
        for (std::size_t l = 0; l < k; ++l) {
            if (!is_plain_constant(r.normal[l])) {
                rep.normal_flat_ok = false;
                rep.normal_witness = "v_" + std::to_string(i + 1) +
                                     " has a non-constant normal coefficient";
                break;
            }
            vmat.at(l, i) = constant_part(r.normal[l]);
        }
    }
    std::optional<Mat<GRat>> vinv;
    if (rep.normal_flat_ok) {
        vinv = inverse(vmat);
        if (!vinv) {
            rep.normal_flat_ok = false;
            rep.normal_witness = "normal components of v_1..v_k are "
                                 "linearly dependent";
        }
    }

    // (ii) all candidate pairs commute under the stratum bracket
    rep.commute_ok = true;
    std::vector<StratumAlgebroidElement> restr;
    restr.reserve(all.size());
    for (const BVectorField* f : all)
        restr.push_back(restrict_to_stratum(*f, vertex));
    for (std::size_t i = 0; i < all.size() && rep.commute_ok; ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            if (!algebroid_bracket(restr[i], restr[j]).is_zero()) {
                rep.commute_ok = false;
                rep.commute_witness = "[" + cand_name(chart, i) + "," +
                                      cand_name(chart, j) + "] != 0";
                break;
            }
        }
    }

    // (iii) anchors: theta lifts anchor exactly to w'_i; x/y lifts anchor to
    // fields with the standard constant terms, and all anchors commute
    rep.anchor_ok = true;
    std::vector<BVectorField> anchors; // tangent-only fields on V
    for (std::size_t i = 0; i < k; ++i) {
        BVectorField t(chart);
        StratumAlgebroidElement r = restr[k + i];
        for (std::size_t tj = 0; tj < r.tangent.size(); ++tj) {
            std::size_t frame =
                (tj < n - k) ? (k + tj) : (n + (tj - (n - k)));
            t.comp[frame] = r.tangent[tj];
        }
        anchors.push_back(t);
        if (!(t == BVectorField::frame_field(chart, n + i))) {
            rep.anchor_ok = false;
            rep.anchor_witness = "anchor of theta_" + std::to_string(i + 1) +
                                 " is not the coordinate field";
        }
    }
    for (std::size_t j = 0; j < 2 * e; ++j) {
        const bool is_x = j < e;
        std::size_t jj = is_x ? j : j - e;
        StratumAlgebroidElement r = restr[2 * k + j];
        BVectorField t(chart);
        for (std::size_t tj = 0; tj < r.tangent.size(); ++tj) {
            std::size_t frame =
                (tj < n - k) ? (k + tj) : (n + (tj - (n - k)));
            t.comp[frame] = r.tangent[tj];
        }
        anchors.push_back(t);
        std::size_t expect = is_x ? (k + jj) : (n + k + jj);
        bool const_ok = true;
        for (std::size_t l = 0; l < 2 * n && const_ok; ++l) {
            GRat want = (l == expect) ? GRat(1) : GRat(0);
            if (constant_part(t.comp[l]) != want)
                const_ok = false;
        }
        if (!const_ok && rep.anchor_ok) {
            rep.anchor_ok = false;
            rep.anchor_witness =
                "anchor of " + std::string(is_x ? "x_" : "y_") +
                std::to_string(jj + 1) + " has a nonstandard constant term";
        }
    }
    if (rep.anchor_ok) {
        for (std::size_t i = 0; i < anchors.size() && rep.anchor_ok; ++i) {
            for (std::size_t j = i + 1; j < anchors.size(); ++j) {
                if (!lie_bracket(anchors[i], anchors[j]).is_zero()) {
                    rep.anchor_ok = false;
                    rep.anchor_witness =
                        "anchors " + cand_name(chart, k + i) + " and " +
                        cand_name(chart, k + j) + " do not commute";
                    break;
                }
            }
        }
    }

    // (iv) the complex-structure relations restricted to V
    rep.j_relations_ok = true;
    auto check_rel = [&](const BVectorField& lhs, const BVectorField& rhs,
                         const std::string& label) {
        BVectorField dcheck = J.apply(lhs) - rhs;
        for (auto& c : dcheck.comp)
            c = c.restrict_V();
        if (!dcheck.is_zero() && rep.j_relations_ok) {
            rep.j_relations_ok = false;
            rep.j_witness = label;
        }
    };
    for (std::size_t i = 0; i < k; ++i) {
        check_rel(cand.v[i], cand.theta_lift[i],
                  "J(v_" + std::to_string(i + 1) + ") != theta lift");
        check_rel(cand.theta_lift[i], BVectorField(chart) - cand.v[i],
                  "J(theta_" + std::to_string(i + 1) + ") != -v");
    }
    for (std::size_t j = 0; j < e; ++j) {
        check_rel(cand.x_lift[j], cand.y_lift[j],
                  "J(x_" + std::to_string(j + 1) + ") != y lift");
        check_rel(cand.y_lift[j], BVectorField(chart) - cand.x_lift[j],
                  "J(y_" + std::to_string(j + 1) + ") != -x lift");
    }

    // omega_ab^c: normal part of [x_a - i y_a, x_b + i y_b]_{S^k} expanded
    // over the candidate normal frame
    GRat i1 = grat_i();
    rep.omega.assign(
        e, std::vector<std::vector<CoeffElement>>(
               e, std::vector<CoeffElement>(k, CoeffElement(chart))));
    rep.omega_zero = true;
    if (vinv) {
        for (std::size_t a = 0; a < e; ++a) {
            for (std::size_t b = 0; b < e; ++b) {
                BVectorField lhs = cand.x_lift[a] - cand.y_lift[a] * i1;
                BVectorField rhs = cand.x_lift[b] + cand.y_lift[b] * i1;
                StratumAlgebroidElement br = algebroid_bracket(
                    restrict_to_stratum(lhs, vertex),
                    restrict_to_stratum(rhs, vertex));
                for (std::size_t c = 0; c < k; ++c) {
                    CoeffElement acc(chart);
                    for (std::size_t l = 0; l < k; ++l)
                        acc += br.normal[l] * vinv->at(c, l);
                    if (!acc.is_zero())
                        rep.omega_zero = false;
                    rep.omega[a][b][c] = std::move(acc);
                }
            }
        }
    } else {
        rep.omega_zero = false;
    }

    return rep;
}

std::vector<std::complex<double>> nijenhuis_eval(const NijenhuisTensor& N,
                                                 const std::vector<double>& u,
                                                 std::size_t i, std::size_t j)
{
    BVectorField c = N.component(i, j);
    std::vector<std::complex<double>> out(c.comp.size());
    for (std::size_t l = 0; l < c.comp.size(); ++l)
        out[l] = eval_coeff_f(c.comp[l], u);
    return out;
}

namespace {

using CVec = std::vector<std::complex<double>>;
using FieldFn = std::function<CVec(const std::vector<double>&)>;

CVec fd_bracket(const FieldFn& a, const FieldFn& b,
                const std::vector<double>& u, double h)
{
    const std::size_t d = u.size();
    CVec au = a(u), bu = b(u);
    CVec out(d, 0.0);
    for (std::size_t l = 0; l < d; ++l) {
        std::vector<double> up = u, dn = u;
        up[l] += h;
        dn[l] -= h;
        CVec bp = b(up), bm = b(dn), ap = a(up), am = a(dn);
        for (std::size_t c = 0; c < d; ++c) {
            std::complex<double> db = (bp[c] - bm[c]) / (2 * h);
            std::complex<double> da = (ap[c] - am[c]) / (2 * h);
            out[c] += au[l] * db - bu[l] * da;
        }
    }
    return out;
}

} // namespace

std::vector<std::complex<double>> nijenhuis_fd(const BACS& J,
                                               const std::vector<double>& u,
                                               std::size_t i, std::size_t j,
                                               double h)
{
    const std::size_t d = dim2n(J.chart);
    auto jcol = [&J, d](std::size_t c) {
        return FieldFn([&J, c, d](const std::vector<double>& w) {
            CVec r(d);
            for (std::size_t l = 0; l < d; ++l)
                r[l] = eval_coeff_f(J.at(l, c), w);
            return r;
        });
    };
    auto unit = [d](std::size_t c) {
        return FieldFn([c, d](const std::vector<double>&) {
            CVec r(d, 0.0);
            r[c] = 1.0;
            return r;
        });
    };

    FieldFn fi = unit(i), fj = unit(j);
    FieldFn ji = jcol(i), jj = jcol(j);

    CVec t0 = fd_bracket(fi, fj, u, h);
    CVec t1 = fd_bracket(ji, fj, u, h);
    CVec t2 = fd_bracket(fi, jj, u, h);
    CVec t3 = fd_bracket(ji, jj, u, h);

    CVec out(d, 0.0);
    for (std::size_t r = 0; r < d; ++r) {
        std::complex<double> acc = t0[r] - t3[r];
        for (std::size_t l = 0; l < d; ++l)
            acc += eval_coeff_f(J.at(r, l), u) * (t1[l] + t2[l]);
        out[r] = acc;
    }
    return out;
}

} // namespace bcx

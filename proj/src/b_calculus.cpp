#include "bcx/b_calculus.hpp"

namespace bcx {

CoeffElement frame_derive(const CoeffElement& f, std::size_t i)
{
    const Chart& chart = f.chart();
    const std::size_t k = chart.k(), n = chart.n();
    if (i >= 2 * n)
        throw std::invalid_argument("frame_derive: frame index out of range");
    CoeffElement out(chart);
    const GRat I = grat_i();
    for (const auto& [key, c] : f.terms()) {
        if (i < k) { // v'_i: scale by q_i
            out.insert_term(key, c * GRat{Rat(key.q[i]), Rat(0)});
        } else if (i < n) { // v'_i = d/dx_j
            std::size_t j = i - k;
            if (key.a[j] > 0) {
                MonoKey t = key;
                --t.a[j];
                out.insert_term(t, c * GRat{Rat(key.a[j]), Rat(0)});
            }
            if (key.b[j] > 0) {
                MonoKey t = key;
                --t.b[j];
                out.insert_term(t, c * GRat{Rat(key.b[j]), Rat(0)});
            }
        } else if (i < n + k) { // w'_i: scale by i m_l
            std::size_t l = i - n;
            out.insert_term(key, c * I * GRat{Rat(key.m[l]), Rat(0)});
        } else { // w'_i = d/dy_j
            std::size_t j = i - n - k;
            if (key.a[j] > 0) {
                MonoKey t = key;
                --t.a[j];
                out.insert_term(t, c * I * GRat{Rat(key.a[j]), Rat(0)});
            }
            if (key.b[j] > 0) {
                MonoKey t = key;
                --t.b[j];
                out.insert_term(t, c * (-(I)) * GRat{Rat(key.b[j]), Rat(0)});
            }
        }
    }
    return out;
}

BVectorField::BVectorField(Chart c) : chart(std::move(c))
{
    comp.assign(2 * chart.n(), CoeffElement(chart));
}

BVectorField BVectorField::frame_field(const Chart& c, std::size_t i)
{
    BVectorField v(c);
    v.comp.at(i) = CoeffElement::constant(c, GRat{Rat(1), Rat(0)});
    return v;
}

BVectorField BVectorField::operator+(const BVectorField& o) const
{
    require_same_chart(chart, o.chart);
    BVectorField out(chart);
    for (std::size_t i = 0; i < comp.size(); ++i)
        out.comp[i] = comp[i] + o.comp[i];
    return out;
}

BVectorField BVectorField::operator-(const BVectorField& o) const
{
    require_same_chart(chart, o.chart);
    BVectorField out(chart);
    for (std::size_t i = 0; i < comp.size(); ++i)
        out.comp[i] = comp[i] - o.comp[i];
    return out;
}

BVectorField BVectorField::operator*(const GRat& c) const
{
    BVectorField out(chart);
    for (std::size_t i = 0; i < comp.size(); ++i)
        out.comp[i] = comp[i] * c;
    return out;
}

BVectorField BVectorField::operator*(const CoeffElement& f) const
{
    require_same_chart(chart, f.chart());
    BVectorField out(chart);
    for (std::size_t i = 0; i < comp.size(); ++i)
        out.comp[i] = comp[i] * f;
    return out;
}

bool BVectorField::operator==(const BVectorField& o) const
{
    return same_chart(chart, o.chart) && comp == o.comp;
}

bool BVectorField::is_zero() const
{
    for (const auto& c : comp)
        if (!c.is_zero())
            return false;
    return true;
}

BCovector::BCovector(Chart c) : chart(std::move(c))
{
    comp.assign(2 * chart.n(), CoeffElement(chart));
}

BCovector BCovector::operator+(const BCovector& o) const
{
    require_same_chart(chart, o.chart);
    BCovector out(chart);
    for (std::size_t i = 0; i < comp.size(); ++i)
        out.comp[i] = comp[i] + o.comp[i];
    return out;
}

BCovector BCovector::operator-(const BCovector& o) const
{
    require_same_chart(chart, o.chart);
    BCovector out(chart);
    for (std::size_t i = 0; i < comp.size(); ++i)
        out.comp[i] = comp[i] - o.comp[i];
    return out;
}

BCovector BCovector::operator*(const GRat& c) const
{
    BCovector out(chart);
    for (std::size_t i = 0; i < comp.size(); ++i)
        out.comp[i] = comp[i] * c;
    return out;
}

bool BCovector::is_zero() const
{
    for (const auto& c : comp)
        if (!c.is_zero())
            return false;
    return true;
}

CoeffElement derive(const BVectorField& v, const CoeffElement& f)
{
    require_same_chart(v.chart, f.chart());
    CoeffElement out(v.chart);
    for (std::size_t i = 0; i < v.comp.size(); ++i) {
        if (v.comp[i].is_zero())
            continue;
        out += v.comp[i] * frame_derive(f, i);
    }
    return out;
}

BVectorField lie_bracket(const BVectorField& u, const BVectorField& v)
{
    require_same_chart(u.chart, v.chart);
    BVectorField out(u.chart);
    for (std::size_t j = 0; j < out.comp.size(); ++j)
        out.comp[j] = derive(u, v.comp[j]) - derive(v, u.comp[j]);
    return out;
}

BCovector b_differential(const CoeffElement& f)
{
    BCovector out(f.chart());
    for (std::size_t i = 0; i < out.comp.size(); ++i)
        out.comp[i] = frame_derive(f, i);
    return out;
}

StratumAlgebroidElement::StratumAlgebroidElement(Chart c) : chart(std::move(c))
{
    normal.assign(chart.k(), CoeffElement(chart));
    tangent.assign(2 * chart.n() - chart.k(), CoeffElement(chart));
}

bool StratumAlgebroidElement::is_zero() const
{
    for (const auto& c : normal)
        if (!c.is_zero())
            return false;
    for (const auto& c : tangent)
        if (!c.is_zero())
            return false;
    return true;
}

StratumAlgebroidElement restrict_to_stratum(const BVectorField& v,
                                            const Face& face)
{
    if (!face.generator_indices.empty())
        raise(Errc::UnsupportedFace,
              "only the vertex stratum of the sharp part is supported");
    const std::size_t k = v.chart.k();
    StratumAlgebroidElement out(v.chart);
    for (std::size_t i = 0; i < v.comp.size(); ++i) {
        CoeffElement r = v.comp[i].restrict_V();
        if (i < k)
            out.normal[i] = std::move(r);
        else
            out.tangent[i - k] = std::move(r);
    }
    return out;
}

BVectorField extend_from_stratum(const StratumAlgebroidElement& u)
{
    const std::size_t k = u.chart.k();
    BVectorField v(u.chart);
    for (std::size_t i = 0; i < k; ++i)
        v.comp[i] = u.normal[i];
    for (std::size_t i = 0; i < u.tangent.size(); ++i)
        v.comp[k + i] = u.tangent[i];
    return v;
}

StratumAlgebroidElement algebroid_bracket(const StratumAlgebroidElement& u,
                                          const StratumAlgebroidElement& v)
{
    require_same_chart(u.chart, v.chart);
    BVectorField ue = extend_from_stratum(u);
    BVectorField ve = extend_from_stratum(v);
    Face vertex;
    vertex.codim = u.chart.k();
    return restrict_to_stratum(lie_bracket(ue, ve), vertex);
}

} // namespace bcx

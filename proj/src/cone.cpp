#include "bcx/cone.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "bcx/error.hpp"

namespace bcx {

namespace {

IMat gens_as_columns(const std::vector<IVec>& gens, std::size_t dim)
{
    IMat m(dim, gens.size());
    for (std::size_t j = 0; j < gens.size(); ++j)
        for (std::size_t i = 0; i < dim; ++i)
            m.at(i, j) = gens[j][i];
    return m;
}

// All subsets of {0..n-1} of size k, lexicographic.
void for_each_subset(std::size_t n, std::size_t k,
                     const std::function<void(const std::vector<std::size_t>&)>& fn)
{
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    if (k > n)
        return;
    while (true) {
        fn(idx);
        // advance
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (idx[i] != i + n - k) {
                ++idx[i];
                for (std::size_t j = i + 1; j < k; ++j)
                    idx[j] = idx[j - 1] + 1;
                break;
            }
            if (i == 0)
                return;
        }
        if (k == 0)
            return;
    }
}

} // namespace

RatCone::RatCone(std::vector<IVec> generators, std::size_t ambient_dim)
    : ambient_dim_(ambient_dim), gens_(std::move(generators))
{
    for (const IVec& g : gens_)
        if (g.size() != ambient_dim_)
            throw std::invalid_argument("RatCone: generator dimension mismatch");

    span_basis_ = saturate_lattice(gens_as_columns(gens_, ambient_dim_));
    const std::size_t d = span_basis_.cols();

    // Left inverse of the span basis via an invertible row selection.
    QMat bt = to_rational(span_basis_.transpose());
    std::vector<std::size_t> sel;
    rref(bt, &sel); // pivot columns of B^T = independent rows of B
    QMat sub(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            sub.at(i, j) = Rat(span_basis_.at(sel[i], j));
    span_solve_ = QMat(d, ambient_dim_);
    if (d > 0) {
        auto inv = inverse(sub);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                span_solve_.at(j, sel[i]) = inv->at(j, i);
    }

    gen_coords_.reserve(gens_.size());
    for (const IVec& g : gens_) {
        auto c = span_coords(g);
        if (!c)
            throw std::logic_error("RatCone: generator outside computed span");
        gen_coords_.push_back(*c);
    }

    // Facet candidates: kernels of (d-1)-subsets of generator coordinates.
    std::set<IVec> normals;
    if (d > 0) {
        for_each_subset(gens_.size(), d - 1, [&](const std::vector<std::size_t>& idx) {
            QMat m(idx.size(), d);
            for (std::size_t r = 0; r < idx.size(); ++r)
                for (std::size_t c = 0; c < d; ++c)
                    m.at(r, c) = gen_coords_[idx[r]][c];
            QMat ker = kernel_basis(std::move(m));
            if (ker.cols() != 1)
                return; // subset not of rank d-1; a fuller subset covers this facet
            IVec u = to_integer_scaled(ker.col(0));
            bool pos = false, neg = false;
            for (const QVec& gc : gen_coords_) {
                Rat v(0);
                for (std::size_t c = 0; c < d; ++c)
                    v += gc[c] * Rat(u[c]);
                if (v > Rat(0))
                    pos = true;
                else if (v < Rat(0))
                    neg = true;
            }
            if (pos && neg)
                return; // not supporting
            if (neg)
                for (Int& x : u)
                    x = -x;
            normals.insert(u);
        });
    }
    facet_normals_.assign(normals.begin(), normals.end());
}

std::optional<QVec> RatCone::span_coords(const IVec& z) const
{
    const std::size_t d = span_basis_.cols();
    QVec zq(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        zq[i] = Rat(z[i]);
    QVec y = span_solve_ * zq;
    // verify B y == z
    for (std::size_t r = 0; r < ambient_dim_; ++r) {
        Rat acc(0);
        for (std::size_t c = 0; c < d; ++c)
            acc += Rat(span_basis_.at(r, c)) * y[c];
        if (acc != zq[r])
            return std::nullopt;
    }
    return y;
}

bool RatCone::contains(const IVec& z) const
{
    auto y = span_coords(z);
    if (!y)
        return false;
    for (const IVec& n : facet_normals_) {
        Rat acc(0);
        for (std::size_t c = 0; c < n.size(); ++c)
            acc += (*y)[c] * Rat(n[c]);
        if (acc < Rat(0))
            return false;
    }
    return true;
}

std::vector<std::size_t> RatCone::tight_facets(const IVec& z) const
{
    auto y = span_coords(z);
    if (!y)
        throw std::logic_error("tight_facets: point outside span");
    std::vector<std::size_t> tight;
    for (std::size_t f = 0; f < facet_normals_.size(); ++f) {
        Rat acc(0);
        for (std::size_t c = 0; c < facet_normals_[f].size(); ++c)
            acc += (*y)[c] * Rat(facet_normals_[f][c]);
        if (acc == Rat(0))
            tight.push_back(f);
    }
    return tight;
}

IMat RatCone::lineality_basis() const
{
    const std::size_t d = span_basis_.cols();
    IMat n(facet_normals_.size(), d);
    for (std::size_t r = 0; r < facet_normals_.size(); ++r)
        for (std::size_t c = 0; c < d; ++c)
            n.at(r, c) = facet_normals_[r][c];
    IMat k = integer_kernel(n); // d x l, span coordinates
    IMat out(ambient_dim_, k.cols());
    for (std::size_t j = 0; j < k.cols(); ++j)
        for (std::size_t r = 0; r < ambient_dim_; ++r) {
            Int acc(0);
            for (std::size_t c = 0; c < d; ++c)
                acc += span_basis_.at(r, c) * k.at(c, j);
            out.at(r, j) = acc;
        }
    return out;
}

bool RatCone::pointed() const
{
    const std::size_t d = span_basis_.cols();
    IMat n(facet_normals_.size(), d);
    for (std::size_t r = 0; r < facet_normals_.size(); ++r)
        for (std::size_t c = 0; c < d; ++c)
            n.at(r, c) = facet_normals_[r][c];
    return rank_of(to_rational(n)) == d;
}

IVec RatCone::positive_functional_span() const
{
    const std::size_t d = span_basis_.cols();
    IVec w(d, Int(0));
    for (const IVec& n : facet_normals_)
        for (std::size_t c = 0; c < d; ++c)
            w[c] += n[c];
    return w;
}

Int RatCone::eval_span_functional(const IVec& functional, const IVec& z) const
{
    auto y = span_coords(z);
    if (!y)
        throw std::logic_error("eval_span_functional: point outside span");
    Rat acc(0);
    for (std::size_t c = 0; c < functional.size(); ++c)
        acc += (*y)[c] * Rat(functional[c]);
    if (acc.denominator() != 1)
        throw std::logic_error("eval_span_functional: non-integral value");
    return acc.numerator();
}

std::vector<IVec> hilbert_basis_pointed(const std::vector<IVec>& rays, std::size_t dim)
{
    if (rays.empty())
        return {};
    RatCone cone(rays, dim);
    IVec lo(dim, Int(0)), hi(dim, Int(0));
    for (const IVec& r : rays)
        for (std::size_t c = 0; c < dim; ++c) {
            if (r[c] < 0)
                lo[c] += r[c];
            else
                hi[c] += r[c];
        }
    Int count(1);
    for (std::size_t c = 0; c < dim; ++c)
        count *= (hi[c] - lo[c] + 1);
    if (count > 4000000)
        raise(Errc::RankOverflow,
              "Hilbert basis enumeration box has " + count.str() + " lattice points");

    // Enumerate the zonotope bounding box; keep cone points.
    std::vector<IVec> pts;
    IVec cur = lo;
    while (true) {
        bool zero = true;
        for (const Int& x : cur)
            if (x != 0)
                zero = false;
        if (!zero && cone.contains(cur))
            pts.push_back(cur);
        std::size_t c = 0;
        while (c < dim && cur[c] == hi[c]) {
            cur[c] = lo[c];
            ++c;
        }
        if (c == dim)
            break;
        ++cur[c];
    }

    // Sort by the positive functional, then lexicographically; greedy
    // irreducibility filter against already-confirmed minimal elements.
    IVec w = cone.positive_functional_span();
    auto height = [&](const IVec& z) { return cone.eval_span_functional(w, z); };
    std::sort(pts.begin(), pts.end(), [&](const IVec& a, const IVec& b) {
        Int ha = height(a), hb = height(b);
        if (ha != hb)
            return ha < hb;
        return a < b;
    });
    std::vector<IVec> basis;
    for (const IVec& z : pts) {
        bool reducible = false;
        for (const IVec& b : basis) {
            IVec diff(dim);
            bool nonzero = false;
            for (std::size_t c = 0; c < dim; ++c) {
                diff[c] = z[c] - b[c];
                if (diff[c] != 0)
                    nonzero = true;
            }
            if (nonzero && cone.contains(diff)) {
                reducible = true;
                break;
            }
            if (!nonzero) {
                reducible = true; // duplicate
                break;
            }
        }
        if (!reducible)
            basis.push_back(z);
    }
    return basis;
}

} // namespace bcx

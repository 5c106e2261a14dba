#include "bcx/intlin.hpp"

#include <numeric>

namespace bcx {

QMat to_rational(const IMat& m)
{
    QMat q(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            q.at(r, c) = Rat(m.at(r, c));
    return q;
}

IVec to_integer_scaled(const QVec& v)
{
    Int lcm(1);
    for (const Rat& r : v)
        lcm = boost::multiprecision::lcm(lcm, r.denominator());
    IVec out(v.size());
    Int content(0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = v[i].numerator() * (lcm / v[i].denominator());
        content = boost::multiprecision::gcd(content, out[i]);
    }
    if (content > 1)
        for (Int& n : out)
            n /= content;
    return out;
}

// ----- field linear algebra -----

template <class F>
std::size_t rref(Mat<F>& a, std::vector<std::size_t>* pivot_cols)
{
    const std::size_t m = a.rows(), n = a.cols();
    std::size_t rank = 0;
    if (pivot_cols)
        pivot_cols->clear();
    for (std::size_t col = 0; col < n && rank < m; ++col) {
        std::size_t piv = m;
        for (std::size_t r = rank; r < m; ++r)
            if (!is_zero(a.at(r, col))) {
                piv = r;
                break;
            }
        if (piv == m)
            continue;
        if (piv != rank)
            for (std::size_t c = 0; c < n; ++c)
                std::swap(a.at(piv, c), a.at(rank, c));
        F inv_p = F(1) / a.at(rank, col);
        for (std::size_t c = col; c < n; ++c)
            a.at(rank, c) = a.at(rank, c) * inv_p;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == rank || is_zero(a.at(r, col)))
                continue;
            F f = a.at(r, col);
            for (std::size_t c = col; c < n; ++c)
                a.at(r, c) = a.at(r, c) - f * a.at(rank, c);
        }
        if (pivot_cols)
            pivot_cols->push_back(col);
        ++rank;
    }
    return rank;
}

template <class F>
std::optional<std::vector<F>> solve_linear(Mat<F> a, std::vector<F> b)
{
    const std::size_t m = a.rows(), n = a.cols();
    Mat<F> aug(m, n + 1);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < n; ++c)
            aug.at(r, c) = a.at(r, c);
        aug.at(r, n) = b[r];
    }
    std::vector<std::size_t> pivots;
    std::size_t rank = rref(aug, &pivots);
    for (std::size_t i = 0; i < rank; ++i)
        if (pivots[i] == n)
            return std::nullopt; // pivot in the constant column
    std::vector<F> x(n, F(0));
    for (std::size_t i = 0; i < rank; ++i)
        x[pivots[i]] = aug.at(i, n);
    return x;
}

template <class F>
Mat<F> kernel_basis(Mat<F> a)
{
    const std::size_t n = a.cols();
    std::vector<std::size_t> pivots;
    std::size_t rank = rref(a, &pivots);
    std::vector<bool> is_pivot(n, false);
    for (std::size_t p : pivots)
        is_pivot[p] = true;
    Mat<F> k(n, n - rank);
    std::size_t kc = 0;
    for (std::size_t free = 0; free < n; ++free) {
        if (is_pivot[free])
            continue;
        k.at(free, kc) = F(1);
        for (std::size_t i = 0; i < rank; ++i)
            k.at(pivots[i], kc) = -a.at(i, free);
        ++kc;
    }
    return k;
}

template <class F>
std::optional<Mat<F>> inverse(Mat<F> a)
{
    const std::size_t n = a.rows();
    Mat<F> aug(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c)
            aug.at(r, c) = a.at(r, c);
        aug.at(r, n + r) = F(1);
    }
    std::vector<std::size_t> pivots;
    std::size_t rank = rref(aug, &pivots);
    if (rank < n || pivots[n - 1] != n - 1)
        return std::nullopt;
    Mat<F> inv(n, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            inv.at(r, c) = aug.at(r, n + c);
    return inv;
}

template std::size_t rref<Rat>(Mat<Rat>&, std::vector<std::size_t>*);
template std::size_t rref<GRat>(Mat<GRat>&, std::vector<std::size_t>*);
template std::optional<std::vector<Rat>> solve_linear<Rat>(Mat<Rat>, std::vector<Rat>);
template std::optional<std::vector<GRat>> solve_linear<GRat>(Mat<GRat>, std::vector<GRat>);
template Mat<Rat> kernel_basis<Rat>(Mat<Rat>);
template Mat<GRat> kernel_basis<GRat>(Mat<GRat>);
template std::optional<Mat<Rat>> inverse<Rat>(Mat<Rat>);
template std::optional<Mat<GRat>> inverse<GRat>(Mat<GRat>);

// ----- integer lattice algebra -----

namespace {

void col_axpy(IMat& m, std::size_t dst, std::size_t src, const Int& q)
{
    // column dst -= q * column src
    for (std::size_t r = 0; r < m.rows(); ++r)
        m.at(r, dst) -= q * m.at(r, src);
}

void col_swap(IMat& m, std::size_t a, std::size_t b)
{
    for (std::size_t r = 0; r < m.rows(); ++r)
        std::swap(m.at(r, a), m.at(r, b));
}

void col_negate(IMat& m, std::size_t c)
{
    for (std::size_t r = 0; r < m.rows(); ++r)
        m.at(r, c) = -m.at(r, c);
}

Int floor_div(const Int& a, const Int& b)
{
    Int q = a / b, r = a % b;
    if (r != 0 && ((r < 0) != (b < 0)))
        --q;
    return q;
}

} // namespace

HnfResult hnf_columns(const IMat& a)
{
    HnfResult res;
    res.h = a;
    res.u = IMat::identity(a.cols());
    IMat& h = res.h;
    IMat& u = res.u;
    const std::size_t m = a.rows(), n = a.cols();
    std::size_t c = 0;
    for (std::size_t r = 0; r < m && c < n; ++r) {
        // Euclidean elimination across columns c..n-1 at row r.
        while (true) {
            std::size_t best = n;
            for (std::size_t j = c; j < n; ++j) {
                if (h.at(r, j) == 0)
                    continue;
                if (best == n || boost::multiprecision::abs(h.at(r, j)) <
                                     boost::multiprecision::abs(h.at(r, best)))
                    best = j;
            }
            if (best == n)
                break; // row r is zero beyond the processed pivots
            if (best != c) {
                col_swap(h, best, c);
                col_swap(u, best, c);
            }
            bool done = true;
            for (std::size_t j = c + 1; j < n; ++j) {
                if (h.at(r, j) == 0)
                    continue;
                Int q = h.at(r, j) / h.at(r, c); // truncated division shrinks remainders
                col_axpy(h, j, c, q);
                col_axpy(u, j, c, q);
                if (h.at(r, j) != 0)
                    done = false;
            }
            if (done)
                break;
        }
        if (h.at(r, c) == 0)
            continue;
        if (h.at(r, c) < 0) {
            col_negate(h, c);
            col_negate(u, c);
        }
        for (std::size_t j = 0; j < c; ++j) {
            Int q = floor_div(h.at(r, j), h.at(r, c));
            if (q != 0) {
                col_axpy(h, j, c, q);
                col_axpy(u, j, c, q);
            }
        }
        res.pivot_rows.push_back(r);
        ++c;
    }
    res.rank = c;
    return res;
}

IMat lattice_basis(const IMat& a)
{
    HnfResult res = hnf_columns(a);
    IMat b(a.rows(), res.rank);
    for (std::size_t c = 0; c < res.rank; ++c)
        for (std::size_t r = 0; r < a.rows(); ++r)
            b.at(r, c) = res.h.at(r, c);
    return b;
}

std::optional<IVec> solve_integer(const IMat& a, const IVec& b)
{
    HnfResult res = hnf_columns(a);
    IVec resid = b;
    IVec y(res.rank, Int(0));
    for (std::size_t i = 0; i < res.rank; ++i) {
        std::size_t r = res.pivot_rows[i];
        // rows above this pivot (not pivot rows themselves) must already be 0
        if (resid[r] % res.h.at(r, i) != 0)
            return std::nullopt;
        y[i] = resid[r] / res.h.at(r, i);
        if (y[i] != 0)
            for (std::size_t rr = 0; rr < a.rows(); ++rr)
                resid[rr] -= y[i] * res.h.at(rr, i);
    }
    for (const Int& v : resid)
        if (v != 0)
            return std::nullopt;
    IVec x(a.cols(), Int(0));
    for (std::size_t c = 0; c < a.cols(); ++c)
        for (std::size_t i = 0; i < res.rank; ++i)
            x[c] += res.u.at(c, i) * y[i];
    return x;
}

IMat integer_kernel(const IMat& a)
{
    HnfResult res = hnf_columns(a);
    IMat k(a.cols(), a.cols() - res.rank);
    for (std::size_t j = res.rank; j < a.cols(); ++j)
        for (std::size_t r = 0; r < a.cols(); ++r)
            k.at(r, j - res.rank) = res.u.at(r, j);
    return k;
}

IMat saturate_lattice(const IMat& a)
{
    // x is in the saturation iff it is killed by every rational functional
    // vanishing on the columns of a.
    QMat left_kernel = kernel_basis(to_rational(a.transpose()));
    IMat normals(left_kernel.cols(), a.rows());
    for (std::size_t j = 0; j < left_kernel.cols(); ++j) {
        IVec n = to_integer_scaled(left_kernel.col(j));
        for (std::size_t r = 0; r < a.rows(); ++r)
            normals.at(j, r) = n[r];
    }
    return integer_kernel(normals);
}

std::vector<Int> snf_invariant_factors(IMat a)
{
    const std::size_t m = a.rows(), n = a.cols();
    std::size_t t = 0;
    while (t < m && t < n) {
        // find a smallest-magnitude nonzero pivot in the working submatrix
        std::size_t pr = m, pc = n;
        for (std::size_t r = t; r < m; ++r)
            for (std::size_t c = t; c < n; ++c)
                if (a.at(r, c) != 0 &&
                    (pr == m || boost::multiprecision::abs(a.at(r, c)) <
                                    boost::multiprecision::abs(a.at(pr, pc)))) {
                    pr = r;
                    pc = c;
                }
        if (pr == m)
            break;
        if (pr != t)
            for (std::size_t c = 0; c < n; ++c)
                std::swap(a.at(pr, c), a.at(t, c));
        if (pc != t)
            for (std::size_t r = 0; r < m; ++r)
                std::swap(a.at(r, pc), a.at(r, t));
        bool clean = true;
        for (std::size_t r = t + 1; r < m; ++r) {
            Int q = a.at(r, t) / a.at(t, t);
            if (q != 0)
                for (std::size_t c = 0; c < n; ++c)
                    a.at(r, c) -= q * a.at(t, c);
            if (a.at(r, t) != 0)
                clean = false;
        }
        for (std::size_t c = t + 1; c < n; ++c) {
            Int q = a.at(t, c) / a.at(t, t);
            if (q != 0)
                for (std::size_t r = 0; r < m; ++r)
                    a.at(r, c) -= q * a.at(r, t);
            if (a.at(t, c) != 0)
                clean = false;
        }
        if (!clean)
            continue; // remainders became the new smaller pivots; iterate
        if (a.at(t, t) < 0)
            for (std::size_t c = 0; c < n; ++c)
                a.at(t, c) = -a.at(t, c);
        ++t;
    }
    std::vector<Int> d;
    for (std::size_t i = 0; i < t; ++i)
        d.push_back(a.at(i, i));
    // enforce divisibility d_i | d_{i+1} (does not change the group they present)
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i + 1 < d.size(); ++i) {
            if (d[i + 1] % d[i] != 0) {
                Int g = boost::multiprecision::gcd(d[i], d[i + 1]);
                Int l = d[i] / g * d[i + 1];
                d[i] = g;
                d[i + 1] = l;
                changed = true;
            }
        }
    }
    return d;
}

} // namespace bcx

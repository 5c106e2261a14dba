#ifndef BCX_INTLIN_HPP
#define BCX_INTLIN_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "bcx/rational.hpp"

namespace bcx {

// Dense row-major matrix; dimensions are tiny throughout (ranks <= ~8), so no
// attempt is made at sparsity or pivoting heuristics beyond exactness.
template <class T>
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), d_(rows * cols) {}

    static Mat identity(std::size_t n)
    {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m.at(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& at(std::size_t r, std::size_t c) { return d_[r * cols_ + c]; }
    const T& at(std::size_t r, std::size_t c) const { return d_[r * cols_ + c]; }

    std::vector<T> col(std::size_t c) const
    {
        std::vector<T> v(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            v[r] = at(r, c);
        return v;
    }

    std::vector<T> row(std::size_t r) const
    {
        std::vector<T> v(cols_);
        for (std::size_t c = 0; c < cols_; ++c)
            v[c] = at(r, c);
        return v;
    }

    void set_col(std::size_t c, const std::vector<T>& v)
    {
        for (std::size_t r = 0; r < rows_; ++r)
            at(r, c) = v[r];
    }

    Mat transpose() const
    {
        Mat t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                t.at(c, r) = at(r, c);
        return t;
    }

    friend Mat operator*(const Mat& a, const Mat& b)
    {
        Mat out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a.at(i, k);
                if (is_zero(aik))
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    out.at(i, j) += aik * b.at(k, j);
            }
        return out;
    }

    friend std::vector<T> operator*(const Mat& a, const std::vector<T>& x)
    {
        std::vector<T> out(a.rows_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k)
                out[i] += a.at(i, k) * x[k];
        return out;
    }

    friend bool operator==(const Mat& a, const Mat& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.d_ == b.d_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<T> d_;
};

using IMat = Mat<Int>;
using QMat = Mat<Rat>;
using CMat = Mat<GRat>;

inline bool is_zero(const Int& n) { return n == 0; }

QMat to_rational(const IMat& m);
IVec to_integer_scaled(const QVec& v); // clear denominators, divide by content

// ----- field linear algebra (works for Rat and GRat) -----

// In-place reduced row echelon form; returns rank, records pivot columns.
template <class F>
std::size_t rref(Mat<F>& a, std::vector<std::size_t>* pivot_cols = nullptr);

// One solution of A x = b with all free variables zero, or nullopt if
// inconsistent.
template <class F>
std::optional<std::vector<F>> solve_linear(Mat<F> a, std::vector<F> b);

// Columns form a basis of ker(A).
template <class F>
Mat<F> kernel_basis(Mat<F> a);

template <class F>
std::optional<Mat<F>> inverse(Mat<F> a);

template <class F>
std::size_t rank_of(Mat<F> a)
{
    return rref(a);
}

// ----- integer lattice algebra -----

// Column-style Hermite reduction: returns H with A * U = H, U unimodular;
// the first `rank` columns of H are an echelon basis of the column lattice
// (pivot entries positive, entries left of a pivot reduced into [0, pivot)),
// remaining columns zero.
struct HnfResult {
    IMat h;
    IMat u;
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_rows; // row of the pivot in each basis column
};

HnfResult hnf_columns(const IMat& a);

// Basis (as columns) of the lattice generated by the columns of a.
IMat lattice_basis(const IMat& a);

// Solve A x = b over the integers; nullopt when b is outside the column
// lattice.
std::optional<IVec> solve_integer(const IMat& a, const IVec& b);

// Columns form a basis of the integer kernel {x : A x = 0}.
IMat integer_kernel(const IMat& a);

// Smith normal form invariant factors d_1 | d_2 | ... (nonzero ones only).
std::vector<Int> snf_invariant_factors(IMat a);

// Saturation of the column lattice of a inside Z^rows: basis of
// (Q-span of columns) ∩ Z^rows.
IMat saturate_lattice(const IMat& a);

} // namespace bcx

#endif

#pragma once

// The exact coefficient ring on a standard chart X_P x Hom(P^gp, R) for
// P = Q x Z^(n-k), Q toric (sharp) of rank k.  Elements are finite sums of
// monomials
//
//     c * mu_q * e^{i<m,theta>} * z^a * zbar^b
//
// with c a Gaussian rational, q in Q and m in Q^gp (both written in the
// gp-coordinates of Q, length k), and a, b exponent vectors of length n-k
// for the complex variables z_j = x_j + i y_j of the free factor.

#include "bcx/error.hpp"
#include "bcx/lattice_monoid.hpp"
#include "bcx/model_space.hpp"
#include "bcx/rational.hpp"

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

namespace bcx {

struct Chart {
    std::shared_ptr<const WeaklyToricMonoid> sharp; // Q, must be sharp
    std::size_t extra = 0;                          // n - k

    std::size_t k() const { return sharp->gp_rank(); }
    std::size_t n() const { return k() + extra; }
};

// Chart for P itself: sharp part = P or its sharp quotient, extra = unit rank.
Chart make_chart(const std::shared_ptr<const WeaklyToricMonoid>& p,
                 std::size_t additional_free = 0);

bool same_chart(const Chart& a, const Chart& b);
void require_same_chart(const Chart& a, const Chart& b);

struct MonoKey {
    std::vector<std::int64_t> q; // length k, in Q (gp-coordinates)
    std::vector<std::int64_t> m; // length k, Fourier index in Q^gp
    std::vector<std::uint32_t> a; // length n-k, z exponents
    std::vector<std::uint32_t> b; // length n-k, zbar exponents

    auto operator<=>(const MonoKey&) const = default;
};

std::string to_string(const MonoKey& key);

// Guard against runaway polynomial degree in z/zbar (DegreeOverflow).
void set_degree_cap(std::size_t cap);
std::size_t degree_cap();

class CoeffElement {
public:
    explicit CoeffElement(Chart chart);

    static CoeffElement constant(const Chart& chart, const GRat& c);
    // Validates q in Q; raises NotInMonoid otherwise.
    static CoeffElement monomial(const Chart& chart, const MonoKey& key,
                                 const GRat& c);
    // mu_q e^{i theta_q}, the holomorphic monomial for q in Q (gp-coords).
    static CoeffElement hol_monomial(const Chart& chart,
                                     const std::vector<std::int64_t>& q);
    static CoeffElement z_var(const Chart& chart, std::size_t j);
    static CoeffElement zbar_var(const Chart& chart, std::size_t j);

    const Chart& chart() const { return chart_; }
    const std::map<MonoKey, GRat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    GRat coefficient(const MonoKey& key) const;

    CoeffElement operator+(const CoeffElement& o) const;
    CoeffElement operator-(const CoeffElement& o) const;
    CoeffElement operator-() const;
    CoeffElement operator*(const CoeffElement& o) const;
    CoeffElement operator*(const GRat& c) const;
    CoeffElement& operator+=(const CoeffElement& o);
    bool operator==(const CoeffElement& o) const;

    // (q, m, a, b, c) -> (q, -m, b, a, conj c): complex conjugate function.
    CoeffElement conjugate() const;
    bool is_real() const; // self-conjugate

    // Restriction to the stratum V = {mu = 0}: drops all terms with q != 0.
    CoeffElement restrict_V() const;

    // Divide every term by mu_q e^{i theta_q}; all terms must have mu-key
    // exactly q (internal tool for layer decompositions).
    CoeffElement divide_hol_monomial(const std::vector<std::int64_t>& q) const;

    void insert_term(const MonoKey& key, const GRat& c); // adds, prunes zeros

private:
    Chart chart_;
    std::map<MonoKey, GRat> terms_;
};

// Exact evaluation data: a point of X_Q (mu-values), unit Gaussian rationals
// t_l = e^{i theta_l} (|t_l| = 1 is required), and z-values.
struct ChartPoint {
    ModelPoint base;
    std::vector<GRat> theta_exp; // length k
    std::vector<GRat> z;         // length n-k
};

GRat eval_coeff(const CoeffElement& f, const ChartPoint& pt);

// Float evaluation at interior coordinates u in R^{2n}, ordered like the
// frame: u[l] = s_l (log lambda) for l < k, u[k+j] = x_j, u[n+l] = theta_l,
// u[n+k+j] = y_j.  The frame field with index i is d/du_i in this system.
std::complex<double> eval_coeff_f(const CoeffElement& f,
                                  const std::vector<double>& u);

std::string to_string(const CoeffElement& f);

} // namespace bcx

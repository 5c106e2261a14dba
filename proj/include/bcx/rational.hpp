#ifndef BCX_RATIONAL_HPP
#define BCX_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>
#include <cstdint>
#include <string>
#include <vector>

#include "bcx/error.hpp"

namespace bcx {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::rational<Int>;

using IVec = std::vector<Int>;
using QVec = std::vector<Rat>;

inline std::string to_string(const Int& n) { return n.str(); }

inline std::string to_string(const Rat& r)
{
    if (r.denominator() == 1)
        return r.numerator().str();
    return r.numerator().str() + "/" + r.denominator().str();
}

inline std::string to_string(const IVec& v)
{
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        s += v[i].str();
    }
    return s + ")";
}

inline bool is_zero(const Rat& r) { return r.numerator() == 0; }

inline Rat rat_abs(const Rat& r) { return r < Rat(0) ? -r : r; }

inline double to_double(const Rat& r)
{
    return r.numerator().convert_to<double>() / r.denominator().convert_to<double>();
}

// Parse "n" or "p/q" with optional sign; throws Error(ParseError) on bad syntax.
Rat rat_parse(const std::string& text);

// Gaussian rational: re + im*i with exact rational parts. Field operations
// only; this is the coefficient field for all complex-linear solves.
struct GRat {
    Rat re{};
    Rat im{};

    GRat() = default;
    GRat(Rat r) : re(std::move(r)) {}
    GRat(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
    GRat(int n) : re(Rat(n)) {}

    bool is_zero() const { return re.numerator() == 0 && im.numerator() == 0; }

    GRat conj() const { return GRat(re, -im); }

    Rat norm2() const { return re * re + im * im; }

    GRat operator-() const { return GRat(-re, -im); }

    GRat& operator+=(const GRat& o)
    {
        re += o.re;
        im += o.im;
        return *this;
    }
    GRat& operator-=(const GRat& o)
    {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    GRat& operator*=(const GRat& o)
    {
        Rat r = re * o.re - im * o.im;
        Rat i = re * o.im + im * o.re;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }
    GRat& operator/=(const GRat& o)
    {
        if (o.is_zero())
            throw std::domain_error("GRat: division by zero");
        Rat n2 = o.norm2();
        Rat r = (re * o.re + im * o.im) / n2;
        Rat i = (im * o.re - re * o.im) / n2;
        re = std::move(r);
        im = std::move(i);
        return *this;
    }

    friend GRat operator+(GRat a, const GRat& b) { return a += b; }
    friend GRat operator-(GRat a, const GRat& b) { return a -= b; }
    friend GRat operator*(GRat a, const GRat& b) { return a *= b; }
    friend GRat operator/(GRat a, const GRat& b) { return a /= b; }
    friend bool operator==(const GRat& a, const GRat& b)
    {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GRat& a, const GRat& b) { return !(a == b); }
};

inline GRat grat_i() { return GRat(Rat(0), Rat(1)); }

inline bool is_zero(const GRat& c) { return c.is_zero(); }

std::string to_string(const GRat& c);

// Parse "a", "a/b", "(re,im)" with rational components.
GRat grat_parse(const std::string& text);

} // namespace bcx

#endif

#include "bcx/rational.hpp"

#include <cctype>

namespace bcx {

namespace {

bool parse_int(const std::string& s, std::size_t& pos, Int& out)
{
    std::size_t start = pos;
    bool neg = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        neg = (s[pos] == '-');
        ++pos;
    }
    std::size_t digits_start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
        ++pos;
    if (pos == digits_start) {
        pos = start;
        return false;
    }
    out = Int(s.substr(digits_start, pos - digits_start));
    if (neg)
        out = -out;
    return true;
}

} // namespace

Rat rat_parse(const std::string& text)
{
    std::size_t pos = 0;
    Int num;
    if (!parse_int(text, pos, num))
        raise(Errc::ParseError, "expected rational number, got '" + text + "'");
    Int den(1);
    if (pos < text.size() && text[pos] == '/') {
        ++pos;
        if (!parse_int(text, pos, den) || den == 0)
            raise(Errc::ParseError, "bad denominator in '" + text + "'");
    }
    if (pos != text.size())
        raise(Errc::ParseError, "trailing characters in rational '" + text + "'");
    return Rat(num, den);
}

std::string to_string(const GRat& c)
{
    if (c.im.numerator() == 0)
        return to_string(c.re);
    return "(" + to_string(c.re) + "," + to_string(c.im) + ")";
}

GRat grat_parse(const std::string& text)
{
    if (!text.empty() && text.front() == '(') {
        if (text.back() != ')')
            raise(Errc::ParseError, "unterminated complex literal '" + text + "'");
        std::string inner = text.substr(1, text.size() - 2);
        std::size_t comma = inner.find(',');
        if (comma == std::string::npos)
            raise(Errc::ParseError, "complex literal needs re,im: '" + text + "'");
        return GRat(rat_parse(inner.substr(0, comma)), rat_parse(inner.substr(comma + 1)));
    }
    return GRat(rat_parse(text));
}

} // namespace bcx

#include "bcx/specfile.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace bcx {

namespace {

struct Tok {
    std::string text;
    int col = 0; // 1-based
};

[[noreturn]] void fail(int line, int col, const std::string& message,
                       const std::string& expected = {})
{
    std::string w = "line " + std::to_string(line) + ", col " +
                    std::to_string(col) + ": " + message;
    if (!expected.empty())
        w += "; expected " + expected;
    raise(Errc::ParseError, w);
}

std::vector<Tok> tokenize(const std::string& s, int base_col)
{
    std::vector<Tok> out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (std::isspace(static_cast<unsigned char>(s[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
        out.push_back({s.substr(start, i - start),
                       base_col + static_cast<int>(start)});
    }
    return out;
}

bool is_integer_token(const std::string& t)
{
    if (t.empty())
        return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size())
        return false;
    for (; i < t.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(t[i])))
            return false;
    return true;
}

// Precondition: is_integer_token(s).  cpp_int's string constructor reads a
// leading 0 as an octal prefix (and rejects '+'), so normalize to strict
// decimal first.
Int decimal_int(const std::string& s)
{
    bool neg = s[0] == '-';
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    std::size_t nz = s.find_first_not_of('0', i);
    Int v(nz == std::string::npos ? std::string("0") : s.substr(nz));
    return neg ? -v : v;
}

Int parse_int(const Tok& t, int line, const char* what)
{
    if (!is_integer_token(t.text))
        fail(line, t.col, std::string("'") + t.text + "' is not an integer",
             std::string("an integer ") + what);
    return decimal_int(t.text);
}

std::int64_t parse_i64(const Tok& t, int line, const char* what)
{
    Int v = parse_int(t, line, what);
    if (v > Int(std::numeric_limits<std::int64_t>::max()) ||
        v < Int(std::numeric_limits<std::int64_t>::min()))
        fail(line, t.col, "integer out of range", what);
    return v.convert_to<std::int64_t>();
}

std::size_t parse_index(const Tok& t, int line, const char* what)
{
    std::int64_t v = parse_i64(t, line, what);
    if (v < 0)
        fail(line, t.col, "index must be non-negative", what);
    return static_cast<std::size_t>(v);
}

std::uint32_t parse_u32(const Tok& t, int line, const char* what)
{
    std::int64_t v = parse_i64(t, line, what);
    if (v < 0 || v > std::numeric_limits<std::uint32_t>::max())
        fail(line, t.col, "value out of range", what);
    return static_cast<std::uint32_t>(v);
}

Rat parse_rat(const Tok& t, int line, const char* what)
{
    std::size_t slash = t.text.find('/');
    std::string num = t.text.substr(0, slash);
    if (!is_integer_token(num))
        fail(line, t.col, std::string("'") + t.text + "' is not a rational",
             std::string("num[/den] ") + what);
    if (slash == std::string::npos)
        return Rat(decimal_int(num));
    std::string den = t.text.substr(slash + 1);
    if (!is_integer_token(den) || decimal_int(den) == 0)
        fail(line, t.col, std::string("'") + t.text + "' is not a rational",
             std::string("num[/den] with nonzero den ") + what);
    return Rat(decimal_int(num), decimal_int(den));
}

double parse_double(const Tok& t, int line, const char* what)
{
    try {
        std::size_t used = 0;
        double v = std::stod(t.text, &used);
        if (used != t.text.size())
            throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        fail(line, t.col, std::string("'") + t.text + "' is not a number",
             what);
    }
}

// split on '|' keeping per-segment base columns
std::vector<std::pair<std::string, int>> split_bars(const std::string& s,
                                                    int base_col)
{
    std::vector<std::pair<std::string, int>> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == '|') {
            out.push_back({s.substr(start, i - start),
                           base_col + static_cast<int>(start)});
            start = i + 1;
        }
    }
    return out;
}

struct Parser {
    SpecFile out;
    std::string section;
    int section_line = 0;

    // [monoid] scratch
    bool saw_ambient = false, saw_free = false;
    std::vector<int> gen_lines, rel_lines;

    void finish_section(int line)
    {
        if (section == "monoid") {
            const SpecMonoid& m = *out.monoid;
            if (!saw_ambient)
                fail(section_line, 1, "[monoid] is missing ambient_rank",
                     "an 'ambient_rank = <n>' line");
            if (m.pres.generators.empty())
                fail(section_line, 1, "[monoid] has no generators",
                     "at least one 'generator = ...' line");
            for (std::size_t i = 0; i < m.pres.generators.size(); ++i)
                if (m.pres.generators[i].size() != m.pres.ambient_rank)
                    fail(gen_lines[i], 1,
                         "generator row has " +
                             std::to_string(m.pres.generators[i].size()) +
                             " entries",
                         std::to_string(m.pres.ambient_rank) +
                             " (the ambient rank)");
            for (std::size_t i = 0; i < m.pres.relations.size(); ++i) {
                const auto& [a, b] = m.pres.relations[i];
                if (a.size() != m.pres.generators.size() ||
                    b.size() != m.pres.generators.size())
                    fail(rel_lines[i], 1,
                         "relation row " + std::to_string(i + 1) + " has " +
                             std::to_string(a.size()) + " -> " +
                             std::to_string(b.size()) + " entries",
                         std::to_string(m.pres.generators.size()) +
                             " on each side (one per generator)");
            }
        }
        (void)line;
    }

    void open_section(const std::string& name, int line)
    {
        finish_section(line);
        section = name;
        section_line = line;
        auto dup = [&](bool present) {
            if (present)
                fail(line, 1, "duplicate section [" + name + "]",
                     "each section at most once");
        };
        if (name == "monoid") {
            dup(out.monoid.has_value());
            out.monoid.emplace();
        } else if (name == "points") {
            dup(out.points.has_value());
            out.points.emplace();
        } else if (name == "bacs") {
            dup(out.bacs.has_value());
            out.bacs.emplace();
        } else if (name == "seed-chart") {
            dup(out.seed.has_value());
            out.seed.emplace();
        } else if (name == "perturbation") {
            dup(out.perturbation.has_value());
            out.perturbation.emplace();
        } else {
            fail(line, 1, "unknown section [" + name + "]",
                 "[monoid], [points], [bacs], [seed-chart] or "
                 "[perturbation]");
        }
    }

    void key_line(const std::string& key, int key_col, const std::string& rest,
                  int rest_col, int line)
    {
        if (section == "monoid")
            monoid_key(key, key_col, rest, rest_col, line);
        else if (section == "points")
            points_key(key, key_col, rest, rest_col, line);
        else if (section == "bacs")
            bacs_key(key, key_col, rest, rest_col, line);
        else if (section == "seed-chart")
            seed_key(key, key_col, rest, rest_col, line);
        else if (section == "perturbation")
            perturbation_key(key, key_col, rest, rest_col, line);
    }

    void monoid_key(const std::string& key, int key_col,
                    const std::string& rest, int rest_col, int line)
    {
        SpecMonoid& m = *out.monoid;
        auto toks = tokenize(rest, rest_col);
        if (key == "ambient_rank") {
            if (saw_ambient)
                fail(line, key_col, "duplicate ambient_rank", "one per file");
            if (toks.size() != 1)
                fail(line, rest_col, "ambient_rank takes one integer",
                     "e.g. 'ambient_rank = 2'");
            std::size_t r = parse_index(toks[0], line, "(the ambient rank)");
            if (r == 0)
                fail(line, toks[0].col, "ambient_rank must be positive",
                     "a positive integer");
            m.pres.ambient_rank = r;
            saw_ambient = true;
        } else if (key == "generator") {
            IVec g;
            if (toks.empty())
                fail(line, rest_col, "empty generator row",
                     "ambient-lattice coordinates");
            for (const Tok& t : toks)
                g.push_back(parse_int(t, line, "(a lattice coordinate)"));
            m.pres.generators.push_back(std::move(g));
            gen_lines.push_back(line);
        } else if (key == "relation") {
            std::size_t arrow = toks.size();
            for (std::size_t i = 0; i < toks.size(); ++i)
                if (toks[i].text == "->")
                    arrow = i;
            if (arrow == toks.size())
                fail(line, rest_col, "relation is missing '->'",
                     "'a1 .. am -> b1 .. bm'");
            IVec a, b;
            for (std::size_t i = 0; i < arrow; ++i)
                a.push_back(parse_int(toks[i], line, "(a multiplicity)"));
            for (std::size_t i = arrow + 1; i < toks.size(); ++i)
                b.push_back(parse_int(toks[i], line, "(a multiplicity)"));
            m.pres.relations.push_back({std::move(a), std::move(b)});
            rel_lines.push_back(line);
        } else if (key == "free") {
            if (saw_free)
                fail(line, key_col, "duplicate free", "one per file");
            if (toks.size() != 1)
                fail(line, rest_col, "free takes one integer",
                     "the number of free coordinates");
            m.free = parse_index(toks[0], line, "(free coordinate count)");
            saw_free = true;
        } else {
            fail(line, key_col, "unknown key '" + key + "' in [monoid]",
                 "ambient_rank, generator, relation or free");
        }
    }

    void points_key(const std::string& key, int key_col,
                    const std::string& rest, int rest_col, int line)
    {
        auto toks = tokenize(rest, rest_col);
        if (toks.empty())
            fail(line, rest_col, "empty point row", "generator values");
        SpecPoint p;
        p.line = line;
        if (key == "exact") {
            p.exact = true;
            for (const Tok& t : toks)
                p.exact_values.push_back(
                    parse_rat(t, line, "(a generator value)"));
        } else if (key == "float") {
            p.exact = false;
            for (const Tok& t : toks)
                p.float_values.push_back(
                    parse_double(t, line, "(a generator value)"));
        } else {
            fail(line, key_col, "unknown key '" + key + "' in [points]",
                 "exact or float");
        }
        out.points->push_back(std::move(p));
    }

    void bacs_key(const std::string& key, int key_col, const std::string& rest,
                  int rest_col, int line)
    {
        SpecBacs& bj = *out.bacs;
        if (key == "base") {
            auto toks = tokenize(rest, rest_col);
            if (toks.size() != 1 ||
                (toks[0].text != "standard" && toks[0].text != "zero"))
                fail(line, rest_col, "base must be 'standard' or 'zero'",
                     "'base = standard' or 'base = zero'");
            bj.standard_base = toks[0].text == "standard";
        } else if (key == "term") {
            auto segs = split_bars(rest, rest_col);
            if (segs.size() != 6)
                fail(line, rest_col,
                     "term has " + std::to_string(segs.size()) + " segments",
                     "6: 'row col | q | m | a | b | re im'");
            SpecBacsTerm t;
            t.line = line;
            auto rc = tokenize(segs[0].first, segs[0].second);
            if (rc.size() != 2)
                fail(line, segs[0].second, "first segment needs row and col",
                     "'row col'");
            t.row = parse_index(rc[0], line, "(frame row)");
            t.col = parse_index(rc[1], line, "(frame column)");
            for (const Tok& tk : tokenize(segs[1].first, segs[1].second))
                t.q.push_back(parse_i64(tk, line, "(a mu-exponent)"));
            for (const Tok& tk : tokenize(segs[2].first, segs[2].second))
                t.m.push_back(parse_i64(tk, line, "(a Fourier index)"));
            for (const Tok& tk : tokenize(segs[3].first, segs[3].second))
                t.a.push_back(parse_u32(tk, line, "(a z exponent)"));
            for (const Tok& tk : tokenize(segs[4].first, segs[4].second))
                t.b.push_back(parse_u32(tk, line, "(a zbar exponent)"));
            auto cc = tokenize(segs[5].first, segs[5].second);
            if (cc.size() != 2)
                fail(line, segs[5].second,
                     "coefficient segment needs two rationals", "'re im'");
            t.c = GRat(parse_rat(cc[0], line, "(the real part)"),
                       parse_rat(cc[1], line, "(the imaginary part)"));
            bj.terms.push_back(std::move(t));
        } else {
            fail(line, key_col, "unknown key '" + key + "' in [bacs]",
                 "base or term");
        }
    }

    void seed_key(const std::string& key, int key_col, const std::string& rest,
                  int rest_col, int line)
    {
        if (key != "gauge")
            fail(line, key_col, "unknown key '" + key + "' in [seed-chart]",
                 "gauge");
        auto toks = tokenize(rest, rest_col);
        if (toks.size() != 2)
            fail(line, rest_col, "gauge takes two rationals", "'re im'");
        out.seed->gauge.push_back(
            GRat(parse_rat(toks[0], line, "(the real part)"),
                 parse_rat(toks[1], line, "(the imaginary part)")));
        out.seed->lines.push_back(line);
    }

    void perturbation_key(const std::string& key, int key_col,
                          const std::string& rest, int rest_col, int line)
    {
        if (key != "term")
            fail(line, key_col, "unknown key '" + key + "' in [perturbation]",
                 "term");
        auto segs = split_bars(rest, rest_col);
        if (segs.size() != 4)
            fail(line, rest_col,
                 "term has " + std::to_string(segs.size()) + " segments",
                 "4: 'j | q | m | re im'");
        SpecPerturbationTerm t;
        t.line = line;
        auto jt = tokenize(segs[0].first, segs[0].second);
        if (jt.size() != 1)
            fail(line, segs[0].second, "first segment is the z index", "'j'");
        t.j = parse_index(jt[0], line, "(a z-coordinate index)");
        for (const Tok& tk : tokenize(segs[1].first, segs[1].second))
            t.q.push_back(parse_i64(tk, line, "(a mu-exponent)"));
        for (const Tok& tk : tokenize(segs[2].first, segs[2].second))
            t.m.push_back(parse_i64(tk, line, "(a Fourier index)"));
        auto cc = tokenize(segs[3].first, segs[3].second);
        if (cc.size() != 2)
            fail(line, segs[3].second,
                 "coefficient segment needs two rationals", "'re im'");
        t.c = GRat(parse_rat(cc[0], line, "(the real part)"),
                   parse_rat(cc[1], line, "(the imaginary part)"));
        out.perturbation->push_back(std::move(t));
    }
};

} // namespace

SpecFile parse_spec(const std::string& text)
{
    Parser p;
    int line_no = 0;
    std::istringstream in(text);
    std::string raw;
    bool any = false;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r')
            raw.pop_back();
        std::size_t hash = raw.find('#');
        std::string lineText = hash == std::string::npos
                                   ? raw
                                   : raw.substr(0, hash);
        std::size_t first = lineText.find_first_not_of(" \t");
        if (first == std::string::npos)
            continue;
        std::size_t last = lineText.find_last_not_of(" \t");
        std::string body = lineText.substr(first, last - first + 1);
        int col = static_cast<int>(first) + 1;

        if (body.front() == '[') {
            if (body.back() != ']')
                fail(line_no, col, "unterminated section header",
                     "'[name]' on its own line");
            p.open_section(body.substr(1, body.size() - 2), line_no);
            any = true;
            continue;
        }
        if (p.section.empty())
            fail(line_no, col, "content before any section header",
                 "a '[section]' line first");
        std::size_t eq = body.find('=');
        if (eq == std::string::npos)
            fail(line_no, col, "expected 'key = value'", "'=' in the line");
        std::size_t kend = body.find_last_not_of(" \t", eq ? eq - 1 : 0);
        if (eq == 0 || kend == std::string::npos)
            fail(line_no, col, "missing key before '='", "'key = value'");
        std::string key = body.substr(0, kend + 1);
        std::string rest = body.substr(eq + 1);
        int rest_col = col + static_cast<int>(eq) + 1;
        p.key_line(key, col, rest, rest_col, line_no);
        any = true;
    }
    if (!any)
        raise(Errc::ParseError, "no sections: the file is empty or all "
                                "comments; expected at least one of "
                                "[monoid], [points], [bacs], [seed-chart], "
                                "[perturbation]");
    p.finish_section(line_no);
    return p.out;
}

SpecFile parse_spec_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(Errc::ParseError, "cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

std::string rat_to_string(const Rat& r)
{
    std::string s = r.numerator().str();
    if (r.denominator() != 1)
        s += "/" + r.denominator().str();
    return s;
}

Rat rat_from_string(const std::string& s)
{
    std::size_t slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den =
        slash == std::string::npos ? std::string("1") : s.substr(slash + 1);
    if (!is_integer_token(num) || !is_integer_token(den) ||
        decimal_int(den) == 0)
        throw std::invalid_argument("rat_from_string: '" + s + "'");
    return Rat(decimal_int(num), decimal_int(den));
}

namespace {

std::string double_to_string(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_ivec(std::ostream& os, const IVec& v)
{
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? " " : "") << v[i].str();
}

template <class T> void write_plain(std::ostream& os, const std::vector<T>& v)
{
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            os << " ";
        os << v[i];
    }
}

} // namespace

std::string serialize_spec(const SpecFile& s)
{
    std::ostringstream os;
    bool first = true;
    auto sep = [&] {
        if (!first)
            os << "\n";
        first = false;
    };
    if (s.monoid) {
        sep();
        os << "[monoid]\n";
        os << "ambient_rank = " << s.monoid->pres.ambient_rank << "\n";
        for (const IVec& g : s.monoid->pres.generators) {
            os << "generator = ";
            write_ivec(os, g);
            os << "\n";
        }
        for (const auto& [a, b] : s.monoid->pres.relations) {
            os << "relation = ";
            write_ivec(os, a);
            os << " -> ";
            write_ivec(os, b);
            os << "\n";
        }
        if (s.monoid->free != 0)
            os << "free = " << s.monoid->free << "\n";
    }
    if (s.points) {
        sep();
        os << "[points]\n";
        for (const SpecPoint& p : *s.points) {
            if (p.exact) {
                os << "exact =";
                for (const Rat& v : p.exact_values)
                    os << " " << rat_to_string(v);
            } else {
                os << "float =";
                for (double v : p.float_values)
                    os << " " << double_to_string(v);
            }
            os << "\n";
        }
    }
    if (s.bacs) {
        sep();
        os << "[bacs]\n";
        os << "base = " << (s.bacs->standard_base ? "standard" : "zero")
           << "\n";
        for (const SpecBacsTerm& t : s.bacs->terms) {
            os << "term = " << t.row << " " << t.col << " | ";
            write_plain(os, t.q);
            os << " | ";
            write_plain(os, t.m);
            os << " | ";
            write_plain(os, t.a);
            os << " | ";
            write_plain(os, t.b);
            os << " | " << rat_to_string(t.c.re) << " "
               << rat_to_string(t.c.im) << "\n";
        }
    }
    if (s.seed) {
        sep();
        os << "[seed-chart]\n";
        for (const GRat& g : s.seed->gauge)
            os << "gauge = " << rat_to_string(g.re) << " "
               << rat_to_string(g.im) << "\n";
    }
    if (s.perturbation) {
        sep();
        os << "[perturbation]\n";
        for (const SpecPerturbationTerm& t : *s.perturbation) {
            os << "term = " << t.j << " | ";
            write_plain(os, t.q);
            os << " | ";
            write_plain(os, t.m);
            os << " | " << rat_to_string(t.c.re) << " "
               << rat_to_string(t.c.im) << "\n";
        }
    }
    return os.str();
}

} // namespace bcx

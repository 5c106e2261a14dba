#include "bcx/report.hpp"

#include "bcx/specfile.hpp"

#include <cstdio>
#include <sstream>

namespace bcx {

std::uint64_t fnv1a64(std::string_view bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string digest_hex(std::string_view bytes)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

std::string grat_to_string(const GRat& c)
{
    if (c.im.numerator() == 0)
        return rat_to_string(c.re);
    std::string im = rat_to_string(c.im) + "i";
    if (c.re.numerator() == 0)
        return im;
    if (c.im > Rat(0))
        return rat_to_string(c.re) + "+" + im;
    return rat_to_string(c.re) + im;
}

Json coeff_to_json(const CoeffElement& f)
{
    Json terms = Json::array();
    for (const auto& [key, c] : f.terms()) {
        Json t = Json::object();
        t["q"] = key.q;
        t["m"] = key.m;
        t["a"] = key.a;
        t["b"] = key.b;
        t["re"] = rat_to_string(c.re);
        t["im"] = rat_to_string(c.im);
        terms.push_back(std::move(t));
    }
    Json out = Json::object();
    out["text"] = to_string(f);
    out["terms"] = std::move(terms);
    return out;
}

std::string report_to_json(const Report& r)
{
    Json j = Json::object();
    j["schema_version"] = 1;
    j["command"] = r.command;
    j["input_digest"] = r.input_digest;
    j["options"] = r.options;
    j["results"] = r.results;
    j["diagnostics"] = r.diagnostics;
    return j.dump(2) + "\n";
}

namespace {

bool is_scalar(const Json& v)
{
    return v.is_primitive();
}

std::string scalar_text(const Json& v)
{
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_null())
        return "infinity";
    return v.dump();
}

// display form of a coefficient-element payload
bool is_coeff_obj(const Json& v)
{
    return v.is_object() && v.contains("text") && v.contains("terms");
}

bool is_flat(const Json& v)
{
    if (!v.is_object())
        return false;
    for (const auto& [k, val] : v.items()) {
        if (is_scalar(val) || is_coeff_obj(val))
            continue;
        if (val.is_array()) {
            bool scalars = true;
            for (const auto& e : val)
                if (!is_scalar(e))
                    scalars = false;
            if (scalars)
                continue;
        }
        return false;
    }
    return true;
}

std::string inline_array(const Json& a)
{
    std::string s = "[";
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i)
            s += ", ";
        s += scalar_text(a[i]);
    }
    return s + "]";
}

void render(std::ostream& os, const std::string& key, const Json& v,
            int indent)
{
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    if (is_coeff_obj(v)) {
        os << pad << key << ": " << v["text"].get<std::string>() << "\n";
        return;
    }
    if (is_scalar(v)) {
        os << pad << key << ": " << scalar_text(v) << "\n";
        return;
    }
    if (v.is_array()) {
        bool scalars = true;
        for (const auto& e : v)
            if (!is_scalar(e))
                scalars = false;
        if (scalars) {
            os << pad << key << ": " << inline_array(v) << "\n";
            return;
        }
        os << pad << key << ":\n";
        for (const auto& e : v) {
            if (is_coeff_obj(e)) {
                os << pad << "  - " << e["text"].get<std::string>() << "\n";
            } else if (is_flat(e)) {
                os << pad << "  -";
                for (const auto& [k, val] : e.items()) {
                    if (is_coeff_obj(val))
                        os << " " << k << "=" << val["text"].get<std::string>();
                    else if (val.is_array())
                        os << " " << k << "=" << inline_array(val);
                    else
                        os << " " << k << "=" << scalar_text(val);
                }
                os << "\n";
            } else {
                os << pad << "  -\n";
                for (const auto& [k, val] : e.items())
                    render(os, k, val, indent + 2);
            }
        }
        return;
    }
    os << pad << key << ":\n";
    for (const auto& [k, val] : v.items())
        render(os, k, val, indent + 1);
}

} // namespace

std::string report_to_text(const Report& r, double elapsed_seconds)
{
    std::ostringstream os;
    os << "command: " << r.command << "\n";
    os << "input-digest: " << r.input_digest << "\n";
    if (!r.options.empty()) {
        os << "options:";
        for (const auto& [k, v] : r.options.items())
            os << " " << k << "=" << scalar_text(v);
        os << "\n";
    }
    for (const auto& [k, v] : r.results.items())
        render(os, k, v, 0);
    for (const std::string& d : r.diagnostics)
        os << "note: " << d << "\n";
    if (elapsed_seconds >= 0.0) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "elapsed: %.3fs", elapsed_seconds);
        os << buf << "\n";
    }
    return os.str();
}

} // namespace bcx

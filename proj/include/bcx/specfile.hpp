#pragma once

// Line-oriented input format for the CLI: a spec file is a sequence of
// sections ([monoid], [points], [bacs], [seed-chart], [perturbation]) of
// `key = value` lines; `#` starts a comment.  The parser is strict: unknown
// sections or keys, malformed numbers and wrong row lengths all raise
// ParseError with a line/column location and an expected-token hint.  The
// serializer emits the canonical form (fixed section/key order), and
// parse -> serialize is the identity on canonical input.

#include "bcx/coeff.hpp"
#include "bcx/formal_nn.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bcx {

struct SpecMonoid {
    MonoidPresentation pres;
    std::size_t free = 0; // additional free (z) coordinates of the chart
};

struct SpecPoint {
    bool exact = true;
    QVec exact_values;
    std::vector<double> float_values;
    int line = 0;
};

// One additive term c * mu_q e^{i<m,theta>} zbar^b z^a of a matrix entry.
struct SpecBacsTerm {
    std::size_t row = 0;
    std::size_t col = 0;
    std::vector<std::int64_t> q;
    std::vector<std::int64_t> m;
    std::vector<std::uint32_t> a;
    std::vector<std::uint32_t> b;
    GRat c;
    int line = 0;
};

struct SpecBacs {
    bool standard_base = true; // terms are added on top of J_st (else zero)
    std::vector<SpecBacsTerm> terms;
};

struct SpecSeed {
    std::vector<GRat> gauge; // unit constants, one per toric direction
    std::vector<int> lines;
};

struct SpecPerturbationTerm {
    std::size_t j = 0; // which z coordinate is shifted
    std::vector<std::int64_t> q;
    std::vector<std::int64_t> m;
    GRat c;
    int line = 0;
};

struct SpecFile {
    std::optional<SpecMonoid> monoid;
    std::optional<std::vector<SpecPoint>> points;
    std::optional<SpecBacs> bacs;
    std::optional<SpecSeed> seed;
    std::optional<std::vector<SpecPerturbationTerm>> perturbation;
};

SpecFile parse_spec(const std::string& text);
SpecFile parse_spec_file(const std::string& path); // ParseError on IO failure

// Canonical text form; parse(serialize(s)) reproduces s and serialize is
// idempotent across a parse round-trip.
std::string serialize_spec(const SpecFile& s);

std::string rat_to_string(const Rat& r);
Rat rat_from_string(const std::string& s); // throws std::invalid_argument

} // namespace bcx

#pragma once

// Structured command reports: a deterministic JSON payload (schema
// versioned, byte-identical for identical input/options/seed) and a
// human-readable rendering of the same data.  Wall-clock timing appears in
// the human rendering only so the machine artifact stays reproducible.

#include "bcx/coeff.hpp"

#include "json.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bcx {

using Json = nlohmann::ordered_json;

struct Report {
    std::string command;
    std::string input_digest; // fnv1a-64 of the input file bytes, hex
    Json options = Json::object();
    Json results = Json::object();
    std::vector<std::string> diagnostics;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::string digest_hex(std::string_view bytes);

// Exact serializations: rationals as "num" or "num/den" strings, Gaussian
// rationals as "re+im i", coefficient elements as canonical term lists.
std::string grat_to_string(const GRat& c);
Json coeff_to_json(const CoeffElement& f);

std::string report_to_json(const Report& r);
// elapsed_seconds < 0 suppresses the timing line.
std::string report_to_text(const Report& r, double elapsed_seconds = -1.0);

} // namespace bcx

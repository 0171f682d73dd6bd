#pragma once

#include "mei/generators.hpp"
#include "mei/mei.hpp"

#include <iosfwd>
#include <string>

namespace mei {

class ParseError : public Error {
public:
    explicit ParseError(const std::string& w) : Error("parse error: " + w) {}
};

/// Plain-text instance format:
///   # lb <value>        optional certified-lower-bound metadata
///   # budget <value>    optional budget metadata
///   p <n> <m> <k>
///   e <u> <v>           m lines, edge ids in file order
///   f <u> <v>           k lines
GeneratedInstance parse_instance(std::istream& in);
void serialize_instance(std::ostream& out, const GeneratedInstance& inst);

/// Round-trip helpers for files.
GeneratedInstance load_instance(const std::string& path);
void save_instance(const std::string& path, const GeneratedInstance& inst);

/// JSON report of a run. Wall time is only emitted when with_timing is
/// set, keeping reports byte-stable across runs otherwise.
std::string report_to_json(const MeiReport& rep, const Multigraph& g, bool dump_embedding,
                           double wall_ms, bool with_timing);

/// Per-node preference dump: "nu: peers=(a,b) label=... faces=[...]".
std::string dump_preference(const NodePreference& p);

} // namespace mei

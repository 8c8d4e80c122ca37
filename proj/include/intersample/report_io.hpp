#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "intersample/bnb.hpp"
#include "intersample/verifier.hpp"

namespace intersample {

/// Malformed spec or report document.
class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct SpecDocument {
  SystemSpec system;
  std::vector<QueryPoint> queries;
};

/// Reads {"A", "B", "dt", "X": {"H"}, "U": {"H"}, "queries": [{"x0", "u0", "label"}]}.
/// Missing labels become "q<index>".
SpecDocument parse_spec(std::string_view text);
SpecDocument load_spec(const std::filesystem::path& path);

/// Serializes with every floating-point number printed to 17 significant digits.
std::string dump_json(const nlohmann::ordered_json& doc, int indent = 2);

nlohmann::ordered_json report_to_json(const VerificationReport& report, bool include_timing = true);
VerificationReport report_from_json(const nlohmann::json& doc);

std::string serialize_report(const VerificationReport& report, bool include_timing = true);
VerificationReport parse_report(std::string_view text);

nlohmann::ordered_json trace_to_json(const TraceEvent& event, std::size_t query, std::size_t j);
/// One JSON object per line, no trailing newline.
std::string trace_line(const TraceEvent& event, std::size_t query, std::size_t j);

/// Header "t,f,x1,...,xn", then one row per sample.
void write_csv(std::ostream& os, const SampleTable& table);

}  // namespace intersample

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "prizecorr/inference.hpp"

namespace prizecorr {

/// A descriptor document parsed from disk. Bundled descriptors whose rank
/// vectors are placeholders (counts are real, the individual ranks are not)
/// carry ranks_are_placeholders = true and produce a warning.
struct ParsedDescriptor {
    PrizeDataset dataset;
    std::string notes;
    bool ranks_are_placeholders = false;
    std::vector<std::string> warnings;
};

/// Parses and validates a descriptor file. Throws parse_error naming the
/// offending key and line on malformed documents, unknown keys, or
/// invariant violations.
ParsedDescriptor parse_descriptor(const std::filesystem::path& path);

/// Same, for an in-memory document; origin is used in error messages.
ParsedDescriptor parse_descriptor_text(const std::string& text,
                                       const std::string& origin = "<string>");

/// Canonical serialization (fixed key order, two-space indent, trailing
/// newline). parse(serialize(parse(d))) == parse(d).
std::string serialize_descriptor(const PrizeDataset& ds, const std::string& notes = {},
                                 bool ranks_are_placeholders = false);

/// Full-precision decimal formatting (17 significant digits) for CSV output.
std::string format_g17(double v);

}  // namespace prizecorr

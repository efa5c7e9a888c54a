#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "eegvote/dataset.hpp"

namespace eegvote {

// ARFF subset: @relation, numeric/real attributes, exactly one two-valued
// nominal class attribute in last position, @data, dense comma-separated
// rows and '%' comment lines. The first nominal value maps to Label::Open.
// Missing values ('?') are rejected. Throws DatasetError with a line number.
Dataset parse_arff(std::string_view text);

// CSV with the class (0 or 1) in the last column. Quoted fields follow
// RFC 4180 within a single line.
Dataset parse_csv(std::string_view text, bool has_header);

// Writers emit shortest round-trip decimal text, so parsing the output gives
// back bit-identical values.
std::string write_arff(const Dataset& ds);
std::string write_csv(const Dataset& ds, bool with_header = true);

// Loads by extension: ".arff" is ARFF, anything else CSV with the header
// detected from the first row.
Dataset load_dataset(const std::filesystem::path& path);

// Locale-independent number formatting/parsing used by the writers above.
std::string format_double(double v);
bool parse_double(std::string_view token, double& out) noexcept;

}  // namespace eegvote

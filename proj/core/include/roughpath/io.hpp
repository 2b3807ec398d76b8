#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "roughpath/path_lift.hpp"
#include "roughpath/paths.hpp"
#include "roughpath/tensor.hpp"

namespace roughpath {

/// Malformed input data (unreadable numbers, bad CSV layout, JSON syntax).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Structurally valid input that violates the expected schema
/// (unknown keys, wrong types, missing required fields, out-of-range values).
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal form of a double ('.' as the decimal mark).
std::string format_double(double v);

/// CSV path file: '#' lines are comments, the first data line must be the
/// header "t,x1,...,xd", every row holds decimal numbers.  Errors carry the
/// file name and the offending row.
PiecewisePath read_csv_path(const std::string& file);

/// Rows of doubles under a named header, with leading '#' comment lines.
struct CsvTable {
    std::vector<std::string> comments;  // without the leading "# "
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> trailing_comments;
};

void write_csv_table(std::ostream& os, const CsvTable& table);

/// Path written as a CSV table with header t,x1,...,xd.
void write_csv_path(std::ostream& os, const PiecewisePath& path,
                    const std::vector<std::string>& comments);

/// Tensor as JSON: {"dim", "level_cap", "scalar", "levels": [[...], ...]}.
std::string tensor_to_json(const TruncatedTensor& a);
TruncatedTensor tensor_from_json(const std::string& text);

/// Grid lift as JSON: {"p", "dim", "level_cap", "weak_geometric",
/// "base_point", "times", "sigs": [tensor objects]}.
std::string grid_to_json(const RoughPathGrid& X);
RoughPathGrid grid_from_json(const std::string& text);

}  // namespace roughpath

#include "roughpath/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace roughpath {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

double parse_field(const std::string& field, const std::string& file, std::size_t row,
                   std::size_t col) {
    double v = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last)
        throw ParseError(file + ": row " + std::to_string(row) + ", column " + std::to_string(col) +
                         ": '" + field + "' is not a number");
    return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

PiecewisePath read_csv_path(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw ParseError(file + ": cannot open file");
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    std::size_t dim = 0;
    std::vector<double> times;
    std::vector<std::vector<double>> values;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (!have_header) {
            if (fields.size() < 2 || fields[0] != "t")
                throw ParseError(file + ": line " + std::to_string(lineno) +
                                 ": expected header t,x1,...,xd");
            for (std::size_t c = 1; c < fields.size(); ++c)
                if (fields[c] != "x" + std::to_string(c))
                    throw ParseError(file + ": line " + std::to_string(lineno) +
                                     ": expected header column x" + std::to_string(c) + ", got '" +
                                     fields[c] + "'");
            dim = fields.size() - 1;
            have_header = true;
            continue;
        }
        if (fields.size() != dim + 1)
            throw ParseError(file + ": line " + std::to_string(lineno) + ": expected " +
                             std::to_string(dim + 1) + " fields, got " +
                             std::to_string(fields.size()));
        times.push_back(parse_field(fields[0], file, lineno, 1));
        std::vector<double> row(dim);
        for (std::size_t c = 0; c < dim; ++c)
            row[c] = parse_field(fields[c + 1], file, lineno, c + 2);
        values.push_back(std::move(row));
    }
    if (!have_header) throw ParseError(file + ": missing header line");
    if (times.size() < 2) throw ParseError(file + ": need at least two data rows");
    try {
        return PiecewisePath(std::move(times), std::move(values));
    } catch (const std::invalid_argument& e) {
        throw ParseError(file + ": " + e.what());
    }
}

void write_csv_table(std::ostream& os, const CsvTable& table) {
    for (const auto& c : table.comments) os << "# " << c << "\n";
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) os << ",";
        os << table.header[i];
    }
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ",";
            os << format_double(row[i]);
        }
        os << "\n";
    }
    for (const auto& c : table.trailing_comments) os << "# " << c << "\n";
}

void write_csv_path(std::ostream& os, const PiecewisePath& path,
                    const std::vector<std::string>& comments) {
    CsvTable t;
    t.comments = comments;
    t.header.push_back("t");
    for (int c = 1; c <= path.dim(); ++c) t.header.push_back("x" + std::to_string(c));
    t.rows.reserve(path.size());
    for (std::size_t k = 0; k < path.size(); ++k) {
        std::vector<double> row;
        row.reserve(path.values[k].size() + 1);
        row.push_back(path.times[k]);
        row.insert(row.end(), path.values[k].begin(), path.values[k].end());
        t.rows.push_back(std::move(row));
    }
    write_csv_table(os, t);
}

namespace {

json parse_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string(what) + ": " + e.what());
    }
}

void check_keys(const json& j, const std::vector<std::string>& required,
                const std::vector<std::string>& optional, const char* what) {
    if (!j.is_object()) throw SchemaError(std::string(what) + ": expected a JSON object");
    for (const auto& k : required)
        if (!j.contains(k))
            throw SchemaError(std::string(what) + ": missing required key '" + k + "'");
    for (const auto& item : j.items()) {
        const std::string& k = item.key();
        bool known = false;
        for (const auto& r : required) known = known || (r == k);
        for (const auto& o : optional) known = known || (o == k);
        if (!known) throw SchemaError(std::string(what) + ": unknown key '" + k + "'");
    }
}

int get_int(const json& j, const char* key, const char* what) {
    const json& v = j.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw SchemaError(std::string(what) + ": '" + key + "' must be an integer");
    return v.get<int>();
}

double get_num(const json& j, const char* key, const char* what) {
    const json& v = j.at(key);
    if (!v.is_number())
        throw SchemaError(std::string(what) + ": '" + key + "' must be a number");
    return v.get<double>();
}

std::vector<double> get_num_array(const json& v, const char* name, const char* what) {
    if (!v.is_array()) throw SchemaError(std::string(what) + ": '" + name + "' must be an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_number())
            throw SchemaError(std::string(what) + ": '" + name + "' must hold numbers only");
        out.push_back(x.get<double>());
    }
    return out;
}

json tensor_to_json_value(const TruncatedTensor& a) {
    json j;
    j["dim"] = a.dim();
    j["level_cap"] = a.level_cap();
    j["scalar"] = a.scalar();
    json levels = json::array();
    for (int k = 1; k <= a.level_cap(); ++k) levels.push_back(a.level(k));
    j["levels"] = std::move(levels);
    return j;
}

TruncatedTensor tensor_from_json_value(const json& j, const char* what) {
    check_keys(j, {"dim", "level_cap", "levels"}, {"scalar"}, what);
    const int dim = get_int(j, "dim", what);
    const int cap = get_int(j, "level_cap", what);
    if (dim < 1) throw SchemaError(std::string(what) + ": 'dim' must be >= 1");
    if (cap < 1 || cap > 3) throw SchemaError(std::string(what) + ": 'level_cap' must be 1, 2 or 3");
    TruncatedTensor t(dim, cap);
    t.scalar() = j.contains("scalar") ? get_num(j, "scalar", what) : 1.0;
    const json& levels = j.at("levels");
    if (!levels.is_array() || levels.size() != static_cast<std::size_t>(cap))
        throw SchemaError(std::string(what) + ": 'levels' must be an array with one block per level");
    for (int k = 1; k <= cap; ++k) {
        std::vector<double> block = get_num_array(levels[static_cast<std::size_t>(k - 1)],
                                                  "levels", what);
        if (block.size() != TruncatedTensor::block_size(dim, k))
            throw SchemaError(std::string(what) + ": level-" + std::to_string(k) +
                              " block must have dim^" + std::to_string(k) + " entries");
        t.level(k) = std::move(block);
    }
    return t;
}

}  // namespace

std::string tensor_to_json(const TruncatedTensor& a) {
    return tensor_to_json_value(a).dump();
}

TruncatedTensor tensor_from_json(const std::string& text) {
    return tensor_from_json_value(parse_json(text, "tensor"), "tensor");
}

std::string grid_to_json(const RoughPathGrid& X) {
    json j;
    j["p"] = X.p;
    j["dim"] = X.dim();
    j["level_cap"] = X.level_cap();
    j["weak_geometric"] = X.weak_geometric;
    j["base_point"] = X.base_point;
    j["times"] = X.times;
    json sigs = json::array();
    for (const auto& s : X.sigs) sigs.push_back(tensor_to_json_value(s));
    j["sigs"] = std::move(sigs);
    return j.dump();
}

RoughPathGrid grid_from_json(const std::string& text) {
    const json j = parse_json(text, "rough path");
    check_keys(j, {"p", "dim", "level_cap", "times", "sigs"},
               {"weak_geometric", "base_point"}, "rough path");
    const int dim = get_int(j, "dim", "rough path");
    const int cap = get_int(j, "level_cap", "rough path");
    RoughPathGrid X;
    X.p = get_num(j, "p", "rough path");
    if (!(X.p >= 2.0 && X.p < 4.0))
        throw SchemaError("rough path: 'p' must lie in [2,4)");
    X.times = get_num_array(j.at("times"), "times", "rough path");
    if (X.times.size() < 2) throw SchemaError("rough path: need >= 2 times");
    for (std::size_t i = 1; i < X.times.size(); ++i)
        if (!(X.times[i] > X.times[i - 1]))
            throw SchemaError("rough path: 'times' must be strictly increasing");
    const json& sigs = j.at("sigs");
    if (!sigs.is_array() || sigs.size() != X.times.size())
        throw SchemaError("rough path: 'sigs' must hold one tensor per time");
    for (const auto& sj : sigs) {
        TruncatedTensor t = tensor_from_json_value(sj, "rough path signature");
        if (t.dim() != dim || t.level_cap() != cap)
            throw SchemaError("rough path: signature shape differs from 'dim'/'level_cap'");
        X.sigs.push_back(std::move(t));
    }
    if (j.contains("weak_geometric")) {
        if (!j.at("weak_geometric").is_boolean())
            throw SchemaError("rough path: 'weak_geometric' must be a boolean");
        X.weak_geometric = j.at("weak_geometric").get<bool>();
    }
    if (j.contains("base_point")) {
        X.base_point = get_num_array(j.at("base_point"), "base_point", "rough path");
        if (X.base_point.size() != static_cast<std::size_t>(dim))
            throw SchemaError("rough path: 'base_point' must have 'dim' entries");
    } else {
        X.base_point.assign(static_cast<std::size_t>(dim), 0.0);
    }
    return X;
}

}  // namespace roughpath

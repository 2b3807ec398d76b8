// roughpath: command-line front end for the rough-path numerics library.
//
// Subcommands: signature, solve, convergence, wong-zakai, levy-stats,
// brownian-sample, young.  Problems are described by JSON config files,
// numeric results are emitted as CSV (RFC-4180, '.' decimal separator,
// mandatory headers).  Exit codes: 0 success, 2 input error, 3 numerical
// non-convergence or blow-up, 4 schema violation.

#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "roughpath/brownian.hpp"
#include "roughpath/flows.hpp"
#include "roughpath/io.hpp"
#include "roughpath/linalg.hpp"
#include "roughpath/path_lift.hpp"
#include "roughpath/rde.hpp"
#include "roughpath/sewing.hpp"
#include "roughpath/vector_field.hpp"
#include "roughpath/warnings.hpp"

namespace rp = roughpath;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// small config-file helpers (strict: unknown keys are schema violations)

json load_config(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw rp::ParseError(file + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw rp::ParseError(file + ": " + e.what());
    }
}

void check_keys(const json& j, const std::vector<std::string>& required,
                const std::vector<std::string>& optional, const std::string& what) {
    if (!j.is_object()) throw rp::SchemaError(what + ": expected a JSON object");
    for (const auto& k : required)
        if (!j.contains(k)) throw rp::SchemaError(what + ": missing required key '" + k + "'");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const auto& r : required) known = known || (r == item.key());
        for (const auto& o : optional) known = known || (o == item.key());
        if (!known) throw rp::SchemaError(what + ": unknown key '" + item.key() + "'");
    }
}

int get_int(const json& j, const std::string& key, const std::string& what) {
    const json& v = j.at(key);
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw rp::SchemaError(what + ": '" + key + "' must be an integer");
    return v.get<int>();
}

double get_num(const json& j, const std::string& key, const std::string& what) {
    const json& v = j.at(key);
    if (!v.is_number()) throw rp::SchemaError(what + ": '" + key + "' must be a number");
    return v.get<double>();
}

std::string get_str(const json& j, const std::string& key, const std::string& what) {
    const json& v = j.at(key);
    if (!v.is_string()) throw rp::SchemaError(what + ": '" + key + "' must be a string");
    return v.get<std::string>();
}

std::uint64_t get_seed(const json& j, const std::string& what) {
    const json& v = j.at("seed");
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw rp::SchemaError(what + ": 'seed' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

std::vector<double> get_num_array(const json& v, const std::string& name, const std::string& what) {
    if (!v.is_array()) throw rp::SchemaError(what + ": '" + name + "' must be an array");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number())
            throw rp::SchemaError(what + ": '" + name + "' must hold numbers only");
        out.push_back(x.get<double>());
    }
    return out;
}

std::vector<int> get_int_array(const json& v, const std::string& name, const std::string& what) {
    if (!v.is_array()) throw rp::SchemaError(what + ": '" + name + "' must be an array");
    std::vector<int> out;
    for (const auto& x : v) {
        if (!x.is_number_integer() && !x.is_number_unsigned())
            throw rp::SchemaError(what + ": '" + name + "' must hold integers only");
        out.push_back(x.get<int>());
    }
    return out;
}

rp::Expr parse_component(const std::string& src, const std::string& label) {
    try {
        return rp::parse_expr(src);
    } catch (const rp::ExprParseError& e) {
        throw rp::SchemaError(label + ": " + e.what() + " (position " +
                              std::to_string(e.position) + ")");
    }
}

std::vector<std::vector<rp::Expr>> parse_fields(const json& arr, int dim, int driver_dim,
                                                const std::string& what) {
    if (!arr.is_array() || arr.size() != static_cast<std::size_t>(driver_dim))
        throw rp::SchemaError(what + ": 'fields' must be an array with one entry per driver "
                                     "component");
    std::vector<std::vector<rp::Expr>> fields;
    for (std::size_t j = 0; j < arr.size(); ++j) {
        const json& fj = arr[j];
        if (!fj.is_array() || fj.size() != static_cast<std::size_t>(dim))
            throw rp::SchemaError(what + ": 'fields[" + std::to_string(j) +
                                  "]' must be an array of dim expression strings");
        std::vector<rp::Expr> comps;
        for (std::size_t k = 0; k < fj.size(); ++k) {
            if (!fj[k].is_string())
                throw rp::SchemaError(what + ": field expressions must be strings");
            comps.push_back(parse_component(fj[k].get<std::string>(),
                                            what + ": fields[" + std::to_string(j) + "][" +
                                                std::to_string(k) + "]"));
        }
        fields.push_back(std::move(comps));
    }
    return fields;
}

std::optional<std::vector<rp::Expr>> parse_drift(const json& j, int dim, const std::string& what) {
    if (!j.contains("drift")) return std::nullopt;
    const json& dj = j.at("drift");
    if (!dj.is_array() || dj.size() != static_cast<std::size_t>(dim))
        throw rp::SchemaError(what + ": 'drift' must be an array of dim expression strings");
    std::vector<rp::Expr> comps;
    for (std::size_t k = 0; k < dj.size(); ++k) {
        if (!dj[k].is_string())
            throw rp::SchemaError(what + ": drift expressions must be strings");
        comps.push_back(parse_component(dj[k].get<std::string>(),
                                        what + ": drift[" + std::to_string(k) + "]"));
    }
    return comps;
}

rp::Scheme parse_scheme(const std::string& s, const std::string& what) {
    if (s == "auto") return rp::Scheme::automatic;
    if (s == "euler") return rp::Scheme::euler;
    if (s == "milstein") return rp::Scheme::milstein;
    if (s == "log_ode") return rp::Scheme::log_ode;
    throw rp::SchemaError(what + ": 'scheme' must be one of auto, euler, milstein, log_ode");
}

// ---------------------------------------------------------------------------
// problem configuration (shared by solve and convergence)

struct ProblemConfig {
    int dim = 0;
    int driver_dim = 0;
    std::vector<std::vector<rp::Expr>> fields;
    std::optional<std::vector<rp::Expr>> drift;
    double p = 2.5;
    json driver;
    double t0 = 0.0;
    double t1 = 1.0;
    std::vector<double> x0;
    double tol = 1e-9;
    rp::Scheme scheme = rp::Scheme::automatic;
    int substeps = 8;
    std::vector<int> depths;  // convergence only
    int output_points = 0;    // 0 = report on the driver grid
};

ProblemConfig parse_problem(const json& j) {
    const std::string what = "problem";
    check_keys(j, {"dim", "driver_dim", "fields", "p", "driver", "t0", "t1", "x0"},
               {"drift", "tol", "scheme", "substeps", "depths", "output_points"}, what);
    ProblemConfig c;
    c.dim = get_int(j, "dim", what);
    c.driver_dim = get_int(j, "driver_dim", what);
    if (c.dim < 1) throw rp::SchemaError(what + ": 'dim' must be >= 1");
    if (c.driver_dim < 1) throw rp::SchemaError(what + ": 'driver_dim' must be >= 1");
    c.fields = parse_fields(j.at("fields"), c.dim, c.driver_dim, what);
    c.drift = parse_drift(j, c.dim, what);
    c.p = get_num(j, "p", what);
    if (!(c.p >= 2.0 && c.p < 4.0)) throw rp::SchemaError(what + ": 'p' must lie in [2,4)");
    c.driver = j.at("driver");
    c.t0 = get_num(j, "t0", what);
    c.t1 = get_num(j, "t1", what);
    if (!(c.t1 > c.t0)) throw rp::SchemaError(what + ": need t1 > t0");
    c.x0 = get_num_array(j.at("x0"), "x0", what);
    if (c.x0.size() != static_cast<std::size_t>(c.dim))
        throw rp::SchemaError(what + ": 'x0' must have dim entries");
    if (j.contains("tol")) {
        c.tol = get_num(j, "tol", what);
        if (!(c.tol > 0)) throw rp::SchemaError(what + ": 'tol' must be positive");
    }
    if (j.contains("scheme")) c.scheme = parse_scheme(get_str(j, "scheme", what), what);
    if (j.contains("substeps")) {
        c.substeps = get_int(j, "substeps", what);
        if (c.substeps < 1) throw rp::SchemaError(what + ": 'substeps' must be >= 1");
    }
    if (j.contains("depths")) {
        c.depths = get_int_array(j.at("depths"), "depths", what);
        if (c.depths.empty()) throw rp::SchemaError(what + ": 'depths' must not be empty");
        for (std::size_t i = 0; i < c.depths.size(); ++i) {
            if (c.depths[i] < 0) throw rp::SchemaError(what + ": depths must be >= 0");
            if (i && c.depths[i] <= c.depths[i - 1])
                throw rp::SchemaError(what + ": 'depths' must be strictly increasing");
        }
    }
    if (j.contains("output_points")) {
        c.output_points = get_int(j, "output_points", what);
        if (c.output_points < 1) throw rp::SchemaError(what + ": 'output_points' must be >= 1");
    }
    return c;
}

struct BuiltDriver {
    rp::RoughPathGrid X;
    std::optional<std::uint64_t> seed;  // set for brownian drivers
    std::optional<int> depth;
};

void shift_times(rp::RoughPathGrid& X, double dt) {
    if (dt == 0.0) return;
    for (double& t : X.times) t += dt;
}

BuiltDriver build_driver(const ProblemConfig& c, std::optional<std::uint64_t> seed_flag,
                         std::optional<int> depth_flag) {
    const std::string what = "problem: driver";
    if (!c.driver.is_object() || !c.driver.contains("kind"))
        throw rp::SchemaError(what + ": expected an object with a 'kind' key");
    const std::string kind = get_str(c.driver, "kind", what);
    BuiltDriver out;
    if (kind == "csv") {
        check_keys(c.driver, {"kind", "path"}, {}, what);
        if (seed_flag) rp::emit_warning("--seed has no effect on a csv driver");
        if (depth_flag) rp::emit_warning("--depth has no effect on a csv driver");
        const rp::PiecewisePath path = rp::read_csv_path(get_str(c.driver, "path", what));
        if (path.dim() != c.driver_dim)
            throw rp::SchemaError(what + ": csv path dimension " + std::to_string(path.dim()) +
                                  " differs from driver_dim " + std::to_string(c.driver_dim));
        const double span = std::max(1.0, c.t1 - c.t0);
        if (std::abs(path.times.front() - c.t0) > 1e-9 * span ||
            std::abs(path.times.back() - c.t1) > 1e-9 * span)
            throw rp::SchemaError(what + ": csv horizon [" + rp::format_double(path.times.front()) +
                                  "," + rp::format_double(path.times.back()) +
                                  "] does not match [t0,t1]");
        const int cap = c.p < 3.0 ? 2 : 3;
        out.X = rp::signature(path, cap, c.p);
    } else if (kind == "pure_area") {
        check_keys(c.driver, {"kind", "steps"}, {}, what);
        if (seed_flag) rp::emit_warning("--seed has no effect on a pure_area driver");
        if (depth_flag) rp::emit_warning("--depth has no effect on a pure_area driver");
        if (c.driver_dim != 2)
            throw rp::SchemaError(what + ": pure_area drivers require driver_dim = 2");
        const int steps = get_int(c.driver, "steps", what);
        if (steps < 1) throw rp::SchemaError(what + ": 'steps' must be >= 1");
        out.X = rp::pure_area(c.t1 - c.t0, steps, c.p);
        shift_times(out.X, c.t0);
    } else if (kind == "brownian") {
        check_keys(c.driver, {"kind", "depth"}, {"seed", "lift", "extra_depth"}, what);
        std::uint64_t seed = 1;
        if (c.driver.contains("seed")) seed = get_seed(c.driver, what);
        if (seed_flag) seed = *seed_flag;
        int depth = get_int(c.driver, "depth", what);
        if (depth_flag) depth = *depth_flag;
        if (depth < 1 || depth > 24)
            throw rp::SchemaError(what + ": 'depth' must lie in [1,24]");
        std::string lift = "stratonovich";
        if (c.driver.contains("lift")) lift = get_str(c.driver, "lift", what);
        if (lift != "stratonovich" && lift != "ito")
            throw rp::SchemaError(what + ": 'lift' must be 'stratonovich' or 'ito'");
        int extra_depth = 6;
        if (c.driver.contains("extra_depth")) {
            extra_depth = get_int(c.driver, "extra_depth", what);
            if (extra_depth < 0) throw rp::SchemaError(what + ": 'extra_depth' must be >= 0");
        }
        const rp::BrownianSample sample =
            rp::BrownianSample::generate(c.driver_dim, depth, c.t1 - c.t0, seed);
        rp::RoughPathGrid strat = rp::stratonovich_lift(sample, extra_depth, c.p);
        out.X = (lift == "ito") ? rp::ito_lift(strat) : std::move(strat);
        shift_times(out.X, c.t0);
        out.seed = seed;
        out.depth = depth;
    } else {
        throw rp::SchemaError(what + ": unknown kind '" + kind + "'");
    }
    return out;
}

// ---------------------------------------------------------------------------
// output helpers

std::string now_iso8601() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void emit(const std::string& out_file, const std::string& content) {
    if (out_file.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream f(out_file);
    if (!f) throw rp::ParseError(out_file + ": cannot open output file");
    f << content;
    if (!f.good()) throw rp::ParseError(out_file + ": write failed");
}

std::vector<std::string> standard_comments(bool no_timestamp, const BuiltDriver& d) {
    std::vector<std::string> c;
    if (!no_timestamp) c.push_back("generated " + now_iso8601());
    if (d.seed) c.push_back("seed " + std::to_string(*d.seed));
    if (d.depth) c.push_back("depth " + std::to_string(*d.depth));
    return c;
}

// Least-squares decay order of a positive sequence against integer depths:
// fits log2(values) ~ intercept - order * depth and reports (order, rms residual).
std::optional<std::pair<double, double>> fitted_order(const std::vector<double>& depths,
                                                      const std::vector<double>& values) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (std::isfinite(values[i]) && values[i] > 0.0) {
            xs.push_back(depths[i]);
            ys.push_back(std::log2(values[i]));
        }
    if (xs.size() < 2 || xs.front() == xs.back()) return std::nullopt;
    double residual = 0.0;
    const double slope = rp::fit_line_slope(xs, ys, &residual);
    return std::make_pair(-slope, residual);
}

std::string table_to_string(const rp::CsvTable& t) {
    std::ostringstream oss;
    rp::write_csv_table(oss, t);
    return oss.str();
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_signature(const std::string& in_file, int level, double p, const std::string& out_file) {
    const rp::PiecewisePath path = rp::read_csv_path(in_file);
    const rp::RoughPathGrid X = rp::signature(path, level, p);
    emit(out_file, rp::grid_to_json(X) + "\n");
    return 0;
}

int cmd_solve(const std::string& config_file, const std::string& out_file,
              std::optional<std::uint64_t> seed, std::optional<int> depth,
              std::optional<double> tol, bool no_timestamp) {
    ProblemConfig cfg = parse_problem(load_config(config_file));
    if (tol) cfg.tol = *tol;
    const BuiltDriver driver = build_driver(cfg, seed, depth);
    const int bracket_depth = driver.X.level_cap() >= 3 ? 3 : 2;
    const rp::VectorFieldSet F(cfg.dim, cfg.fields, cfg.drift, bracket_depth);
    std::vector<double> output_times;
    if (cfg.output_points > 0) {
        for (int k = 0; k <= cfg.output_points; ++k)
            output_times.push_back(cfg.t0 + (cfg.t1 - cfg.t0) * k / cfg.output_points);
    }
    const rp::Trajectory traj =
        rp::solve_path(F, driver.X, cfg.x0, output_times, cfg.tol, cfg.scheme, cfg.substeps);
    if (!traj.converged) {
        std::cerr << "error: solver failed to converge (last delta "
                  << rp::format_double(traj.worst_delta) << ")\n";
        return 3;
    }
    rp::CsvTable t;
    t.comments = standard_comments(no_timestamp, driver);
    t.header.push_back("t");
    for (int c = 1; c <= cfg.dim; ++c) t.header.push_back("x" + std::to_string(c));
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        std::vector<double> row;
        row.push_back(traj.times[k]);
        row.insert(row.end(), traj.states[k].begin(), traj.states[k].end());
        t.rows.push_back(std::move(row));
    }
    emit(out_file, table_to_string(t));
    return 0;
}

int cmd_convergence(const std::string& config_file, const std::string& out_file,
                    std::optional<std::uint64_t> seed, std::optional<int> depth,
                    std::optional<double> tol, bool no_timestamp) {
    ProblemConfig cfg = parse_problem(load_config(config_file));
    if (tol) cfg.tol = *tol;
    if (cfg.depths.empty())
        for (int d = 0; d <= 6; ++d) cfg.depths.push_back(d);
    const BuiltDriver driver = build_driver(cfg, seed, depth);
    const int bracket_depth = driver.X.level_cap() >= 3 ? 3 : 2;
    const rp::VectorFieldSet F(cfg.dim, cfg.fields, cfg.drift, bracket_depth);
    const rp::ApproxFlowGenerator gen =
        rp::rde_generator(F, driver.X, cfg.scheme, cfg.substeps);
    const std::vector<rp::ConvergenceRow> rows =
        rp::convergence_table(gen, cfg.t0, cfg.t1, cfg.x0, cfg.depths);
    rp::CsvTable t;
    t.comments = standard_comments(no_timestamp, driver);
    t.header.push_back("depth");
    for (int c = 1; c <= cfg.dim; ++c) t.header.push_back("x" + std::to_string(c));
    t.header.push_back("delta");
    std::vector<double> depths_d, deltas;
    for (const auto& r : rows) {
        std::vector<double> row;
        row.push_back(r.depth);
        row.insert(row.end(), r.value.begin(), r.value.end());
        row.push_back(r.delta);
        t.rows.push_back(std::move(row));
        depths_d.push_back(r.depth);
        deltas.push_back(r.delta);
    }
    if (const auto fit = fitted_order(depths_d, deltas))
        t.trailing_comments.push_back("fitted slope " + rp::format_double(fit->first) +
                                      " residual " + rp::format_double(fit->second));
    else
        t.trailing_comments.push_back("fitted slope unavailable");
    emit(out_file, table_to_string(t));
    return 0;
}

int cmd_wong_zakai(const std::string& config_file, const std::string& out_file,
                   std::optional<std::uint64_t> seed_flag, std::optional<double> tol,
                   bool no_timestamp) {
    const json j = load_config(config_file);
    const std::string what = "wong-zakai";
    check_keys(j, {"dim", "driver_dim", "fields", "x0", "T", "depths"},
               {"drift", "p", "seed", "tol", "substeps", "ref_extra_depth"}, what);
    const int dim = get_int(j, "dim", what);
    const int driver_dim = get_int(j, "driver_dim", what);
    if (dim < 1 || driver_dim < 1)
        throw rp::SchemaError(what + ": 'dim' and 'driver_dim' must be >= 1");
    const auto fields = parse_fields(j.at("fields"), dim, driver_dim, what);
    const auto drift = parse_drift(j, dim, what);
    const std::vector<double> x0 = get_num_array(j.at("x0"), "x0", what);
    if (x0.size() != static_cast<std::size_t>(dim))
        throw rp::SchemaError(what + ": 'x0' must have dim entries");
    const double T = get_num(j, "T", what);
    if (!(T > 0)) throw rp::SchemaError(what + ": 'T' must be positive");
    const std::vector<int> depths = get_int_array(j.at("depths"), "depths", what);
    if (depths.empty()) throw rp::SchemaError(what + ": 'depths' must not be empty");
    for (std::size_t i = 0; i < depths.size(); ++i) {
        if (depths[i] < 1) throw rp::SchemaError(what + ": depths must be >= 1");
        if (i && depths[i] <= depths[i - 1])
            throw rp::SchemaError(what + ": 'depths' must be strictly increasing");
    }
    double p = 2.5;
    if (j.contains("p")) {
        p = get_num(j, "p", what);
        if (!(p >= 2.0 && p < 3.0)) throw rp::SchemaError(what + ": 'p' must lie in [2,3)");
    }
    std::uint64_t seed = 1;
    if (j.contains("seed")) seed = get_seed(j, what);
    if (seed_flag) seed = *seed_flag;
    double tolerance = 1e-6;
    if (j.contains("tol")) tolerance = get_num(j, "tol", what);
    if (tol) tolerance = *tol;
    if (!(tolerance > 0)) throw rp::SchemaError(what + ": 'tol' must be positive");
    int substeps = 8;
    if (j.contains("substeps")) substeps = get_int(j, "substeps", what);
    if (substeps < 1) throw rp::SchemaError(what + ": 'substeps' must be >= 1");
    int ref_extra_depth = 6;
    if (j.contains("ref_extra_depth")) ref_extra_depth = get_int(j, "ref_extra_depth", what);
    if (ref_extra_depth < 0) throw rp::SchemaError(what + ": 'ref_extra_depth' must be >= 0");

    const rp::VectorFieldSet F(dim, fields, drift, 2);
    const rp::WongZakaiResult res =
        rp::wong_zakai_experiment(F, x0, depths, seed, T, tolerance, substeps, p, ref_extra_depth);
    rp::CsvTable t;
    if (!no_timestamp) t.comments.push_back("generated " + now_iso8601());
    t.comments.push_back("seed " + std::to_string(seed));
    t.header = {"depth", "gap"};
    std::vector<double> depths_d;
    for (std::size_t i = 0; i < res.depths.size(); ++i) {
        t.rows.push_back({static_cast<double>(res.depths[i]), res.gaps[i]});
        depths_d.push_back(res.depths[i]);
    }
    if (const auto fit = fitted_order(depths_d, res.gaps))
        t.trailing_comments.push_back("fitted slope " + rp::format_double(fit->first) +
                                      " residual " + rp::format_double(fit->second));
    else
        t.trailing_comments.push_back("fitted slope unavailable");
    emit(out_file, table_to_string(t));
    return 0;
}

int cmd_levy_stats(const std::string& config_file, const std::string& out_file,
                   std::optional<std::uint64_t> seed_flag, std::optional<int> depth_flag,
                   bool no_timestamp) {
    int samples = 10000;
    int depth = 10;
    double T = 1.0;
    std::uint64_t seed = 1;
    if (!config_file.empty()) {
        const json j = load_config(config_file);
        const std::string what = "levy-stats";
        check_keys(j, {"samples", "depth", "T"}, {"seed"}, what);
        samples = get_int(j, "samples", what);
        depth = get_int(j, "depth", what);
        T = get_num(j, "T", what);
        if (j.contains("seed")) seed = get_seed(j, what);
    }
    if (seed_flag) seed = *seed_flag;
    if (depth_flag) depth = *depth_flag;
    if (samples < 2) throw rp::SchemaError("levy-stats: 'samples' must be >= 2");
    if (depth < 1 || depth > 24) throw rp::SchemaError("levy-stats: 'depth' must lie in [1,24]");
    if (!(T > 0)) throw rp::SchemaError("levy-stats: 'T' must be positive");
    const rp::LevyAreaStats s = rp::levy_area_stats(samples, depth, T, seed);
    rp::CsvTable t;
    if (!no_timestamp) t.comments.push_back("generated " + now_iso8601());
    t.comments.push_back("seed " + std::to_string(seed));
    t.comments.push_back("depth " + std::to_string(depth));
    t.comments.push_back("samples " + std::to_string(samples));
    t.comments.push_back("T " + rp::format_double(T));
    t.header = {"mean", "variance", "mean_ci3", "variance_ci3"};
    t.rows.push_back({s.mean, s.variance, s.mean_ci3, s.variance_ci3});
    emit(out_file, table_to_string(t));
    return 0;
}

int cmd_brownian_sample(const std::string& config_file, const std::string& out_file,
                        std::optional<std::uint64_t> seed_flag, std::optional<int> depth_flag,
                        bool no_timestamp) {
    int dim = 1;
    int depth = 8;
    double T = 1.0;
    std::uint64_t seed = 1;
    if (!config_file.empty()) {
        const json j = load_config(config_file);
        const std::string what = "brownian-sample";
        check_keys(j, {"dim", "depth", "T"}, {"seed"}, what);
        dim = get_int(j, "dim", what);
        depth = get_int(j, "depth", what);
        T = get_num(j, "T", what);
        if (j.contains("seed")) seed = get_seed(j, what);
    }
    if (seed_flag) seed = *seed_flag;
    if (depth_flag) depth = *depth_flag;
    if (dim < 1) throw rp::SchemaError("brownian-sample: 'dim' must be >= 1");
    if (depth < 1 || depth > 24)
        throw rp::SchemaError("brownian-sample: 'depth' must lie in [1,24]");
    if (!(T > 0)) throw rp::SchemaError("brownian-sample: 'T' must be positive");
    const rp::BrownianSample s = rp::BrownianSample::generate(dim, depth, T, seed);
    std::vector<std::string> comments;
    if (!no_timestamp) comments.push_back("generated " + now_iso8601());
    comments.push_back("seed " + std::to_string(seed));
    comments.push_back("depth " + std::to_string(depth));
    std::ostringstream oss;
    rp::write_csv_path(oss, rp::to_path(s), comments);
    emit(out_file, oss.str());
    return 0;
}

int cmd_young(const std::string& ix_file, const std::string& iy_file, const std::string& out_file,
              std::optional<double> tol, bool no_timestamp) {
    const rp::PiecewisePath x = rp::read_csv_path(ix_file);
    const rp::PiecewisePath y = rp::read_csv_path(iy_file);
    if (x.dim() != 1 || y.dim() != 1)
        throw rp::ParseError("young: both integrand and integrator must be one-dimensional");
    const double s = std::max(x.times.front(), y.times.front());
    const double t = std::min(x.times.back(), y.times.back());
    if (!(t > s)) throw rp::ParseError("young: the paths' time ranges do not overlap");
    const double tolerance = tol ? *tol : 1e-7;
    const rp::SewResult r = rp::young_integral_scalar(x, y, s, t, tolerance);
    if (!r.converged) {
        std::cerr << "error: young integral failed to converge (last delta "
                  << rp::format_double(r.last_delta) << ")\n";
        return 3;
    }
    rp::CsvTable table;
    if (!no_timestamp) table.comments.push_back("generated " + now_iso8601());
    table.header = {"value", "last_delta", "depth", "converged"};
    table.rows.push_back({r.value.at(0), r.last_delta, static_cast<double>(r.depth_used),
                          r.converged ? 1.0 : 0.0});
    emit(out_file, table_to_string(table));
    return 0;
}

// ---------------------------------------------------------------------------

template <typename F>
int guarded(F&& f) {
    try {
        return f();
    } catch (const rp::SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 4;
    } catch (const rp::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const rp::ExprParseError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 4;
    } catch (const rp::BlowUpError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rough-path numerics toolkit"};
    app.require_subcommand(1);

    std::string config_file, out_file, in_file, ix_file, iy_file;
    std::optional<std::uint64_t> seed;
    std::optional<int> depth;
    std::optional<double> tol;
    bool no_timestamp = false;
    int level = 2;
    double p_flag = 0.0;

    auto* sig = app.add_subcommand("signature", "lift a CSV path to a signature grid (JSON)");
    sig->add_option("--in", in_file, "input CSV path file")->required();
    sig->add_option("--level", level, "truncation level (1-3)")->check(CLI::Range(1, 3));
    sig->add_option("--p", p_flag, "rough-path exponent (0 = smallest admissible)");
    sig->add_option("--out", out_file, "output file (default: stdout)");

    auto* solve = app.add_subcommand("solve", "solve an RDE problem; emits a trajectory CSV");
    solve->add_option("--config", config_file, "problem JSON file")->required();
    solve->add_option("--out", out_file, "output file (default: stdout)");
    solve->add_option("--seed", seed, "override the driver seed");
    solve->add_option("--depth", depth, "override the driver depth");
    solve->add_option("--tol", tol, "override the solver tolerance");
    solve->add_flag("--no-timestamp", no_timestamp, "omit the generated-at comment");

    auto* conv = app.add_subcommand(
        "convergence", "dyadic-refinement table for an RDE problem; emits CSV with fitted slope");
    conv->add_option("--config", config_file, "problem JSON file")->required();
    conv->add_option("--out", out_file, "output file (default: stdout)");
    conv->add_option("--seed", seed, "override the driver seed");
    conv->add_option("--depth", depth, "override the driver depth");
    conv->add_option("--tol", tol, "override the solver tolerance");
    conv->add_flag("--no-timestamp", no_timestamp, "omit the generated-at comment");

    auto* wz = app.add_subcommand("wong-zakai",
                                  "ODE-vs-RDE gaps across piecewise-linear Brownian depths");
    wz->add_option("--config", config_file, "experiment JSON file")->required();
    wz->add_option("--out", out_file, "output file (default: stdout)");
    wz->add_option("--seed", seed, "override the experiment seed");
    wz->add_option("--tol", tol, "override the solver tolerance");
    wz->add_flag("--no-timestamp", no_timestamp, "omit the generated-at comment");

    auto* levy = app.add_subcommand("levy-stats", "Monte-Carlo statistics of the planar Levy area");
    levy->add_option("--config", config_file, "experiment JSON file");
    levy->add_option("--out", out_file, "output file (default: stdout)");
    levy->add_option("--seed", seed, "override the experiment seed");
    levy->add_option("--depth", depth, "override the dyadic depth");
    levy->add_flag("--no-timestamp", no_timestamp, "omit the generated-at comment");

    auto* bs = app.add_subcommand("brownian-sample", "sample a Brownian path on a dyadic grid");
    bs->add_option("--config", config_file, "sample JSON file");
    bs->add_option("--out", out_file, "output file (default: stdout)");
    bs->add_option("--seed", seed, "override the sample seed");
    bs->add_option("--depth", depth, "override the dyadic depth");
    bs->add_flag("--no-timestamp", no_timestamp, "omit the generated-at comment");

    auto* young = app.add_subcommand("young", "Young integral of one scalar CSV path against another");
    young->add_option("--ix", ix_file, "integrand CSV path file")->required();
    young->add_option("--iy", iy_file, "integrator CSV path file")->required();
    young->add_option("--out", out_file, "output file (default: stdout)");
    young->add_option("--tol", tol, "sewing tolerance (default 1e-7)");
    young->add_flag("--no-timestamp", no_timestamp, "omit the generated-at comment");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    if (app.got_subcommand(sig))
        return guarded([&] { return cmd_signature(in_file, level, p_flag, out_file); });
    if (app.got_subcommand(solve))
        return guarded([&] { return cmd_solve(config_file, out_file, seed, depth, tol, no_timestamp); });
    if (app.got_subcommand(conv))
        return guarded(
            [&] { return cmd_convergence(config_file, out_file, seed, depth, tol, no_timestamp); });
    if (app.got_subcommand(wz))
        return guarded([&] { return cmd_wong_zakai(config_file, out_file, seed, tol, no_timestamp); });
    if (app.got_subcommand(levy))
        return guarded(
            [&] { return cmd_levy_stats(config_file, out_file, seed, depth, no_timestamp); });
    if (app.got_subcommand(bs))
        return guarded(
            [&] { return cmd_brownian_sample(config_file, out_file, seed, depth, no_timestamp); });
    if (app.got_subcommand(young))
        return guarded([&] { return cmd_young(ix_file, iy_file, out_file, tol, no_timestamp); });
    return 2;
}

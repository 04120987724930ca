#ifndef CGO_CONFIG_HPP
#define CGO_CONFIG_HPP

// JSON run configuration with strict schema validation. Every rejection
// names the offending field as a dotted path.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cgo.hpp"
#include "errors.hpp"
#include "media.hpp"

namespace cgo {

struct GridConfig {
    int n = 32;
    double L = 2.0 * std::numbers::pi;
};

struct GeometryConfig {
    std::array<int, 3> rho{1, 0, 0};
    std::uint64_t frame_seed = 0;
    double angle = 0.0;  ///< resolved from frame_seed unless given
    std::vector<double> s_list{8.0, 16.0, 32.0};
    std::vector<double> lambda_list{4.0, 8.0, 16.0};
    std::vector<Polarization> polarizations{Polarization::E};
};

struct SolverConfig {
    double tol = 1e-10;
    int max_iter = 200;
    double clamp_floor = 0.0;  ///< 0 selects the grid default
    double clamp_threshold = 1e-3;

    SolverOptions options() const
    {
        SolverOptions o;
        o.tol = tol;
        o.max_iter = max_iter;
        o.clamp_floor = clamp_floor;
        o.clamp_threshold = clamp_threshold;
        return o;
    }
};

struct SamplingConfig {
    int n_samples = 16;
    std::uint64_t seed = 1;
    int trials = 16;
    int fixed_point_starts = 10;
};

struct OutputConfig {
    std::string directory = "out";
    bool csv = true;
    bool manifest = true;
    bool fields = false;
};

struct RunConfig {
    std::string name = "run";
    GridConfig grid;
    std::vector<MediumSpec> media;
    GeometryConfig geometry;
    SolverConfig solver;
    SamplingConfig sampling;
    OutputConfig output;

    Grid make_grid() const { return Grid(grid.n, grid.L); }
    Vec3 rho() const { return lattice_vector(make_grid(), geometry.rho); }
};

namespace config_detail {

using nlohmann::json;

inline void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys)
{
    if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "must be an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw ConfigError(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
}

inline double number(const json& j, const std::string& path)
{
    if (!j.is_number()) throw ConfigError(path, "must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ConfigError(path, "must be finite");
    return v;
}

inline double positive(const json& j, const std::string& path)
{
    const double v = number(j, path);
    if (!(v > 0.0)) throw ConfigError(path, "must be positive");
    return v;
}

inline double nonnegative(const json& j, const std::string& path)
{
    const double v = number(j, path);
    if (!(v >= 0.0)) throw ConfigError(path, "must be nonnegative");
    return v;
}

inline long long integer(const json& j, const std::string& path)
{
    if (!j.is_number_integer()) throw ConfigError(path, "must be an integer");
    return j.get<long long>();
}

inline int positive_int(const json& j, const std::string& path)
{
    const long long v = integer(j, path);
    if (v <= 0 || v > 1'000'000'000) throw ConfigError(path, "must be a positive integer");
    return static_cast<int>(v);
}

inline std::uint64_t seed(const json& j, const std::string& path)
{
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<long long>() >= 0) return static_cast<std::uint64_t>(j.get<long long>());
    throw ConfigError(path, "must be a nonnegative integer");
}

inline std::vector<double> increasing_list(const json& j, const std::string& path, double lower)
{
    if (!j.is_array() || j.empty()) throw ConfigError(path, "must be a nonempty array");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        const double v = number(j[i], p);
        if (!(v >= lower)) throw ConfigError(p, "must be >= " + std::to_string(lower));
        if (!out.empty() && !(v > out.back())) throw ConfigError(p, "values must be strictly increasing");
        out.push_back(v);
    }
    return out;
}

inline Bump parse_bump(const json& j, const std::string& path)
{
    allow_keys(j, path, {"offset", "radius", "amplitude", "exponent"});
    Bump b;
    if (j.contains("offset")) {
        const auto& o = j["offset"];
        if (!o.is_array() || o.size() != 3) throw ConfigError(path + ".offset", "must be an array of three numbers");
        for (int k = 0; k < 3; ++k) b.offset[k] = number(o[k], path + ".offset[" + std::to_string(k) + "]");
    }
    if (!j.contains("radius")) throw ConfigError(path + ".radius", "is required");
    if (!j.contains("amplitude")) throw ConfigError(path + ".amplitude", "is required");
    b.radius = positive(j["radius"], path + ".radius");
    b.amplitude = nonnegative(j["amplitude"], path + ".amplitude");
    if (j.contains("exponent")) b.exponent = positive(j["exponent"], path + ".exponent");
    return b;
}

inline MediumSpec parse_medium(const json& j, const std::string& path, const GridConfig& grid)
{
    allow_keys(j, path, {"omega", "eps0", "mu0", "eps", "mu", "sigma"});
    MediumSpec m;
    if (j.contains("omega")) m.omega = positive(j["omega"], path + ".omega");
    if (j.contains("eps0")) m.eps0 = positive(j["eps0"], path + ".eps0");
    if (j.contains("mu0")) m.mu0 = positive(j["mu0"], path + ".mu0");
    for (const char* key : {"eps", "mu", "sigma"}) {
        if (!j.contains(key)) continue;
        const auto& arr = j[key];
        const std::string p = path + "." + key;
        if (!arr.is_array()) throw ConfigError(p, "must be an array of bumps");
        auto& dest = std::string(key) == "eps" ? m.eps : std::string(key) == "mu" ? m.mu : m.sigma;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string bp = p + "[" + std::to_string(i) + "]";
            Bump b = parse_bump(arr[i], bp);
            // the support must sit inside the central sub-box
            for (int k = 0; k < 3; ++k)
                if (std::abs(b.offset[k]) + b.radius > 0.25 * grid.L)
                    throw ConfigError(bp, "bump support leaves the central sub-box");
            dest.push_back(b);
        }
    }
    return m;
}

}  // namespace config_detail

inline RunConfig parse_config(const nlohmann::json& j)
{
    using namespace config_detail;
    allow_keys(j, "", {"name", "grid", "media", "geometry", "solver", "sampling", "output"});
    RunConfig c;
    if (j.contains("name")) {
        if (!j["name"].is_string()) throw ConfigError("name", "must be a string");
        c.name = j["name"].get<std::string>();
    }

    if (!j.contains("grid")) throw ConfigError("grid", "is required");
    {
        const auto& g = j["grid"];
        allow_keys(g, "grid", {"n", "L"});
        if (!g.contains("n")) throw ConfigError("grid.n", "is required");
        c.grid.n = positive_int(g["n"], "grid.n");
        if (c.grid.n < 8 || (c.grid.n & (c.grid.n - 1)) != 0) throw ConfigError("grid.n", "must be a power of two >= 8");
        if (g.contains("L")) c.grid.L = positive(g["L"], "grid.L");
    }

    if (!j.contains("media")) throw ConfigError("media", "is required");
    {
        const auto& m = j["media"];
        if (!m.is_array() || m.empty() || m.size() > 2) throw ConfigError("media", "must hold one or two medium specs");
        for (std::size_t i = 0; i < m.size(); ++i)
            c.media.push_back(parse_medium(m[i], "media[" + std::to_string(i) + "]", c.grid));
        if (c.media.size() == 2) {
            const auto& a = c.media[0];
            const auto& b = c.media[1];
            if (a.omega != b.omega) throw ConfigError("media[1].omega", "must equal media[0].omega");
            if (a.eps0 != b.eps0) throw ConfigError("media[1].eps0", "must equal media[0].eps0");
            if (a.mu0 != b.mu0) throw ConfigError("media[1].mu0", "must equal media[0].mu0");
        }
    }

    if (j.contains("geometry")) {
        const auto& g = j["geometry"];
        allow_keys(g, "geometry", {"rho", "frame_seed", "angle", "s", "lambda", "polarization"});
        if (g.contains("rho")) {
            const auto& r = g["rho"];
            if (!r.is_array() || r.size() != 3) throw ConfigError("geometry.rho", "must be an integer index triple");
            for (int k = 0; k < 3; ++k) {
                const std::string p = "geometry.rho[" + std::to_string(k) + "]";
                const long long v = integer(r[k], p);
                if (std::abs(v) >= c.grid.n / 2) throw ConfigError(p, "must lie strictly inside the grid band");
                c.geometry.rho[k] = static_cast<int>(v);
            }
        }
        if (g.contains("frame_seed")) c.geometry.frame_seed = seed(g["frame_seed"], "geometry.frame_seed");
        if (g.contains("s")) c.geometry.s_list = increasing_list(g["s"], "geometry.s", 1.0);
        if (g.contains("lambda")) c.geometry.lambda_list = increasing_list(g["lambda"], "geometry.lambda", 1.0);
        if (g.contains("polarization")) {
            const auto& p = g["polarization"];
            if (!p.is_string()) throw ConfigError("geometry.polarization", "must be \"E\", \"H\" or \"both\"");
            const auto s = p.get<std::string>();
            if (s == "both")
                c.geometry.polarizations = {Polarization::E, Polarization::H};
            else if (s == "E" || s == "H")
                c.geometry.polarizations = {parse_polarization(s)};
            else
                throw ConfigError("geometry.polarization", "must be \"E\", \"H\" or \"both\"");
        }
        if (g.contains("angle"))
            c.geometry.angle = number(g["angle"], "geometry.angle");
        else
            c.geometry.angle = 2.0 * std::numbers::pi * CounterRng(c.geometry.frame_seed, 0xf4a3e).uniform();
    } else {
        c.geometry.angle = 2.0 * std::numbers::pi * CounterRng(c.geometry.frame_seed, 0xf4a3e).uniform();
    }
    for (auto p : c.geometry.polarizations)
        if (p == Polarization::H && c.geometry.rho == std::array<int, 3>{0, 0, 0})
            throw ConfigError("geometry.polarization", "H polarization requires a nonzero rho");

    if (j.contains("solver")) {
        const auto& s = j["solver"];
        allow_keys(s, "solver", {"tol", "max_iter", "clamp_floor", "clamp_threshold"});
        if (s.contains("tol")) c.solver.tol = positive(s["tol"], "solver.tol");
        if (s.contains("max_iter")) c.solver.max_iter = positive_int(s["max_iter"], "solver.max_iter");
        if (s.contains("clamp_floor")) c.solver.clamp_floor = nonnegative(s["clamp_floor"], "solver.clamp_floor");
        if (s.contains("clamp_threshold")) {
            c.solver.clamp_threshold = positive(s["clamp_threshold"], "solver.clamp_threshold");
            if (c.solver.clamp_threshold > 1.0) throw ConfigError("solver.clamp_threshold", "must not exceed 1");
        }
    }

    if (j.contains("sampling")) {
        const auto& s = j["sampling"];
        allow_keys(s, "sampling", {"n_samples", "seed", "trials", "fixed_point_starts"});
        if (s.contains("n_samples")) {
            c.sampling.n_samples = positive_int(s["n_samples"], "sampling.n_samples");
            if (c.sampling.n_samples < 8) throw ConfigError("sampling.n_samples", "must be at least 8");
        }
        if (s.contains("seed")) c.sampling.seed = seed(s["seed"], "sampling.seed");
        if (s.contains("trials")) {
            c.sampling.trials = positive_int(s["trials"], "sampling.trials");
            if (c.sampling.trials < 16) throw ConfigError("sampling.trials", "must be at least 16");
        }
        if (s.contains("fixed_point_starts"))
            c.sampling.fixed_point_starts = positive_int(s["fixed_point_starts"], "sampling.fixed_point_starts");
    }

    if (j.contains("output")) {
        const auto& o = j["output"];
        allow_keys(o, "output", {"directory", "formats"});
        if (o.contains("directory")) {
            if (!o["directory"].is_string() || o["directory"].get<std::string>().empty())
                throw ConfigError("output.directory", "must be a nonempty string");
            c.output.directory = o["directory"].get<std::string>();
        }
        if (o.contains("formats")) {
            const auto& f = o["formats"];
            if (!f.is_array()) throw ConfigError("output.formats", "must be an array");
            c.output.csv = c.output.manifest = c.output.fields = false;
            for (std::size_t i = 0; i < f.size(); ++i) {
                const std::string p = "output.formats[" + std::to_string(i) + "]";
                if (!f[i].is_string()) throw ConfigError(p, "must be a string");
                const auto s = f[i].get<std::string>();
                if (s == "csv")
                    c.output.csv = true;
                else if (s == "manifest")
                    c.output.manifest = true;
                else if (s == "fields")
                    c.output.fields = true;
                else
                    throw ConfigError(p, "must be one of csv, manifest, fields");
            }
        }
    }
    return c;
}

inline RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

inline nlohmann::json to_json(const Bump& b)
{
    return {{"offset", b.offset}, {"radius", b.radius}, {"amplitude", b.amplitude}, {"exponent", b.exponent}};
}

inline nlohmann::json to_json(const MediumSpec& m)
{
    nlohmann::json j{{"omega", m.omega}, {"eps0", m.eps0}, {"mu0", m.mu0}};
    for (const auto& [key, list] : {std::pair{"eps", &m.eps}, std::pair{"mu", &m.mu}, std::pair{"sigma", &m.sigma}}) {
        j[key] = nlohmann::json::array();
        for (const auto& b : *list) j[key].push_back(to_json(b));
    }
    return j;
}

/// Fully resolved configuration, defaults included.
inline nlohmann::json to_json(const RunConfig& c)
{
    nlohmann::json j;
    j["name"] = c.name;
    j["grid"] = {{"n", c.grid.n}, {"L", c.grid.L}};
    j["media"] = nlohmann::json::array();
    for (const auto& m : c.media) j["media"].push_back(to_json(m));
    std::string pol = c.geometry.polarizations.size() == 2 ? "both" : std::string(to_string(c.geometry.polarizations[0]));
    j["geometry"] = {{"rho", c.geometry.rho},       {"frame_seed", c.geometry.frame_seed},
                     {"angle", c.geometry.angle},   {"s", c.geometry.s_list},
                     {"lambda", c.geometry.lambda_list}, {"polarization", pol}};
    j["solver"] = {{"tol", c.solver.tol},
                   {"max_iter", c.solver.max_iter},
                   {"clamp_floor", c.solver.clamp_floor},
                   {"clamp_threshold", c.solver.clamp_threshold}};
    j["sampling"] = {{"n_samples", c.sampling.n_samples},
                     {"seed", c.sampling.seed},
                     {"trials", c.sampling.trials},
                     {"fixed_point_starts", c.sampling.fixed_point_starts}};
    nlohmann::json formats = nlohmann::json::array();
    if (c.output.csv) formats.push_back("csv");
    if (c.output.manifest) formats.push_back("manifest");
    if (c.output.fields) formats.push_back("fields");
    j["output"] = {{"directory", c.output.directory}, {"formats", formats}};
    return j;
}

}  // namespace cgo

#endif  // CGO_CONFIG_HPP

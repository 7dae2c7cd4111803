#include "mbrx/config.hpp"

#include <fstream>

#include "json.hpp"
#include "mbrx/errors.hpp"

namespace mbrx {

using nlohmann::json;

namespace {

json to_json(const RunConfig& c) {
    return json{
        {"seed", c.seed},
        {"workers", c.workers},
        {"out_dir", c.out_dir},
        {"p0", c.p0},
        {"p0_sweep", c.p0_sweep},
        {"count", c.count},
        {"record_count", c.record_count},
        {"sigma_sq", c.sigma_sq},
        {"mass", c.mass},
        {"hbar", c.hbar},
        {"classical",
         {{"dt", c.cl_dt}, {"t_final", c.cl_t_final}, {"stride", c.cl_stride}}},
        {"quantum",
         {{"dt", c.q_dt},
          {"t_final", c.q_t_final},
          {"stride", c.q_stride},
          {"nx", c.nx},
          {"ny", c.ny},
          {"extent",
           {c.extent.x_min, c.extent.x_max, c.extent.y_min, c.extent.y_max}}}},
        {"frontier",
         {{"slope", c.frontier_slope}, {"intercept", c.frontier_intercept}}},
        {"nodes",
         {{"substeps", c.node_substeps},
          {"max_refines", c.node_max_refines},
          {"floor", c.node_floor}}},
        {"leak",
         {{"band", c.leak_band}, {"warn", c.leak_warn}, {"error", c.leak_error}}},
    };
}

template <typename T>
T as(const json& v, const std::string& path) {
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw ConfigError(path + " has the wrong type");
    }
}

void parse_classical(const json& j, RunConfig& c) {
    for (const auto& [key, v] : j.items()) {
        const std::string path = "classical." + key;
        if (key == "dt") c.cl_dt = as<double>(v, path);
        else if (key == "t_final") c.cl_t_final = as<double>(v, path);
        else if (key == "stride") c.cl_stride = as<int>(v, path);
        else throw ConfigError("unknown setting \"" + path + "\"");
    }
}

void parse_quantum(const json& j, RunConfig& c) {
    for (const auto& [key, v] : j.items()) {
        const std::string path = "quantum." + key;
        if (key == "dt") c.q_dt = as<double>(v, path);
        else if (key == "t_final") c.q_t_final = as<double>(v, path);
        else if (key == "stride") c.q_stride = as<int>(v, path);
        else if (key == "nx") c.nx = as<int>(v, path);
        else if (key == "ny") c.ny = as<int>(v, path);
        else if (key == "extent") {
            const auto e = as<std::vector<double>>(v, path);
            if (e.size() != 4)
                throw ConfigError(path + " must be [x_min, x_max, y_min, y_max]");
            c.extent = {e[0], e[1], e[2], e[3]};
        } else throw ConfigError("unknown setting \"" + path + "\"");
    }
}

void parse_frontier(const json& j, RunConfig& c) {
    for (const auto& [key, v] : j.items()) {
        const std::string path = "frontier." + key;
        if (key == "slope") c.frontier_slope = as<double>(v, path);
        else if (key == "intercept") c.frontier_intercept = as<double>(v, path);
        else throw ConfigError("unknown setting \"" + path + "\"");
    }
}

void parse_nodes(const json& j, RunConfig& c) {
    for (const auto& [key, v] : j.items()) {
        const std::string path = "nodes." + key;
        if (key == "substeps") c.node_substeps = as<int>(v, path);
        else if (key == "max_refines") c.node_max_refines = as<int>(v, path);
        else if (key == "floor") c.node_floor = as<double>(v, path);
        else throw ConfigError("unknown setting \"" + path + "\"");
    }
}

void parse_leak(const json& j, RunConfig& c) {
    for (const auto& [key, v] : j.items()) {
        const std::string path = "leak." + key;
        if (key == "band") c.leak_band = as<int>(v, path);
        else if (key == "warn") c.leak_warn = as<double>(v, path);
        else if (key == "error") c.leak_error = as<double>(v, path);
        else throw ConfigError("unknown setting \"" + path + "\"");
    }
}

RunConfig parse(const json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    RunConfig c;
    for (const auto& [key, v] : j.items()) {
        if (key == "seed") c.seed = as<std::uint64_t>(v, key);
        else if (key == "workers") c.workers = as<int>(v, key);
        else if (key == "out_dir") c.out_dir = as<std::string>(v, key);
        else if (key == "p0") c.p0 = as<double>(v, key);
        else if (key == "p0_sweep") c.p0_sweep = as<std::vector<double>>(v, key);
        else if (key == "count") c.count = as<long>(v, key);
        else if (key == "record_count") c.record_count = as<long>(v, key);
        else if (key == "sigma_sq") c.sigma_sq = as<double>(v, key);
        else if (key == "mass") c.mass = as<double>(v, key);
        else if (key == "hbar") c.hbar = as<double>(v, key);
        else if (key == "classical") parse_classical(v, c);
        else if (key == "quantum") parse_quantum(v, c);
        else if (key == "frontier") parse_frontier(v, c);
        else if (key == "nodes") parse_nodes(v, c);
        else if (key == "leak") parse_leak(v, c);
        else throw ConfigError("unknown setting \"" + key + "\"");
    }
    return c;
}

}  // namespace

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    RunConfig c = parse(j);
    validate(c);
    return c;
}

void save_config(const RunConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write config file " + path);
    out << to_json(config).dump(2) << '\n';
}

std::string config_json(const RunConfig& config) {
    return to_json(config).dump(2);
}

void validate(const RunConfig& c) {
    auto require = [](bool ok, const char* message) {
        if (!ok) throw ConfigError(message);
    };
    require(c.workers >= 1, "workers must be at least 1");
    require(c.p0 >= 0.0, "p0 must be nonnegative");
    for (double v : c.p0_sweep)
        require(v >= 0.0, "p0_sweep entries must be nonnegative");
    require(c.count > 0, "count must be positive");
    require(c.record_count >= 0 && c.record_count <= c.count,
            "record_count must lie in [0, count]");
    require(c.sigma_sq > 0.0, "sigma_sq must be positive");
    require(c.mass > 0.0, "mass must be positive");
    require(c.hbar > 0.0, "hbar must be positive");
    require(c.cl_dt > 0.0, "classical.dt must be positive");
    require(c.cl_t_final > 0.0, "classical.t_final must be positive");
    require(c.cl_stride >= 1, "classical.stride must be at least 1");
    require(c.q_dt > 0.0, "quantum.dt must be positive");
    require(c.q_t_final > 0.0, "quantum.t_final must be positive");
    require(c.q_stride >= 1, "quantum.stride must be at least 1");
    require(c.nx >= 16 && c.ny >= 16,
            "quantum grid needs at least 16 cells per axis");
    require(c.extent.x_min < c.extent.x_max && c.extent.y_min < c.extent.y_max,
            "quantum.extent must have positive area");
    require(c.node_substeps >= 2, "nodes.substeps must be at least 2");
    require(c.node_max_refines >= 0, "nodes.max_refines must be nonnegative");
    require(c.node_floor > 0.0, "nodes.floor must be positive");
    require(c.leak_band >= 1, "leak.band must be at least 1");
    require(c.leak_warn > 0.0 && c.leak_warn <= c.leak_error,
            "leak thresholds must satisfy 0 < warn <= error");
}

std::uint64_t config_hash(const RunConfig& config) {
    json j = to_json(config);
    j.erase("workers");
    j.erase("out_dir");
    const std::string s = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace mbrx

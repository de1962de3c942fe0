#include "apcgl/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace apcgl {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
    throw ConfigError(origin + ": " + what);
}

// Translate a byte offset from the JSON parser into line:column.
std::pair<std::size_t, std::size_t> line_of(const std::string& text,
                                            std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

const json& member(const json& obj, const std::string& path,
                   const std::string& key, const std::string& origin) {
    if (!obj.is_object()) {
        fail(origin, path + " must be an object");
    }
    auto it = obj.find(key);
    if (it == obj.end()) {
        fail(origin, path + "." + key + " is required");
    }
    return *it;
}

double number_at(const json& obj, const std::string& path, const std::string& key,
                 const std::string& origin) {
    const json& v = member(obj, path, key, origin);
    if (!v.is_number()) {
        fail(origin, path + "." + key + " must be a number");
    }
    return v.get<double>();
}

long integer_at(const json& obj, const std::string& path, const std::string& key,
                const std::string& origin) {
    const json& v = member(obj, path, key, origin);
    if (!v.is_number_integer()) {
        fail(origin, path + "." + key + " must be an integer");
    }
    return v.get<long>();
}

Complex complex_at(const json& obj, const std::string& path, const std::string& key,
                   const std::string& origin) {
    const json& v = member(obj, path, key, origin);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        fail(origin, path + "." + key + " must be [re, im]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

} // namespace

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_of(text, e.byte > 0 ? e.byte - 1 : 0);
        fail(origin, "line " + std::to_string(line) + ", column " +
                         std::to_string(col) + ": " + e.what());
    }
    if (!doc.is_object()) {
        fail(origin, "top level must be an object");
    }

    RunConfig config;

    // Physical constants carry no defaults.
    config.lambda = number_at(doc, "$", "lambda", origin);
    if (!(config.lambda > 0.0)) {
        fail(origin, "$.lambda must be > 0");
    }

    const json& params = member(doc, "$", "params", origin);
    config.params.alpha = number_at(params, "$.params", "alpha", origin);
    config.params.beta = number_at(params, "$.params", "beta", origin);
    config.params.gamma = number_at(params, "$.params", "gamma", origin);
    config.params.a = number_at(params, "$.params", "a", origin);
    config.params.b = number_at(params, "$.params", "b", origin);
    config.params.degree =
        static_cast<int>(integer_at(params, "$.params", "degree", origin));
    config.params.kappa = complex_at(params, "$.params", "kappa", origin);
    try {
        validate(config.params);
    } catch (const std::invalid_argument& e) {
        fail(origin, std::string("$.params: ") + e.what());
    }

    const json& schedule = member(doc, "$", "schedule", origin);
    config.schedule.h = number_at(schedule, "$.schedule", "h", origin);
    config.schedule.steps = integer_at(schedule, "$.schedule", "steps", origin);
    config.schedule.record_every =
        integer_at(schedule, "$.schedule", "record_every", origin);
    const long truncation =
        integer_at(schedule, "$.schedule", "truncation", origin);
    if (truncation < 1) {
        fail(origin, "$.schedule.truncation must be >= 1");
    }
    config.schedule.truncation = static_cast<std::size_t>(truncation);
    try {
        validate(config.schedule);
    } catch (const std::invalid_argument& e) {
        fail(origin, std::string("$.schedule: ") + e.what());
    }

    const json& initial = member(doc, "$", "initial", origin);
    if (!initial.is_array() || initial.empty()) {
        fail(origin, "$.initial must be a non-empty array of [index, re, im]");
    }
    std::set<std::size_t> seen;
    for (std::size_t i = 0; i < initial.size(); ++i) {
        const json& entry = initial[i];
        const std::string path = "$.initial[" + std::to_string(i) + "]";
        if (!entry.is_array() || entry.size() != 3 ||
            !entry[0].is_number_integer() || !entry[1].is_number() ||
            !entry[2].is_number()) {
            fail(origin, path + " must be [index, re, im]");
        }
        const long index = entry[0].get<long>();
        if (index < 1 || static_cast<std::size_t>(index) > config.schedule.truncation) {
            fail(origin, path + ": index outside [1, truncation]");
        }
        if (!seen.insert(static_cast<std::size_t>(index)).second) {
            fail(origin, path + ": duplicate index");
        }
        config.initial.push_back({static_cast<std::size_t>(index),
                                  Complex{entry[1].get<double>(),
                                          entry[2].get<double>()}});
    }

    const json& oracle = member(doc, "$", "oracle", origin);
    const long grid_n = integer_at(oracle, "$.oracle", "grid_n", origin);
    if (grid_n < 4 || !is_power_of_two(static_cast<std::size_t>(grid_n))) {
        fail(origin, "$.oracle.grid_n must be a power of two >= 4");
    }
    config.oracle.grid_n = static_cast<std::size_t>(grid_n);
    config.oracle.dt = number_at(oracle, "$.oracle", "dt", origin);
    if (!(config.oracle.dt > 0.0)) {
        fail(origin, "$.oracle.dt must be > 0");
    }
    config.oracle.picard_iters =
        static_cast<int>(integer_at(oracle, "$.oracle", "picard_iters", origin));
    if (config.oracle.picard_iters < 1) {
        fail(origin, "$.oracle.picard_iters must be >= 1");
    }
    config.oracle.quad_nodes =
        static_cast<int>(integer_at(oracle, "$.oracle", "quad_nodes", origin));
    if (config.oracle.quad_nodes < 2) {
        fail(origin, "$.oracle.quad_nodes must be >= 2");
    }
    if (oracle.contains("scheme")) {
        const json& scheme = oracle["scheme"];
        if (scheme == "exponential_euler") {
            config.oracle.scheme = Scheme::exponential_euler;
        } else if (scheme == "etdrk4") {
            config.oracle.scheme = Scheme::etdrk4;
        } else {
            fail(origin, "$.oracle.scheme must be \"exponential_euler\" or \"etdrk4\"");
        }
    }

    if (doc.contains("output_dir")) {
        if (!doc["output_dir"].is_string()) {
            fail(origin, "$.output_dir must be a string");
        }
        config.output_dir = doc["output_dir"].get<std::string>();
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
            fail(origin, "$.seed must be an integer");
        }
        config.seed = doc["seed"].get<std::uint64_t>();
    }

    return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string() + ": cannot open file");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str(), path.string());
}

ApSeries initial_series(const RunConfig& config) {
    ApSeries u0(config.lambda, config.schedule.truncation);
    for (const InitialMode& mode : config.initial) {
        u0.set_coeff(mode.index, mode.value);
    }
    return u0;
}

} // namespace apcgl

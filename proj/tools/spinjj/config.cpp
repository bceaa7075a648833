// Copyright 2026 The spinjj Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

namespace spinjj::cli {

namespace {

std::string with_line(const std::string& what, std::size_t line) {
    if (line == 0) return what;
    return "line " + std::to_string(line) + ": " + what;
}

constexpr std::array<std::pair<Experiment, std::string_view>, 7> kExperimentNames{{
    {Experiment::Estimate, "estimate"},
    {Experiment::Concurrence, "concurrence"},
    {Experiment::Holonomic, "holonomic"},
    {Experiment::PhaseGate, "phase-gate"},
    {Experiment::SwapGate, "swap-gate"},
    {Experiment::ValidateEffective, "validate-effective"},
    {Experiment::ValidateRwa, "validate-rwa"},
}};

std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        parts.emplace_back(path.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    return parts;
}

std::string join_path(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty()) out += '.';
        out += p;
    }
    return out;
}

std::size_t line_at(std::string_view source, std::size_t offset) {
    offset = std::min(offset, source.size());
    return 1 + static_cast<std::size_t>(std::count(source.begin(), source.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

// Walks the raw text looking for each key of the path in turn. This is a
// heuristic (it does not re-parse), but keys in these documents are unique
// enough that the first match after the parent key is the right one.
std::size_t locate(std::string_view source, const std::vector<std::string>& path) {
    if (source.empty()) return 0;
    std::size_t pos = 0;
    bool found_any = false;
    for (const auto& key : path) {
        const std::string quoted = "\"" + key + "\"";
        const auto hit = source.find(quoted, pos);
        if (hit == std::string_view::npos) break;
        pos = hit;
        found_any = true;
    }
    return found_any ? line_at(source, pos) : 0;
}

// Error reporting context: knows the source text and which paths came from
// command-line overrides (those have no line in the file).
struct Context {
    std::string_view source;
    std::set<std::string> overridden;
    std::string override_label = "--set";

    [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& what) const {
        const std::string dotted = join_path(path);
        for (const auto& o : overridden) {
            if (dotted == o || dotted.rfind(o + ".", 0) == 0 || o.rfind(dotted + ".", 0) == 0) {
                throw ConfigError(what + " (set via " + override_label + " " + o + ")");
            }
        }
        throw ConfigError(what, locate(source, path));
    }
};

double require_number(const Context& ctx, const json& v, const std::vector<std::string>& path) {
    if (!v.is_number()) ctx.fail(path, "'" + join_path(path) + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) ctx.fail(path, "'" + join_path(path) + "' must be finite");
    return x;
}

std::uint64_t require_count(const Context& ctx, const json& v, const std::vector<std::string>& path) {
    const double x = require_number(ctx, v, path);
    if (x < 0.0 || std::floor(x) != x) {
        ctx.fail(path, "'" + join_path(path) + "' must be a non-negative integer");
    }
    return static_cast<std::uint64_t>(x);
}

SystemParams parse_params(const Context& ctx, const json& j) {
    SystemParams p;
    if (!j.is_object()) ctx.fail({"params"}, "'params' must be an object");
    const std::vector<std::pair<std::string, double SystemParams::*>> fields = {
        {"omega", &SystemParams::omega},     {"omega10", &SystemParams::omega10},
        {"g1", &SystemParams::g1},           {"g2", &SystemParams::g2},
        {"g2_phase", &SystemParams::g2_phase}, {"epsilon", &SystemParams::epsilon},
        {"omega_d", &SystemParams::omega_d}, {"kappa", &SystemParams::kappa},
        {"gamma", &SystemParams::gamma},     {"gamma1", &SystemParams::gamma1},
        {"gamma2", &SystemParams::gamma2},
    };
    for (const auto& [key, value] : j.items()) {
        const std::vector<std::string> path{"params", key};
        const auto it = std::find_if(fields.begin(), fields.end(), [&](const auto& f) { return f.first == key; });
        if (it != fields.end()) {
            p.*(it->second) = require_number(ctx, value, path);
        } else if (key == "n_max") {
            p.n_max = static_cast<std::size_t>(require_count(ctx, value, path));
        } else if (key == "e_c") {
            if (!value.is_null()) p.e_c = require_number(ctx, value, path);
        } else if (key == "e_j") {
            if (!value.is_null()) p.e_j = require_number(ctx, value, path);
        } else {
            ctx.fail(path, "unknown parameter '" + key + "'");
        }
    }
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        // Point at the offending field when the message names one that was given.
        const std::string msg = e.what();
        const auto open = msg.find('\'');
        const auto close = open == std::string::npos ? open : msg.find('\'', open + 1);
        const std::string field = close == std::string::npos ? "" : msg.substr(open + 1, close - open - 1);
        if (!field.empty() && j.contains(field)) ctx.fail({"params", field}, msg);
        ctx.fail({"params"}, msg);
    }
    return p;
}

bool same_kind(const json& a, const json& b) {
    if (a.is_number() && b.is_number()) return true;
    return a.type() == b.type();
}

void check_positive(const Context& ctx, const json& opts, const std::string& key) {
    if (!(opts.at(key).get<double>() > 0.0)) ctx.fail({"options", key}, "'options." + key + "' must be positive");
}

void check_min_count(const Context& ctx, const json& opts, const std::string& key, std::uint64_t min) {
    const auto n = require_count(ctx, opts.at(key), {"options", key});
    if (n < min) {
        ctx.fail({"options", key}, "'options." + key + "' must be at least " + std::to_string(min));
    }
}

void check_number_list(const Context& ctx, const json& opts, const std::string& key, bool positive) {
    const auto& list = opts.at(key);
    if (list.empty()) ctx.fail({"options", key}, "'options." + key + "' must not be empty");
    for (const auto& v : list) {
        const double x = require_number(ctx, v, {"options", key});
        if (positive && !(x > 0.0)) ctx.fail({"options", key}, "'options." + key + "' entries must be positive");
    }
}

json parse_options(const Context& ctx, Experiment e, const json* given) {
    json opts = default_options(e);
    if (given != nullptr) {
        if (!given->is_object()) ctx.fail({"options"}, "'options' must be an object");
        for (const auto& [key, value] : given->items()) {
            if (!opts.contains(key)) {
                ctx.fail({"options", key}, "unknown option '" + key + "' for experiment " + std::string(to_string(e)));
            }
            if (!same_kind(opts[key], value)) {
                ctx.fail({"options", key}, "option '" + key + "' has the wrong type (expected " +
                                               std::string(opts[key].type_name()) + ")");
            }
            opts[key] = value;
        }
    }
    for (const auto& [key, value] : opts.items()) {
        if (value.is_number()) require_number(ctx, value, {"options", key});
    }

    switch (e) {
        case Experiment::Estimate:
            check_positive(ctx, opts, "i0");
            check_positive(ctx, opts, "r");
            if (!(opts["n_spins"].get<double>() >= 1.0)) ctx.fail({"options", "n_spins"}, "'options.n_spins' must be at least 1");
            break;
        case Experiment::Concurrence:
            check_number_list(ctx, opts, "gamma_ratios", false);
            for (const auto& v : opts["gamma_ratios"]) {
                if (v.get<double>() < 0.0) ctx.fail({"options", "gamma_ratios"}, "decay ratios must be non-negative");
            }
            check_min_count(ctx, opts, "points", 2);
            check_positive(ctx, opts, "lambda_t_max");
            break;
        case Experiment::Holonomic:
            check_min_count(ctx, opts, "theta_points", 2);
            check_min_count(ctx, opts, "phi_points", 1);
            check_min_count(ctx, opts, "time_steps", 1);
            check_positive(ctx, opts, "g_total");
            break;
        case Experiment::PhaseGate: {
            require_count(ctx, opts["m"], {"options", "m"});
            check_positive(ctx, opts, "min_ratio");
            check_min_count(ctx, opts, "points", 2);
            check_min_count(ctx, opts, "mc_samples", 1);
            check_min_count(ctx, opts, "n_cap", 1);
            const auto conv = opts["rate_convention"].get<std::string>();
            if (conv != "angular" && conv != "inverse_time") {
                ctx.fail({"options", "rate_convention"}, "'options.rate_convention' must be \"angular\" or \"inverse_time\"");
            }
            break;
        }
        case Experiment::SwapGate:
            check_positive(ctx, opts, "gamma_max");
            check_min_count(ctx, opts, "grid_points", 2);
            check_min_count(ctx, opts, "mc_samples", 1);
            break;
        case Experiment::ValidateEffective:
            check_positive(ctx, opts, "detuning_ratio");
            check_min_count(ctx, opts, "points", 2);
            break;
        case Experiment::ValidateRwa:
            check_number_list(ctx, opts, "ratios", true);
            check_positive(ctx, opts, "duration_ns");
            break;
    }
    return opts;
}

Sweep parse_sweep(const Context& ctx, const json& j, const json& resolved) {
    if (!j.is_object()) ctx.fail({"sweep"}, "'sweep' must be an object");
    Sweep s;
    for (const auto& [key, value] : j.items()) {
        if (key != "variable" && key != "start" && key != "stop" && key != "points") {
            ctx.fail({"sweep", key}, "unknown sweep field '" + key + "'");
        }
    }
    for (const char* key : {"variable", "start", "stop", "points"}) {
        if (!j.contains(key)) ctx.fail({"sweep"}, std::string("sweep is missing '") + key + "'");
    }
    if (!j["variable"].is_string()) ctx.fail({"sweep", "variable"}, "'sweep.variable' must be a string");
    s.variable = j["variable"].get<std::string>();
    s.start = require_number(ctx, j["start"], {"sweep", "start"});
    s.stop = require_number(ctx, j["stop"], {"sweep", "stop"});
    s.points = static_cast<std::size_t>(require_count(ctx, j["points"], {"sweep", "points"}));
    if (s.points < 2) ctx.fail({"sweep", "points"}, "'sweep.points' must be at least 2");

    const auto parts = split_path(s.variable);
    if (parts.size() != 2 || (parts[0] != "params" && parts[0] != "options")) {
        ctx.fail({"sweep", "variable"}, "sweep variable must be 'params.<name>' or 'options.<name>'");
    }
    const json& section = resolved.at(parts[0]);
    if (!section.contains(parts[1]) || !section.at(parts[1]).is_number()) {
        ctx.fail({"sweep", "variable"}, "sweep variable '" + s.variable + "' is not a numeric field");
    }
    return s;
}

}  // namespace

ConfigError::ConfigError(const std::string& what, std::size_t line)
    : std::runtime_error(with_line(what, line)), line_(line) {}

std::string_view to_string(Experiment e) {
    for (const auto& [k, name] : kExperimentNames) {
        if (k == e) return name;
    }
    return "unknown";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
    for (const auto& [k, n] : kExperimentNames) {
        if (n == name) return k;
    }
    return std::nullopt;
}

std::vector<double> Sweep::values() const {
    std::vector<double> v(points);
    for (std::size_t i = 0; i < points; ++i) {
        v[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    v.back() = stop;
    return v;
}

json default_options(Experiment e) {
    switch (e) {
        case Experiment::Estimate:
            return {{"i0", 21e-6}, {"r", 1.2e-6}, {"n_spins", 1e6}};
        case Experiment::Concurrence:
            return {{"gamma_ratios", {1.0, 0.1, 0.01}},
                    {"points", 401},
                    {"lambda_t_max", 2.0 * kPi},
                    {"normalize", false}};
        case Experiment::Holonomic:
            return {{"theta_points", 10}, {"phi_points", 10}, {"g_total", 100.0}, {"time_steps", 64}};
        case Experiment::PhaseGate:
            return {{"m", 0},
                    {"min_ratio", 10.0},
                    {"points", 41},
                    {"mc_samples", 2000},
                    {"n_cap", 1000000},
                    {"fock_check", true},
                    {"rate_convention", "angular"}};
        case Experiment::SwapGate:
            return {{"gamma_max", 2.0}, {"grid_points", 6}, {"mc_samples", 2000}};
        case Experiment::ValidateEffective:
            return {{"detuning_ratio", 10.0}, {"points", 201}, {"fock_check", true}};
        case Experiment::ValidateRwa:
            return {{"ratios", {5.0, 10.0, 20.0}}, {"duration_ns", 0.5}};
    }
    return json::object();
}

void apply_override(json& doc, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError("--set expects key=value, got '" + std::string(assignment) + "'");
    }
    const auto path = split_path(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));
    json value;
    try {
        value = json::parse(text);
    } catch (const json::parse_error&) {
        value = text;
    }
    json* node = &doc;
    for (std::size_t i = 0; i < path.size(); ++i) {
        if (path[i].empty()) throw ConfigError("--set has an empty path component in '" + std::string(assignment) + "'");
        if (node->is_null()) *node = json::object();
        if (!node->is_object()) {
            throw ConfigError("--set " + join_path(path) + ": '" + (i == 0 ? std::string("<root>") : path[i - 1]) + "' is not an object");
        }
        node = &(*node)[path[i]];
    }
    *node = std::move(value);
}

json params_to_json(const SystemParams& p) {
    json j = {{"omega", p.omega},     {"omega10", p.omega10}, {"g1", p.g1},
              {"g2", p.g2},           {"g2_phase", p.g2_phase}, {"epsilon", p.epsilon},
              {"omega_d", p.omega_d}, {"kappa", p.kappa},     {"gamma", p.gamma},
              {"gamma1", p.gamma1},   {"gamma2", p.gamma2},   {"n_max", p.n_max}};
    j["e_c"] = p.e_c ? json(*p.e_c) : json(nullptr);
    j["e_j"] = p.e_j ? json(*p.e_j) : json(nullptr);
    return j;
}

namespace {

RunConfig parse_with_context(const json& doc, const Context& ctx) {
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object", ctx.source.empty() ? 0 : 1);
    for (const auto& [key, value] : doc.items()) {
        static const std::set<std::string> known = {"experiment", "params", "options", "sweep",
                                                    "seed", "output_path", "metadata"};
        if (!known.count(key)) ctx.fail({key}, "unknown field '" + key + "'");
    }
    if (!doc.contains("experiment")) throw ConfigError("missing required field 'experiment'", ctx.source.empty() ? 0 : 1);
    if (!doc["experiment"].is_string()) ctx.fail({"experiment"}, "'experiment' must be a string");
    const auto name = doc["experiment"].get<std::string>();
    const auto e = parse_experiment(name);
    if (!e) ctx.fail({"experiment"}, "unknown experiment '" + name + "'");

    RunConfig cfg;
    cfg.experiment = *e;
    if (doc.contains("params")) cfg.params = parse_params(ctx, doc["params"]);
    cfg.options = parse_options(ctx, *e, doc.contains("options") ? &doc["options"] : nullptr);
    if (doc.contains("seed")) cfg.seed = require_count(ctx, doc["seed"], {"seed"});
    if (doc.contains("output_path")) {
        if (!doc["output_path"].is_string()) ctx.fail({"output_path"}, "'output_path' must be a string");
        cfg.output_path = doc["output_path"].get<std::string>();
    }

    cfg.raw = {{"experiment", name},
               {"params", params_to_json(cfg.params)},
               {"options", cfg.options},
               {"seed", cfg.seed},
               {"output_path", cfg.output_path}};
    if (doc.contains("sweep") && !doc["sweep"].is_null()) {
        cfg.sweep = parse_sweep(ctx, doc["sweep"], cfg.raw);
        cfg.raw["sweep"] = {{"variable", cfg.sweep->variable},
                            {"start", cfg.sweep->start},
                            {"stop", cfg.sweep->stop},
                            {"points", cfg.sweep->points}};
    }
    return cfg;
}

}  // namespace

RunConfig parse_config(const json& doc, std::string_view source) {
    return parse_with_context(doc, Context{source, {}});
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string source = buf.str();

    json doc;
    try {
        doc = json::parse(source);
    } catch (const json::parse_error& e) {
        // e.byte is 1-based and points just past the offending character.
        const std::size_t offset = e.byte > 0 ? static_cast<std::size_t>(e.byte - 1) : 0;
        throw ConfigError("malformed JSON: " + std::string(e.what()), line_at(source, offset));
    }

    Context ctx{source, {}};
    for (const auto& o : overrides) {
        apply_override(doc, o);
        ctx.overridden.insert(std::string(std::string_view(o).substr(0, o.find('='))));
    }
    return parse_with_context(doc, ctx);
}

RunConfig with_value(const RunConfig& cfg, const std::string& path, double value) {
    json doc = cfg.raw;
    const auto parts = split_path(path);
    json* node = &doc;
    for (const auto& p : parts) node = &(*node)[p];
    if (node->is_number_integer()) {
        if (std::floor(value) != value) {
            throw ConfigError("sweep value " + std::to_string(value) + " for integer field '" + path + "'");
        }
        *node = static_cast<std::int64_t>(value);
    } else {
        *node = value;
    }
    Context ctx{{}, {path}, "sweep"};
    return parse_with_context(doc, ctx);
}

}  // namespace spinjj::cli

#include "lyapspec/config.hpp"

#include <fstream>

namespace lyapspec {

void check_keys(const json& j, const std::string& context,
                const std::vector<std::string>& required,
                const std::vector<std::string>& optional) {
    if (!j.is_object()) throw SchemaError(context + ": expected an object");
    for (const std::string& k : required)
        if (!j.contains(k)) throw SchemaError(context + ": missing required key '" + k + "'");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        bool known = false;
        for (const std::string& r : required) known = known || r == k;
        for (const std::string& o : optional) known = known || o == k;
        if (!known) throw SchemaError(context + ": unknown key '" + k + "'");
    }
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw SchemaError("config parse error in " + path + ": " + e.what());
    }
    return j;
}

namespace {

Interval interval_from_json(const json& j, const std::string& context) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw SchemaError(context + ": intervals are [lo, hi] number pairs");
    Interval iv{j[0].get<double>(), j[1].get<double>()};
    if (!(iv.hi > iv.lo)) throw SchemaError(context + ": interval has nonpositive length");
    return iv;
}

TransitionMatrix matrix_from_json(const json& j, const std::string& context) {
    if (!j.is_array()) throw SchemaError(context + ": matrix must be an array of 0/1 rows");
    std::vector<std::vector<int>> rows;
    for (const json& r : j) {
        if (!r.is_array()) throw SchemaError(context + ": matrix rows must be arrays");
        std::vector<int> row;
        for (const json& v : r) {
            if (!v.is_number_integer())
                throw SchemaError(context + ": matrix entries must be integers 0/1");
            row.push_back(v.get<int>());
        }
        rows.push_back(std::move(row));
    }
    return TransitionMatrix(std::move(rows));
}

}  // namespace

MapConfig map_from_config(const json& j) {
    check_keys(j, "map config", {"family"},
               {"s", "slopes", "matrix", "branch_intervals", "name", "n_max", "grid_points"});
    MapConfig out;
    out.raw = j;
    const std::string family = j.at("family").get<std::string>();

    if (family == "manneville_pomeau") {
        check_keys(j, "manneville_pomeau config", {"family", "s"},
                   {"name", "n_max", "grid_points"});
        out.map = std::make_shared<MapModel>(MapModel::manneville_pomeau(j.at("s").get<double>()));
    } else if (family == "linear_sft") {
        check_keys(j, "linear_sft config", {"family", "slopes", "matrix", "branch_intervals"},
                   {"name", "n_max", "grid_points"});
        std::vector<double> slopes;
        for (const json& v : j.at("slopes")) slopes.push_back(v.get<double>());
        std::vector<Interval> domains;
        int idx = 0;
        for (const json& v : j.at("branch_intervals"))
            domains.push_back(
                interval_from_json(v, "branch_intervals[" + std::to_string(idx++) + "]"));
        out.map = std::make_shared<MapModel>(MapModel::linear_sft(
            std::move(slopes), matrix_from_json(j.at("matrix"), "matrix"), std::move(domains)));
    } else if (family == "parabolic_linear_blend") {
        check_keys(j, "parabolic_linear_blend config", {"family", "s", "branch_intervals"},
                   {"matrix", "name", "n_max", "grid_points"});
        std::vector<Interval> domains;
        int idx = 0;
        for (const json& v : j.at("branch_intervals"))
            domains.push_back(
                interval_from_json(v, "branch_intervals[" + std::to_string(idx++) + "]"));
        std::optional<TransitionMatrix> a;
        if (j.contains("matrix")) a = matrix_from_json(j.at("matrix"), "matrix");
        out.map = std::make_shared<MapModel>(MapModel::parabolic_linear_blend(
            j.at("s").get<double>(), std::move(domains), std::move(a)));
    } else {
        throw SchemaError("unknown map family '" + family +
                          "' (expected manneville_pomeau, linear_sft, or "
                          "parabolic_linear_blend)");
    }

    if (j.contains("name")) out.name = j.at("name").get<std::string>();
    if (out.name.empty()) out.name = out.map->label();
    if (j.contains("n_max")) {
        out.n_max = j.at("n_max").get<int>();
        if (out.n_max < 4) throw SchemaError("n_max must be >= 4");
    }
    if (j.contains("grid_points")) {
        out.grid_points = j.at("grid_points").get<int>();
        if (out.grid_points < 2) throw SchemaError("grid_points must be >= 2");
    }
    return out;
}

MapConfig load_map_config(const std::string& path) {
    return map_from_config(load_json_file(path));
}

ScheduleConfig schedule_from_config(const json& j) {
    check_keys(j, "schedule config", {"stages", "switch_times"}, {"policy"});
    ScheduleConfig out;
    out.raw = j;
    if (!j.at("stages").is_array() || j.at("stages").empty())
        throw SchemaError("schedule: stages must be a nonempty array");
    for (const json& s : j.at("stages")) {
        check_keys(s, "stage", {}, {"level", "q", "alpha", "restrict_symbols"});
        StageSpec spec;
        if (s.contains("level")) spec.level = s.at("level").get<int>();
        if (s.contains("q")) spec.q = s.at("q").get<double>();
        if (s.contains("alpha")) spec.alpha = s.at("alpha").get<double>();
        if (!spec.q && !spec.alpha)
            throw SchemaError("stage needs q or alpha");
        if (spec.q && spec.alpha)
            throw SchemaError("stage: give q or alpha, not both");
        if (s.contains("restrict_symbols"))
            for (const json& v : s.at("restrict_symbols"))
                spec.restrict_symbols.push_back(v.get<int>());
        out.stages.push_back(std::move(spec));
    }
    for (const json& v : j.at("switch_times")) {
        if (!v.is_number_integer() || v.get<long long>() <= 0)
            throw SchemaError("switch_times must be positive integers");
        out.switch_times.push_back(v.get<long long>());
    }
    if (j.contains("policy")) {
        const json& p = j.at("policy");
        check_keys(p, "policy", {}, {"min_ratio", "index_ratio", "budget", "nonlinear_budget"});
        if (p.contains("min_ratio")) out.policy.min_ratio = p.at("min_ratio").get<double>();
        if (p.contains("index_ratio")) out.policy.index_ratio = p.at("index_ratio").get<bool>();
        if (p.contains("budget")) out.policy.budget = p.at("budget").get<long long>();
        if (p.contains("nonlinear_budget"))
            out.policy.nonlinear_budget = p.at("nonlinear_budget").get<long long>();
    }
    return out;
}

ScheduleConfig load_schedule_config(const std::string& path) {
    return schedule_from_config(load_json_file(path));
}

}  // namespace lyapspec

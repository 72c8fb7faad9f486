#include <cmath>

#include "hessmetric/error.hpp"
#include "hessmetric/harness.hpp"
#include "hessmetric/io.hpp"

namespace hessmetric::harness {

namespace {

using nlohmann::json;

int int_at(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number_integer())
        fail(ErrorCode::Parse, "field '" + where + "." + key + "' must be an integer");
    return it->get<int>();
}

double number_at(const json& j, const std::string& where) {
    if (!j.is_number()) fail(ErrorCode::Parse, "field '" + where + "' must be a number");
    return j.get<double>();
}

std::vector<double> numbers_at(const json& j, const std::string& where) {
    if (!j.is_array()) fail(ErrorCode::Parse, "field '" + where + "' must be an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number_at(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

void require_known(const Scenario& s, const std::string& name, const std::string& where) {
    if (!s.profiles.count(name))
        fail(ErrorCode::Parse, "field '" + where + "' refers to unknown profile '" + name + "'");
}

}  // namespace

const RadialProfile& Scenario::profile(const std::string& name) const {
    auto it = profiles.find(name);
    if (it == profiles.end()) fail(ErrorCode::InvalidArgument, "unknown profile '" + name + "'");
    return it->second;
}

RadialProfile Scenario::weight_profile() const {
    if (weight) return profile(*weight);
    return RadialProfile(params.coordinate());
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
    json root = io::parse_json(text, source);
    if (!root.is_object()) fail(ErrorCode::Parse, source + ": top level must be an object");
    Scenario s;

    auto params_it = root.find("params");
    if (params_it == root.end() || !params_it->is_object())
        fail(ErrorCode::Parse, "field 'params' must be an object with n and m");
    s.params = calculus::make_params(int_at(*params_it, "n", "params"), int_at(*params_it, "m", "params"));

    if (auto it = root.find("profiles"); it != root.end()) {
        if (!it->is_object()) fail(ErrorCode::Parse, "field 'profiles' must be an object of named profiles");
        for (const auto& [name, value] : it->items())
            s.profiles.emplace(name, io::profile_from_json(value, "profiles." + name, s.params.coordinate()));
    }

    if (auto it = root.find("weight"); it != root.end() && !it->is_null()) {
        if (!it->is_string()) fail(ErrorCode::Parse, "field 'weight' must name a profile");
        s.weight = it->get<std::string>();
        require_known(s, *s.weight, "weight");
    }

    if (auto it = root.find("pairs"); it != root.end()) {
        if (!it->is_array()) fail(ErrorCode::Parse, "field 'pairs' must be an array of name pairs");
        for (std::size_t i = 0; i < it->size(); ++i) {
            std::string where = "pairs[" + std::to_string(i) + "]";
            const json& p = (*it)[i];
            if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
                fail(ErrorCode::Parse, "field '" + where + "' must be a pair of profile names");
            s.pairs.emplace_back(p[0].get<std::string>(), p[1].get<std::string>());
            require_known(s, s.pairs.back().first, where + "[0]");
            require_known(s, s.pairs.back().second, where + "[1]");
        }
    }

    if (auto it = root.find("t_grid"); it != root.end()) {
        if (it->is_number_integer()) {
            int points = it->get<int>();
            if (points < 2) fail(ErrorCode::Parse, "field 't_grid' needs at least 2 points");
            for (int k = 0; k < points; ++k) s.t_grid.push_back(static_cast<double>(k) / (points - 1));
        } else {
            s.t_grid = numbers_at(*it, "t_grid");
        }
        for (std::size_t k = 0; k < s.t_grid.size(); ++k) {
            if (!(s.t_grid[k] >= 0.0 && s.t_grid[k] <= 1.0))
                fail(ErrorCode::Parse, "field 't_grid[" + std::to_string(k) + "]' must lie in [0,1]");
            if (k > 0 && !(s.t_grid[k] > s.t_grid[k - 1]))
                fail(ErrorCode::Parse, "field 't_grid' must be strictly increasing");
        }
    }

    if (auto it = root.find("radii"); it != root.end()) s.radii = numbers_at(*it, "radii");

    if (auto it = root.find("resolution"); it != root.end()) {
        if (!it->is_number_integer() || it->get<int>() < 16)
            fail(ErrorCode::Parse, "field 'resolution' must be an integer of at least 16");
        s.resolution = it->get<int>();
    }

    if (auto it = root.find("tolerance"); it != root.end()) {
        double tol = number_at(*it, "tolerance");
        if (!(tol > 0.0)) fail(ErrorCode::Parse, "field 'tolerance' must be positive");
        s.tolerance = tol;
    }

    if (auto it = root.find("expect"); it != root.end()) {
        if (!it->is_object()) fail(ErrorCode::Parse, "field 'expect' must map quantity labels to numbers");
        for (const auto& [label, value] : it->items()) s.expect[label] = number_at(value, "expect." + label);
    }
    return s;
}

Scenario load_scenario(const std::string& path) { return parse_scenario(io::read_file(path), path); }

}  // namespace hessmetric::harness

#include "hessmetric/io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "hessmetric/error.hpp"

namespace hessmetric::io {

void write_file_atomic(const std::string& path, const std::string& contents) {
    std::string tmp = path + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::InvalidArgument, "cannot open " + tmp + " for writing");
        out << contents;
        out.flush();
        if (!out) fail(ErrorCode::InvalidArgument, "failed writing " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::string reason = std::strerror(errno);
        std::remove(tmp.c_str());
        fail(ErrorCode::InvalidArgument, "cannot rename " + tmp + " to " + path + ": " + reason);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::InvalidArgument, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

nlohmann::json profile_to_json(const core::RadialProfile& g) {
    nlohmann::json j;
    j["coordinate"] = {{"n", g.coordinate().n}, {"q", g.coordinate().q}};
    j["breakpoints"] = g.breakpoints();
    j["slopes"] = g.slopes();
    return j;
}

namespace {

std::vector<double> number_list(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array()) fail(ErrorCode::Parse, "field '" + where + "' must be an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            fail(ErrorCode::Parse, "field '" + where + "[" + std::to_string(i) + "]' must be a number");
        out.push_back(j[i].get<double>());
    }
    return out;
}

int integer_field(const nlohmann::json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_number_integer())
        fail(ErrorCode::Parse, "field '" + where + "." + key + "' must be an integer");
    return it->get<int>();
}

}  // namespace

core::RadialProfile profile_from_json(const nlohmann::json& j, const std::string& where,
                                      std::optional<core::Coordinate> fallback) {
    if (!j.is_object()) fail(ErrorCode::Parse, "field '" + where + "' must be an object");
    auto coord_it = j.find("coordinate");
    core::Coordinate coord;
    if (coord_it == j.end() && fallback) {
        coord = *fallback;
    } else {
        if (coord_it == j.end() || !coord_it->is_object())
            fail(ErrorCode::Parse, "field '" + where + ".coordinate' must be an object with n and q");
        coord = {integer_field(*coord_it, "n", where + ".coordinate"),
                 integer_field(*coord_it, "q", where + ".coordinate")};
    }
    auto bp_it = j.find("breakpoints");
    auto sl_it = j.find("slopes");
    if (bp_it == j.end()) fail(ErrorCode::Parse, "field '" + where + ".breakpoints' is missing");
    if (sl_it == j.end()) fail(ErrorCode::Parse, "field '" + where + ".slopes' is missing");
    return core::make_profile(number_list(*bp_it, where + ".breakpoints"), number_list(*sl_it, where + ".slopes"),
                              coord);
}

nlohmann::json measure_to_json(const calculus::AtomicMeasure& mu) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& a : mu.atoms) j.push_back({{"tau", a.tau}, {"mass", a.mass}});
    return j;
}

calculus::AtomicMeasure measure_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array()) fail(ErrorCode::Parse, "field '" + where + "' must be an array of atoms");
    calculus::AtomicMeasure mu;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string at = where + "[" + std::to_string(i) + "]";
        const auto& a = j[i];
        if (!a.is_object() || !a.contains("tau") || !a.contains("mass") || !a["tau"].is_number() ||
            !a["mass"].is_number())
            fail(ErrorCode::Parse, "field '" + at + "' must be an object with numeric tau and mass");
        mu.atoms.push_back({a["tau"].get<double>(), a["mass"].get<double>()});
        if (mu.atoms.size() > 1 && !(mu.atoms[mu.atoms.size() - 2].tau < mu.atoms.back().tau))
            fail(ErrorCode::Domain, "field '" + at + ".tau': atom locations must be strictly increasing");
    }
    return mu;
}

nlohmann::json parse_json(const std::string& text, const std::string& source) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1;
        std::size_t column = 1;
        std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < limit; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        fail(ErrorCode::Parse, source + ":" + std::to_string(line) + ":" + std::to_string(column) +
                                   ": malformed JSON (" + e.what() + ")");
    }
}

}  // namespace hessmetric::io

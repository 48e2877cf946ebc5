#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "bgrt/grid.hpp"

namespace bgrt {

/// Flat record {L, h, mode, row-major values}; doubles round-trip bit-exactly.
inline nlohmann::json field_to_json(const SampledField& f) {
    nlohmann::json j;
    j["L"] = f.grid.half_width;
    j["h"] = f.grid.spacing;
    j["mode"] = to_string(f.mode);
    j["values"] = f.values;
    return j;
}

inline SampledField field_from_json(const nlohmann::json& j) {
    const GridSpec grid = GridSpec::make(j.at("L").get<double>(), j.at("h").get<double>());
    SampledField f(grid, interp_mode_from_string(j.at("mode").get<std::string>()));
    f.values = j.at("values").get<std::vector<double>>();
    if (f.values.size() != grid.node_count())
        throw std::invalid_argument("field_from_json: value count does not match grid");
    return f;
}

inline void save_field(const SampledField& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_field: cannot open " + path);
    out << field_to_json(f).dump();
}

inline SampledField load_field(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_field: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return field_from_json(j);
}

} // namespace bgrt

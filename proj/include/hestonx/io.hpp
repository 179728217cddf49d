#pragma once

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "hestonx/model.hpp"

namespace hestonx {

// Parses a JSON object with keys exactly {kappa, theta, nu, rho, v0, r, s0}.
// Unknown keys are rejected.
inline HestonParams params_from_json(const nlohmann::json& j) {
    static const std::set<std::string> allowed = {"kappa", "theta", "nu", "rho",
                                                 "v0",    "r",     "s0"};
    if (!j.is_object()) throw DomainError("params", "parameter file must be a JSON object");
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key()))
            throw DomainError(item.key(), "unknown parameter key: " + item.key());
    }
    for (const auto& key : allowed) {
        if (!j.contains(key)) throw DomainError(key, "missing parameter key: " + key);
        if (!j.at(key).is_number())
            throw DomainError(key, "parameter " + key + " must be a number");
    }
    return HestonParams(j.at("kappa").get<double>(), j.at("theta").get<double>(),
                        j.at("nu").get<double>(), j.at("rho").get<double>(),
                        j.at("v0").get<double>(), j.at("r").get<double>(),
                        j.at("s0").get<double>());
}

inline HestonParams params_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("params_file", "cannot open parameter file: " + path);
    nlohmann::json j;
    in >> j;
    return params_from_json(j);
}

}  // namespace hestonx

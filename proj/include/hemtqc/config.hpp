#pragma once

#include <algorithm>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "hemtqc/errors.hpp"
#include "hemtqc/params.hpp"

namespace hemtqc {

struct Config {
    DeviceParams device;
    NonlinearInputs nonlinear;
};

namespace detail {

inline const std::vector<std::string>& section_names() {
    static const std::vector<std::string> s{"device", "matching", "bath", "nonlinear"};
    return s;
}

inline const std::set<std::string>& keys_of(const std::string& section) {
    static const std::set<std::string> device{
        "rg", "lg", "ld", "cgs", "cds", "cgd", "ri", "rj", "gd", "gm", "vg", "vd"};
    static const std::set<std::string> matching{"cin", "c1", "c2", "l1", "l2", "vrf"};
    static const std::set<std::string> bath{"t", "td", "t2", "bn", "kappa1", "kappa2"};
    static const std::set<std::string> nonlinear{"gn2", "cn"};
    if (section == "device") return device;
    if (section == "matching") return matching;
    if (section == "bath") return bath;
    return nonlinear;
}

inline double number_at(const nlohmann::json& sec, const std::string& section,
                        const std::string& key) {
    const auto& v = sec.at(key);
    if (!v.is_number())
        throw config_error("field " + section + "." + key + " must be a number");
    return v.get<double>();
}

inline void reject_unknown(const nlohmann::json& obj, const std::string& section) {
    const auto& allowed = keys_of(section);
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw config_error("unknown field " + section + "." + it.key());
    }
}

}  // namespace detail

/// Reads and parses a JSON config document. Throws config_error.
inline nlohmann::json load_config_document(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw config_error("unparseable config file " + path + ": " + e.what());
    }
    if (!doc.is_object())
        throw config_error("config root must be a JSON object");
    return doc;
}

/// Validates the document against the schema and fills the records.
/// The device section is required in full; matching, bath and nonlinear keys
/// default to the calibrated values in DeviceParams / NonlinearInputs.
inline Config parse_config(const nlohmann::json& doc) {
    using detail::number_at;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const auto& names = detail::section_names();
        if (std::find(names.begin(), names.end(), it.key()) == names.end())
            throw config_error("unknown section: " + it.key());
        if (!it.value().is_object())
            throw config_error("section " + it.key() + " must be an object");
    }
    if (!doc.contains("device"))
        throw config_error("missing required section: device");

    Config cfg;
    const auto& dev = doc.at("device");
    detail::reject_unknown(dev, "device");
    for (const auto& key : detail::keys_of("device")) {
        if (!dev.contains(key))
            throw config_error("missing required field: device." + key);
    }
    cfg.device.rg = number_at(dev, "device", "rg");
    cfg.device.lg = number_at(dev, "device", "lg");
    cfg.device.ld = number_at(dev, "device", "ld");
    cfg.device.cgs = number_at(dev, "device", "cgs");
    cfg.device.cds = number_at(dev, "device", "cds");
    cfg.device.cgd = number_at(dev, "device", "cgd");
    cfg.device.ri = number_at(dev, "device", "ri");
    cfg.device.rj = number_at(dev, "device", "rj");
    cfg.device.gd = number_at(dev, "device", "gd");
    cfg.device.gm = number_at(dev, "device", "gm");
    cfg.device.vg = number_at(dev, "device", "vg");
    cfg.device.vd = number_at(dev, "device", "vd");

    if (doc.contains("matching")) {
        const auto& m = doc.at("matching");
        detail::reject_unknown(m, "matching");
        if (m.contains("cin")) cfg.device.cin = number_at(m, "matching", "cin");
        if (m.contains("c1")) cfg.device.c1 = number_at(m, "matching", "c1");
        if (m.contains("c2")) cfg.device.c2 = number_at(m, "matching", "c2");
        if (m.contains("l1")) cfg.device.l1 = number_at(m, "matching", "l1");
        if (m.contains("l2")) cfg.device.l2 = number_at(m, "matching", "l2");
        if (m.contains("vrf")) cfg.device.vrf = number_at(m, "matching", "vrf");
    }
    if (doc.contains("bath")) {
        const auto& b = doc.at("bath");
        detail::reject_unknown(b, "bath");
        if (b.contains("t")) cfg.device.t = number_at(b, "bath", "t");
        if (b.contains("td")) cfg.device.td = number_at(b, "bath", "td");
        if (b.contains("t2")) cfg.device.t2 = number_at(b, "bath", "t2");
        if (b.contains("bn")) cfg.device.bn = number_at(b, "bath", "bn");
        if (b.contains("kappa1")) cfg.device.kappa1 = number_at(b, "bath", "kappa1");
        if (b.contains("kappa2")) cfg.device.kappa2 = number_at(b, "bath", "kappa2");
    }
    if (doc.contains("nonlinear")) {
        const auto& n = doc.at("nonlinear");
        detail::reject_unknown(n, "nonlinear");
        if (n.contains("gn2")) cfg.nonlinear.gn2 = number_at(n, "nonlinear", "gn2");
        if (n.contains("cn")) cfg.nonlinear.cn = number_at(n, "nonlinear", "cn");
    }

    validate(cfg.device);
    validate(cfg.nonlinear);
    return cfg;
}

/// Loads, validates and materializes a config file.
inline Config load_config(const std::string& path) {
    return parse_config(load_config_document(path));
}

/// Applies one "key=value" style override to a config document. The key may
/// be "section.field" or a bare field name resolved against the schema.
inline void apply_override(nlohmann::json& doc, const std::string& key, double value) {
    std::string section, field;
    auto dot = key.find('.');
    if (dot != std::string::npos) {
        section = key.substr(0, dot);
        field = key.substr(dot + 1);
        const auto& names = detail::section_names();
        if (std::find(names.begin(), names.end(), section) == names.end())
            throw config_error("unknown section in override: " + key);
        if (!detail::keys_of(section).count(field))
            throw config_error("unknown field in override: " + key);
    } else {
        field = key;
        for (const auto& name : detail::section_names()) {
            if (detail::keys_of(name).count(field)) {
                section = name;
                break;
            }
        }
        if (section.empty())
            throw config_error("unknown field in override: " + key);
    }
    doc[section][field] = value;
}

}  // namespace hemtqc

#include "perispec/table.hpp"

#include <cstdio>

namespace perispec {

std::string format_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void StudyTable::add_meta(const std::string& key, double value) {
    metadata.emplace_back(key, format_float(value));
}

void StudyTable::add_meta(const std::string& key, int value) {
    metadata.emplace_back(key, std::to_string(value));
}

const std::string* StudyTable::meta(const std::string& key) const {
    for (const auto& [k, v] : metadata)
        if (k == key) return &v;
    return nullptr;
}

void StudyTable::validate() const {
    if (parameter.size() < 2)
        throw ValidationError("study table: needs at least 2 rows");
    for (const auto& [name, col] : metrics)
        if (col.size() != parameter.size())
            throw ValidationError("study table: column '" + name + "' length mismatch");
}

std::string to_csv(const StudyTable& t) {
    t.validate();
    std::string out;
    out += "# study_kind=" + t.study_kind + "\n";
    for (const auto& [k, v] : t.metadata) out += "# " + k + "=" + v + "\n";
    out += t.parameter_name;
    for (const auto& [name, col] : t.metrics) out += "," + name;
    out += "\n";
    for (size_t i = 0; i < t.parameter.size(); ++i) {
        out += format_float(t.parameter[i]);
        for (const auto& [name, col] : t.metrics) out += "," + format_float(col[i]);
        out += "\n";
    }
    return out;
}

nlohmann::ordered_json table_to_json(const StudyTable& t) {
    t.validate();
    nlohmann::ordered_json j;
    j["study_kind"] = t.study_kind;
    nlohmann::ordered_json meta;
    for (const auto& [k, v] : t.metadata) meta[k] = v;
    j["metadata"] = std::move(meta);
    j["parameter_name"] = t.parameter_name;
    j["parameter"] = t.parameter;
    nlohmann::ordered_json cols;
    for (const auto& [name, col] : t.metrics) cols[name] = col;
    j["metrics"] = std::move(cols);
    return j;
}

StudyTable table_from_json(const nlohmann::ordered_json& j) {
    StudyTable t;
    t.study_kind = j.at("study_kind").get<std::string>();
    for (const auto& [k, v] : j.at("metadata").items())
        t.metadata.emplace_back(k, v.get<std::string>());
    t.parameter_name = j.at("parameter_name").get<std::string>();
    t.parameter = j.at("parameter").get<std::vector<double>>();
    for (const auto& [name, col] : j.at("metrics").items())
        t.metrics.emplace_back(name, col.get<std::vector<double>>());
    t.validate();
    return t;
}

}  // namespace perispec

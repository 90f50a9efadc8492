#pragma once

#include <string>
#include <utility>
#include <vector>

#include "perispec/errors.hpp"

#include "json.hpp"

namespace perispec {

// Tagged rows of (sweep parameter, metric columns) emitted by the study
// harness.  The metadata block records everything needed to re-run the
// study bit-identically (material, grids, seeds, indices).
struct StudyTable {
    std::string study_kind;
    std::string parameter_name;
    std::vector<double> parameter;
    std::vector<std::pair<std::string, std::vector<double>>> metrics;
    std::vector<std::pair<std::string, std::string>> metadata;

    void add_meta(const std::string& key, const std::string& value) {
        metadata.emplace_back(key, value);
    }
    void add_meta(const std::string& key, double value);
    void add_meta(const std::string& key, int value);
    const std::string* meta(const std::string& key) const;

    void validate() const;  // equal column lengths, >= 2 rows
};

// shortest-precise decimal rendering used by every emitter: %.17g
std::string format_float(double v);

// CSV: '#'-prefixed metadata block, header row, one data row per
// parameter value, columns in declaration order, '\n' line endings.
std::string to_csv(const StudyTable& t);
nlohmann::ordered_json table_to_json(const StudyTable& t);
StudyTable table_from_json(const nlohmann::ordered_json& j);

}  // namespace perispec

#include "wgf/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace wgf {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::add_row(const std::vector<double>& row) {
    if (row.size() != header.size())
        throw std::invalid_argument("CsvWriter: row width does not match the header");
    rows.push_back(row);
}

void CsvWriter::write() const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("CsvWriter: cannot open " + path);
    for (size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? "," : "\n");
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out << format_g17(row[i]) << (i + 1 < row.size() ? "," : "\n");
    }
}

std::string check_report_json(const std::vector<CheckReport>& reports) {
    nlohmann::ordered_json root;
    bool all_pass = true;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& rep : reports) {
        nlohmann::ordered_json j;
        j["name"] = rep.name;
        j["pass"] = rep.pass;
        j["worst_violation"] = rep.worst_violation;
        nlohmann::ordered_json fits;
        for (const auto& [k, v] : rep.fitted_constants) fits[k] = v;
        j["fitted_constants"] = std::move(fits);
        nlohmann::ordered_json series;
        for (const auto& [k, v] : rep.series) series[k] = v;
        j["series"] = std::move(series);
        if (!rep.notes.empty()) j["notes"] = rep.notes;
        checks.push_back(std::move(j));
        all_pass = all_pass && rep.pass;
    }
    root["all_pass"] = all_pass;
    root["checks"] = std::move(checks);
    return root.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_text_file: cannot open " + path);
    out << text;
}

}  // namespace wgf

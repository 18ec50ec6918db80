// CSV and JSON serialization with fixed 17-significant-digit formatting,
// so reruns diff byte-for-byte.
#pragma once

#include <string>
#include <vector>

#include "wgf/diagnostics.hpp"

namespace wgf {

std::string format_g17(double v);

struct CsvWriter {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    void add_row(const std::vector<double>& row);
    void write() const;
};

std::string check_report_json(const std::vector<CheckReport>& reports);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace wgf

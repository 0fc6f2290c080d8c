#include "fairmdp/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fairmdp {

namespace {

std::string escape(const std::string& cell) {
    if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    if (header.empty()) throw std::invalid_argument("csv: empty header");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) text_ += ',';
        text_ += escape(header[i]);
    }
    text_ += "\r\n";
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::invalid_argument("csv: column count mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text_ += ',';
        text_ += escape(cells[i]);
    }
    text_ += "\r\n";
}

void CsvWriter::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text_;
}

std::string CsvWriter::format(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

std::string CsvWriter::format(long long value) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%lld", value);
    return buf;
}

}  // namespace fairmdp

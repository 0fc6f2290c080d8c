#include "fairmdp/toml.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fairmdp {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    throw std::invalid_argument("toml: line " + std::to_string(line) + ": " + what);
}

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

// cut a trailing comment, respecting quoted strings
std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

bool parse_int(const std::string& text, long long& out) {
    std::string t;
    for (char c : text)
        if (c != '_') t += c;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc{} && p == t.data() + t.size();
}

bool parse_float(const std::string& text, double& out) {
    std::string t;
    for (char c : text)
        if (c != '_') t += c;
    auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    return ec == std::errc{} && p == t.data() + t.size();
}

TomlValue parse_scalar(const std::string& raw, int line) {
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"')
        return {raw.substr(1, raw.size() - 2)};
    if (raw == "true") return {true};
    if (raw == "false") return {false};
    long long i = 0;
    if (raw.find_first_of(".eE") == std::string::npos && parse_int(raw, i)) return {i};
    double d = 0.0;
    if (parse_float(raw, d)) return {d};
    fail(line, "cannot parse value '" + raw + "'");
}

std::vector<std::string> split_array_items(const std::string& inner, int line) {
    std::vector<std::string> items;
    std::string current;
    bool in_string = false;
    for (char c : inner) {
        if (c == '"') in_string = !in_string;
        if (c == ',' && !in_string) {
            items.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    std::string tail = trim(current);
    if (!tail.empty()) items.push_back(tail);
    if (in_string) fail(line, "unterminated string in array");
    return items;
}

TomlValue parse_value(const std::string& raw, int line) {
    if (!raw.empty() && raw.front() == '[') {
        if (raw.back() != ']') fail(line, "unterminated array");
        std::vector<std::string> items = split_array_items(raw.substr(1, raw.size() - 2), line);
        std::vector<long long> ints;
        std::vector<double> doubles;
        std::vector<std::string> strings;
        bool all_int = true, all_number = true, all_string = true;
        for (const std::string& item : items) {
            TomlValue v = parse_scalar(item, line);
            if (auto* i = std::get_if<long long>(&v.data)) {
                ints.push_back(*i);
                doubles.push_back(static_cast<double>(*i));
                all_string = false;
            } else if (auto* d = std::get_if<double>(&v.data)) {
                doubles.push_back(*d);
                all_int = false;
                all_string = false;
            } else if (auto* s = std::get_if<std::string>(&v.data)) {
                strings.push_back(*s);
                all_int = all_number = false;
            } else {
                fail(line, "unsupported array element");
            }
        }
        if (all_string && !strings.empty()) return {strings};
        if (all_int) return {ints};
        if (all_number) return {doubles};
        fail(line, "mixed array element types");
    }
    return parse_scalar(raw, line);
}

}  // namespace

TomlTable TomlTable::parse(const std::string& text) {
    TomlTable table;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) fail(line_no, "empty section name");
            continue;
        }
        std::size_t eq = std::string::npos;
        bool in_string = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_string = !in_string;
            if (line[i] == '=' && !in_string) {
                eq = i;
                break;
            }
        }
        if (eq == std::string::npos) fail(line_no, "expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(line_no, "empty key");
        if (value.empty()) fail(line_no, "empty value");
        std::string full = section.empty() ? key : section + "." + key;
        if (table.values_.count(full)) fail(line_no, "duplicate key '" + full + "'");
        table.values_[full] = parse_value(value, line_no);
    }
    return table;
}

TomlTable TomlTable::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("toml: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

namespace {
[[noreturn]] void key_fail(const std::string& key, const char* expected) {
    throw std::invalid_argument("toml: key '" + key + "' missing or not a " + expected);
}
}  // namespace

std::string TomlTable::get_string(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) key_fail(key, "string");
    if (auto* s = std::get_if<std::string>(&it->second.data)) return *s;
    key_fail(key, "string");
}

long long TomlTable::get_int(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) key_fail(key, "integer");
    if (auto* i = std::get_if<long long>(&it->second.data)) return *i;
    key_fail(key, "integer");
}

double TomlTable::get_double(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) key_fail(key, "float");
    if (auto* d = std::get_if<double>(&it->second.data)) return *d;
    if (auto* i = std::get_if<long long>(&it->second.data)) return static_cast<double>(*i);
    key_fail(key, "float");
}

bool TomlTable::get_bool(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) key_fail(key, "boolean");
    if (auto* b = std::get_if<bool>(&it->second.data)) return *b;
    key_fail(key, "boolean");
}

std::vector<long long> TomlTable::get_int_array(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) key_fail(key, "integer array");
    if (auto* a = std::get_if<std::vector<long long>>(&it->second.data)) return *a;
    key_fail(key, "integer array");
}

std::vector<double> TomlTable::get_double_array(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) key_fail(key, "float array");
    if (auto* a = std::get_if<std::vector<double>>(&it->second.data)) return *a;
    if (auto* a = std::get_if<std::vector<long long>>(&it->second.data))
        return std::vector<double>(a->begin(), a->end());
    key_fail(key, "float array");
}

}  // namespace fairmdp

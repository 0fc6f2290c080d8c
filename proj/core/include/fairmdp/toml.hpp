#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace fairmdp {

/// Scalar or array-of-scalar TOML value.
struct TomlValue {
    std::variant<std::string, long long, double, bool, std::vector<long long>,
                 std::vector<double>, std::vector<std::string>>
        data;
};

/// The TOML subset the config format needs: [sections], key = value with
/// string / integer / float / boolean / homogeneous array values, and #
/// comments. Keys are flattened to "section.key". Throws
/// std::invalid_argument with a line number on malformed input.
class TomlTable {
  public:
    static TomlTable parse(const std::string& text);
    static TomlTable parse_file(const std::string& path);

    bool contains(const std::string& key) const { return values_.count(key) > 0; }

    std::string get_string(const std::string& key) const;
    long long get_int(const std::string& key) const;
    double get_double(const std::string& key) const;  // accepts integers too
    bool get_bool(const std::string& key) const;
    std::vector<long long> get_int_array(const std::string& key) const;
    std::vector<double> get_double_array(const std::string& key) const;

    const std::map<std::string, TomlValue>& values() const { return values_; }

  private:
    std::map<std::string, TomlValue> values_;
};

}  // namespace fairmdp

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "archmap/common.hpp"

namespace archmap {

// Minimal INI dialect shared by run configs and platform files:
//   [section]
//   key = value            # trailing comments allowed
// Values keep their raw text; typed access goes through the getters below.
class Ini {
public:
    static Ini parse_file(const std::string &path);
    static Ini parse_string(const std::string &text, const std::string &origin = "<string>");

    bool has_section(const std::string &section) const;
    bool has(const std::string &section, const std::string &key) const;
    std::vector<std::string> section_names() const;
    std::vector<std::string> keys(const std::string &section) const;

    std::optional<std::string> get(const std::string &section, const std::string &key) const;
    std::string get_string(const std::string &section, const std::string &key, const std::string &fallback) const;
    std::string require_string(const std::string &section, const std::string &key) const;
    long long get_int(const std::string &section, const std::string &key, long long fallback) const;
    double get_double(const std::string &section, const std::string &key, double fallback) const;
    bool get_bool(const std::string &section, const std::string &key, bool fallback) const;
    std::vector<std::string> get_list(const std::string &section, const std::string &key) const;
    std::vector<long long> get_int_list(const std::string &section, const std::string &key) const;
    std::vector<double> get_double_list(const std::string &section, const std::string &key) const;

    void set(const std::string &section, const std::string &key, const std::string &value);

    const std::string &origin() const { return origin_; }

private:
    std::string origin_;
    // section -> key -> value, insertion order preserved per section for reproducible dumps
    std::map<std::string, std::map<std::string, std::string>> data_;
    std::map<std::string, int> key_lines_; // "section/key" -> line, for error messages

    friend std::string describe_location(const Ini &ini, const std::string &section, const std::string &key);
};

std::string trim(const std::string &s);
std::vector<std::string> split_list(const std::string &s, char sep = ',');
std::string to_lower(std::string s);

long long parse_int(const std::string &text, const std::string &what);
double parse_double(const std::string &text, const std::string &what);
bool parse_bool(const std::string &text, const std::string &what);

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &content);

} // namespace archmap

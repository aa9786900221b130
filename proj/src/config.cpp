#include "archmap/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace archmap {

std::string trim(const std::string &s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string to_lower(std::string s) {
    for (auto &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

std::vector<std::string> split_list(const std::string &s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            std::string t = trim(cur);
            if (!t.empty()) out.push_back(t);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    std::string t = trim(cur);
    if (!t.empty()) out.push_back(t);
    return out;
}

long long parse_int(const std::string &text, const std::string &what) {
    errno = 0;
    char *end = nullptr;
    long long v = std::strtoll(text.c_str(), &end, 10);
    if (errno != 0 || end == text.c_str() || *end != '\0')
        throw ValidationError("expected integer for " + what + ", got '" + text + "'");
    return v;
}

double parse_double(const std::string &text, const std::string &what) {
    errno = 0;
    char *end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (errno != 0 || end == text.c_str() || *end != '\0')
        throw ValidationError("expected number for " + what + ", got '" + text + "'");
    return v;
}

bool parse_bool(const std::string &text, const std::string &what) {
    std::string t = to_lower(trim(text));
    if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
    if (t == "0" || t == "false" || t == "no" || t == "off") return false;
    throw ValidationError("expected boolean for " + what + ", got '" + text + "'");
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write file: " + path);
    out << content;
    if (!out) throw ValidationError("write failed: " + path);
}

Ini Ini::parse_file(const std::string &path) {
    return parse_string(read_file(path), path);
}

Ini Ini::parse_string(const std::string &text, const std::string &origin) {
    Ini ini;
    ini.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ValidationError(origin + ":" + std::to_string(lineno) + ": unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ValidationError(origin + ":" + std::to_string(lineno) + ": empty section name");
            ini.data_[section]; // section may legally stay empty
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError(origin + ":" + std::to_string(lineno) + ": expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ValidationError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw ValidationError(origin + ":" + std::to_string(lineno) + ": key '" + key + "' outside any [section]");
        if (ini.data_[section].count(key))
            throw ValidationError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "' in [" + section + "]");
        ini.data_[section][key] = value;
        ini.key_lines_[section + "/" + key] = lineno;
    }
    return ini;
}

bool Ini::has_section(const std::string &section) const { return data_.count(section) > 0; }

bool Ini::has(const std::string &section, const std::string &key) const {
    auto it = data_.find(section);
    return it != data_.end() && it->second.count(key) > 0;
}

std::vector<std::string> Ini::section_names() const {
    std::vector<std::string> out;
    for (const auto &kv : data_) out.push_back(kv.first);
    return out;
}

std::vector<std::string> Ini::keys(const std::string &section) const {
    std::vector<std::string> out;
    auto it = data_.find(section);
    if (it == data_.end()) return out;
    for (const auto &kv : it->second) out.push_back(kv.first);
    return out;
}

std::optional<std::string> Ini::get(const std::string &section, const std::string &key) const {
    auto it = data_.find(section);
    if (it == data_.end()) return std::nullopt;
    auto jt = it->second.find(key);
    if (jt == it->second.end()) return std::nullopt;
    return jt->second;
}

std::string Ini::get_string(const std::string &section, const std::string &key, const std::string &fallback) const {
    auto v = get(section, key);
    return v ? *v : fallback;
}

std::string Ini::require_string(const std::string &section, const std::string &key) const {
    auto v = get(section, key);
    if (!v) throw ValidationError(origin_ + ": missing required key '" + key + "' in [" + section + "]");
    return *v;
}

long long Ini::get_int(const std::string &section, const std::string &key, long long fallback) const {
    auto v = get(section, key);
    if (!v) return fallback;
    return parse_int(*v, "[" + section + "] " + key);
}

double Ini::get_double(const std::string &section, const std::string &key, double fallback) const {
    auto v = get(section, key);
    if (!v) return fallback;
    return parse_double(*v, "[" + section + "] " + key);
}

bool Ini::get_bool(const std::string &section, const std::string &key, bool fallback) const {
    auto v = get(section, key);
    if (!v) return fallback;
    return parse_bool(*v, "[" + section + "] " + key);
}

std::vector<std::string> Ini::get_list(const std::string &section, const std::string &key) const {
    auto v = get(section, key);
    if (!v) return {};
    return split_list(*v);
}

std::vector<long long> Ini::get_int_list(const std::string &section, const std::string &key) const {
    std::vector<long long> out;
    for (const auto &tok : get_list(section, key))
        out.push_back(parse_int(tok, "[" + section + "] " + key));
    return out;
}

std::vector<double> Ini::get_double_list(const std::string &section, const std::string &key) const {
    std::vector<double> out;
    for (const auto &tok : get_list(section, key))
        out.push_back(parse_double(tok, "[" + section + "] " + key));
    return out;
}

void Ini::set(const std::string &section, const std::string &key, const std::string &value) {
    data_[section][key] = value;
}

} // namespace archmap

#include "mwprec/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mwprec/errors.hpp"

namespace mwprec {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string format_f64(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    auto it = index_.find(key);
    if (it != index_.end()) {
        entries_[it->second].second = value;
    } else {
        index_[key] = entries_.size();
        entries_.emplace_back(key, value);
    }
}

void KeyValueConfig::set_f64(const std::string& key, double value) { set(key, format_f64(value)); }

void KeyValueConfig::set_u64(const std::string& key, uint64_t value) {
    set(key, std::to_string(value));
}

void KeyValueConfig::set_i64(const std::string& key, int64_t value) {
    set(key, std::to_string(value));
}

void KeyValueConfig::set_f64_list(const std::string& key, const std::vector<double>& values) {
    std::string s;
    for (size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + format_f64(values[i]);
    set(key, s);
}

bool KeyValueConfig::has(const std::string& key) const { return index_.count(key) > 0; }

const std::string& KeyValueConfig::get(const std::string& key) const {
    auto it = index_.find(key);
    if (it == index_.end()) throw ConfigError("missing config key '" + key + "'");
    return entries_[it->second].second;
}

std::string KeyValueConfig::get_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? get(key) : fallback;
}

double KeyValueConfig::get_f64(const std::string& key) const {
    const std::string& s = get(key);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "' is not a number: '" + s + "'");
    return v;
}

uint64_t KeyValueConfig::get_u64(const std::string& key) const {
    const std::string& s = get(key);
    char* end = nullptr;
    const uint64_t v = std::strtoull(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "' is not an unsigned integer: '" + s + "'");
    return v;
}

int64_t KeyValueConfig::get_i64(const std::string& key) const {
    const std::string& s = get(key);
    char* end = nullptr;
    const int64_t v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "' is not an integer: '" + s + "'");
    return v;
}

std::vector<double> KeyValueConfig::get_f64_list(const std::string& key) const {
    const std::string& s = get(key);
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0')
            throw ConfigError("config key '" + key + "' has a non-numeric list entry: '" + item +
                              "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("config key '" + key + "' is an empty list");
    return out;
}

std::string KeyValueConfig::serialize() const {
    std::string out;
    for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
    return out;
}

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
    KeyValueConfig cfg;
    std::stringstream ss(text);
    std::string line;
    size_t lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              " is not 'key = value': '" + t + "'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + " has an empty key");
        cfg.set(key, value);
    }
    return cfg;
}

void KeyValueConfig::save(const std::string& path) const {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << serialize();
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path + "' for reading");
    std::stringstream ss;
    ss << is.rdbuf();
    return parse(ss.str());
}

} // namespace mwprec

#pragma once

// Human-readable `key = value` config files. Every CLI run writes its
// resolved configuration next to each output artifact (<artifact>.config),
// so any output can be regenerated from its sidecar alone.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mwprec {

class KeyValueConfig {
public:
    void set(const std::string& key, const std::string& value);
    void set_f64(const std::string& key, double value);
    void set_u64(const std::string& key, uint64_t value);
    void set_i64(const std::string& key, int64_t value);
    void set_f64_list(const std::string& key, const std::vector<double>& values);

    bool has(const std::string& key) const;
    const std::string& get(const std::string& key) const; // throws ConfigError if missing
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_f64(const std::string& key) const;
    uint64_t get_u64(const std::string& key) const;
    int64_t get_i64(const std::string& key) const;
    std::vector<double> get_f64_list(const std::string& key) const;

    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

    std::string serialize() const;
    static KeyValueConfig parse(const std::string& text);

    void save(const std::string& path) const;
    static KeyValueConfig load(const std::string& path);

private:
    // insertion-ordered; set() on an existing key updates in place
    std::vector<std::pair<std::string, std::string>> entries_;
    std::map<std::string, size_t> index_;
};

inline constexpr const char* kToolVersion = "0.1.0";

} // namespace mwprec

#pragma once

// Minimal TOML subset sufficient for the experiment configs: [section] headers, bare
// keys, numbers, quoted strings, booleans, flat arrays of numbers, and # comments.
// Keys flatten to "section.key". Integers are kept exactly alongside their double
// value so 64-bit seeds survive.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qdsim {

struct TomlValue {
    enum class Kind { Number, String, Boolean, Array };
    Kind kind = Kind::Number;
    double number = 0.0;
    bool is_integer = false;
    std::uint64_t integer = 0;   // valid when is_integer (magnitude; sign via number)
    std::string str;
    bool boolean = false;
    std::vector<double> array;
};

class TomlTable {
public:
    static TomlTable parse(const std::string& text);      // throws with line numbers
    static TomlTable parse_file(const std::string& path); // throws on unreadable path

    bool contains(const std::string& key) const;
    const TomlValue* find(const std::string& key) const;
    std::vector<std::string> keys() const;

    // typed getters; the one-argument forms throw when the key is missing, the
    // two-argument forms fall back to the default. All throw on a type mismatch,
    // naming the key.
    double number(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    std::int64_t integer(const std::string& key) const;
    std::int64_t integer(const std::string& key, std::int64_t fallback) const;
    std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const;
    std::string string(const std::string& key) const;
    std::string string(const std::string& key, const std::string& fallback) const;
    bool boolean(const std::string& key, bool fallback) const;
    std::vector<double> array(const std::string& key) const;
    std::vector<double> array(const std::string& key,
                              const std::vector<double>& fallback) const;

private:
    std::map<std::string, TomlValue> values_;
};

} // namespace qdsim

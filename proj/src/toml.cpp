#include "qdsim/toml.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qdsim {
namespace {

[[noreturn]] void fail(int line, const std::string& what) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// strip a # comment that is not inside a quoted string
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
            return false;
    }
    return true;
}

double parse_number(const std::string& text, int line) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + text.size()) fail(line, "malformed number '" + text + "'");
    return v;
}

TomlValue parse_scalar(const std::string& raw, int line) {
    TomlValue v;
    if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
        v.kind = TomlValue::Kind::String;
        v.str = raw.substr(1, raw.size() - 2);
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.kind = TomlValue::Kind::Boolean;
        v.boolean = raw == "true";
        return v;
    }
    if (raw.front() == '[') {
        if (raw.back() != ']') fail(line, "unterminated array");
        v.kind = TomlValue::Kind::Array;
        const std::string body = trim(raw.substr(1, raw.size() - 2));
        if (!body.empty()) {
            std::stringstream ss(body);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = trim(item);
                if (item.empty()) fail(line, "empty array element");
                v.array.push_back(parse_number(item, line));
            }
        }
        return v;
    }
    v.kind = TomlValue::Kind::Number;
    v.number = parse_number(raw, line);
    // remember exact integers so 64-bit seeds are not squeezed through a double
    std::string digits = raw;
    if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) digits = digits.substr(1);
    if (!digits.empty() &&
        digits.find_first_not_of("0123456789") == std::string::npos) {
        errno = 0;
        const unsigned long long mag = std::strtoull(digits.c_str(), nullptr, 10);
        if (errno == 0) {
            v.is_integer = true;
            v.integer = mag;
        }
    }
    return v;
}

const char* kind_name(TomlValue::Kind k) {
    switch (k) {
        case TomlValue::Kind::Number: return "number";
        case TomlValue::Kind::String: return "string";
        case TomlValue::Kind::Boolean: return "boolean";
        case TomlValue::Kind::Array: return "array";
    }
    return "value";
}

[[noreturn]] void type_error(const std::string& key, const TomlValue& v,
                             const char* wanted) {
    throw std::invalid_argument("config key " + key + " must be a " + wanted +
                                ", got a " + kind_name(v.kind));
}

} // namespace

TomlTable TomlTable::parse(const std::string& text) {
    TomlTable table;
    std::stringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        if (body.front() == '[') {
            if (body.back() != ']') fail(lineno, "unterminated section header");
            section = trim(body.substr(1, body.size() - 2));
            if (!valid_key(section)) fail(lineno, "invalid section name");
            continue;
        }
        const std::size_t eq = body.find('=');
        if (eq == std::string::npos) fail(lineno, "expected key = value");
        const std::string key = trim(body.substr(0, eq));
        const std::string raw = trim(body.substr(eq + 1));
        if (!valid_key(key)) fail(lineno, "invalid key '" + key + "'");
        if (raw.empty()) fail(lineno, "missing value for '" + key + "'");
        const std::string full = section.empty() ? key : section + "." + key;
        if (table.values_.count(full)) fail(lineno, "duplicate key '" + full + "'");
        table.values_[full] = parse_scalar(raw, lineno);
    }
    return table;
}

TomlTable TomlTable::parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

bool TomlTable::contains(const std::string& key) const { return values_.count(key) > 0; }

const TomlValue* TomlTable::find(const std::string& key) const {
    const auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
}

std::vector<std::string> TomlTable::keys() const {
    std::vector<std::string> out;
    out.reserve(values_.size());
    for (const auto& [k, v] : values_) out.push_back(k);
    return out;
}

double TomlTable::number(const std::string& key) const {
    const TomlValue* v = find(key);
    if (!v) throw std::invalid_argument("missing config key: " + key);
    if (v->kind != TomlValue::Kind::Number) type_error(key, *v, "number");
    return v->number;
}

double TomlTable::number(const std::string& key, double fallback) const {
    return find(key) ? number(key) : fallback;
}

std::int64_t TomlTable::integer(const std::string& key) const {
    const TomlValue* v = find(key);
    if (!v) throw std::invalid_argument("missing config key: " + key);
    if (v->kind != TomlValue::Kind::Number || !v->is_integer)
        type_error(key, *v, "integer");
    if (v->number < 0.0) return -static_cast<std::int64_t>(v->integer);
    return static_cast<std::int64_t>(v->integer);
}

std::int64_t TomlTable::integer(const std::string& key, std::int64_t fallback) const {
    return find(key) ? integer(key) : fallback;
}

std::uint64_t TomlTable::unsigned_integer(const std::string& key,
                                          std::uint64_t fallback) const {
    const TomlValue* v = find(key);
    if (!v) return fallback;
    if (v->kind != TomlValue::Kind::Number || !v->is_integer || v->number < 0.0)
        type_error(key, *v, "non-negative integer");
    return v->integer;
}

std::string TomlTable::string(const std::string& key) const {
    const TomlValue* v = find(key);
    if (!v) throw std::invalid_argument("missing config key: " + key);
    if (v->kind != TomlValue::Kind::String) type_error(key, *v, "string");
    return v->str;
}

std::string TomlTable::string(const std::string& key, const std::string& fallback) const {
    return find(key) ? string(key) : fallback;
}

bool TomlTable::boolean(const std::string& key, bool fallback) const {
    const TomlValue* v = find(key);
    if (!v) return fallback;
    if (v->kind != TomlValue::Kind::Boolean) type_error(key, *v, "boolean");
    return v->boolean;
}

std::vector<double> TomlTable::array(const std::string& key) const {
    const TomlValue* v = find(key);
    if (!v) throw std::invalid_argument("missing config key: " + key);
    if (v->kind != TomlValue::Kind::Array) type_error(key, *v, "array");
    return v->array;
}

std::vector<double> TomlTable::array(const std::string& key,
                                     const std::vector<double>& fallback) const {
    return find(key) ? array(key) : fallback;
}

} // namespace qdsim

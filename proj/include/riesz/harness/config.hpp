#pragma once

// Flat "[section] key = value" run configuration. Every value remembers the
// line it came from so conversion and validation errors point back into the file.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "riesz/error.hpp"

namespace riesz::harness {

class ConfigError : public Error {
public:
    ConfigError(const std::string& source, int line, const std::string& key, const std::string& what)
        : Error(format(source, line, key, what)), line_(line), key_(key) {}

    int line() const { return line_; }
    const std::string& key() const { return key_; }

private:
    static std::string format(const std::string& source, int line, const std::string& key, const std::string& what) {
        std::ostringstream os;
        os << source;
        if (line > 0) os << ':' << line;
        os << ": ";
        if (!key.empty()) os << "key '" << key << "': ";
        os << what;
        return os.str();
    }

    int line_;
    std::string key_;
};

namespace detail {

inline std::string trim(std::string s) {
    const auto ws = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), ws));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), ws).base(), s.end());
    return s;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(s);
    while (std::getline(is, item, sep)) out.push_back(trim(item));
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

}  // namespace detail

struct ConfigEntry {
    std::string value;
    int line = 0;
};

class Config {
public:
    using Section = std::map<std::string, ConfigEntry>;

    static Config parse(const std::string& text, const std::string& source = "<config>") {
        Config c;
        c.source_ = source;
        c.text_ = text;
        std::istringstream is(text);
        std::string raw;
        std::string section;
        int line = 0;
        while (std::getline(is, raw)) {
            ++line;
            const auto hash = raw.find_first_of("#;");
            const std::string body = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (body.empty()) continue;
            if (body.front() == '[') {
                if (body.back() != ']') throw ConfigError(source, line, "", "unterminated section header '" + body + "'");
                section = detail::trim(body.substr(1, body.size() - 2));
                if (section.empty()) throw ConfigError(source, line, "", "empty section name");
                c.sections_[section];
                continue;
            }
            const auto eq = body.find('=');
            if (eq == std::string::npos) throw ConfigError(source, line, "", "expected 'key = value', got '" + body + "'");
            const std::string key = detail::trim(body.substr(0, eq));
            const std::string value = detail::trim(body.substr(eq + 1));
            if (key.empty()) throw ConfigError(source, line, "", "missing key before '='");
            if (section.empty()) throw ConfigError(source, line, key, "key outside of any [section]");
            const std::string full = section + "." + key;
            auto& sec = c.sections_[section];
            if (auto it = sec.find(key); it != sec.end())
                throw ConfigError(source, line, full, "duplicate key (first set on line " + std::to_string(it->second.line) + ")");
            if (value.empty()) throw ConfigError(source, line, full, "empty value");
            sec[key] = ConfigEntry{value, line};
        }
        return c;
    }

    static Config load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError(path, 0, "", "cannot open config file");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse(ss.str(), path);
    }

    const std::string& source() const { return source_; }
    /// Raw file text; the artifact digest is taken over these bytes.
    const std::string& text() const { return text_; }

    bool has(const std::string& section, const std::string& key) const {
        auto s = sections_.find(section);
        return s != sections_.end() && s->second.count(key) > 0;
    }
    bool has_section(const std::string& section) const { return sections_.count(section) > 0; }

    std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const {
        const ConfigEntry* e = find(section, key);
        return e ? e->value : fallback;
    }
    std::string require_string(const std::string& section, const std::string& key) const {
        return need(section, key).value;
    }

    double get_double(const std::string& section, const std::string& key, double fallback) const {
        const ConfigEntry* e = find(section, key);
        return e ? to_double(*e, section + "." + key, e->value) : fallback;
    }
    double require_double(const std::string& section, const std::string& key) const {
        const ConfigEntry& e = need(section, key);
        return to_double(e, section + "." + key, e.value);
    }

    long get_int(const std::string& section, const std::string& key, long fallback) const {
        const ConfigEntry* e = find(section, key);
        return e ? to_int(*e, section + "." + key, e->value) : fallback;
    }

    bool get_bool(const std::string& section, const std::string& key, bool fallback) const {
        const ConfigEntry* e = find(section, key);
        if (!e) return fallback;
        if (e->value == "true" || e->value == "yes" || e->value == "on" || e->value == "1") return true;
        if (e->value == "false" || e->value == "no" || e->value == "off" || e->value == "0") return false;
        throw ConfigError(source_, e->line, section + "." + key, "expected a boolean, got '" + e->value + "'");
    }

    std::vector<double> get_doubles(const std::string& section, const std::string& key,
                                    std::vector<double> fallback) const {
        const ConfigEntry* e = find(section, key);
        if (!e) return fallback;
        std::vector<double> out;
        for (const std::string& item : detail::split(e->value, ',')) out.push_back(to_double(*e, section + "." + key, item));
        return out;
    }

    std::vector<long> get_ints(const std::string& section, const std::string& key, std::vector<long> fallback) const {
        const ConfigEntry* e = find(section, key);
        if (!e) return fallback;
        std::vector<long> out;
        for (const std::string& item : detail::split(e->value, ',')) out.push_back(to_int(*e, section + "." + key, item));
        return out;
    }

    std::vector<std::string> get_strings(const std::string& section, const std::string& key,
                                         std::vector<std::string> fallback) const {
        const ConfigEntry* e = find(section, key);
        if (!e) return fallback;
        return detail::split(e->value, ',');
    }

    /// Error at the line of `section.key` (or the file when absent).
    [[noreturn]] void fail(const std::string& section, const std::string& key, const std::string& what) const {
        const ConfigEntry* e = find(section, key);
        throw ConfigError(source_, e ? e->line : 0, section + "." + key, what);
    }

    /// Rejects sections and keys outside `schema`.
    void check_schema(const std::map<std::string, std::set<std::string>>& schema) const {
        for (const auto& [name, sec] : sections_) {
            auto it = schema.find(name);
            if (it == schema.end()) {
                const int line = sec.empty() ? 0 : sec.begin()->second.line;
                throw ConfigError(source_, line, "", "unknown section [" + name + "]");
            }
            for (const auto& [key, entry] : sec)
                if (!it->second.count(key)) throw ConfigError(source_, entry.line, name + "." + key, "unknown key");
        }
    }

private:
    const ConfigEntry* find(const std::string& section, const std::string& key) const {
        auto s = sections_.find(section);
        if (s == sections_.end()) return nullptr;
        auto k = s->second.find(key);
        return k == s->second.end() ? nullptr : &k->second;
    }

    const ConfigEntry& need(const std::string& section, const std::string& key) const {
        if (const ConfigEntry* e = find(section, key)) return *e;
        throw ConfigError(source_, 0, section + "." + key, "required key missing");
    }

    // Accepts plain numbers and multiples of pi ("200pi", "2*pi", "pi").
    double to_double(const ConfigEntry& e, const std::string& key, const std::string& item) const {
        std::string s = detail::trim(item);
        double scale = 1.0;
        if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
            scale = std::numbers::pi;
            s = detail::trim(s.substr(0, s.size() - 2));
            if (!s.empty() && s.back() == '*') s = detail::trim(s.substr(0, s.size() - 1));
            if (s.empty()) return scale;
        }
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
            throw ConfigError(source_, e.line, key, "expected a number, got '" + item + "'");
        return v * scale;
    }

    long to_int(const ConfigEntry& e, const std::string& key, const std::string& item) const {
        const std::string s = detail::trim(item);
        long v = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || ptr != s.data() + s.size())
            throw ConfigError(source_, e.line, key, "expected an integer, got '" + item + "'");
        return v;
    }

    std::string source_;
    std::string text_;
    std::map<std::string, Section> sections_;
};

}  // namespace riesz::harness

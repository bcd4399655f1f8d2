#pragma once

// Tabular and streaming artifact writers: CSV tables and NDJSON records, each
// preceded by a "# key: value" header block.

#include <nlohmann/json.hpp>

#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace riesz::io {

using HeaderBlock = std::vector<std::pair<std::string, std::string>>;

inline void write_header(std::ostream& os, const HeaderBlock& header) {
    for (const auto& [k, v] : header) os << "# " << k << ": " << v << '\n';
}

/// Shortest decimal form that round-trips.
inline std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
    return os.str();
}

/// NDJSON stream of {t, name, value} records.
class NdjsonWriter {
public:
    NdjsonWriter(std::ostream& os, const HeaderBlock& header) : os_(os) {
        nlohmann::json h;
        for (const auto& [k, v] : header) h[k] = v;
        os_ << nlohmann::json{{"header", h}}.dump() << '\n';
    }

    void record(double t, const std::string& name, double value) {
        nlohmann::json j{{"t", t}, {"name", name}, {"value", value}};
        os_ << j.dump() << '\n';
    }

    void record(double t, const std::string& name, const std::string& value) {
        nlohmann::json j{{"t", t}, {"name", name}, {"value", value}};
        os_ << j.dump() << '\n';
    }

private:
    std::ostream& os_;
};

}  // namespace riesz::io

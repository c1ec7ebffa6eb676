// json_writer.cpp

#include "lgap/cli/json_writer.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace lgap::cli {

namespace {

bool is_scalar(const json& v) { return !v.is_object() && !v.is_array(); }

void write_scalar(std::ostream& os, const json& v)
{
    if (v.is_number_float()) {
        os << format_double(v.get<double>());
    } else {
        os << v.dump();
    }
}

void write_value(std::ostream& os, const json& v, int depth)
{
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    if (v.is_object()) {
        if (v.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first) os << ",\n";
            first = false;
            os << pad << json(it.key()).dump() << ": ";
            write_value(os, it.value(), depth + 1);
        }
        os << '\n' << close << '}';
    } else if (v.is_array()) {
        if (v.empty()) {
            os << "[]";
            return;
        }
        bool flat = true;
        for (const auto& e : v) flat = flat && is_scalar(e);
        if (flat) {
            os << '[';
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) os << ", ";
                write_scalar(os, v[i]);
            }
            os << ']';
            return;
        }
        os << "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) os << ",\n";
            os << pad;
            write_value(os, v[i], depth + 1);
        }
        os << '\n' << close << ']';
    } else {
        write_scalar(os, v);
    }
}

} // namespace

std::string format_double(double v)
{
    if (!std::isfinite(v)) return "null";
    if (v == 0.0) return "0";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_json(std::ostream& os, const json& value)
{
    write_value(os, value, 0);
    os << '\n';
}

std::string to_json_text(const json& value)
{
    std::ostringstream os;
    write_json(os, value);
    return os.str();
}

} // namespace lgap::cli

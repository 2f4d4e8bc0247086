#include "cli/json_writer.hpp"

#include <charconv>
#include <cmath>

namespace weylchsh::cli {

namespace {

void write(const nlohmann::ordered_json& j, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
    case nlohmann::json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& item : j.items()) {
            if (!first) out += ",\n";
            first = false;
            out += pad;
            out += nlohmann::json(item.key()).dump();
            out += ": ";
            write(item.value(), out, depth + 1);
        }
        out += "\n" + close + "}";
        return;
    }
    case nlohmann::json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        bool scalars = true;
        for (const auto& v : j) scalars = scalars && v.is_primitive();
        if (scalars) {
            out += "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) out += ", ";
                write(j[i], out, depth + 1);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += ",\n";
            out += pad;
            write(j[i], out, depth + 1);
        }
        out += "\n" + close + "]";
        return;
    }
    case nlohmann::json::value_t::number_float:
        out += format_double(j.get<double>());
        return;
    default:
        out += j.dump();
        return;
    }
}

} // namespace

std::string format_double(double x) {
    if (!std::isfinite(x)) {
        return "null";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    std::string s(buf, res.ptr);
    // Keep floats recognizable as floats.
    if (s.find_first_of(".eEn") == std::string::npos) {
        s += ".0";
    }
    return s;
}

std::string write_json(const nlohmann::ordered_json& j) {
    std::string out;
    write(j, out, 0);
    out += "\n";
    return out;
}

} // namespace weylchsh::cli

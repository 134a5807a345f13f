#include "storval_cli/json_text.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace storval::cli {

namespace {

void write(const nlohmann::json& v, std::string& out, int indent, int depth) {
    auto newline = [&](int d) {
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (v.type()) {
        case nlohmann::json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                break;
            }
            out += '{';
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                out += nlohmann::json(it.key()).dump();
                out += ": ";
                write(it.value(), out, indent, depth + 1);
            }
            newline(depth);
            out += '}';
            break;
        }
        case nlohmann::json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                break;
            }
            // Numeric arrays stay on one line.
            const bool flat = std::all_of(v.begin(), v.end(), [](const auto& e) { return e.is_primitive(); });
            out += '[';
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += flat ? ", " : ",";
                if (!flat) newline(depth + 1);
                write(v[i], out, indent, depth + 1);
            }
            if (!flat) newline(depth);
            out += ']';
            break;
        }
        case nlohmann::json::value_t::number_float: {
            const double d = v.get<double>();
            if (!std::isfinite(d)) {
                out += "null";
                break;
            }
            char buf[64];
            const auto res = std::to_chars(buf, buf + sizeof buf, d, std::chars_format::general, 17);
            out.append(buf, res.ptr);
            break;
        }
        default:
            out += v.dump();
    }
}

}  // namespace

std::string to_json_text(const nlohmann::json& value) {
    std::string out;
    write(value, out, 2, 0);
    out += '\n';
    return out;
}

}  // namespace storval::cli

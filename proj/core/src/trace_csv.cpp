#include "storval/trace_csv.hpp"

#include <charconv>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "storval/errors.hpp"

namespace storval {

namespace {

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

}  // namespace

TraceMatrix read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw TraceFormatError(1, "missing header line");

    const auto header = split(line);
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (header[k] != "t" + std::to_string(k))
            throw TraceFormatError(1, "header column " + std::to_string(k) + " must be 't" +
                                          std::to_string(k) + "'");
    }
    const std::size_t columns = header.size();

    std::vector<double> data;
    std::size_t rows = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            // Only a trailing newline may leave an empty line.
            if (in.peek() == std::char_traits<char>::eof()) break;
            throw TraceFormatError(line_no, "empty row");
        }
        const auto fields = split(line);
        if (fields.size() != columns)
            throw TraceFormatError(line_no, "expected " + std::to_string(columns) +
                                                " values, found " + std::to_string(fields.size()));
        for (std::size_t k = 0; k < columns; ++k) {
            double v = 0.0;
            const auto f = fields[k];
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size() || f.empty())
                throw TraceFormatError(line_no, "column " + std::to_string(k) +
                                                    " is not a decimal: '" + std::string(f) + "'");
            if (!(v >= 0.0 && v <= 1.0))
                throw TraceFormatError(line_no, "column " + std::to_string(k) + " value " +
                                                    std::string(f) + " outside [0, 1]");
            data.push_back(v);
        }
        ++rows;
    }
    return TraceMatrix(rows, columns, std::move(data));
}

TraceMatrix read_trace_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InvalidArgument("cannot open trace file " + file.string());
    return read_trace_csv(in);
}

void write_trace_csv(std::ostream& out, const TraceMatrix& traces) {
    for (std::size_t k = 0; k < traces.columns(); ++k) out << (k ? ",t" : "t") << k;
    out << '\n';
    char buf[64];
    for (std::size_t i = 0; i < traces.rows(); ++i) {
        for (std::size_t k = 0; k < traces.columns(); ++k) {
            const auto res = std::to_chars(buf, buf + sizeof buf, traces.at(i, k));
            if (k) out << ',';
            out.write(buf, res.ptr - buf);
        }
        out << '\n';
    }
}

}  // namespace storval

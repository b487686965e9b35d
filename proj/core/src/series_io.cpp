#include "horolab/series_io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "horolab/errors.hpp"

namespace horolab {

namespace {

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

double to_double(const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0') throw ContractViolation("csv: cannot parse number '" + s + "'");
    return v;
}

template <class Row>
void for_rows(const std::string& text, const char* header, Row row) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != header)
        throw ContractViolation(std::string("csv: expected header '") + header + "'");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        row(split_csv(line));
    }
}

}  // namespace

std::string format_series(const CorrelationSeries& s) {
    std::string out = std::string(kCorrelationHeader) + "\n";
    for (std::size_t k = 0; k < s.times.size(); ++k) {
        out += g17(s.times[k]) + "," + g17(s.values[k].real()) + "," + g17(s.values[k].imag()) + "," +
               g17(std::abs(s.values[k])) + "," + g17(s.stderr_values[k]) + "," + std::to_string(s.N) + "," +
               std::to_string(s.seed) + "\n";
    }
    return out;
}

std::string format_series(const TraceSeries& s) {
    std::string out = std::string(kTraceHeader) + "\n";
    for (std::size_t k = 0; k < s.times.size(); ++k) {
        out += g17(s.times[k]) + "," + g17(s.values[k].real()) + "," + g17(s.values[k].imag()) + "," +
               g17(std::abs(s.values[k])) + "," + std::to_string(s.J) + "," + g17(s.stderr_total[k]) + "\n";
    }
    return out;
}

CorrelationSeries parse_correlation_csv(const std::string& text) {
    CorrelationSeries s;
    for_rows(text, kCorrelationHeader, [&](const std::vector<std::string>& c) {
        if (c.size() != 7) throw ContractViolation("csv: correlation rows need 7 fields");
        s.times.push_back(to_double(c[0]));
        s.values.emplace_back(to_double(c[1]), to_double(c[2]));
        s.stderr_values.push_back(to_double(c[4]));
        s.N = std::stol(c[5]);
        s.seed = std::stoull(c[6]);
    });
    return s;
}

TraceSeries parse_trace_csv(const std::string& text) {
    TraceSeries s;
    for_rows(text, kTraceHeader, [&](const std::vector<std::string>& c) {
        if (c.size() != 6) throw ContractViolation("csv: trace rows need 6 fields");
        s.times.push_back(to_double(c[0]));
        s.values.emplace_back(to_double(c[1]), to_double(c[2]));
        s.J = std::stoi(c[4]);
        s.stderr_total.push_back(to_double(c[5]));
    });
    return s;
}

void write_text_file(const std::string& path, const std::string& text, bool force) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!force && fs::exists(path, ec))
        throw IoError(path + ": file exists (use --force to overwrite)");
    fs::path p(path);
    if (p.has_parent_path()) {
        fs::create_directories(p.parent_path(), ec);
        if (ec) throw IoError(path + ": cannot create directory: " + ec.message());
    }
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError(path + ": cannot open for writing: " + std::strerror(errno));
    os << text;
    os.close();
    if (!os) throw IoError(path + ": write failed");
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError(path + ": cannot open for reading");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

void write_series(const std::string& path, const CorrelationSeries& s, bool force) {
    write_text_file(path, format_series(s), force);
}

void write_series(const std::string& path, const TraceSeries& s, bool force) {
    write_text_file(path, format_series(s), force);
}

}  // namespace horolab

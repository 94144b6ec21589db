#include "gpebo/csv_io.hpp"

#include "gpebo/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace gpebo {

namespace {

void append_number(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os)
        throw error("cannot open for writing: " + path);
    os.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!os)
        throw error("write failed: " + path);
}

} // namespace

void write_run_csv(const std::string& path, const RunLog& log, const EstimateLog& est,
                   const std::vector<double>& theta_true) {
    const std::size_t n = log.n;
    const std::size_t r = 3 * n;
    const std::size_t m = log.samples();
    if (est.times.size() != m)
        throw shape_error("run/estimate sample counts differ");
    if (theta_true.size() != r)
        throw shape_error("theta_true has wrong length");

    std::string out;
    out.reserve(m * 32 * (3 + 2 * n + 2 * r + n + r));

    out += "t,u,y";
    for (std::size_t i = 1; i <= n; ++i) out += ",x" + std::to_string(i);
    for (std::size_t i = 1; i <= n; ++i) out += ",xhat" + std::to_string(i);
    for (std::size_t i = 1; i <= r; ++i) out += ",thetahat" + std::to_string(i);
    for (std::size_t i = 1; i <= r; ++i) out += ",theta" + std::to_string(i);
    for (std::size_t i = 1; i <= n; ++i) out += ",err_x" + std::to_string(i);
    for (std::size_t i = 1; i <= r; ++i) out += ",err_th" + std::to_string(i);
    out += '\n';

    for (std::size_t s = 0; s < m; ++s) {
        append_number(out, log.times[s]);
        out += ',';
        append_number(out, log.u[s]);
        out += ',';
        append_number(out, log.y[s]);
        for (std::size_t i = 0; i < n; ++i) {
            out += ',';
            append_number(out, log.x[s * n + i]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            out += ',';
            append_number(out, est.x_hat[s * n + i]);
        }
        for (std::size_t i = 0; i < r; ++i) {
            out += ',';
            append_number(out, est.theta_hat[s * r + i]);
        }
        for (std::size_t i = 0; i < r; ++i) {
            out += ',';
            append_number(out, theta_true[i]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            out += ',';
            append_number(out, est.state_err[s * n + i]);
        }
        for (std::size_t i = 0; i < r; ++i) {
            out += ',';
            append_number(out, est.param_err[s * r + i]);
        }
        out += '\n';
    }
    write_text(path, out);
}

void write_regression_csv(const std::string& path, const RunLog& log) {
    const std::size_t r = 3 * log.n;
    const std::size_t m = log.samples();
    if (log.z.size() != m)
        throw shape_error("run log carries no regression samples");

    std::string out;
    out.reserve(m * 32 * (2 + r));
    out += "t,z";
    for (std::size_t i = 1; i <= r; ++i) out += ",psi" + std::to_string(i);
    out += '\n';
    for (std::size_t s = 0; s < m; ++s) {
        append_number(out, log.times[s]);
        out += ',';
        append_number(out, log.z[s]);
        for (std::size_t i = 0; i < r; ++i) {
            out += ',';
            append_number(out, log.psi[s * r + i]);
        }
        out += '\n';
    }
    write_text(path, out);
}

std::size_t CsvTable::col(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name)
            return i;
    throw error("CSV is missing column '" + name + "'");
}

CsvTable read_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw error("cannot open CSV: " + path);

    CsvTable table;
    std::string line;
    if (!std::getline(is, line) || line.empty())
        throw error("empty CSV: " + path);
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            table.columns.push_back(cell);
    }
    if (table.columns.empty())
        throw error("empty CSV header: " + path);

    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        std::size_t start = 0, fields = 0;
        while (true) {
            std::size_t comma = line.find(',', start);
            std::string_view cell(line.data() + start,
                                  (comma == std::string::npos ? line.size() : comma) - start);
            double v = 0;
            auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
                throw parse_error("bad CSV number '" + std::string(cell) + "' on line " +
                                      std::to_string(lineno),
                                  start);
            table.data.push_back(v);
            ++fields;
            if (comma == std::string::npos)
                break;
            start = comma + 1;
        }
        if (fields != table.columns.size())
            throw error("CSV line " + std::to_string(lineno) + " has " + std::to_string(fields) +
                        " fields, expected " + std::to_string(table.columns.size()));
    }
    if (table.data.empty())
        throw error("CSV has no data rows: " + path);
    return table;
}

} // namespace gpebo

#include "gpebo/svg_plot.hpp"

#include "gpebo/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

namespace gpebo {

namespace {

constexpr double kWidth = 860, kHeight = 480;
constexpr double kLeft = 70, kRight = 30, kTop = 42, kBottom = 52;
constexpr std::size_t kMaxPoints = 2000;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#e377c2"};

void append_fixed(std::string& out, double v, int precision) {
    char buf[48];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, precision);
    out.append(buf, res.ptr);
}

void append_general(std::string& out, double v) {
    char buf[48];
    // %g-style tick labels: shortest for integers, 4 significant digits otherwise
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 4);
    out.append(buf, res.ptr);
}

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void include(double v) {
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    void finalize() {
        if (!(lo <= hi)) { // nothing finite seen
            lo = 0;
            hi = 1;
        }
        double pad = (hi - lo) * 0.05;
        if (pad <= 0)
            pad = std::max(1.0, std::fabs(hi)) * 0.05;
        lo -= pad;
        hi += pad;
    }
};

} // namespace

std::string render_line_svg(const std::string& title, const std::string& y_label,
                            const std::vector<double>& x, const std::vector<PlotSeries>& series) {
    for (const auto& s : series)
        if (s.y.size() != x.size())
            throw shape_error("plot series '" + s.label + "' length differs from x");

    Range xr, yr;
    for (double v : x)
        xr.include(v);
    for (const auto& s : series)
        for (double v : s.y)
            yr.include(v);
    xr.finalize();
    yr.finalize();

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double v) { return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double v) { return kTop + (yr.hi - v) / (yr.hi - yr.lo) * ph; };

    std::string svg;
    svg.reserve(64 * 1024);
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"860\" height=\"480\" "
           "viewBox=\"0 0 860 480\">\n";
    svg += "<rect width=\"860\" height=\"480\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"430\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"16\" fill=\"#202020\">" +
           escape_xml(title) + "</text>\n";

    // grid and ticks
    const int nticks = 6;
    for (int i = 0; i <= nticks; ++i) {
        double fx = xr.lo + (xr.hi - xr.lo) * i / nticks;
        double gx = px(fx);
        svg += "<line x1=\"";
        append_fixed(svg, gx, 2);
        svg += "\" y1=\"";
        append_fixed(svg, kTop, 2);
        svg += "\" x2=\"";
        append_fixed(svg, gx, 2);
        svg += "\" y2=\"";
        append_fixed(svg, kTop + ph, 2);
        svg += "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"";
        append_fixed(svg, gx, 2);
        svg += "\" y=\"";
        append_fixed(svg, kTop + ph + 18, 2);
        svg += "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" "
               "fill=\"#404040\">";
        append_general(svg, fx);
        svg += "</text>\n";
    }
    for (int i = 0; i <= nticks; ++i) {
        double fy = yr.lo + (yr.hi - yr.lo) * i / nticks;
        double gy = py(fy);
        svg += "<line x1=\"";
        append_fixed(svg, kLeft, 2);
        svg += "\" y1=\"";
        append_fixed(svg, gy, 2);
        svg += "\" x2=\"";
        append_fixed(svg, kLeft + pw, 2);
        svg += "\" y2=\"";
        append_fixed(svg, gy, 2);
        svg += "\" stroke=\"#e0e0e0\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"";
        append_fixed(svg, kLeft - 8, 2);
        svg += "\" y=\"";
        append_fixed(svg, gy + 4, 2);
        svg += "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" "
               "fill=\"#404040\">";
        append_general(svg, fy);
        svg += "</text>\n";
    }

    // axes
    svg += "<rect x=\"";
    append_fixed(svg, kLeft, 2);
    svg += "\" y=\"";
    append_fixed(svg, kTop, 2);
    svg += "\" width=\"";
    append_fixed(svg, pw, 2);
    svg += "\" height=\"";
    append_fixed(svg, ph, 2);
    svg += "\" fill=\"none\" stroke=\"#404040\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"430\" y=\"472\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\" fill=\"#202020\">time [s]</text>\n";
    svg += "<text x=\"16\" y=\"240\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"13\" fill=\"#202020\" transform=\"rotate(-90 16 240)\">" +
           escape_xml(y_label) + "</text>\n";

    const std::size_t m = x.size();
    const std::size_t stride = std::max<std::size_t>(1, m / kMaxPoints);
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const char* color = kPalette[si % (sizeof kPalette / sizeof *kPalette)];
        if (m == 1) {
            svg += "<circle cx=\"";
            append_fixed(svg, px(x[0]), 2);
            svg += "\" cy=\"";
            append_fixed(svg, py(s.y[0]), 2);
            svg += "\" r=\"3\" fill=\"";
            svg += color;
            svg += "\"/>\n";
        } else {
            svg += "<polyline fill=\"none\" stroke=\"";
            svg += color;
            svg += "\" stroke-width=\"1.4\" points=\"";
            for (std::size_t j = 0; j < m; j += stride) {
                append_fixed(svg, px(x[j]), 2);
                svg += ',';
                append_fixed(svg, py(s.y[j]), 2);
                svg += ' ';
            }
            if ((m - 1) % stride != 0) {
                append_fixed(svg, px(x[m - 1]), 2);
                svg += ',';
                append_fixed(svg, py(s.y[m - 1]), 2);
            }
            svg += "\"/>\n";
        }
        // legend swatch
        double lx = kLeft + 12, ly = kTop + 14 + 16 * static_cast<double>(si);
        svg += "<rect x=\"";
        append_fixed(svg, lx, 2);
        svg += "\" y=\"";
        append_fixed(svg, ly - 8, 2);
        svg += "\" width=\"14\" height=\"4\" fill=\"";
        svg += color;
        svg += "\"/>\n<text x=\"";
        append_fixed(svg, lx + 20, 2);
        svg += "\" y=\"";
        append_fixed(svg, ly, 2);
        svg += "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#202020\">" +
               escape_xml(s.label) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::vector<std::string> write_run_plots(const std::string& dir, const std::string& stem,
                                         const CsvTable& table) {
    const std::size_t m = table.rows();
    std::vector<double> t(m);
    {
        std::size_t ct = table.col("t");
        for (std::size_t i = 0; i < m; ++i)
            t[i] = table.at(i, ct);
    }
    auto column = [&](const std::string& name) {
        std::size_t c = table.col(name);
        std::vector<double> v(m);
        for (std::size_t i = 0; i < m; ++i)
            v[i] = table.at(i, c);
        return v;
    };
    auto count_indexed = [&](const std::string& prefix) {
        std::size_t k = 0;
        while (true) {
            std::string name = prefix + std::to_string(k + 1);
            bool found = false;
            for (const auto& c : table.columns)
                if (c == name) {
                    found = true;
                    break;
                }
            if (!found)
                break;
            ++k;
        }
        return k;
    };

    const std::size_t r = count_indexed("thetahat");
    const std::size_t n = count_indexed("err_x");
    if (r == 0)
        throw error("CSV is missing column 'thetahat1'");
    if (n == 0)
        throw error("CSV is missing column 'err_x1'");

    auto emit = [&](const std::string& file, const std::string& svg) {
        std::string path = dir.empty() ? file : dir + "/" + file;
        std::ofstream os(path, std::ios::binary | std::ios::trunc);
        if (!os)
            throw error("cannot open for writing: " + path);
        os << svg;
        return path;
    };

    std::vector<std::string> written;

    {
        std::vector<PlotSeries> series;
        for (std::size_t i = 1; i <= r; ++i)
            series.push_back({"thetahat" + std::to_string(i), column("thetahat" + std::to_string(i))});
        written.push_back(emit(stem + "_theta_hat_all.svg",
                               render_line_svg("parameter estimates", "thetahat", t, series)));
    }
    for (std::size_t i = 1; i <= r; ++i) {
        std::string name = "err_th" + std::to_string(i);
        std::vector<PlotSeries> series{{name, column(name)}};
        written.push_back(emit(stem + "_theta_err_" + std::to_string(i) + ".svg",
                               render_line_svg("estimation error, theta component " +
                                                   std::to_string(i),
                                               name, t, series)));
    }
    for (std::size_t i = 1; i <= n; ++i) {
        std::string name = "err_x" + std::to_string(i);
        std::vector<PlotSeries> series{{name, column(name)}};
        written.push_back(emit(stem + "_x_err_" + std::to_string(i) + ".svg",
                               render_line_svg("reconstruction error, state component " +
                                                   std::to_string(i),
                                               name, t, series)));
    }
    return written;
}

} // namespace gpebo

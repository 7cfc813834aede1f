#include "qsync/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace qsync {

namespace {

constexpr int kWidth = 820;
constexpr int kHeight = 520;
constexpr int kLeft = 80, kRight = 40, kTop = 50, kBottom = 60;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct Range {
    double lo = 0.0, hi = 1.0;
    double span() const { return hi - lo; }
};

Range pad_range(double lo, double hi) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) return {0.0, 1.0};
    if (lo == hi) {
        const double pad = (lo == 0.0) ? 1.0 : std::abs(lo) * 0.1;
        return {lo - pad, hi + pad};
    }
    const double pad = (hi - lo) * 0.05;
    return {lo - pad, hi + pad};
}

std::vector<double> ticks(const Range& r, int n = 5) {
    std::vector<double> t;
    for (int i = 0; i <= n; ++i) t.push_back(r.lo + r.span() * i / n);
    return t;
}

void rgb_ramp(double t, int& r, int& g, int& b) {
    // Compact perceptual ramp (dark violet to yellow), linear between anchors.
    static const int anchors[5][3] = {
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    const int seg = std::min(3, static_cast<int>(t));
    const double f = t - seg;
    r = static_cast<int>(std::lround(anchors[seg][0] + f * (anchors[seg + 1][0] - anchors[seg][0])));
    g = static_cast<int>(std::lround(anchors[seg][1] + f * (anchors[seg + 1][1] - anchors[seg][1])));
    b = static_cast<int>(std::lround(anchors[seg][2] + f * (anchors[seg + 1][2] - anchors[seg][2])));
}

std::string color_of(double t) {
    int r, g, b;
    rgb_ramp(t, r, g, b);
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

void open_doc(std::ostringstream& svg, int w, int h) {
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
        << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h
        << "\">\n<rect width=\"" << w << "\" height=\"" << h
        << "\" fill=\"white\"/>\n";
}

void axes(std::ostringstream& svg, const std::string& title,
          const std::string& xlabel, const std::string& ylabel, const Range& xr,
          const Range& yr, int plot_w, int plot_h) {
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w
        << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << (kLeft + plot_w / 2) << "\" y=\"" << (kTop - 18)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
        << esc(title) << "</text>\n";
    svg << "<text x=\"" << (kLeft + plot_w / 2) << "\" y=\"" << (kTop + plot_h + 42)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << esc(xlabel) << "</text>\n";
    svg << "<text x=\"18\" y=\"" << (kTop + plot_h / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 "
        << (kTop + plot_h / 2) << ")\">" << esc(ylabel) << "</text>\n";
    for (double t : ticks(xr)) {
        const double px = kLeft + (t - xr.lo) / xr.span() * plot_w;
        svg << "<line x1=\"" << px << "\" y1=\"" << (kTop + plot_h) << "\" x2=\""
            << px << "\" y2=\"" << (kTop + plot_h + 5)
            << "\" stroke=\"black\"/>\n<text x=\"" << px << "\" y=\""
            << (kTop + plot_h + 20)
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"11\">"
            << num(t) << "</text>\n";
    }
    for (double t : ticks(yr)) {
        const double py = kTop + plot_h - (t - yr.lo) / yr.span() * plot_h;
        svg << "<line x1=\"" << (kLeft - 5) << "\" y1=\"" << py << "\" x2=\""
            << kLeft << "\" y2=\"" << py
            << "\" stroke=\"black\"/>\n<text x=\"" << (kLeft - 9) << "\" y=\""
            << (py + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << num(t) << "</text>\n";
    }
}

void save(const std::string& path, const std::ostringstream& svg) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << svg.str() << "</svg>\n";
    if (!out.flush()) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void write_line_plot_svg(const std::string& path, const std::string& title,
                         const std::string& xlabel, const std::string& ylabel,
                         const std::vector<LineSeries>& series) {
    if (series.empty()) throw std::invalid_argument("line plot needs a series");
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    for (const LineSeries& s : series) {
        if (s.x.size() != s.y.size())
            throw std::invalid_argument("series x/y lengths differ: " + s.label);
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xlo = std::min(xlo, s.x[i]);
            xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, s.y[i]);
            yhi = std::max(yhi, s.y[i]);
        }
    }
    const Range xr = pad_range(xlo, xhi), yr = pad_range(ylo, yhi);
    const int plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;

    std::ostringstream svg;
    open_doc(svg, kWidth, kHeight);
    axes(svg, title, xlabel, ylabel, xr, yr, plot_w, plot_h);

    for (std::size_t si = 0; si < series.size(); ++si) {
        const LineSeries& s = series[si];
        const char* color = kPalette[si % 8];
        svg << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        bool broken = true;
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
                if (!broken) svg << "\"/>\n<polyline fill=\"none\" stroke=\""
                                 << color << "\" stroke-width=\"1.5\" points=\"";
                broken = true;
                continue;
            }
            const double px = kLeft + (s.x[i] - xr.lo) / xr.span() * plot_w;
            const double py = kTop + plot_h - (s.y[i] - yr.lo) / yr.span() * plot_h;
            svg << px << "," << py << " ";
            broken = false;
        }
        svg << "\"/>\n";
        const int ly = kTop + 16 + static_cast<int>(si) * 18;
        svg << "<line x1=\"" << (kLeft + plot_w - 150) << "\" y1=\"" << ly
            << "\" x2=\"" << (kLeft + plot_w - 125) << "\" y2=\"" << ly
            << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n<text x=\""
            << (kLeft + plot_w - 118) << "\" y=\"" << (ly + 4)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << esc(s.label)
            << "</text>\n";
    }
    save(path, svg);
}

void write_heatmap_svg(const std::string& path, const std::string& title,
                       const std::string& xlabel, const std::string& ylabel,
                       const std::vector<double>& x_values,
                       const std::vector<double>& y_values,
                       const std::vector<double>& values,
                       const std::string& value_label) {
    const std::size_t nx = x_values.size(), ny = y_values.size();
    if (nx == 0 || ny == 0 || values.size() != nx * ny)
        throw std::invalid_argument("heatmap grid/value dimensions mismatch");

    double vlo = std::numeric_limits<double>::infinity(), vhi = -vlo;
    for (double v : values)
        if (std::isfinite(v)) {
            vlo = std::min(vlo, v);
            vhi = std::max(vhi, v);
        }
    if (!std::isfinite(vlo)) {
        vlo = 0.0;
        vhi = 1.0;
    }
    if (vlo == vhi) vhi = vlo + 1.0;

    const int plot_w = kWidth - kLeft - kRight - 70;  // room for the color bar
    const int plot_h = kHeight - kTop - kBottom;
    const Range xr{x_values.front(), x_values.back()};
    const Range yr{y_values.front(), y_values.back()};
    const Range xr_safe = (xr.lo == xr.hi) ? pad_range(xr.lo, xr.hi) : xr;
    const Range yr_safe = (yr.lo == yr.hi) ? pad_range(yr.lo, yr.hi) : yr;

    std::ostringstream svg;
    open_doc(svg, kWidth, kHeight);

    const double cw = static_cast<double>(plot_w) / static_cast<double>(nx);
    const double ch = static_cast<double>(plot_h) / static_cast<double>(ny);
    for (std::size_t yi = 0; yi < ny; ++yi) {
        for (std::size_t xi = 0; xi < nx; ++xi) {
            const double v = values[yi * nx + xi];
            const std::string fill =
                std::isfinite(v) ? color_of((v - vlo) / (vhi - vlo)) : "#bbbbbb";
            const double px = kLeft + cw * static_cast<double>(xi);
            // Row 0 (smallest y) sits at the bottom.
            const double py = kTop + plot_h - ch * static_cast<double>(yi + 1);
            svg << "<rect x=\"" << px << "\" y=\"" << py << "\" width=\""
                << cw + 0.5 << "\" height=\"" << ch + 0.5 << "\" fill=\"" << fill
                << "\"/>\n";
        }
    }
    axes(svg, title, xlabel, ylabel, xr_safe, yr_safe, plot_w, plot_h);

    // Color bar.
    const int bar_x = kLeft + plot_w + 25, bar_w = 18;
    for (int i = 0; i < plot_h; ++i) {
        const double t = 1.0 - static_cast<double>(i) / (plot_h - 1);
        svg << "<rect x=\"" << bar_x << "\" y=\"" << (kTop + i) << "\" width=\""
            << bar_w << "\" height=\"2\" fill=\"" << color_of(t) << "\"/>\n";
    }
    svg << "<rect x=\"" << bar_x << "\" y=\"" << kTop << "\" width=\"" << bar_w
        << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
    svg << "<text x=\"" << (bar_x + bar_w + 5) << "\" y=\"" << (kTop + 10)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << num(vhi)
        << "</text>\n";
    svg << "<text x=\"" << (bar_x + bar_w + 5) << "\" y=\"" << (kTop + plot_h)
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << num(vlo)
        << "</text>\n";
    svg << "<text x=\"" << (bar_x + bar_w / 2) << "\" y=\"" << (kTop - 8)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"12\">"
        << esc(value_label) << "</text>\n";
    save(path, svg);
}

}  // namespace qsync

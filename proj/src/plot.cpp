#include "adaptopt/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>

#include "adaptopt/csv.hpp"
#include "strcat.hpp"

namespace adaptopt {

namespace {

constexpr double width = 900.0;
constexpr double height = 520.0;
constexpr double left = 80.0;
constexpr double right = 180.0;
constexpr double top = 44.0;
constexpr double bottom = 56.0;
constexpr std::size_t max_points = 1000;

constexpr std::array<const char*, 10> palette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
constexpr std::array<const char*, 3> dashes = {"", "6,3", "2,2"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
    return buf;
}

double nice_step(double span, int target) {
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double r = raw / mag;
    return (r < 1.5 ? 1.0 : r < 3.0 ? 2.0 : r < 7.0 ? 5.0 : 10.0) * mag;
}

struct Axes {
    double x0, x1, y0, y1;
    bool log_y = false;

    double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
    double py(double y) const {
        const double v = log_y ? std::log10(y) : y;
        return height - bottom - (v - y0) / (y1 - y0) * (height - top - bottom);
    }
};

class Svg {
public:
    explicit Svg(const std::string& title) {
        out_ += cat("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"", fmt(width), "\" height=\"", fmt(height),
                    "\" viewBox=\"0 0 ", fmt(width), " ", fmt(height), "\" font-family=\"sans-serif\" font-size=\"12\">\n");
        out_ += cat("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
        out_ += cat("<text x=\"", fmt(width / 2), "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">", title, "</text>\n");
    }

    void frame(const Axes& a, const std::string& xlabel, const std::string& ylabel) {
        const double plot_right = width - right;
        const double plot_bottom = height - bottom;
        out_ += cat("<rect x=\"", fmt(left), "\" y=\"", fmt(top), "\" width=\"", fmt(plot_right - left), "\" height=\"",
                    fmt(plot_bottom - top), "\" fill=\"none\" stroke=\"black\"/>\n");

        const double xs = nice_step(a.x1 - a.x0, 8);
        for (double t = std::ceil(a.x0 / xs) * xs; t <= a.x1 + 1e-9 * xs; t += xs) {
            const double x = a.px(t);
            out_ += cat("<line x1=\"", fmt(x), "\" y1=\"", fmt(plot_bottom), "\" x2=\"", fmt(x), "\" y2=\"",
                        fmt(plot_bottom + 5), "\" stroke=\"black\"/>\n");
            out_ += cat("<text x=\"", fmt(x), "\" y=\"", fmt(plot_bottom + 18), "\" text-anchor=\"middle\">", label(t),
                        "</text>\n");
        }
        auto ytick = [&](double value, double pos) {
            out_ += cat("<line x1=\"", fmt(left - 5), "\" y1=\"", fmt(pos), "\" x2=\"", fmt(left), "\" y2=\"", fmt(pos),
                        "\" stroke=\"black\"/>\n");
            out_ += cat("<line x1=\"", fmt(left), "\" y1=\"", fmt(pos), "\" x2=\"", fmt(plot_right), "\" y2=\"", fmt(pos),
                        "\" stroke=\"#dddddd\"/>\n");
            out_ += cat("<text x=\"", fmt(left - 8), "\" y=\"", fmt(pos + 4), "\" text-anchor=\"end\">", label(value),
                        "</text>\n");
        };
        if (a.log_y) {
            for (double e = std::ceil(a.y0); e <= a.y1 + 1e-9; e += 1.0) ytick(std::pow(10.0, e), a.py(std::pow(10.0, e)));
        } else {
            const double ys = nice_step(a.y1 - a.y0, 6);
            for (double v = std::ceil(a.y0 / ys) * ys; v <= a.y1 + 1e-9 * ys; v += ys) ytick(v, a.py(v));
        }
        out_ += cat("<text x=\"", fmt((left + plot_right) / 2), "\" y=\"", fmt(height - 14), "\" text-anchor=\"middle\">",
                    xlabel, "</text>\n");
        out_ += cat("<text x=\"18\" y=\"", fmt((top + plot_bottom) / 2), "\" text-anchor=\"middle\" transform=\"rotate(-90 18 ",
                    fmt((top + plot_bottom) / 2), ")\">", ylabel, "</text>\n");
    }

    void polyline(const std::string& attrs, const std::vector<std::pair<double, double>>& pts, const char* color,
                  const char* dash) {
        if (pts.size() < 2) return;
        out_ += cat("<polyline ", attrs, " fill=\"none\" stroke=\"", color, "\" stroke-width=\"1.2\"");
        if (*dash) out_ += cat(" stroke-dasharray=\"", dash, "\"");
        out_ += " points=\"";
        for (std::size_t k = 0; k < pts.size(); ++k) {
            if (k) out_ += ' ';
            out_ += fmt(pts[k].first) + "," + fmt(pts[k].second);
        }
        out_ += "\"/>\n";
    }

    void legend(std::size_t row, const std::string& text, const char* color, const char* dash) {
        const double x = width - right + 16;
        const double y = top + 10 + 16.0 * static_cast<double>(row);
        out_ += cat("<line x1=\"", fmt(x), "\" y1=\"", fmt(y), "\" x2=\"", fmt(x + 24), "\" y2=\"", fmt(y), "\" stroke=\"",
                    color, "\" stroke-width=\"2\"");
        if (*dash) out_ += cat(" stroke-dasharray=\"", dash, "\"");
        out_ += "/>\n";
        out_ += cat("<text x=\"", fmt(x + 30), "\" y=\"", fmt(y + 4), "\">", text, "</text>\n");
    }

    std::string finish() {
        out_ += "</svg>\n";
        return std::move(out_);
    }

private:
    std::string out_;
};

std::size_t stride(std::size_t n) { return std::max<std::size_t>(1, (n + max_points - 1) / max_points); }

/// Sample indices to draw: every stride-th one plus the last.
std::vector<std::size_t> drawn_indices(std::size_t n) {
    std::vector<std::size_t> idx;
    const std::size_t s = stride(n);
    for (std::size_t k = 0; k < n; k += s) idx.push_back(k);
    if (!idx.empty() && idx.back() != n - 1) idx.push_back(n - 1);
    return idx;
}

void require_samples(const RunRecord& record) {
    if (record.size() == 0) throw IoError("nothing to plot: the record has no samples");
}

double time_span_end(const RunRecord& r) { return r.times.back() > r.times.front() ? r.times.back() : r.times.front() + 1.0; }

}  // namespace

std::string trajectory_svg(const RunRecord& record) {
    require_samples(record);
    const std::size_t n = record.agents();
    const std::size_t m = record.dimension();
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& x : record.x) {
        lo = std::min(lo, x.minCoeff());
        hi = std::max(hi, x.maxCoeff());
    }
    if (hi - lo < 1e-12) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    Axes axes{record.times.front(), time_span_end(record), lo - pad, hi + pad};

    Svg svg("State trajectories");
    svg.frame(axes, "time", "position coordinate");
    const auto idx = drawn_indices(record.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < m; ++k) {
            std::vector<std::pair<double, double>> pts;
            for (std::size_t s : idx) {
                pts.emplace_back(axes.px(record.times[s]),
                                 axes.py(record.x[s](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k))));
            }
            svg.polyline(cat("class=\"trace\" data-agent=\"", i, "\" data-coord=\"", k, "\""), pts,
                         palette[i % palette.size()], dashes[k % dashes.size()]);
        }
    }
    std::size_t row = 0;
    for (std::size_t i = 0; i < n && row < 28; ++i) svg.legend(row++, cat("agent ", i + 1), palette[i % palette.size()], "");
    for (std::size_t k = 0; k < m && k < dashes.size(); ++k) svg.legend(row++, cat("coordinate ", k + 1), "black", dashes[k]);
    return svg.finish();
}

std::string monitor_svg(const RunRecord& record) {
    require_samples(record);
    if (record.monitors.size() != record.size()) throw IoError("monitor plot needs an annotated record");

    struct Series {
        const char* name;
        std::function<double(const MonitorSample&)> get;
    };
    const std::vector<Series> series = {
        {"V", [](const MonitorSample& m) { return m.V; }},
        {"V1", [](const MonitorSample& m) { return m.V1; }},
        {"diameter", [](const MonitorSample& m) { return m.diameter; }},
        {"max_gain", [](const MonitorSample& m) { return m.max_gain; }},
    };

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& m : record.monitors) {
        for (const auto& s : series) {
            const double v = s.get(m);
            if (v > 0.0 && std::isfinite(v)) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    if (!(lo <= hi)) {
        lo = 1e-3;
        hi = 1.0;
    }
    Axes axes{record.times.front(), time_span_end(record), std::floor(std::log10(lo)), std::ceil(std::log10(hi)), true};
    if (axes.y1 <= axes.y0) axes.y1 = axes.y0 + 1.0;

    Svg svg("Monitors");
    svg.frame(axes, "time", "value (log scale)");
    const auto idx = drawn_indices(record.size());
    for (std::size_t c = 0; c < series.size(); ++c) {
        // Break the line wherever the value is not plottable on a log axis.
        std::vector<std::pair<double, double>> pts;
        std::size_t piece = 0;
        auto flush = [&] {
            svg.polyline(cat("class=\"monitor\" data-series=\"", series[c].name, "\" data-piece=\"", piece++, "\""), pts,
                         palette[c], "");
            pts.clear();
        };
        for (std::size_t s : idx) {
            const double v = series[c].get(record.monitors[s]);
            if (v > 0.0 && std::isfinite(v)) {
                pts.emplace_back(axes.px(record.times[s]), axes.py(v));
            } else if (!pts.empty()) {
                flush();
            }
        }
        flush();
        svg.legend(c, series[c].name, palette[c], "");
    }
    return svg.finish();
}

PlotFiles render_plots(const RunRecord& record, const std::filesystem::path& dir) {
    require_samples(record);
    PlotFiles files{dir / "trajectories.svg", dir / "monitors.svg"};
    auto write = [](const std::filesystem::path& p, const std::string& text) {
        std::ofstream f(p, std::ios::binary);
        if (!f) throw IoError(cat("cannot open ", p.string(), " for writing"));
        f << text;
        if (!f) throw IoError(cat("write to ", p.string(), " failed"));
    };
    write(files.trajectories, trajectory_svg(record));
    write(files.monitors, monitor_svg(record));
    return files;
}

}  // namespace adaptopt

//
// swarm-opt - collaborative multi-proposer black-box optimization
// SPDX-License-Identifier: Apache-2.0
//

#include "swarmopt/plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "swarmopt/errors.hpp"
#include "swarmopt/experiment.hpp"

namespace swarmopt {

namespace {
    constexpr std::string_view kHeader = "method,seed,iteration,best_so_far,normalized";

    template <class T>
    T parse_field(std::string_view field, std::string_view name, std::size_t row) {
        T value{};
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
        if (ec != std::errc() || ptr != field.data() + field.size())
            throw CsvParseError("bad " + std::string(name) + " '" + std::string(field) + "'", row);
        return value;
    }
}  // namespace

std::vector<CsvRow> parse_trajectory_csv(std::string_view text) {
    std::vector<CsvRow> rows;
    std::size_t row = 0;
    bool header_seen = false;
    while (!text.empty()) {
        const std::size_t eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
        ++row;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (!header_seen) {
            if (line != kHeader)
                throw CsvParseError("expected header '" + std::string(kHeader) + "'", row);
            header_seen = true;
            continue;
        }
        if (line.empty())
            continue;

        std::vector<std::string_view> fields;
        while (true) {
            const std::size_t comma = line.find(',');
            fields.push_back(line.substr(0, comma));
            if (comma == std::string_view::npos)
                break;
            line.remove_prefix(comma + 1);
        }
        if (fields.size() != 5)
            throw CsvParseError("expected 5 fields, got " + std::to_string(fields.size()), row);
        if (fields[0].empty())
            throw CsvParseError("empty method name", row);
        CsvRow r;
        r.method = std::string(fields[0]);
        r.seed = parse_field<std::uint64_t>(fields[1], "seed", row);
        r.iteration = parse_field<std::size_t>(fields[2], "iteration", row);
        r.best_so_far = parse_field<double>(fields[3], "best_so_far", row);
        r.normalized = parse_field<double>(fields[4], "normalized", row);
        if (!std::isfinite(r.best_so_far) || !std::isfinite(r.normalized))
            throw CsvParseError("non-finite value", row);
        rows.push_back(std::move(r));
    }
    if (!header_seen)
        throw CsvParseError("empty file", 1);
    if (rows.empty())
        throw CsvParseError("no data rows", row);
    return rows;
}

std::vector<CsvRow> read_trajectory_csv(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open CSV", path.string());
    std::stringstream text;
    text << in.rdbuf();
    return parse_trajectory_csv(text.str());
}

Aggregate aggregate_from_string(std::string_view text) {
    if (text == "median")
        return Aggregate::Median;
    if (text == "best")
        return Aggregate::Best;
    throw InvalidArgument("aggregate must be 'median' or 'best'");
}

namespace {
    constexpr double kWidth = 800.0;
    constexpr double kHeight = 500.0;
    constexpr double kLeft = 70.0;
    constexpr double kRight = 180.0;
    constexpr double kTop = 30.0;
    constexpr double kBottom = 60.0;

    std::string fmt(double v, const char *spec = "%.2f") {
        char buf[64];
        std::snprintf(buf, sizeof buf, spec, v);
        return buf;
    }

    std::string escape_xml(std::string_view s) {
        std::string out;
        for (char c : s) {
            switch (c) {
            case '&':
                out += "&amp;";
                break;
            case '<':
                out += "&lt;";
                break;
            case '>':
                out += "&gt;";
                break;
            case '"':
                out += "&quot;";
                break;
            default:
                out += c;
            }
        }
        return out;
    }

    std::string color_for(std::string_view method, std::size_t index) {
        if (method == "Dynamic")
            return "#d62728";
        if (method == "Passive")
            return "#1f77b4";
        if (method == "None")
            return "#2ca02c";
        if (method == "BruteForce")
            return "#7f7f7f";
        static constexpr const char *kCycle[] = {"#9467bd", "#8c564b", "#e377c2", "#bcbd22",
                                                 "#17becf"};
        return kCycle[index % std::size(kCycle)];
    }
}  // namespace

std::string render_svg(const std::vector<CsvRow> &rows, Aggregate aggregate) {
    // method -> iteration -> values across seeds, methods in first-seen order
    std::vector<std::string> order;
    std::map<std::string, std::map<std::size_t, std::vector<double>>> grouped;
    std::size_t max_iter = 0;
    for (const auto &r : rows) {
        if (!grouped.contains(r.method))
            order.push_back(r.method);
        grouped[r.method][r.iteration].push_back(r.normalized);
        max_iter = std::max(max_iter, r.iteration);
    }

    std::map<std::string, std::vector<std::pair<std::size_t, double>>> curves;
    double y_peak = 1.0;
    for (const auto &method : order) {
        auto &curve = curves[method];
        for (const auto &[it, values] : grouped[method]) {
            const double v = aggregate == Aggregate::Best
                                 ? *std::max_element(values.begin(), values.end())
                                 : median(values);
            curve.emplace_back(it, v);
            y_peak = std::max(y_peak, v);
        }
    }
    const double y_max = std::ceil(y_peak * 10.0 - 1e-9) / 10.0;
    const double x_max = max_iter == 0 ? 1.0 : static_cast<double>(max_iter);
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + x / x_max * plot_w; };
    auto sy = [&](double y) { return kTop + (1.0 - y / y_max) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth, "%.0f")
        << "\" height=\"" << fmt(kHeight, "%.0f") << "\" viewBox=\"0 0 " << fmt(kWidth, "%.0f")
        << ' ' << fmt(kHeight, "%.0f") << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << fmt(kWidth, "%.0f") << "\" height=\""
        << fmt(kHeight, "%.0f") << "\" fill=\"white\"/>\n";

    // Axes and ticks.
    svg << "<g stroke=\"#000\" stroke-width=\"1\">\n";
    svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(sy(0)) << "\" x2=\"" << fmt(sx(x_max))
        << "\" y2=\"" << fmt(sy(0)) << "\"/>\n";
    svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(sy(0)) << "\" x2=\"" << fmt(kLeft)
        << "\" y2=\"" << fmt(sy(y_max)) << "\"/>\n";
    svg << "</g>\n<g fill=\"#000\">\n";
    // Iteration ticks sit on whole numbers so short runs do not repeat labels.
    constexpr int kTicks = 5;
    const double x_step = std::max(1.0, std::ceil(x_max / kTicks));
    for (double x = 0.0; x <= x_max + 1e-9; x += x_step)
        svg << "<text x=\"" << fmt(sx(x)) << "\" y=\"" << fmt(sy(0) + 18)
            << "\" text-anchor=\"middle\">" << fmt(x, "%.0f") << "</text>\n";
    for (int k = 0; k <= kTicks; ++k) {
        const double y = y_max * k / kTicks;
        svg << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(sy(y) + 4)
            << "\" text-anchor=\"end\">" << fmt(y) << "</text>\n";
    }
    svg << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"" << fmt(kHeight - 15)
        << "\" text-anchor=\"middle\">iteration</text>\n";
    svg << "<text x=\"18\" y=\"" << fmt(kTop + plot_h / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << fmt(kTop + plot_h / 2)
        << ")\">normalized reward</text>\n";
    svg << "</g>\n";

    // Reference line at the local optimum.
    svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(sy(1.0)) << "\" x2=\"" << fmt(sx(x_max))
        << "\" y2=\"" << fmt(sy(1.0))
        << "\" stroke=\"#000\" stroke-dasharray=\"4 4\" stroke-width=\"1\"/>\n";

    for (std::size_t m = 0; m < order.size(); ++m) {
        const auto &method = order[m];
        svg << "<polyline fill=\"none\" stroke=\"" << color_for(method, m)
            << "\" stroke-width=\"2\" data-method=\"" << escape_xml(method) << "\" points=\"";
        bool first = true;
        for (const auto &[it, v] : curves[method]) {
            if (!first)
                svg << ' ';
            first = false;
            svg << fmt(sx(static_cast<double>(it))) << ',' << fmt(sy(v));
        }
        svg << "\"/>\n";
    }

    // Legend.
    const double lx = kWidth - kRight + 20;
    for (std::size_t m = 0; m < order.size(); ++m) {
        const double ly = kTop + 10 + 20.0 * static_cast<double>(m);
        svg << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 24)
            << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color_for(order[m], m)
            << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << fmt(lx + 30) << "\" y=\"" << fmt(ly + 4) << "\">"
            << escape_xml(order[m]) << "</text>\n";
    }
    svg << "<text x=\"" << fmt(lx) << "\" y=\""
        << fmt(kTop + 10 + 20.0 * static_cast<double>(order.size()) + 10) << "\" fill=\"#555\">("
        << (aggregate == Aggregate::Best ? "best" : "median") << " over seeds)</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

void emit_svg_plot(const std::filesystem::path &csv_path, const std::filesystem::path &out_path,
                   Aggregate aggregate) {
    const std::string svg = render_svg(read_trajectory_csv(csv_path), aggregate);
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open SVG for writing", out_path.string());
    out << svg;
    if (!out)
        throw IoError("failed writing SVG", out_path.string());
}

}  // namespace swarmopt

#include "gridsel/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gridsel/text.hpp"

namespace gridsel {

CurveTable parse_curve_csv(const std::string& content) {
    std::istringstream in(content);
    std::string line;
    CurveTable t;
    bool header = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = text::trim(line);
        if (trimmed.empty()) continue;
        const auto fields = text::split(trimmed, ',');
        if (!header) {
            if (fields.size() < 2) throw PlotError("curve csv: header needs a step column and at least one metric");
            for (std::size_t i = 1; i < fields.size(); ++i) t.columns.emplace_back(text::trim(fields[i]));
            t.series.resize(t.columns.size());
            header = true;
            continue;
        }
        if (fields.size() != t.columns.size() + 1) {
            throw PlotError("curve csv line " + std::to_string(line_no) + ": wrong number of fields");
        }
        std::vector<double> row;
        for (const auto f : fields) {
            const auto v = text::parse_double(f);
            if (!v) throw PlotError("curve csv line " + std::to_string(line_no) + ": bad number");
            row.push_back(*v);
        }
        t.steps.push_back(row[0]);
        for (std::size_t c = 0; c < t.columns.size(); ++c) t.series[c].push_back(row[c + 1]);
    }
    if (!header) throw PlotError("curve csv is empty");
    if (t.steps.empty()) throw PlotError("curve csv has no data rows");
    return t;
}

namespace {

constexpr double kWidth = 800;
constexpr double kHeight = 480;
constexpr double kLeft = 70;
constexpr double kRight = 180;
constexpr double kTop = 40;
constexpr double kBottom = 60;

constexpr std::array<const char*, 8> kColors = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_svg(const CurveTable& table, const std::string& title) {
    if (table.steps.empty() || table.columns.empty()) throw PlotError("render_svg: nothing to plot");

    const auto [xmin_it, xmax_it] = std::minmax_element(table.steps.begin(), table.steps.end());
    double xmin = *xmin_it;
    double xmax = *xmax_it;
    double ymin = INFINITY;
    double ymax = -INFINITY;
    for (const auto& s : table.series) {
        for (double v : s) {
            if (!std::isfinite(v)) continue;
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    }
    if (!std::isfinite(ymin)) ymin = ymax = 0.0;
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) {
        ymin -= 0.5;
        ymax += 0.5;
    }

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << fixed(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"16\">" << escape(title) << "</text>\n";
    o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        const double fy = ymin + (ymax - ymin) * i / 4.0;
        o << "<text x=\"" << fixed(px(fx)) << "\" y=\"" << fixed(kTop + ph + 18)
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << tick(fx) << "</text>\n";
        o << "<text x=\"" << fixed(kLeft - 6) << "\" y=\"" << fixed(py(fy) + 4)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << tick(fy) << "</text>\n";
    }
    o << "<text x=\"" << fixed(kLeft + pw / 2) << "\" y=\"" << fixed(kHeight - 16)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">step</text>\n";
    o << "<text x=\"18\" y=\"" << fixed(kTop + ph / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"13\" transform=\"rotate(-90 18 " << fixed(kTop + ph / 2) << ")\">value</text>\n";

    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        const char* color = kColors[c % kColors.size()];
        o << "<polyline class=\"series\" data-name=\"" << escape(table.columns[c]) << "\" fill=\"none\" stroke=\""
          << color << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < table.steps.size(); ++i) {
            const double v = table.series[c][i];
            if (!std::isfinite(v)) continue;
            if (!first) o << ' ';
            o << fixed(px(table.steps[i])) << ',' << fixed(py(v));
            first = false;
        }
        o << "\"/>\n";

        const double ly = kTop + 10 + 20.0 * static_cast<double>(c);
        const double lx = kLeft + pw + 15;
        o << "<line x1=\"" << fixed(lx) << "\" y1=\"" << fixed(ly) << "\" x2=\"" << fixed(lx + 24) << "\" y2=\""
          << fixed(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << fixed(lx + 30) << "\" y=\"" << fixed(ly + 4)
          << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(table.columns[c]) << "</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace gridsel

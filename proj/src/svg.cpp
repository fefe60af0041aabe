#include "irtens/svg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace irtens {

namespace {

const char* kPalette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(4);
    ss << v;
    return ss.str();
}

}  // namespace

std::string auc_line_chart_svg(const ExperimentReport& report, int width, int height) {
    const auto methods = report.methods();
    const auto iterations = report.iterations();
    const double ml = 60, mr = 150, mt = 30, mb = 50;  // margins
    const double pw = width - ml - mr, ph = height - mt - mb;

    double lo = 1.0, hi = 0.0;
    for (const std::string& m : methods)
        for (int it : iterations) {
            const double v = report.mean_auc(m, it);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    if (!(hi > lo)) {
        lo = 0.0;
        hi = 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    lo = std::max(0.0, lo - pad);
    hi = std::min(1.0, hi + pad);

    const double x0 = static_cast<double>(iterations.empty() ? 1 : iterations.front());
    const double x1 = static_cast<double>(iterations.empty() ? 1 : iterations.back());
    auto sx = [&](double it) {
        return x1 > x0 ? ml + pw * (it - x0) / (x1 - x0) : ml + 0.5 * pw;
    };
    auto sy = [&](double v) { return mt + ph * (1.0 - (v - lo) / (hi - lo)); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << ml << "\" y=\"18\" font-family=\"sans-serif\" font-size=\"14\">"
        << (report.rows.empty() ? "" : report.rows.front().experiment)
        << ": mean AUC by iteration</text>\n";

    // axes
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << mt + ph << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
        << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 5; ++tick) {
        const double v = lo + (hi - lo) * tick / 5.0;
        const double y = sy(v);
        svg << "<line x1=\"" << ml - 4 << "\" y1=\"" << y << "\" x2=\"" << ml << "\" y2=\""
            << y << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << ml - 8 << "\" y=\"" << y + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << fmt(v)
            << "</text>\n";
    }
    for (int it : iterations) {
        const double x = sx(static_cast<double>(it));
        svg << "<line x1=\"" << x << "\" y1=\"" << mt + ph << "\" x2=\"" << x << "\" y2=\""
            << mt + ph + 4 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << x << "\" y=\"" << mt + ph + 18
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << it
            << "</text>\n";
    }
    svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">iteration"
        << "</text>\n";

    for (std::size_t m = 0; m < methods.size(); ++m) {
        const char* color = kPalette[m % 8];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (int it : iterations)
            svg << fmt(sx(static_cast<double>(it))) << ','
                << fmt(sy(report.mean_auc(methods[m], it))) << ' ';
        svg << "\"/>\n";
        const double ly = mt + 16.0 * static_cast<double>(m);
        svg << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw + 30
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << ml + pw + 35 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << methods[m] << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace irtens

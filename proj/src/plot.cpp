#include <algorithm>
#include <cmath>
#include <numeric>

#include "relmix/combiner.hpp"
#include "relmix/error.hpp"
#include "relmix/evaluation.hpp"

namespace relmix::eval {

namespace {

std::string escapeXml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

void writeScatterSvg(std::ostream& out, std::span<const double> xs, std::span<const double> ys,
                     std::span<const double> line, const PlotSpec& spec) {
    if (xs.size() != ys.size() || (!line.empty() && line.size() != xs.size()))
        throw Error("plot columns differ in length");
    constexpr double W = 640, H = 480, L = 70, R = 20, T = 40, B = 60;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    if (!xs.empty()) {
        auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
        x0 = *xmin;
        x1 = *xmax;
        y0 = *std::min_element(ys.begin(), ys.end());
        y1 = *std::max_element(ys.begin(), ys.end());
        for (double v : line) {
            y0 = std::min(y0, v);
            y1 = std::max(y1, v);
        }
    }
    if (x1 <= x0) x1 = x0 + 1;
    if (y1 <= y0) y1 = y0 + 1;
    auto px = [&](double v) { return L + (v - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double v) { return H - B - (v - y0) / (y1 - y0) * (H - T - B); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escapeXml(spec.title)
        << "</text>\n";
    out << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = x0 + (x1 - x0) * t / 4, fy = y0 + (y1 - y0) * t / 4;
        out << "<text x=\"" << num(px(fx)) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
            << combine::formatDouble(std::round(fx * 1000) / 1000) << "</text>\n";
        out << "<text x=\"" << L - 6 << "\" y=\"" << num(py(fy) + 4) << "\" text-anchor=\"end\" font-size=\"11\">"
            << combine::formatDouble(std::round(fy * 1000) / 1000) << "</text>\n";
    }
    out << "<text x=\"" << W / 2 << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\" font-size=\"13\">"
        << escapeXml(spec.xLabel) << "</text>\n";
    out << "<text x=\"16\" y=\"" << H / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
        << H / 2 << ")\">" << escapeXml(spec.yLabel) << "</text>\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << "<circle cx=\"" << num(px(xs[i])) << "\" cy=\"" << num(py(ys[i])) << "\" r=\"2.5\" fill=\"#1f5fa8\"/>\n";
    if (!line.empty()) {
        std::vector<std::size_t> order(xs.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
        out << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" points=\"";
        for (auto i : order) out << num(px(xs[i])) << ',' << num(py(line[i])) << ' ';
        out << "\"/>\n";
    }
    out << "</svg>\n";
}

}  // namespace relmix::eval

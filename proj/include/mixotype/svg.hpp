#pragma once

// Minimal SVG plotting: polylines in data coordinates, a frame with min/max
// tick labels, and text.

#include "mixotype/expr.hpp"
#include "mixotype/types.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace mixotype {

class SvgPlot {
public:
    SvgPlot(Rect view, std::string x_label, std::string y_label, int width = 640, int height = 480)
        : view_(view), x_label_(std::move(x_label)), y_label_(std::move(y_label)), w_(width), h_(height) {}

    void polyline(const std::vector<Point>& pts, const std::string& color, double stroke = 1.5, bool dashed = false) {
        if (pts.size() < 2) return;
        body_ << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << stroke << '"';
        if (dashed) body_ << " stroke-dasharray=\"6,4\"";
        body_ << " points=\"";
        for (const Point& p : pts) body_ << px(p.u) << ',' << py(p.v) << ' ';
        body_ << "\"/>\n";
    }

    void marker(Point p, const std::string& color, double r = 3.0) {
        body_ << "<circle cx=\"" << px(p.u) << "\" cy=\"" << py(p.v) << "\" r=\"" << r << "\" fill=\"" << color
              << "\"/>\n";
    }

    void label(double x_px, double y_px, const std::string& text, const std::string& color = "black") {
        body_ << "<text x=\"" << x_px << "\" y=\"" << y_px << "\" font-size=\"12\" fill=\"" << color << "\">"
              << escape(text) << "</text>\n";
    }

    std::string str() const {
        std::ostringstream os;
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_ << "\">\n";
        os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << w_ - 2 * kMargin << "\" height=\""
           << h_ - 2 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";
        os << "<g clip-path=\"url(#frame)\">\n" << body_.str() << "</g>\n";
        os << "<clipPath id=\"frame\"><rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << w_ - 2 * kMargin
           << "\" height=\"" << h_ - 2 * kMargin << "\"/></clipPath>\n";
        auto text = [&](double x, double y, const std::string& s, const char* anchor) {
            os << "<text x=\"" << x << "\" y=\"" << y << "\" font-size=\"12\" text-anchor=\"" << anchor << "\">"
               << escape(s) << "</text>\n";
        };
        text(kMargin, h_ - kMargin + 16, expr::format_double(view_.u_min), "start");
        text(w_ - kMargin, h_ - kMargin + 16, expr::format_double(view_.u_max), "end");
        text(kMargin - 4, h_ - kMargin, expr::format_double(view_.v_min), "end");
        text(kMargin - 4, kMargin + 10, expr::format_double(view_.v_max), "end");
        text(w_ / 2.0, h_ - 12, x_label_, "middle");
        text(14, h_ / 2.0, y_label_, "middle");
        os << "</svg>\n";
        return os.str();
    }

    /// Best effort: returns false instead of throwing.
    bool save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) return false;
        out << str();
        return static_cast<bool>(out);
    }

private:
    static constexpr double kMargin = 48.0;

    double px(double u) const { return kMargin + (u - view_.u_min) / (view_.u_max - view_.u_min) * (w_ - 2 * kMargin); }
    double py(double v) const { return h_ - kMargin - (v - view_.v_min) / (view_.v_max - view_.v_min) * (h_ - 2 * kMargin); }

    static std::string escape(const std::string& s) {
        std::string out;
        for (char c : s) {
            switch (c) {
                case '<': out += "&lt;"; break;
                case '>': out += "&gt;"; break;
                case '&': out += "&amp;"; break;
                default: out += c;
            }
        }
        return out;
    }

    Rect view_;
    std::string x_label_, y_label_;
    int w_, h_;
    std::ostringstream body_;
};

}  // namespace mixotype

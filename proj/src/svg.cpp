/*
 * Copyright 2026 The vecaxis Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "vecaxis/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace vecaxis {

namespace {

constexpr double kMargin = 60.0;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                          "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string xml_escape(const std::string& s) {
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

std::string num(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

struct Frame {
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    double w, h;

    void include(double x, double y) {
        x0 = std::min(x0, x);
        x1 = std::max(x1, x);
        y0 = std::min(y0, y);
        y1 = std::max(y1, y);
    }
    void pad() {
        if (x1 - x0 < 1e-12) { x0 -= 0.5; x1 += 0.5; }
        if (y1 - y0 < 1e-12) { y0 -= 0.5; y1 += 0.5; }
        const double px = (x1 - x0) * 0.05, py = (y1 - y0) * 0.05;
        x0 -= px; x1 += px; y0 -= py; y1 += py;
    }
    double sx(double x) const { return kMargin + (x - x0) / (x1 - x0) * (w - 2 * kMargin); }
    double sy(double y) const { return h - kMargin - (y - y0) / (y1 - y0) * (h - 2 * kMargin); }
};

Frame make_frame(const SvgOptions& o) {
    Frame f;
    f.w = o.width;
    f.h = o.height;
    f.x0 = f.y0 = std::numeric_limits<double>::infinity();
    f.x1 = f.y1 = -std::numeric_limits<double>::infinity();
    return f;
}

void open_svg(std::ostringstream& out, const SvgOptions& o) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o.width << "\" height=\"" << o.height
        << "\" viewBox=\"0 0 " << o.width << ' ' << o.height << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void axes_box(std::ostringstream& out, const Frame& f, const std::string& xlabel, const std::string& ylabel) {
    out << "<rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << f.w - 2 * kMargin << "\" height=\""
        << f.h - 2 * kMargin << "\" fill=\"none\" stroke=\"#444\"/>\n";
    if (f.x0 < 0 && f.x1 > 0) {
        out << "<line x1=\"" << num(f.sx(0)) << "\" y1=\"" << kMargin << "\" x2=\"" << num(f.sx(0)) << "\" y2=\""
            << f.h - kMargin << "\" stroke=\"#ccc\"/>\n";
    }
    if (f.y0 < 0 && f.y1 > 0) {
        out << "<line x1=\"" << kMargin << "\" y1=\"" << num(f.sy(0)) << "\" x2=\"" << f.w - kMargin << "\" y2=\""
            << num(f.sy(0)) << "\" stroke=\"#ccc\"/>\n";
    }
    out << "<text x=\"" << f.w / 2 << "\" y=\"" << f.h - kMargin / 3 << "\" text-anchor=\"middle\" font-size=\"13\">"
        << xml_escape(xlabel) << "</text>\n";
    out << "<text x=\"" << kMargin / 3 << "\" y=\"" << f.h / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
        << "transform=\"rotate(-90 " << kMargin / 3 << ' ' << f.h / 2 << ")\">" << xml_escape(ylabel) << "</text>\n";
    for (int t = 0; t <= 4; ++t) {
        const double xv = f.x0 + (f.x1 - f.x0) * t / 4.0;
        const double yv = f.y0 + (f.y1 - f.y0) * t / 4.0;
        out << "<text x=\"" << num(f.sx(xv)) << "\" y=\"" << f.h - kMargin + 14 << "\" text-anchor=\"middle\">"
            << num(xv) << "</text>\n";
        out << "<text x=\"" << kMargin - 4 << "\" y=\"" << num(f.sy(yv)) << "\" text-anchor=\"end\">" << num(yv)
            << "</text>\n";
    }
}

void point(std::ostringstream& out, const Frame& f, double x, double y, const std::string& label, const char* color,
           bool show_label) {
    out << "<circle cx=\"" << num(f.sx(x)) << "\" cy=\"" << num(f.sy(y)) << "\" r=\"3\" fill=\"" << color
        << "\"><title>" << xml_escape(label) << " (" << num(x) << ", " << num(y) << ")</title></circle>\n";
    if (show_label) {
        out << "<text x=\"" << num(f.sx(x) + 5) << "\" y=\"" << num(f.sy(y) - 4) << "\">" << xml_escape(label)
            << "</text>\n";
    }
}

std::string scatter(const std::vector<std::string>& items, const Matrix& coords, const std::string& xlabel,
                    const std::string& ylabel, const AnalogyDecoration* analogy, const SvgOptions& o) {
    Frame f = make_frame(o);
    for (std::size_t i = 0; i < items.size(); ++i) f.include(coords(i, 0), coords(i, 1));
    if (items.empty()) f.include(0, 0), f.include(1, 1);
    f.pad();

    std::ostringstream out;
    open_svg(out, o);
    out << "<clipPath id=\"plot\"><rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << f.w - 2 * kMargin
        << "\" height=\"" << f.h - 2 * kMargin << "\"/></clipPath>\n";
    if (analogy) {
        // Bands are strips between lines x + y = c, c = k * w * sqrt(2).
        const double step = analogy->band_width * std::numbers::sqrt2;
        const double lo = std::floor((f.x0 + f.y0) / step);
        const double hi = std::ceil((f.x1 + f.y1) / step);
        out << "<g clip-path=\"url(#plot)\">\n";
        if (hi - lo <= 400) {
            for (double k = lo; k <= hi; ++k) {
                const double c = k * step;
                out << "<line x1=\"" << num(f.sx(f.x0)) << "\" y1=\"" << num(f.sy(c - f.x0)) << "\" x2=\""
                    << num(f.sx(f.x1)) << "\" y2=\"" << num(f.sy(c - f.x1)) << "\" stroke=\"#eee\"/>\n";
            }
        }
        const double a = std::min(f.x0, f.y0), b = std::max(f.x1, f.y1);
        out << "<line x1=\"" << num(f.sx(a)) << "\" y1=\"" << num(f.sy(a)) << "\" x2=\"" << num(f.sx(b)) << "\" y2=\""
            << num(f.sy(b)) << "\" stroke=\"#999\" stroke-dasharray=\"6 4\"/>\n</g>\n";
    }
    axes_box(out, f, xlabel, ylabel);
    for (std::size_t i = 0; i < items.size(); ++i) {
        const bool excluded = analogy && analogy->entries[i].excluded;
        point(out, f, coords(i, 0), coords(i, 1), items[i], excluded ? "#999" : kPalette[0], o.show_labels);
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace

std::string render_svg(const CartesianProjection& p, const AnalogyDecoration* analogy, const SvgOptions& o) {
    return scatter(p.items, p.coords, p.axes.at(0).display_label, p.axes.at(1).display_label, analogy, o);
}

std::string render_svg(const LearnedView& v, const SvgOptions& o) {
    if (v.coords.cols() < 2) {
        Matrix padded(v.coords.rows(), 2);
        for (std::size_t i = 0; i < v.coords.rows(); ++i) padded(i, 0) = v.coords(i, 0);
        return scatter(v.items, padded, v.axis_labels.at(0), "", nullptr, o);
    }
    return scatter(v.items, v.coords, v.axis_labels.at(0), v.axis_labels.at(1), nullptr, o);
}

std::string render_svg(const ComparisonResult& r, const SvgOptions& o) {
    Frame f = make_frame(o);
    for (std::size_t i = 0; i < r.items.size(); ++i) {
        f.include(r.coords_a(i, 0), r.coords_a(i, 1));
        f.include(r.coords_b(i, 0), r.coords_b(i, 1));
    }
    if (r.items.empty()) f.include(0, 0), f.include(1, 1);
    f.pad();
    std::ostringstream out;
    open_svg(out, o);
    axes_box(out, f, r.axes.at(0).display_label, r.axes.at(1).display_label);
    for (std::size_t i = 0; i < r.items.size(); ++i) {
        const double ax = r.coords_a(i, 0), ay = r.coords_a(i, 1), bx = r.coords_b(i, 0), by = r.coords_b(i, 1);
        out << "<line x1=\"" << num(f.sx(ax)) << "\" y1=\"" << num(f.sy(ay)) << "\" x2=\"" << num(f.sx(bx))
            << "\" y2=\"" << num(f.sy(by)) << "\" stroke=\"#888\"/>\n";
        point(out, f, ax, ay, r.items[i], kPalette[0], o.show_labels);
        point(out, f, bx, by, r.items[i], kPalette[1], false);
    }
    out << "<text x=\"" << kMargin << "\" y=\"" << kMargin / 2 << "\"><tspan fill=\"" << kPalette[0] << "\">"
        << xml_escape(r.space_a) << "</tspan> / <tspan fill=\"" << kPalette[1] << "\">" << xml_escape(r.space_b)
        << "</tspan></text>\n</svg>\n";
    return out.str();
}

std::string render_svg(const PolarProjection& p, const SvgOptions& o) {
    const double cx = o.width / 2.0, cy = o.height / 2.0;
    const double radius = std::min(o.width, o.height) / 2.0 - kMargin;
    const std::size_t k = p.axes.size();
    auto angle = [&](std::size_t j) { return -std::numbers::pi / 2 + 2 * std::numbers::pi * double(j) / double(k); };

    std::ostringstream out;
    open_svg(out, o);
    for (double ring : {0.25, 0.5, 0.75, 1.0}) {
        out << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << num(ring * radius)
            << "\" fill=\"none\" stroke=\"#eee\"/>\n";
    }
    for (std::size_t j = 0; j < k; ++j) {
        const double ex = cx + radius * std::cos(angle(j)), ey = cy + radius * std::sin(angle(j));
        out << "<line x1=\"" << cx << "\" y1=\"" << cy << "\" x2=\"" << num(ex) << "\" y2=\"" << num(ey)
            << "\" stroke=\"#bbb\"/>\n";
        const double lx = cx + (radius + 16) * std::cos(angle(j)), ly = cy + (radius + 16) * std::sin(angle(j));
        out << "<text x=\"" << num(lx) << "\" y=\"" << num(ly) << "\" text-anchor=\"middle\" font-size=\"12\">"
            << xml_escape(p.axes[j].display_label) << "</text>\n";
    }
    for (std::size_t i = 0; i < p.items.size(); ++i) {
        const char* color = kPalette[i % std::size(kPalette)];
        out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"" << color << "\" points=\"";
        for (std::size_t j = 0; j < k; ++j) {
            const double r = p.radial(i, j) * radius;
            out << (j ? " " : "") << num(cx + r * std::cos(angle(j))) << ',' << num(cy + r * std::sin(angle(j)));
        }
        out << "\"><title>" << xml_escape(p.items[i]) << "</title></polygon>\n";
        out << "<text x=\"" << o.width - kMargin << "\" y=\"" << kMargin / 2 + 14.0 * double(i)
            << "\" text-anchor=\"end\" fill=\"" << color << "\">" << xml_escape(p.items[i]) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace vecaxis

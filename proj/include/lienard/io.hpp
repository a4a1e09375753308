#pragma once

// Deterministic text output: shortest round-trip float formatting, CSV
// writers with LF line endings, and a small self-contained SVG plotter.
// Nothing here consults the clock, the locale, or the environment, so a
// repeated run produces byte-identical files.

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lienard/dynamics.hpp"
#include "lienard/geometry.hpp"

namespace lienard {

// Shortest decimal string that parses back to exactly v.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

inline void write_curve_csv(std::ostream& os, const ClosedCurve& curve) {
    os << "x,y\n";
    for (const auto& p : curve.points)
        os << format_double(p.x) << ',' << format_double(p.y) << '\n';
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,x,y\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        os << format_double(traj.times[i]) << ',' << format_double(traj.states[i].x)
           << ',' << format_double(traj.states[i].y) << '\n';
}

inline void write_samples_csv(std::ostream& os, const std::string& header,
                              const std::vector<std::pair<double, double>>& rows) {
    os << header << '\n';
    for (const auto& [a, b] : rows)
        os << format_double(a) << ',' << format_double(b) << '\n';
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << text;
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

namespace detail {

inline std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace detail

// Minimal SVG line plotter: fixed palette, shared data-space bounding box
// with 5% padding, y axis pointing up, legend in the top-right corner.
class SvgPlot {
public:
    SvgPlot(int width = 800, int height = 600, std::string title = "")
        : width_(width), height_(height), title_(std::move(title)) {}

    void add_curve(std::vector<Point> pts, std::string label, bool closed = false,
                   double stroke_width = 1.5) {
        if (pts.empty()) return;
        for (const auto& p : pts) grow(p);
        series_.push_back({std::move(pts), std::move(label), closed, stroke_width});
    }

    void add_marker(Point p, std::string label) {
        grow(p);
        markers_.push_back({p, std::move(label)});
    }

    std::string render() const {
        if (series_.empty() && markers_.empty())
            throw std::runtime_error("SvgPlot: nothing to draw");
        double lox = lo_.x, hix = hi_.x, loy = lo_.y, hiy = hi_.y;
        const double padx = std::max(0.05 * (hix - lox), 1e-9);
        const double pady = std::max(0.05 * (hiy - loy), 1e-9);
        lox -= padx;
        hix += padx;
        loy -= pady;
        hiy += pady;
        const double ml = 56, mr = 16, mt = title_.empty() ? 16 : 36, mb = 40;
        const double pw = width_ - ml - mr;
        const double ph = height_ - mt - mb;
        auto sx = [&](double x) { return ml + (x - lox) / (hix - lox) * pw; };
        auto sy = [&](double y) { return mt + (hiy - y) / (hiy - loy) * ph; };

        std::ostringstream os;
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_
           << "\" height=\"" << height_ << "\" viewBox=\"0 0 " << width_ << ' '
           << height_ << "\">\n";
        os << "<rect width=\"" << width_ << "\" height=\"" << height_
           << "\" fill=\"#ffffff\"/>\n";
        os << "<rect x=\"" << fm(ml) << "\" y=\"" << fm(mt) << "\" width=\"" << fm(pw)
           << "\" height=\"" << fm(ph)
           << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
        if (!title_.empty())
            os << "<text x=\"" << fm(width_ / 2.0)
               << "\" y=\"22\" font-family=\"sans-serif\" font-size=\"15\" "
                  "text-anchor=\"middle\">"
               << detail::xml_escape(title_) << "</text>\n";
        // axis lines through the origin when visible
        if (lox < 0.0 && hix > 0.0)
            os << "<line x1=\"" << fm(sx(0)) << "\" y1=\"" << fm(mt) << "\" x2=\""
               << fm(sx(0)) << "\" y2=\"" << fm(mt + ph)
               << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
        if (loy < 0.0 && hiy > 0.0)
            os << "<line x1=\"" << fm(ml) << "\" y1=\"" << fm(sy(0)) << "\" x2=\""
               << fm(ml + pw) << "\" y2=\"" << fm(sy(0))
               << "\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
        // corner coordinate labels
        os << label_text(ml, height_ - 12, lox, "start");
        os << label_text(ml + pw, height_ - 12, hix, "end");
        os << vlabel_text(ml - 6, mt + ph, loy);
        os << vlabel_text(ml - 6, mt + 12, hiy);

        for (std::size_t i = 0; i < series_.size(); ++i) {
            const auto& s = series_[i];
            os << (s.closed ? "<polygon" : "<polyline") << " points=\"";
            for (std::size_t j = 0; j < s.pts.size(); ++j) {
                if (j) os << ' ';
                os << fm(sx(s.pts[j].x)) << ',' << fm(sy(s.pts[j].y));
            }
            os << "\" fill=\"none\" stroke=\"" << color(i) << "\" stroke-width=\""
               << fm(s.stroke_width) << "\"/>\n";
        }
        for (std::size_t i = 0; i < markers_.size(); ++i) {
            const auto& m = markers_[i];
            os << "<circle cx=\"" << fm(sx(m.p.x)) << "\" cy=\"" << fm(sy(m.p.y))
               << "\" r=\"3\" fill=\"" << color(series_.size() + i) << "\"/>\n";
        }
        // legend
        double ly = mt + 14;
        const double lx = ml + pw - 150;
        for (std::size_t i = 0; i < series_.size(); ++i) {
            os << "<line x1=\"" << fm(lx) << "\" y1=\"" << fm(ly - 4) << "\" x2=\""
               << fm(lx + 22) << "\" y2=\"" << fm(ly - 4) << "\" stroke=\"" << color(i)
               << "\" stroke-width=\"2\"/>\n";
            os << "<text x=\"" << fm(lx + 28) << "\" y=\"" << fm(ly)
               << "\" font-family=\"sans-serif\" font-size=\"12\">"
               << detail::xml_escape(series_[i].label) << "</text>\n";
            ly += 16;
        }
        for (std::size_t i = 0; i < markers_.size(); ++i) {
            os << "<circle cx=\"" << fm(lx + 11) << "\" cy=\"" << fm(ly - 4)
               << "\" r=\"3\" fill=\"" << color(series_.size() + i) << "\"/>\n";
            os << "<text x=\"" << fm(lx + 28) << "\" y=\"" << fm(ly)
               << "\" font-family=\"sans-serif\" font-size=\"12\">"
               << detail::xml_escape(markers_[i].label) << "</text>\n";
            ly += 16;
        }
        os << "</svg>\n";
        return os.str();
    }

private:
    struct Series {
        std::vector<Point> pts;
        std::string label;
        bool closed = false;
        double stroke_width = 1.5;
    };
    struct Marker {
        Point p;
        std::string label;
    };

    static std::string fm(double v) { return format_double(v); }

    static const char* color(std::size_t i) {
        static constexpr std::array<const char*, 8> palette = {
            "#1f77b4", "#d62728", "#2ca02c", "#9467bd",
            "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
        return palette[i % palette.size()];
    }

    std::string label_text(double x, double y, double v, const char* anchor) const {
        std::ostringstream os;
        os << "<text x=\"" << fm(x) << "\" y=\"" << fm(y)
           << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"" << anchor
           << "\">" << short_num(v) << "</text>\n";
        return os.str();
    }

    std::string vlabel_text(double x, double y, double v) const {
        std::ostringstream os;
        os << "<text x=\"" << fm(x) << "\" y=\"" << fm(y)
           << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
           << short_num(v) << "</text>\n";
        return os.str();
    }

    static std::string short_num(double v) {
        std::array<char, 32> buf{};
        const auto res =
            std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed, 3);
        return std::string(buf.data(), res.ptr);
    }

    void grow(Point p) {
        if (!seen_) {
            lo_ = hi_ = p;
            seen_ = true;
            return;
        }
        lo_.x = std::min(lo_.x, p.x);
        lo_.y = std::min(lo_.y, p.y);
        hi_.x = std::max(hi_.x, p.x);
        hi_.y = std::max(hi_.y, p.y);
    }

    int width_, height_;
    std::string title_;
    std::vector<Series> series_;
    std::vector<Marker> markers_;
    Point lo_, hi_;
    bool seen_ = false;
};

}  // namespace lienard

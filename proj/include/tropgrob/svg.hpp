#pragma once

// Deterministic SVG rendering of two-dimensional polyhedral complexes.
// All geometry is computed exactly; floating point appears only when the
// final screen coordinates are printed (fixed two-decimal format), so a given
// complex always renders to identical bytes.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tropgrob/polyhedra.hpp"

namespace tropgrob {

struct RenderSpec {
    std::optional<size_t> slice_coord;            // pin this coordinate to 0 first
    bool labels = true;
    std::optional<std::array<Rat, 4>> viewport;   // xmin, xmax, ymin, ymax
};

namespace detail {

inline double rat_double(const Rat& q) { return q.convert_to<double>(); }

inline std::string fmt2(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    std::string s(buf);
    if (s == "-0.00") s = "0.00";
    return s;
}

inline std::vector<QVec> vertex_points(const QPolyhedron& p) {
    std::vector<QVec> out;
    for (const auto& f : p.all_faces())
        if (f.dim() == 0) out.push_back(f.relint_point());
    std::sort(out.begin(), out.end());
    return out;
}

inline std::string xml_escape(const std::string& s) {
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

}  // namespace detail

inline std::string render_svg(const PolyhedralComplex& input, const RenderSpec& spec = {}) {
    PolyhedralComplex K =
        spec.slice_coord ? input.substitute_coord(*spec.slice_coord, Rat(0)) : input;
    if (K.ambient != 2)
        throw NotRenderable("can only render complexes of ambient dimension 2, got " +
                            std::to_string(K.ambient));

    // Exact viewport: the default box, grown to cover every vertex and every
    // cell representative with one unit of padding.
    Rat xmin(-5), xmax(5), ymin(-5), ymax(5);
    std::vector<std::vector<QVec>> cell_vertices(K.cells.size());
    for (size_t i = 0; i < K.cells.size(); ++i) {
        cell_vertices[i] = detail::vertex_points(K.cells[i]);
        std::vector<QVec> pts = cell_vertices[i];
        pts.push_back(K.cells[i].relint_point());
        for (const QVec& p : pts) {
            xmin = std::min(xmin, Rat(p[0] - 1));
            xmax = std::max(xmax, Rat(p[0] + 1));
            ymin = std::min(ymin, Rat(p[1] - 1));
            ymax = std::max(ymax, Rat(p[1] + 1));
        }
    }
    if (spec.viewport) {
        xmin = (*spec.viewport)[0];
        xmax = (*spec.viewport)[1];
        ymin = (*spec.viewport)[2];
        ymax = (*spec.viewport)[3];
    }
    QPolyhedron box = QPolyhedron::from_constraints(2,
                                                    {{{Rat(-1), Rat(0)}, -xmin},
                                                     {{Rat(1), Rat(0)}, xmax},
                                                     {{Rat(0), Rat(-1)}, -ymin},
                                                     {{Rat(0), Rat(1)}, ymax}},
                                                    {});

    const double W = 480, H = 480, M = 30;
    double x0 = detail::rat_double(xmin), x1 = detail::rat_double(xmax);
    double y0 = detail::rat_double(ymin), y1 = detail::rat_double(ymax);
    auto sx = [&](double x) { return M + (x - x0) / (x1 - x0) * (W - 2 * M); };
    auto sy = [&](double y) { return H - M - (y - y0) / (y1 - y0) * (H - 2 * M); };
    auto px = [&](const QVec& p) {
        return std::pair<double, double>(sx(detail::rat_double(p[0])),
                                         sy(detail::rat_double(p[1])));
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" "
           "viewBox=\"0 0 480 480\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"480\" height=\"480\" fill=\"#ffffff\"/>\n";

    // Axes, clipped to the viewport.
    auto line = [&](double ax, double ay, double bx, double by, const std::string& style) {
        svg << "<line x1=\"" << detail::fmt2(ax) << "\" y1=\"" << detail::fmt2(ay) << "\" x2=\""
            << detail::fmt2(bx) << "\" y2=\"" << detail::fmt2(by) << "\" " << style << "/>\n";
    };
    const std::string axis_style =
        "stroke=\"#bbbbbb\" stroke-width=\"1\" stroke-dasharray=\"4 3\"";
    if (ymin <= Rat(0) && Rat(0) <= ymax) line(sx(x0), sy(0), sx(x1), sy(0), axis_style);
    if (xmin <= Rat(0) && Rat(0) <= xmax) line(sx(0), sy(y0), sx(0), sy(y1), axis_style);

    const std::vector<std::string> palette = {"#c6dbef", "#fdd0a2", "#c7e9c0",
                                              "#dadaeb", "#fee0d2", "#e0e0e0"};

    struct LabelAt {
        double x, y;
        std::string text;
    };
    std::vector<LabelAt> labels;
    auto queue_label = [&](size_t i, double lx, double ly) {
        if (!spec.labels || i >= K.labels.size() || K.labels[i].empty()) return;
        std::string t = K.labels[i];
        if (t.size() > 24) t = t.substr(0, 24) + "...";
        labels.push_back({lx, ly, std::move(t)});
    };

    // Filled regions first.
    for (size_t i = 0; i < K.cells.size(); ++i) {
        if (K.cells[i].dim() != 2) continue;
        QPolyhedron clipped = K.cells[i].intersect(box);
        if (clipped.is_empty() || clipped.dim() != 2) continue;
        std::vector<QVec> verts = detail::vertex_points(clipped);
        if (verts.size() < 3) continue;
        double cx = 0, cy = 0;
        std::vector<std::pair<double, double>> pts;
        for (const QVec& v : verts) {
            auto [a, b] = px(v);
            pts.push_back({a, b});
            cx += a;
            cy += b;
        }
        cx /= pts.size();
        cy /= pts.size();
        std::sort(pts.begin(), pts.end(), [&](const auto& p, const auto& q) {
            return std::atan2(p.second - cy, p.first - cx) <
                   std::atan2(q.second - cy, q.first - cx);
        });
        svg << "<polygon points=\"";
        for (size_t j = 0; j < pts.size(); ++j) {
            if (j) svg << " ";
            svg << detail::fmt2(pts[j].first) << "," << detail::fmt2(pts[j].second);
        }
        svg << "\" fill=\"" << palette[i % palette.size()]
            << "\" stroke=\"#555555\" stroke-width=\"1\"/>\n";
        if (K.maximal[i]) {
            auto [lx, ly] = px(clipped.relint_point());
            queue_label(i, lx, ly);
        }
    }

    // Edges: segments as plain strokes, clipped-away unbounded ends as arrows.
    for (size_t i = 0; i < K.cells.size(); ++i) {
        if (K.cells[i].dim() != 1) continue;
        QPolyhedron clipped = K.cells[i].intersect(box);
        if (clipped.is_empty() || clipped.dim() != 1) continue;
        std::vector<QVec> ends = detail::vertex_points(clipped);
        if (ends.size() != 2) continue;
        auto point_key = [](const QVec& v) {
            std::string s;
            for (const Rat& q : v) s += rat_str(q) + ",";
            return s;
        };
        std::set<std::string> own;  // true endpoints of the unclipped cell
        for (const QVec& v : cell_vertices[i]) own.insert(point_key(v));
        auto [ax, ay] = px(ends[0]);
        auto [bx, by] = px(ends[1]);
        line(ax, ay, bx, by, "stroke=\"#222222\" stroke-width=\"2\"");
        for (int e = 0; e < 2; ++e) {
            if (own.count(point_key(ends[e]))) continue;  // real endpoint, no arrow
            double tx = e == 0 ? ax : bx, ty = e == 0 ? ay : by;
            double fx = e == 0 ? bx : ax, fy = e == 0 ? by : ay;
            double dx = tx - fx, dy = ty - fy;
            double len = std::sqrt(dx * dx + dy * dy);
            if (len < 1e-9) continue;
            dx /= len;
            dy /= len;
            double px1 = -dy, py1 = dx;
            svg << "<polygon points=\"" << detail::fmt2(tx) << "," << detail::fmt2(ty) << " "
                << detail::fmt2(tx - 10 * dx + 4 * px1) << ","
                << detail::fmt2(ty - 10 * dy + 4 * py1) << " "
                << detail::fmt2(tx - 10 * dx - 4 * px1) << ","
                << detail::fmt2(ty - 10 * dy - 4 * py1) << "\" fill=\"#222222\"/>\n";
        }
        if (K.maximal[i]) {
            auto [lx, ly] = px(clipped.relint_point());
            queue_label(i, lx, ly - 6);
        }
    }

    // Vertices.
    for (size_t i = 0; i < K.cells.size(); ++i) {
        if (K.cells[i].dim() != 0) continue;
        const QVec& v = K.cells[i].relint_point();
        if (!box.contains(v)) continue;
        auto [ax, ay] = px(v);
        svg << "<circle cx=\"" << detail::fmt2(ax) << "\" cy=\"" << detail::fmt2(ay)
            << "\" r=\"3\" fill=\"#222222\"/>\n";
        if (K.maximal[i]) queue_label(i, ax + 6, ay - 6);
    }

    for (const LabelAt& l : labels)
        svg << "<text x=\"" << detail::fmt2(l.x) << "\" y=\"" << detail::fmt2(l.y)
            << "\" font-family=\"monospace\" font-size=\"11\" fill=\"#222222\">"
            << detail::xml_escape(l.text) << "</text>\n";

    svg << "</svg>\n";
    return svg.str();
}

}  // namespace tropgrob

#include "geoweb/svg.hpp"

#include <cmath>
#include <cstdio>

#include "geoweb/errors.hpp"

namespace geoweb {

namespace {

// Two decimals on a canvas hundreds of pixels wide keeps files small and
// the bytes stable across platforms.
std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

const char* kStyle =
    "  <style>\n"
    "    .frame{fill:none;stroke:#999;stroke-width:1}\n"
    "    .wall{fill:none;stroke:#000;stroke-width:1.5}\n"
    "    .caustic{fill:none;stroke:#c22;stroke-width:1.2}\n"
    "    .chord{fill:none;stroke:#26c;stroke-width:0.8}\n"
    "    .leaf{fill:none;stroke:#282;stroke-width:0.8}\n"
    "    .net{fill:none;stroke:#857;stroke-width:0.8}\n"
    "    .point{fill:#26c;stroke:none}\n"
    "  </style>\n";

} // namespace

SvgCanvas::SvgCanvas(double x0, double x1, double y0, double y1, int width_px)
    : x0_(x0), x1_(x1), y0_(y0), y1_(y1), w_(width_px) {
    if (!(x0 < x1) || !(y0 < y1) || width_px < 16)
        throw MalformedArtifact("svg canvas needs an ordered view box and a sane width");
    h_ = (int)std::lround(width_px * (y1 - y0) / (x1 - x0));
    if (h_ < 1) h_ = 1;
}

std::pair<double, double> SvgCanvas::map(double x, double y) const {
    return {(x - x0_) / (x1_ - x0_) * w_, (y1_ - y) / (y1_ - y0_) * h_};
}

void SvgCanvas::begin_layer(const std::string& id) {
    body_ += "  <g id=\"" + id + "\">\n";
    ++open_layers_;
}

void SvgCanvas::end_layer() {
    if (open_layers_ <= 0) throw MalformedArtifact("svg layer close without open");
    body_ += "  </g>\n";
    --open_layers_;
}

void SvgCanvas::polyline(const std::vector<std::pair<double, double>>& pts,
                         const std::string& style_class, bool closed) {
    if (pts.size() < 2) return;
    body_ += closed ? "    <polygon class=\"" : "    <polyline class=\"";
    body_ += style_class + "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto [x, y] = map(pts[i].first, pts[i].second);
        if (i) body_ += ' ';
        body_ += px(x) + "," + px(y);
    }
    body_ += "\"/>\n";
}

void SvgCanvas::circle(double x, double y, double radius_px, const std::string& style_class) {
    auto [cx, cy] = map(x, y);
    body_ += "    <circle class=\"" + style_class + "\" cx=\"" + px(cx) + "\" cy=\"" +
             px(cy) + "\" r=\"" + px(radius_px) + "\"/>\n";
}

std::string SvgCanvas::finish() {
    if (open_layers_ != 0) throw MalformedArtifact("svg finished with an open layer");
    std::string head = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                       std::to_string(w_) + "\" height=\"" + std::to_string(h_) +
                       "\" viewBox=\"0 0 " + std::to_string(w_) + " " +
                       std::to_string(h_) + "\">\n";
    return head + kStyle + body_ + "</svg>\n";
}

} // namespace geoweb

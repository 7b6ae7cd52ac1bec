#pragma once

// Minimal deterministic SVG assembly: fixed header, fixed number
// formatting, elements emitted in call order. Identical draw calls give
// byte-identical documents, which the artifact tests rely on.

#include <string>
#include <utility>
#include <vector>

namespace geoweb {

class SvgCanvas {
  public:
    // View rectangle in world coordinates mapped onto a pixel canvas of
    // the given width; the height follows the aspect ratio and world y
    // points up.
    SvgCanvas(double x0, double x1, double y0, double y1, int width_px);

    void begin_layer(const std::string& id);
    void end_layer();
    void polyline(const std::vector<std::pair<double, double>>& pts,
                  const std::string& style_class, bool closed = false);
    void circle(double x, double y, double radius_px, const std::string& style_class);

    std::string finish();

  private:
    std::pair<double, double> map(double x, double y) const;

    double x0_, x1_, y0_, y1_;
    int w_, h_;
    std::string body_;
    int open_layers_ = 0;
};

} // namespace geoweb

#include "svg_render.hpp"

#include <cstdio>
#include <sstream>

namespace wsplan {

namespace {

const char* kPathColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                             "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
const char* kRegionColors[] = {"#c6dbef", "#fdd0a2", "#c7e9c0", "#fcbba1", "#dadaeb",
                               "#e7cb94", "#f7b6d2", "#d9d9d9", "#dbdb8d", "#9edae5"};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

class SvgWriter {
  public:
    SvgWriter(const Bounds& bounds, double scale) : bounds_(bounds), scale_(scale) {
        width_ = bounds.width() * scale;
        height_ = bounds.height() * scale;
        out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(width_)
             << "\" height=\"" << fmt(height_) << "\" viewBox=\"0 0 " << fmt(width_) << " "
             << fmt(height_) << "\">\n";
    }

    std::string x(double wx) const { return fmt((wx - bounds_.xmin) * scale_); }
    std::string y(double wy) const { return fmt(height_ - (wy - bounds_.ymin) * scale_); }

    void polygon(const std::vector<Point>& pts, const std::string& fill, const std::string& stroke,
                 double stroke_width, double opacity = 1.0) {
        out_ << "  <polygon points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) out_ << " ";
            out_ << x(pts[i].x) << "," << y(pts[i].y);
        }
        out_ << "\" fill=\"" << fill << "\" stroke=\"" << stroke << "\" stroke-width=\""
             << fmt(stroke_width) << "\"";
        if (opacity < 1.0) out_ << " fill-opacity=\"" << fmt(opacity) << "\"";
        out_ << "/>\n";
    }

    void polyline(const std::vector<Point>& pts, const std::string& stroke, double stroke_width,
                  double opacity = 1.0) {
        out_ << "  <polyline points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) out_ << " ";
            out_ << x(pts[i].x) << "," << y(pts[i].y);
        }
        out_ << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << fmt(stroke_width)
             << "\"";
        if (opacity < 1.0) out_ << " stroke-opacity=\"" << fmt(opacity) << "\"";
        out_ << "/>\n";
    }

    void circle(const Point& c, double r, const std::string& fill, double opacity = 1.0) {
        out_ << "  <circle cx=\"" << x(c.x) << "\" cy=\"" << y(c.y) << "\" r=\"" << fmt(r * scale_)
             << "\" fill=\"" << fill << "\"";
        if (opacity < 1.0) out_ << " fill-opacity=\"" << fmt(opacity) << "\"";
        out_ << "/>\n";
    }

    std::string finish() {
        out_ << "</svg>\n";
        return out_.str();
    }

  private:
    Bounds bounds_;
    double scale_;
    double width_, height_;
    std::ostringstream out_;
};

} // namespace

std::string render_svg(const Scene& scene, const KeypointTrajectory* trajectory,
                       const RobotModel* model, const Decomposition* decomposition,
                       const RenderOptions& options) {
    SvgWriter svg(scene.bounds(), options.pixels_per_meter);

    // Canvas and bounds frame.
    svg.polygon({scene.bounds().corner(0), scene.bounds().corner(1), scene.bounds().corner(2),
                 scene.bounds().corner(3)},
                "#ffffff", "#333333", 1.5);

    if (options.draw_regions && decomposition) {
        for (const FreeRegion& region : decomposition->regions) {
            const char* fill =
                kRegionColors[region.code % (sizeof(kRegionColors) / sizeof(kRegionColors[0]))];
            for (int t : region.triangles) {
                const Triangle& tr = decomposition->triangulation.triangles()[static_cast<std::size_t>(t)];
                std::vector<Point> pts;
                for (int j = 0; j < 3; ++j)
                    pts.push_back(
                        decomposition->triangulation.vertices()[static_cast<std::size_t>(tr.v[j])].p);
                svg.polygon(pts, fill, fill, 0.2, 0.8);
            }
        }
    }

    for (const Polygon& obs : scene.obstacles())
        svg.polygon(obs.vertices(), "#555555", "#222222", 1.0);

    if (trajectory && !trajectory->states.empty()) {
        const std::size_t kpts = trajectory->states.front().positions.size();

        if (model && options.ghost_states > 0) {
            std::size_t stride =
                std::max<std::size_t>(1, trajectory->states.size() /
                                             static_cast<std::size_t>(options.ghost_states));
            for (std::size_t t = 0; t < trajectory->states.size(); t += stride) {
                const RobotState& st = trajectory->states[t];
                for (const Link& l : model->links())
                    svg.polyline({st.positions[static_cast<std::size_t>(l.a)],
                                  st.positions[static_cast<std::size_t>(l.b)]},
                                 "#444444", 2.0, 0.25);
            }
        }

        for (std::size_t k = 0; k < kpts; ++k) {
            std::vector<Point> pts;
            pts.reserve(trajectory->states.size());
            for (const RobotState& st : trajectory->states) pts.push_back(st.positions[k]);
            const char* color = kPathColors[k % (sizeof(kPathColors) / sizeof(kPathColors[0]))];
            svg.polyline(pts, color, 1.5);
            svg.circle(pts.front(), 0.03, color);
            svg.circle(pts.back(), 0.03, color);
        }
    }

    return svg.finish();
}

} // namespace wsplan

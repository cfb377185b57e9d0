#include "morse_lsm/svg_plot.hpp"

#include "morse_lsm/field_io.hpp"

#include <array>
#include <cstdio>
#include <sstream>

namespace morse_lsm {

namespace {

constexpr double width = 720.0;
constexpr double height = 540.0;
constexpr double left = 80.0;
constexpr double right = 150.0;
constexpr double top = 50.0;
constexpr double bottom = 70.0;

constexpr std::array<const char*, 8> palette{"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                             "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
constexpr std::array<const char*, 4> dashes{"none", "8 4", "2 3", "10 3 2 3"};

std::string fmt(double v, const char* spec = "%.2f") {
  char buf[48];
  std::snprintf(buf, sizeof buf, spec, v);
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

} // namespace

std::string render_levelsets_svg(const std::vector<LevelSet>& sets, const ParamGrid& frame,
                                 const std::string& title) {
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto px = [&](const ParamPoint& p) {
    const auto u = frame.to_unit(p);
    return std::pair{left + u.x * plot_w, top + (1.0 - u.y) * plot_h};
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  svg << "  <rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  if (!title.empty())
    svg << "  <text x=\"" << left + plot_w / 2 << "\" y=\"28\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << escape(title) << "</text>\n";

  // frame and ticks
  svg << "  <g class=\"axes\" stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  svg << "    <rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << plot_w << "\" height=\""
      << plot_h << "\"/>\n";
  constexpr int ticks = 6;
  for (int k = 0; k <= ticks; ++k) {
    const double f = static_cast<double>(k) / ticks;
    const double x = left + f * plot_w;
    const double y = top + (1.0 - f) * plot_h;
    svg << "    <line x1=\"" << fmt(x) << "\" y1=\"" << top + plot_h << "\" x2=\"" << fmt(x)
        << "\" y2=\"" << top + plot_h + 6 << "\"/>\n";
    svg << "    <line x1=\"" << left - 6 << "\" y1=\"" << fmt(y) << "\" x2=\"" << left << "\" y2=\""
        << fmt(y) << "\"/>\n";
  }
  svg << "  </g>\n";
  svg << "  <g class=\"tick-labels\" font-family=\"sans-serif\" font-size=\"12\">\n";
  for (int k = 0; k <= ticks; ++k) {
    const double f = static_cast<double>(k) / ticks;
    const auto p = frame.from_unit({f, f});
    svg << "    <text x=\"" << fmt(left + f * plot_w) << "\" y=\"" << top + plot_h + 22
        << "\" text-anchor=\"middle\">" << fmt(p.inv_width, "%.2f") << "</text>\n";
    svg << "    <text x=\"" << left - 10 << "\" y=\"" << fmt(top + (1.0 - f) * plot_h + 4)
        << "\" text-anchor=\"end\">" << fmt(p.depth, "%.1f") << "</text>\n";
  }
  svg << "  </g>\n";
  svg << "  <text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 20
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">a (inverse width)</text>\n";
  svg << "  <text x=\"20\" y=\"" << top + plot_h / 2 << "\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\" transform=\"rotate(-90 20 " << top + plot_h / 2
      << ")\">C (depth)</text>\n";

  for (std::size_t k = 0; k < sets.size(); ++k) {
    const auto& set = sets[k];
    const char* colour = palette[k % palette.size()];
    const char* dash = dashes[(k / palette.size() + k) % dashes.size()];
    svg << "  <g class=\"levelset\" data-s=\"" << fmt(set.scale, "%.6g") << "\" data-level=\""
        << fmt(set.level, "%.10g") << "\" stroke=\"" << colour
        << "\" stroke-width=\"2\" fill=\"none\"";
    if (std::string(dash) != "none") svg << " stroke-dasharray=\"" << dash << '"';
    svg << ">\n";
    for (const auto& c : set.contours) {
      svg << "    <polyline points=\"";
      const std::size_t n = c.points.size() + (c.closed ? 1 : 0);
      for (std::size_t i = 0; i < n; ++i) {
        const auto [x, y] = px(c.points[i % c.points.size()]);
        svg << (i ? " " : "") << fmt(x, "%.3f") << ',' << fmt(y, "%.3f");
      }
      svg << "\"/>\n";
    }
    svg << "  </g>\n";
  }

  svg << "  <g class=\"legend\" font-family=\"sans-serif\" font-size=\"13\">\n";
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const double y = top + 20.0 + 22.0 * static_cast<double>(k);
    const double x = width - right + 20.0;
    const char* dash = dashes[(k / palette.size() + k) % dashes.size()];
    svg << "    <line x1=\"" << x << "\" y1=\"" << y << "\" x2=\"" << x + 30 << "\" y2=\"" << y
        << "\" stroke=\"" << palette[k % palette.size()] << "\" stroke-width=\"2\"";
    if (std::string(dash) != "none") svg << " stroke-dasharray=\"" << dash << '"';
    svg << "/>\n";
    svg << "    <text x=\"" << x + 38 << "\" y=\"" << y + 4 << "\">s = "
        << fmt(sets[k].scale, "%.3g") << "</text>\n";
  }
  svg << "  </g>\n";
  svg << "</svg>\n";
  return svg.str();
}

void write_levelsets_svg(const std::filesystem::path& path, const std::vector<LevelSet>& sets,
                         const ParamGrid& frame, const std::string& title) {
  write_file_atomic(path, render_levelsets_svg(sets, frame, title));
}

} // namespace morse_lsm

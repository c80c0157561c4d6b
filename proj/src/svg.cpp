#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include "corona/cli.hpp"
#include "corona/errors.hpp"
#include "corona/io.hpp"

namespace corona::cli {
namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return std::string(buf) == "-0.00" ? "0.00" : buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else if (c == '&')
      out += "&amp;";
    else
      out += c;
  }
  return out;
}

}  // namespace

std::string render_svg(const SpectralSet& s, const SvgOptions& opts) {
  const double w = opts.width, h = opts.height, pad = 40.0;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opts.width << "\" height=\"" << opts.height
      << "\" viewBox=\"0 0 " << opts.width << ' ' << opts.height << "\">\n";
  if (opts.timestamp) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    out << "<!-- generated " << buf << " -->\n";
  }
  out << "<rect x=\"0\" y=\"0\" width=\"" << opts.width << "\" height=\"" << opts.height << "\" fill=\"white\"/>\n";
  if (!opts.title.empty())
    out << "<text x=\"" << pad << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">" << escape(opts.title)
        << "</text>\n";
  out << "<text x=\"" << pad << "\" y=\"" << fixed(h - 10) << "\" font-family=\"sans-serif\" font-size=\"11\">resolution "
      << format_double(s.resolution) << "</text>\n";
  if (s.is_empty()) {
    out << "<text x=\"" << fixed(w / 2) << "\" y=\"" << fixed(h / 2)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\">empty set</text>\n</svg>\n";
    return out.str();
  }

  auto box = s.bounding_box();
  for (const auto& c : s.circles) {
    box[0] = std::min(box[0], c.center.real() - c.radius), box[1] = std::max(box[1], c.center.real() + c.radius);
    box[2] = std::min(box[2], c.center.imag() - c.radius), box[3] = std::max(box[3], c.center.imag() + c.radius);
  }
  double span = std::max({box[1] - box[0], box[3] - box[2], 1e-9});
  const double cx = 0.5 * (box[0] + box[1]), cy = 0.5 * (box[2] + box[3]);
  span *= 1.1;
  const double scale = std::min(w - 2 * pad, h - 2 * pad) > 0 ? (w - 2 * pad) / span : 1.0;
  const double yscale = std::min(scale, (h - 2 * pad) / std::max(box[3] - box[2], 1e-9) / 1.1);
  auto px = [&](double re) { return w / 2 + (re - cx) * scale; };
  auto py = [&](double im) { return h / 2 - (im - cy) * yscale; };

  // Real axis, when visible.
  if (py(0.0) >= pad / 2 && py(0.0) <= h - pad / 2)
    out << "<line x1=\"" << fixed(pad / 2) << "\" y1=\"" << fixed(py(0.0)) << "\" x2=\"" << fixed(w - pad / 2)
        << "\" y2=\"" << fixed(py(0.0)) << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
  for (double t : {box[0], box[1]})
    out << "<text x=\"" << fixed(px(t)) << "\" y=\"" << fixed(h - 26) << "\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"10\">" << format_double(t) << "</text>\n";

  for (const auto& g : s.segments) {
    if (g.a.imag() == 0.0 && g.b.imag() == 0.0) {
      const double x0 = px(std::min(g.a.real(), g.b.real())), x1 = px(std::max(g.a.real(), g.b.real()));
      out << "<rect x=\"" << fixed(x0) << "\" y=\"" << fixed(py(0.0) - 4) << "\" width=\"" << fixed(std::max(x1 - x0, 1.0))
          << "\" height=\"8\" fill=\"#1f77b4\"/>\n";
    } else {
      out << "<line x1=\"" << fixed(px(g.a.real())) << "\" y1=\"" << fixed(py(g.a.imag())) << "\" x2=\""
          << fixed(px(g.b.real())) << "\" y2=\"" << fixed(py(g.b.imag())) << "\" stroke=\"#1f77b4\" stroke-width=\"4\"/>\n";
    }
  }
  for (const auto& c : s.circles)
    out << "<circle cx=\"" << fixed(px(c.center.real())) << "\" cy=\"" << fixed(py(c.center.imag())) << "\" r=\""
        << fixed(c.radius * scale) << "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
  // One marker per pixel is enough for display.
  const auto shown = s.points.size() > 20000 ? thin(s, 1.0 / scale) : s;
  for (auto p : shown.points)
    out << "<circle cx=\"" << fixed(px(p.real())) << "\" cy=\"" << fixed(py(p.imag())) << "\" r=\"3\" fill=\"#d62728\"/>\n";

  const auto comps = real_components(s);
  for (std::size_t i = 0; i + 1 < comps.size(); ++i) {
    const double a = comps[i][1], b = comps[i + 1][0];
    out << "<text x=\"" << fixed(0.5 * (px(a) + px(b))) << "\" y=\"" << fixed(py(0.0) - 12)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">gap (" << format_double(a) << ", "
        << format_double(b) << ")</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void emit_plot(const SpectralSet& s, const std::string& path, const SvgOptions& opts) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << render_svg(s, opts);
  if (!f) throw Error("write failed for " + path);
}

}  // namespace corona::cli

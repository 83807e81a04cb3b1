#pragma once

// SVG rendering of the pencil in the canonical frame: triangle, sides,
// critical line, contact points, cevian feet, circumcenters and the members
// for a list of spans.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chipencil/cevian_seq.hpp"
#include "chipencil/conic.hpp"
#include "chipencil/errors.hpp"
#include "chipencil/geom_core.hpp"
#include "chipencil/pencil.hpp"

namespace chipencil::cli {

struct RenderSpec {
  std::vector<double> spans;
  bool draw_m = true;
  bool draw_m_prime = true;
  bool draw_circumcenters = true;
  double k_lo = -3.0;
  double k_hi = 3.0;
  double k_step = 0.5;
  int canvas = 800;
  bool draw_contacts = true;
  bool draw_sides = true;
  bool draw_critical_line = true;
  bool draw_parabola = true;

  void validate() const {
    if (canvas <= 0 || canvas > 20000) fail(Errc::InvalidConfig, "canvas must be in 1..20000 pixels");
    const bool points = draw_m || draw_m_prime || draw_circumcenters;
    if (spans.empty() && !points) fail(Errc::InvalidConfig, "nothing selected to render");
    if (!std::isfinite(k_lo) || !std::isfinite(k_hi) || k_lo > k_hi || !(k_step > 0.0)) {
      fail(Errc::InvalidConfig, "exponent range must be lo <= hi with a positive step");
    }
    if ((k_hi - k_lo) / k_step > 10000.0) fail(Errc::InvalidConfig, "exponent range has too many steps");
    for (double t : spans) {
      if (!std::isfinite(t)) fail(Errc::InvalidConfig, "spans must be finite");
    }
  }
};

struct Box {
  double x0, x1, y0, y1;

  bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
};

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Square window around the triangle, the contact points and the vertex of
// the pencil.
inline Box view_box(const Pencil& pen) {
  const Point pts[] = {pen.frame.A, TriangleFrame::B, TriangleFrame::C, pen.Z, pen.V, pen.vertex};
  double x0 = pts[0].x, x1 = x0, y0 = pts[0].y, y1 = y0;
  for (const Point& p : pts) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  const double side = 3.0 * std::max({x1 - x0, y1 - y0, 1.0});
  const double cx = (x0 + x1) / 2, cy = (y0 + y1) / 2;
  return {cx - side / 2, cx + side / 2, cy - side / 2, cy + side / 2};
}

// Segment of an infinite line inside the box, if any.
inline std::optional<std::pair<Point, Point>> clip_line(const LineForm& l, const Box& box) {
  std::vector<Point> hits;
  const auto keep = [&](Point p) {
    const double e = 1e-9 * (box.x1 - box.x0);
    if (p.x >= box.x0 - e && p.x <= box.x1 + e && p.y >= box.y0 - e && p.y <= box.y1 + e) {
      hits.push_back(p);
    }
  };
  if (std::abs(l.b()) > 1e-15) {
    for (double x : {box.x0, box.x1}) keep({x, -(l.a() * x + l.c()) / l.b()});
  }
  if (std::abs(l.a()) > 1e-15) {
    for (double y : {box.y0, box.y1}) keep({-(l.b() * y + l.c()) / l.a(), y});
  }
  if (hits.size() < 2) return std::nullopt;
  std::sort(hits.begin(), hits.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  return std::pair{hits.front(), hits.back()};
}

struct Polyline {
  std::vector<Point> pts;
  bool closed = false;
};

// Splits a polyline wherever it leaves the (enlarged) window.
inline void append_clipped(std::vector<Polyline>& out, const Polyline& line, const Box& wide) {
  if (line.closed && std::all_of(line.pts.begin(), line.pts.end(), [&](Point p) { return wide.contains(p); })) {
    out.push_back(line);
    return;
  }
  Polyline run;
  for (const Point& p : line.pts) {
    if (wide.contains(p) && std::isfinite(p.y)) {
      run.pts.push_back(p);
    } else {
      if (run.pts.size() >= 2) out.push_back(run);
      run.pts.clear();
    }
  }
  if (run.pts.size() >= 2) out.push_back(run);
}

// Solves C y^2 + (B x + E) y + (A x^2 + D x + F) = 0 column by column. The
// two branches are joined at vertical tangents, which are located by
// bisection and approached with quadratically spaced extra samples.
inline std::vector<Polyline> march_conic(const Conic& u, const Box& box, int samples) {
  const double h = box.y1 - box.y0;
  const Box wide{box.x0 - h, box.x1 + h, box.y0 - h, box.y1 + h};
  const auto lin = [&](double x) { return u.B() * x + u.E(); };
  const auto cst = [&](double x) { return (u.A() * x + u.D()) * x + u.F(); };
  std::vector<Polyline> out;

  std::vector<double> grid(static_cast<std::size_t>(samples) + 1);
  for (int i = 0; i <= samples; ++i) {
    grid[static_cast<std::size_t>(i)] = box.x0 + (box.x1 - box.x0) * i / samples;
  }

  if (std::abs(u.C()) <= 1e-12) {
    // At most one point per column; poles break the run through `wide`.
    Polyline line;
    for (double x : grid) {
      const double b = lin(x);
      line.pts.push_back({x, std::abs(b) > 1e-300 ? -cst(x) / b : INFINITY});
    }
    append_clipped(out, line, wide);
    return out;
  }

  const auto disc = [&](double x) { return lin(x) * lin(x) - 4.0 * u.C() * cst(x); };
  const auto branch = [&](double x, double sign) {
    const double r = std::sqrt(std::max(0.0, disc(x)));
    return Point{x, (-lin(x) + sign * r) / (2.0 * u.C())};
  };
  const auto tangent = [&](double inside, double outside) {
    for (int it = 0; it < 80; ++it) {
      const double mid = (inside + outside) / 2;
      (disc(mid) >= 0.0 ? inside : outside) = mid;
    }
    return inside;
  };
  constexpr int kRefine = 24;

  std::size_t i = 0;
  while (i < grid.size()) {
    if (disc(grid[i]) < 0.0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < grid.size() && disc(grid[j + 1]) >= 0.0) ++j;
    const bool left_t = i > 0;
    const bool right_t = j + 1 < grid.size();
    std::vector<double> xs;
    if (left_t) {
      const double xt = tangent(grid[i], grid[i - 1]);
      for (int r = 0; r < kRefine; ++r) {
        const double s = static_cast<double>(r) / kRefine;
        xs.push_back(xt + (grid[i] - xt) * s * s);
      }
    }
    for (std::size_t k = i; k <= j; ++k) xs.push_back(grid[k]);
    if (right_t) {
      const double xt = tangent(grid[j], grid[j + 1]);
      for (int r = kRefine - 1; r >= 0; --r) {
        const double s = static_cast<double>(r) / kRefine;
        xs.push_back(xt + (grid[j] - xt) * s * s);
      }
    }
    Polyline upper, lower;
    for (double x : xs) {
      upper.pts.push_back(branch(x, 1.0));
      lower.pts.push_back(branch(x, -1.0));
    }
    std::reverse(lower.pts.begin(), lower.pts.end());
    if (left_t && right_t) {
      Polyline loop = upper;
      loop.pts.insert(loop.pts.end(), lower.pts.begin() + 1, lower.pts.end());
      loop.closed = true;
      append_clipped(out, loop, wide);
    } else if (left_t) {
      Polyline joined = lower;
      joined.pts.insert(joined.pts.end(), upper.pts.begin() + 1, upper.pts.end());
      append_clipped(out, joined, wide);
    } else if (right_t) {
      Polyline joined = upper;
      joined.pts.insert(joined.pts.end(), lower.pts.begin() + 1, lower.pts.end());
      append_clipped(out, joined, wide);
    } else {
      append_clipped(out, upper, wide);
      std::reverse(lower.pts.begin(), lower.pts.end());
      append_clipped(out, lower, wide);
    }
    i = j + 1;
  }
  return out;
}

class SvgCanvas {
 public:
  SvgCanvas(const Box& box, int size) : box_(box), size_(size) {
    scale_ = (size - 2.0 * kPad) / (box.x1 - box.x0);
  }

  double px(double x) const { return kPad + (x - box_.x0) * scale_; }
  double py(double y) const { return kPad + (box_.y1 - y) * scale_; }

  void line(const std::string& cls, Point a, Point b) {
    body_ += "  <line class=\"" + cls + "\" x1=\"" + num(px(a.x)) + "\" y1=\"" + num(py(a.y)) +
             "\" x2=\"" + num(px(b.x)) + "\" y2=\"" + num(py(b.y)) + "\"/>\n";
  }

  void dot(const std::string& cls, Point p, double r) {
    body_ += "  <circle class=\"" + cls + "\" cx=\"" + num(px(p.x)) + "\" cy=\"" + num(py(p.y)) +
             "\" r=\"" + num(r) + "\"/>\n";
  }

  void label(Point p, const std::string& text) {
    body_ += "  <text x=\"" + num(px(p.x) + 6) + "\" y=\"" + num(py(p.y) - 6) + "\">" + text + "</text>\n";
  }

  void polygon(const std::string& cls, const std::vector<Point>& pts) {
    body_ += "  <polygon class=\"" + cls + "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      body_ += (i ? " " : "") + num(px(pts[i].x)) + "," + num(py(pts[i].y));
    }
    body_ += "\"/>\n";
  }

  void path(const std::string& cls, const std::string& attrs, const std::vector<Polyline>& lines) {
    std::string d;
    for (const Polyline& l : lines) {
      for (std::size_t i = 0; i < l.pts.size(); ++i) {
        d += (i ? " L" : (d.empty() ? "M" : " M")) + num(px(l.pts[i].x)) + "," + num(py(l.pts[i].y));
      }
      if (l.closed) d += " Z";
    }
    body_ += "  <path class=\"" + cls + "\"" + attrs + " d=\"" + d + "\"/>\n";
  }

  void raw(const std::string& s) { body_ += s; }

  std::string finish(const std::string& desc) const {
    const std::string n = std::to_string(size_);
    return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
           "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + n + "\" height=\"" + n +
           "\" viewBox=\"0 0 " + n + " " + n + "\">\n"
           "  <desc>" + desc + "</desc>\n"
           "  <style>"
           ".triangle{fill:none;stroke:#000;stroke-width:1.5}"
           ".bc{stroke:#888;stroke-width:1}"
           ".side{stroke:#2a7;stroke-width:1;stroke-dasharray:6 4}"
           ".critical{stroke:#c33;stroke-width:1;stroke-dasharray:2 3}"
           ".parabola{fill:none;stroke:#999;stroke-width:1}"
           ".conic{fill:none;stroke:#15c;stroke-width:1.5}"
           ".contact{fill:#c33}.foot-m{fill:#000}.foot-mprime{fill:#777}.circumcenter{fill:#15c}"
           "text{font:12px sans-serif}"
           "</style>\n"
           "  <rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n" +
           body_ + "</svg>\n";
  }

 private:
  static constexpr double kPad = 20.0;
  Box box_;
  int size_;
  double scale_ = 1.0;
  std::string body_;
};

}  // namespace detail

// Deterministic SVG document for the frame and spec.
inline std::string render_svg(const TriangleFrame& frame, const RenderSpec& spec) {
  spec.validate();
  const Pencil pen = build_pencil(frame);
  const Box box = detail::view_box(pen);
  detail::SvgCanvas svg(box, spec.canvas);
  const int samples = std::max(200, 2 * spec.canvas);

  const LineForm bc = line_through(TriangleFrame::B, TriangleFrame::C);
  if (auto s = detail::clip_line(bc, box)) svg.line("bc", s->first, s->second);
  if (spec.draw_sides) {
    for (const LineForm* l : {&pen.side_p, &pen.side_q}) {
      if (auto s = detail::clip_line(*l, box)) svg.line("side", s->first, s->second);
    }
  }
  if (spec.draw_critical_line) {
    if (auto s = detail::clip_line(pen.critical_line, box)) svg.line("critical", s->first, s->second);
  }
  if (spec.draw_parabola) svg.path("parabola", "", detail::march_conic(pen.parabola, box, samples));

  for (double t : spec.spans) {
    const Conic u = conic_same_side(frame, t);
    svg.path("conic", " data-span=\"" + detail::num(t) + "\"", detail::march_conic(u, box, samples));
  }

  svg.polygon("triangle", {frame.A, TriangleFrame::B, TriangleFrame::C});

  const int steps = static_cast<int>(std::floor((spec.k_hi - spec.k_lo) / spec.k_step + 1e-9));
  for (int i = 0; i <= steps; ++i) {
    const double k = spec.k_lo + i * spec.k_step;
    if (spec.draw_m) svg.dot("foot-m", m_point(frame, k).location, 2.5);
    if (spec.draw_m_prime && std::abs(k) > 1e-12) {
      const Point p = m_prime_point(frame, k).location;
      if (box.contains(p)) svg.dot("foot-mprime", p, 2.5);
    }
    if (spec.draw_circumcenters) {
      for (double t : spec.spans) {
        Point o;
        if (t == 0.0) {
          // Limit of the circumcenter: circle through A tangent to BC at M(k).
          const double x = m_point(frame, k).location.x;
          const double dx = x - frame.A.x;
          o = {x, (dx * dx + frame.A.y * frame.A.y) / (2.0 * frame.A.y)};
        } else {
          o = circumcenter(frame.A, m_point(frame, k).location, m_point(frame, k + t).location);
        }
        if (box.contains(o)) svg.dot("circumcenter", o, 2.0);
      }
    }
  }

  if (spec.draw_contacts) {
    svg.dot("contact", pen.Z, 4.0);
    svg.dot("contact", pen.V, 4.0);
    svg.label(pen.Z, "Z");
    svg.label(pen.V, "V");
  }
  svg.label(frame.A, "A");
  svg.label(TriangleFrame::B, "B");
  svg.label(TriangleFrame::C, "C");

  char desc[160];
  std::snprintf(desc, sizeof desc, "canonical frame B=(0,0) C=(1,0) A=(%.12g,%.12g)", frame.A.x, frame.A.y);
  return svg.finish(desc);
}

}  // namespace chipencil::cli

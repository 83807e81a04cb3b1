#pragma once

// Subcommands of chipencil-cli. Output is key=value text on `out`; every
// failure is one "error=<Code> message=<text>" line on `err`.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "chipencil/cevian_seq.hpp"
#include "chipencil/conic.hpp"
#include "chipencil/errors.hpp"
#include "chipencil/geom_core.hpp"
#include "chipencil/pencil.hpp"
#include "chipencil/verify.hpp"
#include "chipencil_cli/render.hpp"

namespace chipencil::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kGeometry = 3, kVerificationFailed = 4 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string fmt(Point p) { return fmt(p.x) + "," + fmt(p.y); }

inline double parse_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw UsageError("not a number: '" + s + "'");
  }
  if (used != s.size() || !std::isfinite(v)) throw UsageError("not a finite number: '" + s + "'");
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

inline Point parse_point(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw UsageError("point must be X,Y: '" + s + "'");
  return {parse_real(parts[0]), parse_real(parts[1])};
}

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> v;
  for (const std::string& p : split(s, ',')) v.push_back(parse_real(p));
  if (v.empty()) throw UsageError("empty list");
  return v;
}

struct ExpRange {
  double lo, hi, step;
};

inline ExpRange parse_range(const std::string& s) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw UsageError("range must be lo:hi:step: '" + s + "'");
  const ExpRange r{parse_real(parts[0]), parse_real(parts[1]), parse_real(parts[2])};
  if (!(r.step > 0.0) || r.lo > r.hi) throw UsageError("range needs lo <= hi and step > 0");
  if ((r.hi - r.lo) / r.step > 10000.0) throw UsageError("range has more than 10000 steps");
  return r;
}

inline std::vector<double> expand(const ExpRange& r) {
  std::vector<double> v;
  const int n = static_cast<int>(std::floor((r.hi - r.lo) / r.step + 1e-9));
  for (int i = 0; i <= n; ++i) v.push_back(r.lo + i * r.step);
  return v;
}

// Triangle from six inline reals or a JSON file {"A":[x,y],"B":[..],"C":[..]}.
struct TriangleInput {
  std::optional<double> ax, ay;
  double bx = 0.0, by = 0.0, cx = 1.0, cy = 0.0;
  std::string file;

  void attach(CLI::App* app) {
    app->add_option("--ax", ax, "apex x");
    app->add_option("--ay", ay, "apex y");
    app->add_option("--bx", bx, "B x (default 0)");
    app->add_option("--by", by, "B y (default 0)");
    app->add_option("--cx", cx, "C x (default 1)");
    app->add_option("--cy", cy, "C y (default 0)");
    app->add_option("--triangle", file, "JSON file with A, B, C");
  }

  TriangleFrame load() const {
    if (!file.empty()) {
      if (ax || ay) throw UsageError("--triangle cannot be combined with inline vertices");
      std::ifstream in(file);
      if (!in) throw UsageError("cannot open triangle file '" + file + "'");
      try {
        const nlohmann::json j = nlohmann::json::parse(in);
        const auto pt = [&](const char* k) {
          const auto& a = j.at(k);
          if (!a.is_array() || a.size() != 2) throw UsageError(std::string("vertex ") + k + " must be [x, y]");
          return Point{a.at(0).get<double>(), a.at(1).get<double>()};
        };
        return canonical_frame(pt("A"), pt("B"), pt("C"));
      } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("bad triangle file: ") + e.what());
      }
    }
    if (!ax || !ay) throw UsageError("apex required: --ax and --ay, or --triangle");
    return canonical_frame(Point{*ax, *ay}, Point{bx, by}, Point{cx, cy});
  }
};

inline void print_frame(std::ostream& out, const TriangleFrame& f) {
  out << "frame.A=" << fmt(f.A) << "\n";
  out << "frame.b=" << fmt(f.b_len) << "\n";
  out << "frame.c=" << fmt(f.c_len) << "\n";
  out << "frame.scale=" << fmt(f.transform.scale()) << "\n";
  out << "frame.reflected=" << (f.transform.reflects() ? 1 : 0) << "\n";
}

// Canonical coordinates of a point given in user units.
inline Point to_canonical(const TriangleFrame& f, const std::string& s) {
  return f.to_canonical(parse_point(s));
}

inline void print_point(std::ostream& out, const std::string& key, const TriangleFrame& f, Point canonical) {
  out << key << "=" << fmt(canonical) << "\n";
  out << key << ".user=" << fmt(f.from_canonical(canonical)) << "\n";
}

inline FootFamily parse_foot_family(const std::string& s) {
  if (s == "m" || s == "internal") return FootFamily::Internal;
  if (s == "mprime" || s == "external") return FootFamily::External;
  throw UsageError("family must be m or mprime for sequence");
}

inline int cmd_sequence(std::ostream& out, const TriangleInput& tri, const std::string& family,
                        const std::string& exponents, const std::string& range) {
  const FootFamily fam = parse_foot_family(family);
  if (exponents.empty() == range.empty()) throw UsageError("give exactly one of --exponents or --exp-range");
  const std::vector<double> ks = exponents.empty() ? expand(parse_range(range)) : parse_list(exponents);
  const TriangleFrame f = tri.load();
  std::vector<FootPoint> rows;
  for (double k : ks) rows.push_back(foot_point(f, fam, k));
  print_frame(out, f);
  out << "family=" << (fam == FootFamily::Internal ? "m" : "mprime") << "\n";
  for (const FootPoint& p : rows) {
    out << "row exponent=" << fmt(p.exponent) << " x=" << fmt(p.location.x)
        << " user=" << fmt(f.from_canonical(p.location)) << "\n";
  }
  return kOk;
}

inline int cmd_conic(std::ostream& out, const TriangleInput& tri, double t, const std::string& family) {
  const bool mixed = family == "mixed";
  if (!mixed && family != "same") throw UsageError("family must be same or mixed for conic");
  const TriangleFrame f = tri.load();
  const Conic u = mixed ? conic_mixed(f, t) : conic_same_side(f, t);
  print_frame(out, f);
  out << "family=" << family << "\n";
  out << "t=" << fmt(t) << "\n";
  out << "coefficients=";
  for (std::size_t i = 0; i < 6; ++i) out << (i ? "," : "") << fmt(u.coefficients()[i]);
  out << "\n";
  out << "class=" << to_string(conic_classify(u)) << "\n";
  return kOk;
}

inline int cmd_classify(std::ostream& out, const TriangleInput& tri, const std::vector<std::string>& pts) {
  if (pts.size() != 1) throw UsageError("classify takes exactly one --point");
  const TriangleFrame f = tri.load();
  const Pencil pen = build_pencil(f);
  const Point e = to_canonical(f, pts[0]);
  const RegionLabel r = classify_region(pen, e);
  print_frame(out, f);
  print_point(out, "point", f, e);
  out << "region=" << to_string(r) << "\n";
  if (r == RegionLabel::OnCriticalLine) {
    out << "member=unspecified (on critical line)\n";
    return kOk;
  }
  out << "member=" << to_string(classify_member(pen, e)) << "\n";
  out << "lambda=" << fmt(pencil_parameter(pen, e)) << "\n";
  return kOk;
}

inline int cmd_span(std::ostream& out, const TriangleInput& tri, const std::vector<std::string>& pts) {
  if (pts.size() != 1) throw UsageError("span takes exactly one --point");
  const TriangleFrame f = tri.load();
  const Pencil pen = build_pencil(f);
  const Point e = to_canonical(f, pts[0]);
  const RegionLabel r = classify_region(pen, e);
  if (r == RegionLabel::U1_InsideParabola) fail(Errc::InsideParabola, "inside parabola: no span");
  print_frame(out, f);
  print_point(out, "point", f, e);
  out << "region=" << to_string(r) << "\n";
  if (r == RegionLabel::OnParabola) {
    // The t = 0 member: the circle touches BC at a single foot.
    out << "span=0\nfamily=SameSide\n";
    const auto [fam, k] = exponent_of_location(f, e.x);
    out << "k1=" << fmt(k) << "\nk2=" << fmt(k) << "\nfoot_family=" << to_string(fam) << "\n";
    return kOk;
  }
  const SpanResult s = span_of(pen, e);
  out << "span=" << fmt(s.value) << "\n";
  out << "family=" << to_string(s.family) << "\n";
  out << "k1=" << fmt(s.k1) << "\nk2=" << fmt(s.k2) << "\n";
  return kOk;
}

inline int cmd_same_conic(std::ostream& out, const TriangleInput& tri, const std::vector<std::string>& pts) {
  if (pts.size() != 2) throw UsageError("same-conic takes exactly two --point");
  const TriangleFrame f = tri.load();
  const Pencil pen = build_pencil(f);
  const Point x = to_canonical(f, pts[0]);
  const Point y = to_canonical(f, pts[1]);
  const SameConicResult r = same_conic(pen, x, y);
  print_frame(out, f);
  print_point(out, "X", f, x);
  print_point(out, "Y", f, y);
  out << "region.X=" << to_string(r.region_x) << "\n";
  out << "region.Y=" << to_string(r.region_y) << "\n";
  out << "case=" << to_string(r.route) << "\n";
  if (r.parallel_polar_count > 0) out << "parallel_polar=" << r.parallel_polar_count << "\n";
  if (r.dual_x) out << "dual.X=" << fmt(*r.dual_x) << "\n";
  if (r.dual_y) out << "dual.Y=" << fmt(*r.dual_y) << "\n";
  if (r.dual_route) out << "dual_case=" << to_string(*r.dual_route) << "\n";
  if (r.span_x) out << "span.X=" << fmt(r.span_x->value) << " family=" << to_string(r.span_x->family) << "\n";
  if (r.span_y) out << "span.Y=" << fmt(r.span_y->value) << " family=" << to_string(r.span_y->family) << "\n";
  if (r.ratio_product_1) out << "ratio_product_1=" << fmt(*r.ratio_product_1) << "\n";
  if (r.ratio_product_2) out << "ratio_product_2=" << fmt(*r.ratio_product_2) << "\n";
  out << "decision=" << to_string(r.decision) << "\n";
  out << "lambda.X=" << fmt(r.lambda_x) << "\n";
  out << "lambda.Y=" << fmt(r.lambda_y) << "\n";
  out << "oracle=" << (r.oracle_agrees ? "agree" : "disagree") << "\n";
  return kOk;
}

// JSON config: seed, n_frames, n_samples_per_check, exponent_range [lo, hi],
// isosceles_margin, tolerance_overrides {name: value}, precision.
inline verify::SampleConfig load_config(const std::string& path) {
  verify::SampleConfig cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config '" + path + "'");
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object()) throw UsageError("config must be a JSON object");
    for (const auto& [key, v] : j.items()) {
      if (key == "seed") {
        cfg.seed = v.get<std::uint64_t>();
      } else if (key == "n_frames") {
        cfg.n_frames = v.get<int>();
      } else if (key == "n_samples_per_check") {
        cfg.n_samples_per_check = v.get<int>();
      } else if (key == "exponent_range") {
        if (!v.is_array() || v.size() != 2) throw UsageError("exponent_range must be [lo, hi]");
        cfg.exponent_lo = v.at(0).get<double>();
        cfg.exponent_hi = v.at(1).get<double>();
      } else if (key == "isosceles_margin") {
        cfg.isosceles_margin = v.get<double>();
      } else if (key == "tolerance_overrides") {
        cfg.tolerance_overrides = v.get<std::map<std::string, double>>();
      } else if (key == "precision") {
        const std::string p = v.get<std::string>();
        if (p == "extended") {
          cfg.precision = verify::Precision::Extended;
        } else if (p == "double") {
          cfg.precision = verify::Precision::Double;
        } else {
          throw UsageError("precision must be extended or double");
        }
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad config: ") + e.what());
  }
  return cfg;
}

inline int cmd_verify(std::ostream& out, const std::string& config, std::optional<std::uint64_t> seed,
                      const std::string& out_path) {
  verify::SampleConfig cfg = load_config(config);
  if (seed) cfg.seed = *seed;
  cfg.validate();
  const std::vector<verify::CheckReport> reports = verify::run_all(cfg);
  const bool ok = verify::all_passed(reports);
  if (out_path.empty()) {
    verify::write_report(out, cfg, reports);
  } else {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw UsageError("cannot write report '" + out_path + "'");
    verify::write_report(file, cfg, reports);
    file.close();
    if (!file) throw UsageError("failed writing report '" + out_path + "'");
    out << "report=" << out_path << "\n";
    for (const auto& r : reports) {
      out << "check=" << r.check_name << " status=" << (r.passed() ? "pass" : "fail")
          << " failures=" << r.failures << "\n";
    }
    out << "overall=" << (ok ? "pass" : "fail") << "\n";
  }
  return ok ? kOk : kVerificationFailed;
}

inline int cmd_render(std::ostream& out, const TriangleInput& tri, const std::string& spans,
                      const std::string& range, const std::string& families, const std::string& hide,
                      int canvas, const std::string& out_path) {
  RenderSpec spec;
  spec.canvas = canvas;
  if (!spans.empty()) spec.spans = parse_list(spans);
  if (!range.empty()) {
    const ExpRange r = parse_range(range);
    spec.k_lo = r.lo;
    spec.k_hi = r.hi;
    spec.k_step = r.step;
  }
  spec.draw_m = spec.draw_m_prime = spec.draw_circumcenters = false;
  for (const std::string& fam : split(families, ',')) {
    if (fam == "m") {
      spec.draw_m = true;
    } else if (fam == "mprime") {
      spec.draw_m_prime = true;
    } else if (fam == "circumcenters") {
      spec.draw_circumcenters = true;
    } else if (fam != "none" && !fam.empty()) {
      throw UsageError("families are m, mprime, circumcenters or none");
    }
  }
  for (const std::string& h : split(hide, ',')) {
    if (h == "contacts") {
      spec.draw_contacts = false;
    } else if (h == "sides") {
      spec.draw_sides = false;
    } else if (h == "critical") {
      spec.draw_critical_line = false;
    } else if (h == "parabola") {
      spec.draw_parabola = false;
    } else if (!h.empty()) {
      throw UsageError("hide accepts contacts, sides, critical, parabola");
    }
  }
  if (out_path.empty()) throw UsageError("render needs --out");
  const TriangleFrame f = tri.load();
  const std::string svg = render_svg(f, spec);
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + out_path + "'");
  file << svg;
  file.close();
  if (!file) throw UsageError("failed writing '" + out_path + "'");
  print_frame(out, f);
  out << "svg=" << out_path << "\n";
  out << "paths=" << spec.spans.size() << "\n";
  return kOk;
}

inline void report_error(std::ostream& err, std::string_view code, const std::string& message) {
  std::string m = message;
  std::replace(m.begin(), m.end(), '\n', ' ');
  err << "error=" << code << " message=" << m << "\n";
}

// Entry point shared by main() and the tests.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Conic pencils traced by circumcenters of cevian feet", "chipencil-cli"};
  app.require_subcommand(1);

  TriangleInput tri;
  std::string seq_family = "m", con_family = "same", exponents, range, spans, families = "m,mprime,circumcenters", hide, out_path,
                                                config;
  std::vector<std::string> points;
  double t = 0.0;
  int canvas = 800;
  std::optional<std::uint64_t> seed;

  CLI::App* seq = app.add_subcommand("sequence", "cevian feet M(k) or M'(k)");
  tri.attach(seq);
  seq->add_option("--family", seq_family, "m or mprime");
  seq->add_option("--exponents", exponents, "comma-separated exponents");
  seq->add_option("--exp-range", range, "lo:hi:step");

  CLI::App* con = app.add_subcommand("conic", "normalized member coefficients");
  tri.attach(con);
  con->add_option("--t", t, "span")->required();
  con->add_option("--family", con_family, "same or mixed");

  CLI::App* cls = app.add_subcommand("classify", "region and member class of a point");
  tri.attach(cls);
  cls->add_option("--point", points, "X,Y in user units")->required();

  CLI::App* spn = app.add_subcommand("span", "span of the member through a point");
  tri.attach(spn);
  spn->add_option("--point", points, "X,Y in user units")->required();

  CLI::App* same = app.add_subcommand("same-conic", "do two points lie on one member");
  tri.attach(same);
  same->add_option("--point", points, "X,Y in user units (twice)")->required();

  CLI::App* ver = app.add_subcommand("verify", "randomized verification report");
  ver->add_option("--config", config, "JSON sampling config");
  ver->add_option("--seed", seed, "overrides the config seed");
  ver->add_option("--out", out_path, "report file (default: standard output)");

  CLI::App* ren = app.add_subcommand("render", "SVG drawing of the pencil");
  tri.attach(ren);
  ren->add_option("--spans", spans, "comma-separated spans to draw");
  ren->add_option("--exp-range", range, "lo:hi:step for plotted points");
  ren->add_option("--families", families, "subset of m,mprime,circumcenters or none");
  ren->add_option("--hide", hide, "subset of contacts,sides,critical,parabola");
  ren->add_option("--canvas", canvas, "canvas size in pixels");
  ren->add_option("--out", out_path, "output SVG path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, "Usage", e.what());
    return kUsage;
  }

  try {
    if (seq->parsed()) return cmd_sequence(out, tri, seq_family, exponents, range);
    if (con->parsed()) return cmd_conic(out, tri, t, con_family);
    if (cls->parsed()) return cmd_classify(out, tri, points);
    if (spn->parsed()) return cmd_span(out, tri, points);
    if (same->parsed()) return cmd_same_conic(out, tri, points);
    if (ver->parsed()) return cmd_verify(out, config, seed, out_path);
    if (ren->parsed()) return cmd_render(out, tri, spans, range, families, hide, canvas, out_path);
  } catch (const UsageError& e) {
    report_error(err, "Usage", e.what());
    return kUsage;
  } catch (const GeometryError& e) {
    // what() repeats the code as a prefix.
    const std::string code(to_string(e.code()));
    std::string msg = e.what();
    if (msg.rfind(code + ": ", 0) == 0) msg.erase(0, code.size() + 2);
    report_error(err, code, msg);
    return e.code() == Errc::InvalidConfig ? kUsage : kGeometry;
  }
  return kUsage;
}

}  // namespace chipencil::cli

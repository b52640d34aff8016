#include "marinesim/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace marinesim {

namespace {

constexpr int kWidth = 900;
constexpr int kPanelHeight = 160;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 28;
constexpr int kMarginBottom = 34;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void expand(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void pad() {
    if (!(hi > lo)) {
      lo -= 1.0;
      hi += 1.0;
    }
    const double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
  }
};

void appendf(std::string& out, const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  out += buf;
}

std::string nice_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

void render_one_panel(std::string& out, const Panel& panel, const Range& xr, int top) {
  Range yr;
  for (const auto& s : panel.series) {
    for (double v : s.y) yr.expand(v);
  }
  yr.pad();

  const int plot_w = kWidth - kMarginLeft - kMarginRight;
  const int plot_h = kPanelHeight - kMarginTop - kMarginBottom / 2;
  auto map_x = [&](double x) {
    return kMarginLeft + plot_w * (x - xr.lo) / (xr.hi - xr.lo);
  };
  auto map_y = [&](double y) {
    return top + kMarginTop + plot_h * (1.0 - (y - yr.lo) / (yr.hi - yr.lo));
  };

  appendf(out, "<rect x='%d' y='%d' width='%d' height='%d' fill='white' stroke='#999'/>\n",
          kMarginLeft, top + kMarginTop, plot_w, plot_h);
  appendf(out, "<text x='%d' y='%d' font-size='13' font-family='sans-serif'>%s</text>\n",
          kMarginLeft, top + kMarginTop - 8, panel.title.c_str());
  // Horizontal grid with labels.
  for (int i = 0; i <= 2; ++i) {
    const double y = yr.lo + (yr.hi - yr.lo) * i / 2.0;
    appendf(out,
            "<line x1='%d' y1='%.1f' x2='%d' y2='%.1f' stroke='#ddd'/>"
            "<text x='%d' y='%.1f' font-size='10' font-family='sans-serif' "
            "text-anchor='end'>%s</text>\n",
            kMarginLeft, map_y(y), kMarginLeft + plot_w, map_y(y), kMarginLeft - 4,
            map_y(y) + 3, nice_num(y).c_str());
  }
  appendf(out,
          "<text x='12' y='%d' font-size='11' font-family='sans-serif' "
          "transform='rotate(-90 12 %d)' text-anchor='middle'>%s</text>\n",
          top + kMarginTop + plot_h / 2, top + kMarginTop + plot_h / 2,
          panel.y_label.c_str());

  int legend_x = kMarginLeft + 8;
  for (const auto& s : panel.series) {
    if (s.x.empty()) continue;
    out += "<polyline fill='none' stroke='" + s.color + "' stroke-width='1' points='";
    const size_t stride = std::max<size_t>(1, s.x.size() / 2500);
    for (size_t i = 0; i < s.x.size(); i += stride) {
      appendf(out, "%.1f,%.1f ", map_x(s.x[i]),
              std::clamp(map_y(s.y[i]), double(top), double(top + kPanelHeight)));
    }
    out += "'/>\n";
    appendf(out,
            "<text x='%d' y='%d' font-size='10' font-family='sans-serif' "
            "fill='%s'>%s</text>\n",
            legend_x, top + kMarginTop + 12, s.color.c_str(), s.label.c_str());
    legend_x += 14 * static_cast<int>(s.label.size()) / 2 + 30;
  }
}

}  // namespace

std::string render_panels(const std::vector<Panel>& panels, const std::string& x_label) {
  Range xr;
  for (const auto& p : panels) {
    for (const auto& s : p.series) {
      for (double v : s.x) xr.expand(v);
    }
  }
  xr.pad();

  const int height = static_cast<int>(panels.size()) * kPanelHeight + kMarginBottom;
  std::string out;
  appendf(out,
          "<svg xmlns='http://www.w3.org/2000/svg' width='%d' height='%d' "
          "viewBox='0 0 %d %d'>\n<rect width='%d' height='%d' fill='#fafafa'/>\n",
          kWidth, height, kWidth, height, kWidth, height);
  int top = 0;
  for (const auto& p : panels) {
    render_one_panel(out, p, xr, top);
    top += kPanelHeight;
  }
  // Shared x-axis labels under the last panel.
  const int plot_w = kWidth - kMarginLeft - kMarginRight;
  for (int i = 0; i <= 5; ++i) {
    const double x = xr.lo + (xr.hi - xr.lo) * i / 5.0;
    appendf(out,
            "<text x='%.1f' y='%d' font-size='10' font-family='sans-serif' "
            "text-anchor='middle'>%s</text>\n",
            kMarginLeft + plot_w * (x - xr.lo) / (xr.hi - xr.lo), top + 14,
            nice_num(x).c_str());
  }
  appendf(out,
          "<text x='%d' y='%d' font-size='11' font-family='sans-serif' "
          "text-anchor='middle'>%s</text>\n",
          kMarginLeft + plot_w / 2, top + 30, x_label.c_str());
  out += "</svg>\n";
  return out;
}

std::string render_trace(const Trace& trace) {
  const auto& rows = trace.rows();
  auto col = [&](auto getter) {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) v.push_back(getter(r));
    return v;
  };
  const std::vector<double> t = col([](const TraceRow& r) { return r.t; });

  auto series = [&](const char* label, const char* color, auto getter) {
    Series s;
    s.label = label;
    s.color = color;
    s.x = t;
    s.y = col(getter);
    return s;
  };

  std::vector<Panel> panels;
  panels.push_back({"buoy surge velocity", "V [m/s]",
                    {series("V", "#1f77b4", [](const TraceRow& r) { return r.vx_b; }),
                     series("reference", "#d62728", [](const TraceRow& r) { return r.v_ref; })}});
  panels.push_back({"cable extension", "r [m]",
                    {series("r", "#1f77b4", [](const TraceRow& r) { return r.r; }),
                     series("reference", "#d62728", [](const TraceRow& r) { return r.r_ref; })}});
  panels.push_back({"vehicle altitude", "z_u [m]",
                    {series("z_u", "#1f77b4", [](const TraceRow& r) { return r.z_u; }),
                     series("reference", "#d62728", [](const TraceRow& r) { return r.zu_ref; })}});
  panels.push_back({"elevation angle", "alpha [rad]",
                    {series("alpha", "#1f77b4", [](const TraceRow& r) { return r.alpha; }),
                     series("reference", "#d62728", [](const TraceRow& r) { return r.alpha_ref; })}});
  panels.push_back({"vehicle pitch", "theta_u [rad]",
                    {series("theta_u", "#1f77b4", [](const TraceRow& r) { return r.theta_u; })}});
  panels.push_back({"cable tension", "T [N]",
                    {series("T", "#1f77b4", [](const TraceRow& r) { return r.tension; })}});
  panels.push_back({"immersed volume fraction", "vol/vol_b [-]",
                    {series("immersion", "#1f77b4", [](const TraceRow& r) { return r.vol_ratio; })}});
  panels.push_back({"total thrust", "u1 [N]",
                    {series("realized", "#1f77b4", [](const TraceRow& r) { return r.u1; }),
                     series("command", "#ff7f0e", [](const TraceRow& r) { return r.u1_cmd; })}});
  panels.push_back({"pitch torque", "u2 [N m]",
                    {series("realized", "#1f77b4", [](const TraceRow& r) { return r.u2; }),
                     series("command", "#ff7f0e", [](const TraceRow& r) { return r.u2_cmd; })}});
  return render_panels(panels, "t [s]");
}

void write_trace_svg(const Trace& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("svg: cannot open '" + path + "'");
  out << render_trace(trace);
}

std::string render_amplification(const std::vector<std::vector<AmplificationPoint>>& curves,
                                 const std::vector<std::string>& labels) {
  static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#e377c2"};
  Panel panel;
  panel.title = "heave dynamic amplification vs mean immersion boundary";
  panel.y_label = "height [m]";
  for (size_t i = 0; i < curves.size(); ++i) {
    Series s;
    s.label = i < labels.size() ? labels[i] : "wave";
    s.color = kColors[i % 7];
    for (const auto& pt : curves[i]) {
      s.x.push_back(pt.velocity);
      s.y.push_back(pt.amplification);
    }
    panel.series.push_back(std::move(s));
  }
  if (!curves.empty()) {
    Series dome;
    dome.label = "mean immersed height";
    dome.color = "#000000";
    for (const auto& pt : curves.front()) {
      dome.x.push_back(pt.velocity);
      dome.y.push_back(pt.mean_immersion);
    }
    panel.series.push_back(std::move(dome));
  }
  return render_panels({panel}, "V [m/s]");
}

void write_amplification_svg(const std::vector<std::vector<AmplificationPoint>>& curves,
                             const std::vector<std::string>& labels,
                             const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("svg: cannot open '" + path + "'");
  out << render_amplification(curves, labels);
}

}  // namespace marinesim

#ifndef MARINESIM_SVGPLOT_HPP
#define MARINESIM_SVGPLOT_HPP

#include <string>
#include <vector>

#include "marinesim/equilibrium.hpp"
#include "marinesim/trace.hpp"

namespace marinesim {

// Minimal static SVG renderer for time-series panels and the heave
// amplification survey; no external tooling required to look at a run.

struct Series {
  std::string label;
  std::string color = "#1f77b4";
  std::vector<double> x;
  std::vector<double> y;
};

struct Panel {
  std::string title;
  std::string y_label;
  std::vector<Series> series;
};

// Renders stacked panels with a shared x-axis into one SVG document.
std::string render_panels(const std::vector<Panel>& panels, const std::string& x_label);

// The standard panel set of a simulation trace: V, r, z_u, alpha, theta_u,
// tension, immersion ratio, u1, u2 (commands and realized values overlaid).
std::string render_trace(const Trace& trace);
void write_trace_svg(const Trace& trace, const std::string& path);

// Amplification map with the mean-immersion boundary (the fly-over dome).
std::string render_amplification(const std::vector<std::vector<AmplificationPoint>>& curves,
                                 const std::vector<std::string>& labels);
void write_amplification_svg(const std::vector<std::vector<AmplificationPoint>>& curves,
                             const std::vector<std::string>& labels,
                             const std::string& path);

}  // namespace marinesim

#endif

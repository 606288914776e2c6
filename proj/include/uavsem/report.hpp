#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace uavsem {

// Round-trip-stable text form of a double; the "%.10g" format keeps CSV
// output byte-identical across runs.
inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

struct Aggregate {
  double psnr_mean = 0.0;
  double psnr_se = 0.0;
  double ssim_mean = 0.0;
  double ssim_se = 0.0;
  int trials = 0;
};

inline double mean_of(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

// Standard error of the mean (unbiased sample std / sqrt(N)).
inline double standard_error(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / (static_cast<double>(xs.size()) - 1.0) /
                   static_cast<double>(xs.size()));
}

struct SweepRow {
  std::string method;
  std::string sweep_var;
  double value = 0.0;
  Aggregate agg;
};

inline std::string results_csv(const std::vector<SweepRow>& rows) {
  std::string out = "method,sweep_var,value,psnr_mean,psnr_se,ssim_mean,ssim_se,trials\n";
  for (const auto& r : rows) {
    out += r.method + ',' + r.sweep_var + ',' + fmt_double(r.value) + ',' +
           fmt_double(r.agg.psnr_mean) + ',' + fmt_double(r.agg.psnr_se) + ',' +
           fmt_double(r.agg.ssim_mean) + ',' + fmt_double(r.agg.ssim_se) + ',' +
           std::to_string(r.agg.trials) + '\n';
  }
  return out;
}

inline void write_text_file(const std::filesystem::path& path,
                            const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

// Minimal SVG line chart: one polyline per method, mean +/- one standard
// error whiskers.
inline std::string svg_line_chart(const std::vector<SweepRow>& rows,
                                  const std::string& x_label,
                                  const std::string& y_label,
                                  bool use_ssim = false) {
  if (rows.empty()) return "<svg xmlns=\"http://www.w3.org/2000/svg\"/>\n";
  const int width = 640, height = 440;
  const double ml = 70, mr = 160, mt = 30, mb = 55;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmin = rows[0].value, xmax = rows[0].value;
  double ymin = 1e300, ymax = -1e300;
  std::map<std::string, std::vector<const SweepRow*>> series;
  for (const auto& r : rows) {
    series[r.method].push_back(&r);
    xmin = std::min(xmin, r.value);
    xmax = std::max(xmax, r.value);
    const double y = use_ssim ? r.agg.ssim_mean : r.agg.psnr_mean;
    const double se = use_ssim ? r.agg.ssim_se : r.agg.psnr_se;
    ymin = std::min(ymin, y - se);
    ymax = std::max(ymax, y + se);
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  const double pad = 0.05 * (ymax - ymin + 1e-12);
  ymin -= pad;
  ymax += pad;

  auto px = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * pw; };
  auto py = [&](double v) { return mt + (ymax - v) / (ymax - ymin) * ph; };

  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#8c564b", "#e377c2"};
  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  // axes
  svg += "<line x1=\"" + fmt_double(ml) + "\" y1=\"" + fmt_double(mt + ph) +
         "\" x2=\"" + fmt_double(ml + pw) + "\" y2=\"" + fmt_double(mt + ph) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt_double(ml) + "\" y1=\"" + fmt_double(mt) +
         "\" x2=\"" + fmt_double(ml) + "\" y2=\"" + fmt_double(mt + ph) +
         "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double xv = xmin + (xmax - xmin) * t / 5.0;
    const double yv = ymin + (ymax - ymin) * t / 5.0;
    svg += "<text x=\"" + fmt_double(px(xv)) + "\" y=\"" + fmt_double(mt + ph + 20) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + fmt_double(xv) +
           "</text>\n";
    svg += "<text x=\"" + fmt_double(ml - 8) + "\" y=\"" + fmt_double(py(yv) + 4) +
           "\" font-size=\"11\" text-anchor=\"end\">" + fmt_double(yv) + "</text>\n";
  }
  svg += "<text x=\"" + fmt_double(ml + pw / 2) + "\" y=\"" +
         fmt_double(height - 12.0) + "\" font-size=\"13\" text-anchor=\"middle\">" +
         x_label + "</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt_double(mt + ph / 2) +
         "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
         fmt_double(mt + ph / 2) + ")\">" + y_label + "</text>\n";

  int idx = 0;
  for (const auto& [method, pts] : series) {
    const char* color = colors[idx % 6];
    std::string poly = "<polyline fill=\"none\" stroke=\"";
    poly += color;
    poly += "\" stroke-width=\"1.8\" points=\"";
    for (const SweepRow* r : pts) {
      const double y = use_ssim ? r->agg.ssim_mean : r->agg.psnr_mean;
      const double se = use_ssim ? r->agg.ssim_se : r->agg.psnr_se;
      poly += fmt_double(px(r->value)) + "," + fmt_double(py(y)) + " ";
      svg += "<line x1=\"" + fmt_double(px(r->value)) + "\" y1=\"" +
             fmt_double(py(y - se)) + "\" x2=\"" + fmt_double(px(r->value)) +
             "\" y2=\"" + fmt_double(py(y + se)) + "\" stroke=\"" + color +
             "\" stroke-width=\"1\"/>\n";
    }
    poly += "\"/>\n";
    svg += poly;
    svg += "<text x=\"" + fmt_double(ml + pw + 10) + "\" y=\"" +
           fmt_double(mt + 16.0 * (idx + 1)) + "\" font-size=\"12\" fill=\"" +
           color + "\">" + method + "</text>\n";
    ++idx;
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace uavsem

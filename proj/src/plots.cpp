#include "comconceal/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "comconceal/errors.hpp"
#include "comconceal/graph_io.hpp"

namespace comconceal {

namespace {

namespace fs = std::filesystem;

std::string fmt2(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

struct Series {
  std::vector<double> xs, mean, sd;
};

// mean +- sd per beta_b for one metric/method inside a (mu, sigma_c) cell.
Series series_for(const std::vector<ExperimentRecord>& records, double mu, double sc,
                  const std::string& method, bool metric_m2) {
  std::map<double, std::vector<double>> by_beta;
  for (const auto& r : records) {
    if (r.mu == mu && r.sigma_c == sc && r.method == method)
      by_beta[r.beta_b].push_back(metric_m2 ? r.m2 : r.m1);
  }
  Series s;
  for (const auto& [beta, vals] : by_beta) {
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(vals.size());
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    const double sd = vals.size() > 1 ? std::sqrt(var / (vals.size() - 1)) : 0.0;
    s.xs.push_back(beta);
    s.mean.push_back(mean);
    s.sd.push_back(sd);
  }
  return s;
}

constexpr double kW = 480, kH = 320;
constexpr double kMargin = 48;

double sx(double x, double x0, double x1) {
  return kMargin + (x - x0) / (x1 - x0 > 0 ? x1 - x0 : 1.0) * (kW - 2 * kMargin);
}
double sy(double y, double y0, double y1) {
  return kH - kMargin - (y - y0) / (y1 - y0 > 0 ? y1 - y0 : 1.0) * (kH - 2 * kMargin);
}

void write_line_chart(const std::string& path, const std::string& title,
                      const std::vector<std::pair<std::string, Series>>& series) {
  double x0 = 1e30, x1 = -1e30;
  for (const auto& [name, s] : series) {
    for (double x : s.xs) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
    }
  }
  const double y0 = 0.0, y1 = 1.0;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" << title
      << "</text>\n";
  // Axes.
  svg << "<line x1=\"" << kMargin << "\" y1=\"" << kH - kMargin << "\" x2=\"" << kW - kMargin
      << "\" y2=\"" << kH - kMargin << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin << "\" x2=\"" << kMargin << "\" y2=\""
      << kH - kMargin << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double yv = y0 + (y1 - y0) * t / 5.0;
    svg << "<text x=\"" << kMargin - 6 << "\" y=\"" << fmt2(sy(yv, y0, y1) + 4)
        << "\" text-anchor=\"end\" font-size=\"10\">" << fmt2(yv) << "</text>\n";
  }
  int ci = 0;
  for (const auto& [name, s] : series) {
    const char* color = colors[ci % 4];
    if (s.xs.size() >= 2) {
      // +-1 s.d. band.
      std::ostringstream pts;
      for (std::size_t i = 0; i < s.xs.size(); ++i)
        pts << fmt2(sx(s.xs[i], x0, x1)) << "," << fmt2(sy(std::min(1.0, s.mean[i] + s.sd[i]), y0, y1))
            << " ";
      for (std::size_t i = s.xs.size(); i-- > 0;)
        pts << fmt2(sx(s.xs[i], x0, x1)) << ","
            << fmt2(sy(std::max(0.0, s.mean[i] - s.sd[i]), y0, y1)) << " ";
      svg << "<polygon points=\"" << pts.str() << "\" fill=\"" << color
          << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
    }
    std::ostringstream pts;
    for (std::size_t i = 0; i < s.xs.size(); ++i)
      pts << fmt2(sx(s.xs[i], x0, x1)) << "," << fmt2(sy(s.mean[i], y0, y1)) << " ";
    svg << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"/>\n";
    svg << "<text x=\"" << kW - kMargin - 4 << "\" y=\"" << kMargin + 14 * (ci + 1)
        << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << color << "\">" << name
        << "</text>\n";
    ++ci;
  }
  svg << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12
      << "\" text-anchor=\"middle\" font-size=\"11\">beta_b</text>\n";
  svg << "</svg>\n";

  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Errc::IoError, "cannot write " + path);
  f << svg.str();
}

void write_heatmap(const std::string& path, const std::string& title,
                   const std::vector<double>& mus, const std::vector<double>& scs,
                   const std::map<std::pair<double, double>, double>& values) {
  const double cell_w = 80, cell_h = 48;
  const double w = kMargin * 2 + cell_w * scs.size();
  const double h = kMargin * 2 + cell_h * mus.size();
  double vmax = 1e-9;
  for (const auto& [k, v] : values) vmax = std::max(vmax, std::abs(v));

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" << title
      << "</text>\n";
  for (std::size_t i = 0; i < mus.size(); ++i) {
    svg << "<text x=\"" << kMargin - 6 << "\" y=\""
        << fmt2(kMargin + cell_h * i + cell_h / 2 + 4)
        << "\" text-anchor=\"end\" font-size=\"10\">mu=" << format_double(mus[i]) << "</text>\n";
    for (std::size_t j = 0; j < scs.size(); ++j) {
      const auto it = values.find({mus[i], scs[j]});
      const double v = it == values.end() ? 0.0 : it->second;
      // Diverging blue-white-red ramp on the signed magnitude.
      const double t = std::max(-1.0, std::min(1.0, v / vmax));
      const int r = t >= 0 ? 255 : static_cast<int>(255 * (1 + t));
      const int b = t <= 0 ? 255 : static_cast<int>(255 * (1 - t));
      const int gch = static_cast<int>(255 * (1 - std::abs(t) * 0.6));
      svg << "<rect x=\"" << fmt2(kMargin + cell_w * j) << "\" y=\"" << fmt2(kMargin + cell_h * i)
          << "\" width=\"" << cell_w << "\" height=\"" << cell_h << "\" fill=\"rgb(" << r << ","
          << gch << "," << b << ")\" stroke=\"#777\"/>\n";
      svg << "<text x=\"" << fmt2(kMargin + cell_w * j + cell_w / 2) << "\" y=\""
          << fmt2(kMargin + cell_h * i + cell_h / 2 + 4)
          << "\" text-anchor=\"middle\" font-size=\"10\">"
          << (it == values.end() ? std::string("-") : heatmap_label(v)) << "</text>\n";
    }
  }
  for (std::size_t j = 0; j < scs.size(); ++j) {
    svg << "<text x=\"" << fmt2(kMargin + cell_w * j + cell_w / 2) << "\" y=\""
        << fmt2(kMargin + cell_h * mus.size() + 16)
        << "\" text-anchor=\"middle\" font-size=\"10\">sc=" << format_double(scs[j])
        << "</text>\n";
  }
  svg << "</svg>\n";

  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Errc::IoError, "cannot write " + path);
  f << svg.str();
}

}  // namespace

std::string heatmap_label(double percent) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%+.1f%%", percent);
  return buf;
}

std::vector<std::string> emit_plots(const std::vector<ExperimentRecord>& records,
                                    const std::string& out_dir) {
  if (records.empty()) fail(Errc::EmptySelection, "no records to plot");
  fs::create_directories(out_dir);

  std::set<double> mu_set, sc_set;
  std::set<std::string> methods;
  for (const auto& r : records) {
    mu_set.insert(r.mu);
    sc_set.insert(r.sigma_c);
    methods.insert(r.method);
  }

  std::vector<std::string> written;
  for (double mu : mu_set) {
    for (double sc : sc_set) {
      for (int metric = 1; metric <= 2; ++metric) {
        std::vector<std::pair<std::string, Series>> series;
        for (const auto& method : methods) {
          Series s = series_for(records, mu, sc, method, metric == 2);
          if (!s.xs.empty()) series.emplace_back(method, std::move(s));
        }
        if (series.empty()) continue;
        const std::string name = "lines_m" + std::to_string(metric) + "_mu" + format_double(mu) +
                                 "_sc" + format_double(sc) + ".svg";
        const std::string path = (fs::path(out_dir) / name).string();
        write_line_chart(path,
                         "M" + std::to_string(metric) + " vs beta_b (mu=" + format_double(mu) +
                             ", sigma_c=" + format_double(sc) + ")",
                         series);
        written.push_back(path);
      }
    }
  }

  // Relative-improvement heatmaps, labels taken from the improvement table.
  if (methods.count("dice") && methods.count("fcom-dice")) {
    const auto cells = mean_relative_improvement(records);
    std::map<std::pair<double, double>, double> v1, v2;
    for (const auto& c : cells) {
      if (c.pairs_m1 > 0) v1[{c.mu, c.sigma_c}] = c.mean_dm1;
      if (c.pairs_m2 > 0) v2[{c.mu, c.sigma_c}] = c.mean_dm2;
    }
    const std::vector<double> mus(mu_set.begin(), mu_set.end());
    const std::vector<double> scs(sc_set.begin(), sc_set.end());
    const std::string p1 = (fs::path(out_dir) / "heatmap_m1.svg").string();
    const std::string p2 = (fs::path(out_dir) / "heatmap_m2.svg").string();
    write_heatmap(p1, "Mean relative improvement of M1 (%)", mus, scs, v1);
    write_heatmap(p2, "Mean relative improvement of M2 (%)", mus, scs, v2);
    written.push_back(p1);
    written.push_back(p2);
  }
  return written;
}

}  // namespace comconceal

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "irg/harness.hpp"

namespace irg {

using nlohmann::json;

namespace {

struct Series {
  std::string label;
  std::vector<double> x, y, lo, hi;
};

// x coordinate of a cell: n when the summary sweeps n, else lambda.
std::vector<Series> load_series(const std::vector<std::string>& paths,
                                std::string& xlabel) {
  std::vector<Series> series;
  xlabel = "n";
  for (const std::string& path : paths) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("emit_plots: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    json j = json::parse(ss.str());
    Series s;
    s.label = std::filesystem::path(path).stem().string();
    std::vector<double> ns;
    for (const json& cell : j.at("cells")) {
      if (!cell.contains("frequency")) continue;
      ns.push_back(cell.value("n", 0));
    }
    const bool n_varies =
        !ns.empty() && *std::max_element(ns.begin(), ns.end()) !=
                           *std::min_element(ns.begin(), ns.end());
    for (const json& cell : j.at("cells")) {
      if (!cell.contains("frequency")) continue;
      double x;
      if (!n_varies && cell.contains("lambda")) {
        x = cell.at("lambda").get<double>();
        xlabel = "lambda";
      } else {
        x = cell.value("n", 0);
      }
      s.x.push_back(x);
      const double f = cell.at("frequency").get<double>();
      s.y.push_back(f);
      s.lo.push_back(cell.value("wilson_lo", f));
      s.hi.push_back(cell.value("wilson_hi", f));
    }
    if (!s.x.empty()) series.push_back(std::move(s));
    else std::cerr << "emit_plots: no frequency cells in " << path << "\n";
  }
  return series;
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

std::string svg_num(double v) { return fmt_double(round2(v)); }

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                          "#9467bd", "#ff7f0e", "#8c564b"};

std::string render_svg(const std::vector<Series>& series,
                       const std::string& xlabel) {
  const double W = 640, H = 420;
  const double L = 70, R = 620, T = 20, B = 365;  // plot box

  std::vector<double> xs;
  for (const Series& s : series) xs.insert(xs.end(), s.x.begin(), s.x.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  double xmin = xs.empty() ? 0 : xs.front();
  double xmax = xs.empty() ? 1 : xs.back();
  bool log_x = xmin > 0 && xmax / xmin >= 8;
  if (xmin == xmax) {  // single point: pad an interval around it
    xmin -= 1;
    xmax += 1;
    log_x = false;
  }
  auto xmap = [&](double v) {
    double t = log_x ? (std::log(v) - std::log(xmin)) /
                           (std::log(xmax) - std::log(xmin))
                     : (v - xmin) / (xmax - xmin);
    return L + t * (R - L);
  };
  auto ymap = [&](double v) { return B - (v / 1.05) * (B - T); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W
      << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H
      << "\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H
      << "\" fill=\"white\"/>\n";
  // y grid and labels
  for (int i = 0; i <= 4; ++i) {
    const double fv = 0.25 * i;
    const double y = round2(ymap(fv));
    out << "<line x1=\"" << L << "\" y1=\"" << svg_num(y) << "\" x2=\"" << R
        << "\" y2=\"" << svg_num(y)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << L - 8 << "\" y=\"" << svg_num(y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"end\">"
        << fmt_double(fv) << "</text>\n";
  }
  // x ticks at data points
  for (double v : xs) {
    const double x = round2(xmap(v));
    out << "<line x1=\"" << svg_num(x) << "\" y1=\"" << B << "\" x2=\""
        << svg_num(x) << "\" y2=\"" << B + 5
        << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << svg_num(x) << "\" y=\"" << B + 20
        << "\" font-family=\"sans-serif\" font-size=\"12\" "
           "text-anchor=\"middle\">"
        << fmt_double(v) << "</text>\n";
  }
  out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << R - L
      << "\" height=\"" << B - T
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  out << "<text x=\"" << (L + R) / 2 << "\" y=\"" << B + 40
      << "\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\">"
      << xlabel << "</text>\n";
  out << "<text x=\"18\" y=\"" << (T + B) / 2
      << "\" font-family=\"sans-serif\" font-size=\"13\" "
         "text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (T + B) / 2 << ")\">frequency</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const Series& s = series[si];
    const char* color = kPalette[si % 6];
    // interval bars
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double x = round2(xmap(s.x[i]));
      const double ylo = round2(ymap(s.lo[i]));
      const double yhi = round2(ymap(s.hi[i]));
      out << "<line x1=\"" << svg_num(x) << "\" y1=\"" << svg_num(ylo)
          << "\" x2=\"" << svg_num(x) << "\" y2=\"" << svg_num(yhi)
          << "\" stroke=\"" << color << "\" stroke-width=\"1\"/>\n";
      for (double ye : {ylo, yhi})
        out << "<line x1=\"" << svg_num(x - 4) << "\" y1=\"" << svg_num(ye)
            << "\" x2=\"" << svg_num(x + 4) << "\" y2=\"" << svg_num(ye)
            << "\" stroke=\"" << color << "\" stroke-width=\"1\"/>\n";
    }
    if (s.x.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (i) out << " ";
        out << svg_num(round2(xmap(s.x[i]))) << ","
            << svg_num(round2(ymap(s.y[i])));
      }
      out << "\"/>\n";
    }
    for (std::size_t i = 0; i < s.x.size(); ++i)
      out << "<circle cx=\"" << svg_num(round2(xmap(s.x[i]))) << "\" cy=\""
          << svg_num(round2(ymap(s.y[i]))) << "\" r=\"3\" fill=\"" << color
          << "\"/>\n";
    // legend
    const double ly = T + 16 + 16 * static_cast<double>(si);
    out << "<line x1=\"" << L + 10 << "\" y1=\"" << svg_num(ly - 4)
        << "\" x2=\"" << L + 34 << "\" y2=\"" << svg_num(ly - 4)
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << L + 40 << "\" y=\"" << svg_num(ly)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

// Standalone matplotlib twin of the SVG, reading the same summaries.
std::string render_python(const std::vector<std::string>& paths) {
  std::ostringstream out;
  out << "#!/usr/bin/env python3\n"
         "\"\"\"Frequency-vs-parameter plot regenerated from summary "
         "JSONs.\"\"\"\n"
         "import json\n"
         "import sys\n"
         "from pathlib import Path\n"
         "\n"
         "import matplotlib\n"
         "matplotlib.use(\"Agg\")\n"
         "import matplotlib.pyplot as plt\n"
         "\n"
         "SUMMARIES = [\n";
  for (const std::string& p : paths) out << "    " << json(p).dump() << ",\n";
  out << "]\n"
         "\n"
         "def cells(path):\n"
         "    data = json.loads(Path(path).read_text())\n"
         "    return [c for c in data[\"cells\"] if \"frequency\" in c]\n"
         "\n"
         "fig, ax = plt.subplots(figsize=(6.4, 4.2))\n"
         "xlabel = \"n\"\n"
         "for path in SUMMARIES:\n"
         "    cs = cells(path)\n"
         "    if not cs:\n"
         "        print(f\"no frequency cells in {path}\", file=sys.stderr)\n"
         "        continue\n"
         "    ns = [c.get(\"n\", 0) for c in cs]\n"
         "    if min(ns) == max(ns) and \"lambda\" in cs[0]:\n"
         "        xs = [c[\"lambda\"] for c in cs]\n"
         "        xlabel = \"lambda\"\n"
         "    else:\n"
         "        xs = ns\n"
         "    ys = [c[\"frequency\"] for c in cs]\n"
         "    lo = [y - c.get(\"wilson_lo\", y) for c, y in zip(cs, ys)]\n"
         "    hi = [c.get(\"wilson_hi\", y) - y for c, y in zip(cs, ys)]\n"
         "    ax.errorbar(xs, ys, yerr=[lo, hi], marker=\"o\", capsize=3,\n"
         "                label=Path(path).stem)\n"
         "    if len(set(xs)) > 1 and min(xs) > 0 and max(xs) / min(xs) >= "
         "8:\n"
         "        ax.set_xscale(\"log\", base=2)\n"
         "ax.set_xlabel(xlabel)\n"
         "ax.set_ylabel(\"frequency\")\n"
         "ax.set_ylim(0, 1.05)\n"
         "ax.grid(True, alpha=0.3)\n"
         "ax.legend()\n"
         "out = sys.argv[1] if len(sys.argv) > 1 else \"plot.png\"\n"
         "fig.savefig(out, dpi=150, bbox_inches=\"tight\")\n"
         "print(f\"wrote {out}\")\n";
  return out.str();
}

}  // namespace

void emit_plots(const std::vector<std::string>& summary_paths,
                const std::string& out_prefix) {
  if (summary_paths.empty())
    throw std::invalid_argument("emit_plots: no summary files given");
  std::string xlabel;
  std::vector<Series> series = load_series(summary_paths, xlabel);

  std::filesystem::path svg_path(out_prefix + ".svg");
  if (svg_path.has_parent_path())
    std::filesystem::create_directories(svg_path.parent_path());
  {
    std::ofstream out(svg_path, std::ios::binary);
    if (!out)
      throw std::runtime_error("emit_plots: cannot write " +
                               svg_path.string());
    out << render_svg(series, xlabel);
  }
  {
    std::ofstream out(out_prefix + ".py", std::ios::binary);
    if (!out)
      throw std::runtime_error("emit_plots: cannot write " + out_prefix +
                               ".py");
    out << render_python(summary_paths);
  }
}

}  // namespace irg

//------------------------------------------------------------------------------
//
//   Copyright 2026 The sdcount Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//
//------------------------------------------------------------------------------

#include "sdcount/errors.hpp"
#include "sdcount/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace sdcount::harness {

namespace {

constexpr double kWidth  = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft   = 70.0;
constexpr double kRight  = 150.0;
constexpr double kTop    = 40.0;
constexpr double kBottom = 60.0;

std::string fixed(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(std::string const &s)
{
  std::string out;
  for (char c : s)
  {
    switch (c)
    {
    case '&':
      out += "&amp;";
      break;
    case '<':
      out += "&lt;";
      break;
    case '>':
      out += "&gt;";
      break;
    case '"':
      out += "&quot;";
      break;
    default:
      out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(std::vector<ResultRow> const &rows)
{
  static constexpr char const *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                            "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

  if (rows.empty())
  {
    throw ParseError("render_svg: no rows to plot");
  }
  // Methods in first-appearance order; points sorted by x within a method.
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  for (auto const &r : rows)
  {
    if (series.find(r.method) == series.end())
    {
      order.push_back(r.method);
    }
    series[r.method].emplace_back(r.grid_value, r.error_rate);
  }
  double x_min = rows.front().grid_value;
  double x_max = x_min;
  for (auto const &r : rows)
  {
    x_min = std::min(x_min, r.grid_value);
    x_max = std::max(x_max, r.grid_value);
  }
  if (x_max == x_min)
  {
    x_min -= 1.0;
    x_max += 1.0;
  }

  double const plot_w = kWidth - kLeft - kRight;
  double const plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto py = [&](double y) { return kTop + (1.0 - y) * plot_h; };

  std::string const title = rows.front().scenario;
  std::string const xlabel = rows.front().grid_label;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(kWidth) << "\" height=\""
      << fixed(kHeight) << "\" viewBox=\"0 0 " << fixed(kWidth) << ' ' << fixed(kHeight)
      << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"24.00\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << escape(title) << "</text>\n";

  // Axes and ticks.
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kTop + plot_h) << "\" x2=\""
      << fixed(kLeft + plot_w) << "\" y2=\"" << fixed(kTop + plot_h) << "\"/>\n";
  svg << "<line x1=\"" << fixed(kLeft) << "\" y1=\"" << fixed(kTop) << "\" x2=\"" << fixed(kLeft)
      << "\" y2=\"" << fixed(kTop + plot_h) << "\"/>\n";
  svg << "</g>\n";
  svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (int i = 0; i <= 5; ++i)
  {
    double const y = i / 5.0;
    svg << "<line x1=\"" << fixed(kLeft - 4) << "\" y1=\"" << fixed(py(y)) << "\" x2=\""
        << fixed(kLeft) << "\" y2=\"" << fixed(py(y)) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fixed(kLeft - 8) << "\" y=\"" << fixed(py(y) + 4)
        << "\" text-anchor=\"end\">" << fixed(y) << "</text>\n";
  }
  for (int i = 0; i <= 5; ++i)
  {
    double const x = x_min + (x_max - x_min) * i / 5.0;
    svg << "<line x1=\"" << fixed(px(x)) << "\" y1=\"" << fixed(kTop + plot_h) << "\" x2=\""
        << fixed(px(x)) << "\" y2=\"" << fixed(kTop + plot_h + 4) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fixed(px(x)) << "\" y=\"" << fixed(kTop + plot_h + 18)
        << "\" text-anchor=\"middle\">" << fixed(x) << "</text>\n";
  }
  svg << "<text x=\"" << fixed(kLeft + plot_w / 2) << "\" y=\"" << fixed(kHeight - 16)
      << "\" text-anchor=\"middle\" font-size=\"13\">" << escape(xlabel) << "</text>\n";
  svg << "<text transform=\"translate(18," << fixed(kTop + plot_h / 2)
      << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"13\">error probability</text>\n";
  svg << "</g>\n";

  for (std::size_t k = 0; k < order.size(); ++k)
  {
    auto points = series[order[k]];
    std::stable_sort(points.begin(), points.end(),
                     [](auto const &a, auto const &b) { return a.first < b.first; });
    char const *color = palette[k % std::size(palette)];
    svg << "<polyline class=\"series\" data-method=\"" << escape(order[k])
        << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < points.size(); ++i)
    {
      svg << (i ? " " : "") << fixed(px(points[i].first)) << ',' << fixed(py(points[i].second));
    }
    svg << "\"/>\n";
    double const ly = kTop + 10 + 20.0 * static_cast<double>(k);
    svg << "<line x1=\"" << fixed(kWidth - kRight + 15) << "\" y1=\"" << fixed(ly) << "\" x2=\""
        << fixed(kWidth - kRight + 40) << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fixed(kWidth - kRight + 46) << "\" y=\"" << fixed(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(order[k]) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace sdcount::harness

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
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace sdcount::harness {

namespace {

std::string utc_timestamp()
{
  auto const now   = std::chrono::system_clock::now();
  std::time_t const t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string read_text(std::string const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw ConfigError("cannot open config '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Flat "key = value" lines; multi-line config text is folded with "\n".
std::string escape_value(std::string const &text)
{
  std::string out;
  for (char c : text)
  {
    if (c == '\n')
    {
      out += "\\n";
    }
    else if (c == '\\')
    {
      out += "\\\\";
    }
    else
    {
      out += c;
    }
  }
  return out;
}

}  // namespace

int cmd_estimate(EstimateOptions const &options, std::ostream &out, std::ostream &err)
{
  auto const method = parse_method(options.method);
  if (!method)
  {
    err << "error: unknown method '" << options.method << "'\n";
    return 2;
  }

  Matrix x;
  try
  {
    x = read_matrix_csv_file(options.input);
    if (x.cols() <= 10 * x.rows())
    {
      throw ParseError("need T > 10 L, got L=" + std::to_string(x.rows()) +
                       " T=" + std::to_string(x.cols()));
    }
    if (*method == Method::Rmt)
    {
      estimators::tracy_widom_quantile(options.alpha);
    }
  }
  catch (InputError const &e)
  {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try
  {
    OrderEstimate estimate;
    std::optional<SdcCurve> curve;
    switch (*method)
    {
    case Method::Sdc:
      curve    = estimators::sdc_curve(x);
      estimate = estimators::sdc_from_curve(*curve);
      break;
    case Method::Mdl:
      estimate = estimators::mdl_estimate(estimators::covariance_spectrum(x));
      break;
    case Method::Sorte:
      estimate = estimators::sorte_estimate(estimators::covariance_spectrum(x));
      break;
    case Method::Rmt:
      estimate = estimators::rmt_estimate(estimators::covariance_spectrum(x), options.alpha);
      break;
    }

    out << estimate.m_hat << '\n';
    if (options.verbose)
    {
      for (auto const &[k, score] : estimate.diagnostics)
      {
        err << method_name(*method) << '(' << k << ") = " << format_double(score) << '\n';
      }
    }
    if (curve && options.curve_out)
    {
      std::ostringstream csv;
      csv << "N,SDC\n";
      for (auto const &[n, v] : curve->values)
      {
        csv << n << ',' << format_double(v) << '\n';
      }
      write_file_atomically(*options.curve_out, csv.str());
    }
  }
  catch (std::exception const &e)
  {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

int cmd_simulate(SimulateOptions const &options, std::ostream &out, std::ostream &err)
{
  namespace fs = std::filesystem;

  std::vector<ScenarioConfig> configs;
  std::string config_text;
  std::optional<std::vector<Method>> methods;
  try
  {
    config_text = read_text(options.config);
    std::istringstream in(config_text);
    configs = parse_config(in);
    if (options.methods)
    {
      methods = parse_method_list(*options.methods);
    }
    for (auto &c : configs)
    {
      if (options.trials)
      {
        c.trials = *options.trials;
      }
      if (options.seed)
      {
        c.base_seed = *options.seed;
      }
      if (methods)
      {
        c.methods = *methods;
      }
      c.validate();
    }
    std::error_code ec;
    fs::create_directories(options.out_dir, ec);
    if (ec || !fs::is_directory(options.out_dir))
    {
      throw InputError("cannot create output directory '" + options.out_dir + "'");
    }
  }
  catch (InputError const &e)
  {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  std::ostringstream manifest;
  manifest << "tool_version = " << kToolVersion << '\n';
  manifest << "timestamp = " << utc_timestamp() << '\n';
  manifest << "config_path = " << options.config << '\n';
  manifest << "config_text = " << escape_value(config_text) << '\n';
  if (options.trials)
  {
    manifest << "trials_override = " << *options.trials << '\n';
  }
  if (options.seed)
  {
    manifest << "seed_override = " << *options.seed << '\n';
  }
  if (options.methods)
  {
    manifest << "methods_override = " << *options.methods << '\n';
  }

  try
  {
    for (auto const &c : configs)
    {
      SweepResult const result = simkit::run_sweep(c, c.methods, options.threads);

      std::string const results_path = (fs::path(options.out_dir) / ("results_" + c.name + ".csv")).string();
      std::ostringstream results;
      write_results_csv(results, result);
      write_file_atomically(results_path, results.str());

      std::string const key = "scenario." + c.name;
      manifest << key << ".config = " << escape_value(format_config(c)) << '\n';
      manifest << key << ".base_seed = " << c.base_seed << '\n';
      manifest << key << ".results = " << results_path << '\n';

      bool const has_curve = std::find(c.methods.begin(), c.methods.end(), Method::Sdc) != c.methods.end();
      if (has_curve)
      {
        std::string const curve_path =
            (fs::path(options.out_dir) / ("sdc_curve_" + c.name + ".csv")).string();
        std::ostringstream curve;
        write_curve_csv(curve, result);
        write_file_atomically(curve_path, curve.str());
        manifest << key << ".sdc_curve = " << curve_path << '\n';
      }

      std::size_t failures = 0;
      for (std::size_t g = 0; g < result.points.size(); ++g)
      {
        for (auto const &msg : result.points[g].failure_messages)
        {
          manifest << key << ".failure." << failures << " = grid " << g << ": "
                   << escape_value(msg) << '\n';
          ++failures;
        }
      }
      manifest << key << ".failures = " << failures << '\n';
      out << c.name << ": " << result.points.size() << " grid points, " << failures
          << " failed trials -> " << results_path << '\n';
    }
    write_file_atomically((fs::path(options.out_dir) / "manifest.txt").string(), manifest.str());
  }
  catch (InputError const &e)
  {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  catch (std::exception const &e)
  {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

int cmd_plot(PlotOptions const &options, std::ostream &out, std::ostream &err)
{
  try
  {
    std::ifstream in(options.results);
    if (!in)
    {
      throw ParseError("cannot open '" + options.results + "'");
    }
    auto const rows = read_results_csv(in);
    write_file_atomically(options.out, render_svg(rows));
    out << "wrote " << options.out << '\n';
  }
  catch (InputError const &e)
  {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  catch (std::exception const &e)
  {
    err << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

}  // namespace sdcount::harness

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

#pragma once

#include "sdcount/estimators.hpp"
#include "sdcount/numerics.hpp"
#include "sdcount/simkit.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sdcount::harness {

inline constexpr char const *kToolVersion = "0.3.0";

// ---------------------------------------------------------------------------
// Scenario config files.
//
// Line-oriented text. '#' starts a comment, blank lines are ignored. Each
// "[scenario]" header opens a block of "key = value" lines:
//
//   id, name, sensors, sources ("4", "2-7" or "2,3,4"), source_laws,
//   dominant_source_db, mixing, smallest_singular, noise, noise_correlation,
//   grid_label, grid, samples, noise_db, spread_db, trials, seed, methods,
//   alpha
//
// samples, noise_db and spread_db take either one value or one value per
// grid entry.
// ---------------------------------------------------------------------------

std::vector<ScenarioConfig> parse_config(std::istream &in);
std::vector<ScenarioConfig> load_config(std::string const &path);

/// Canonical text for one scenario block; parse_config reads it back to an
/// identical config.
std::string format_config(ScenarioConfig const &config);

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// L rows by T comma-separated values, no header.
Matrix read_matrix_csv(std::istream &in);
Matrix read_matrix_csv_file(std::string const &path);

/// 17 significant digits, so read_matrix_csv recovers the exact doubles.
void write_matrix_csv(std::ostream &out, Matrix const &m);

inline constexpr char const *kResultsHeader =
    "scenario,grid_label,grid_value,method,trials,errors,error_rate";
inline constexpr char const *kCurveHeader = "scenario,grid_label,grid_value,N,mean_sdc";

void write_results_csv(std::ostream &out, SweepResult const &result);
void write_curve_csv(std::ostream &out, SweepResult const &result);

struct ResultRow
{
  std::string scenario;
  std::string grid_label;
  double grid_value = 0.0;
  std::string method;
  int trials        = 0;
  int errors        = 0;
  double error_rate = 0.0;
};

/// Throws ParseError on a header or row mismatch, or when there are no rows.
std::vector<ResultRow> read_results_csv(std::istream &in);

/// One polyline per method, x = grid_value, y = error_rate.
std::string render_svg(std::vector<ResultRow> const &rows);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomically(std::string const &path, std::string const &contents);

std::string format_double(double value);

// ---------------------------------------------------------------------------
// Commands. Each returns the process exit code: 0 success, 2 input error,
// 3 computation error.
// ---------------------------------------------------------------------------

struct EstimateOptions
{
  std::string input;
  std::string method = "sdc";
  std::optional<std::string> curve_out;
  double alpha = 0.1;
  bool verbose = false;
};

struct SimulateOptions
{
  std::string config;
  std::string out_dir;
  std::optional<std::string> methods;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;
};

struct PlotOptions
{
  std::string results;
  std::string out;
};

int cmd_estimate(EstimateOptions const &options, std::ostream &out, std::ostream &err);
int cmd_simulate(SimulateOptions const &options, std::ostream &out, std::ostream &err);
int cmd_plot(PlotOptions const &options, std::ostream &out, std::ostream &err);

/// Comma-separated method list, e.g. "sdc,mdl".
std::vector<Method> parse_method_list(std::string const &text);

}  // namespace sdcount::harness

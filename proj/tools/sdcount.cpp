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

#include "sdcount/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char **argv)
{
  CLI::App app{"Blind source-count estimation and Monte-Carlo benchmarks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sdcount::harness::kToolVersion);

  sdcount::harness::EstimateOptions estimate;
  auto *est = app.add_subcommand("estimate", "Estimate the number of sources in a data matrix");
  est->add_option("--input", estimate.input, "CSV matrix, L rows by T columns, no header")
      ->required();
  est->add_option("--method", estimate.method, "sdc | mdl | sorte | rmt")
      ->check(CLI::IsMember({"sdc", "mdl", "sorte", "rmt"}));
  est->add_option("--curve-out", estimate.curve_out, "write the SDC curve (N,SDC) here");
  est->add_option("--alpha", estimate.alpha, "RMT significance level");
  est->add_flag("--verbose", estimate.verbose, "print per-candidate scores to stderr");

  sdcount::harness::SimulateOptions simulate;
  auto *sim = app.add_subcommand("simulate", "Run the Monte-Carlo scenarios of a config file");
  sim->add_option("--config", simulate.config, "scenario config file")->required();
  sim->add_option("--out", simulate.out_dir, "output directory")->required();
  sim->add_option("--methods", simulate.methods, "comma-separated subset of sdc,mdl,sorte,rmt");
  sim->add_option("--trials", simulate.trials, "override the trial count")
      ->check(CLI::PositiveNumber);
  sim->add_option("--seed", simulate.seed, "override the base seed");
  sim->add_option("--threads", simulate.threads, "worker threads (0 = all cores)");

  sdcount::harness::PlotOptions plot;
  auto *plt = app.add_subcommand("plot", "Render a results CSV as an SVG line chart");
  plt->add_option("--results", plot.results, "results CSV from simulate")->required();
  plt->add_option("--out", plot.out, "SVG output path")->required();

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::ParseError const &e)
  {
    int const code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*est)
  {
    return sdcount::harness::cmd_estimate(estimate, std::cout, std::cerr);
  }
  if (*sim)
  {
    return sdcount::harness::cmd_simulate(simulate, std::cout, std::cerr);
  }
  return sdcount::harness::cmd_plot(plot, std::cout, std::cerr);
}

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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
// if any criterion fails.

#include "sdcount/dcor.hpp"
#include "sdcount/estimators.hpp"
#include "sdcount/harness.hpp"
#include "sdcount/ica.hpp"
#include "sdcount/simkit.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace {

using namespace sdcount;
using Clock = std::chrono::steady_clock;

struct Verdict
{
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void run(int id, std::string const &name, double budget_s, std::function<Verdict()> const &body)
{
  auto const start = Clock::now();
  Verdict v;
  try
  {
    v = body();
  }
  catch (std::exception const &e)
  {
    v = {false, std::string("exception: ") + e.what()};
  }
  double const secs = std::chrono::duration<double>(Clock::now() - start).count();
  bool const in_time = budget_s <= 0.0 || secs <= budget_s;
  bool const pass    = v.pass && in_time;
  if (!pass)
  {
    ++g_failures;
  }
  char timing[96];
  if (budget_s > 0.0)
  {
    std::snprintf(timing, sizeof timing, "%.1fs of %.0fs", secs, budget_s);
  }
  else
  {
    std::snprintf(timing, sizeof timing, "%.1fs", secs);
  }
  std::cout << (pass ? "PASS" : "FAIL") << "  [" << id << "] " << name << ": " << v.detail
            << " (" << timing << (in_time ? "" : ", over budget") << ")" << std::endl;
}

Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64 &rng)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
  {
    for (Eigen::Index i = 0; i < rows; ++i)
    {
      m(i, j) = normal(rng);
    }
  }
  return m;
}

// Dense distance matrix, written out independently of the library.
Matrix distances(Matrix const &x)
{
  Eigen::Index const t = x.cols();
  Matrix d(t, t);
  for (Eigen::Index i = 0; i < t; ++i)
  {
    for (Eigen::Index j = 0; j < t; ++j)
    {
      d(i, j) = (x.col(i) - x.col(j)).norm();
    }
  }
  return d;
}

double trace_form(Matrix const &x, Matrix const &y)
{
  double const t = static_cast<double>(x.cols());
  Matrix const p = Matrix::Identity(x.cols(), x.cols()) - Matrix::Constant(x.cols(), x.cols(), 1.0 / t);
  return (p * distances(x) * p * distances(y)).trace() / (t * t);
}

double double_centred_sum(Matrix const &x, Matrix const &y)
{
  auto centre = [](Matrix const &d) {
    Matrix out = d;
    Vector const r = d.rowwise().mean();
    Vector const c = d.colwise().mean().transpose();
    double const g = d.mean();
    for (Eigen::Index i = 0; i < d.rows(); ++i)
    {
      for (Eigen::Index j = 0; j < d.cols(); ++j)
      {
        out(i, j) = d(i, j) - r[i] - c[j] + g;
      }
    }
    return out;
  };
  double const t = static_cast<double>(x.cols());
  return centre(distances(x)).cwiseProduct(centre(distances(y))).sum() / (t * t);
}

double scalar_dcor(Matrix const &row_a, Matrix const &row_b)
{
  return dcor(SampleSet(row_a), SampleSet(row_b));
}

ScenarioConfig scenario(std::string const &file)
{
  auto configs = harness::load_config(std::string(SDCOUNT_CONFIG_DIR) + "/" + file);
  return configs.front();
}

std::size_t grid_index(ScenarioConfig const &c, double value)
{
  for (std::size_t g = 0; g < c.grid.size(); ++g)
  {
    if (c.grid[g].value == value)
    {
      return g;
    }
  }
  throw std::runtime_error("grid value missing from " + c.name);
}

std::vector<TrialOutcome> trials_at(ScenarioConfig const &c, std::size_t g,
                                    std::vector<Method> const &methods, int trials)
{
  Eigen::Index const m = c.source_counts.front();
  std::vector<TrialOutcome> out;
  for (int t = 0; t < trials; ++t)
  {
    out.push_back(simkit::run_trial(c, c.grid[g], m, simkit::trial_seed(c, g, m, t), methods));
  }
  return out;
}

double error_rate(std::vector<TrialOutcome> const &outcomes, Method method)
{
  int errors = 0;
  for (auto const &o : outcomes)
  {
    auto const &hat = o.m_hat.at(method);
    errors += (!hat || *hat != o.true_sources) ? 1 : 0;
  }
  return static_cast<double>(errors) / static_cast<double>(outcomes.size());
}

std::string fmt(char const *pattern, double a, double b = 0.0, double c = 0.0)
{
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

Eigen::Index mdl_brute(EigenSpectrum const &s)
{
  Eigen::Index const l = s.eigenvalues.size();
  long double const t  = static_cast<long double>(s.sample_count);
  Eigen::Index best_k  = 0;
  long double best     = std::numeric_limits<long double>::infinity();
  for (Eigen::Index k = 0; k < l; ++k)
  {
    long double lp = 0.0L, sum = 0.0L;
    for (Eigen::Index i = k; i < l; ++i)
    {
      lp += std::log(static_cast<long double>(s.eigenvalues[i]));
      sum += s.eigenvalues[i];
    }
    long double const p = static_cast<long double>(l - k);
    long double const v = t * p * (std::log(sum / p) - lp / p) + 0.5L * k * (2 * l - k) * std::log(t);
    if (v < best)
    {
      best   = v;
      best_k = k;
    }
  }
  return best_k;
}

Eigen::Index sorte_brute(EigenSpectrum const &s)
{
  Eigen::Index const l = s.eigenvalues.size();
  std::vector<long double> gaps;
  for (Eigen::Index i = 0; i + 1 < l; ++i)
  {
    gaps.push_back(static_cast<long double>(s.eigenvalues[i]) - s.eigenvalues[i + 1]);
  }
  auto var = [&gaps](std::size_t from) {
    long double mean = 0.0L;
    for (std::size_t i = from; i < gaps.size(); ++i)
    {
      mean += gaps[i];
    }
    mean /= static_cast<long double>(gaps.size() - from);
    long double acc = 0.0L;
    for (std::size_t i = from; i < gaps.size(); ++i)
    {
      acc += (gaps[i] - mean) * (gaps[i] - mean);
    }
    return acc / static_cast<long double>(gaps.size() - from);
  };
  Eigen::Index best_k = 1;
  long double best    = std::numeric_limits<long double>::infinity();
  for (Eigen::Index k = 1; k <= l - 3; ++k)
  {
    long double const den = var(static_cast<std::size_t>(k - 1));
    long double const v   = den > 0.0L ? var(static_cast<std::size_t>(k)) / den
                                       : std::numeric_limits<long double>::infinity();
    if (v < best)
    {
      best   = v;
      best_k = k;
    }
  }
  return best_k;
}

std::string slurp(std::filesystem::path const &p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main()
{
  run(1, "dCov trace form equals double-centred sum", 5.0, [] {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> tdist(2, 16), ddist(1, 3);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i)
    {
      int const t    = tdist(rng);
      Matrix const x = normal_matrix(ddist(rng), t, rng);
      Matrix const y = normal_matrix(ddist(rng), t, rng);
      double const tr  = trace_form(x, y);
      double const dc  = double_centred_sum(x, y);
      double const lib = dcov_sq(SampleSet(x), SampleSet(y));
      worst = std::max({worst, std::abs(tr - dc), std::abs(lib - tr), std::abs(lib - dc)});
    }
    return Verdict{worst <= 1e-12, fmt("max |diff| = %.2e over 200 instances", worst)};
  });

  run(2, "dCor analytic cases", 5.0, [] {
    std::mt19937_64 rng(202);
    double worst = 0.0;
    bool zeros   = true;
    for (int i = 0; i < 50; ++i)
    {
      Matrix const x = normal_matrix(1, 50, rng);
      worst = std::max(worst, std::abs(scalar_dcor(x, x) - 1.0));
      for (double a : {-2.0, 0.5, 10.0})
      {
        Matrix const y = (a * x).array() + 3.25;
        worst = std::max(worst, std::abs(scalar_dcor(x, y) - 1.0));
      }
      Matrix const c = Matrix::Constant(1, 50, 1.5);
      zeros = zeros && scalar_dcor(x, c) == 0.0 && scalar_dcor(c, x) == 0.0;
    }
    return Verdict{worst <= 1e-12 && zeros,
                   fmt("max |dcor - 1| = %.2e, constant gives exact 0: ", worst) +
                       (zeros ? "yes" : "no")};
  });

  run(3, "dCor of independent normals at T=10000", 120.0, [] {
    int ok       = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
      std::mt19937_64 rng(simkit::derive_seed(303, {seed}));
      Matrix const x = normal_matrix(1, 10000, rng);
      Matrix const y = normal_matrix(1, 10000, rng);
      double const d = scalar_dcor(x, y);
      worst = std::max(worst, d);
      ok += d <= 0.05 ? 1 : 0;
    }
    return Verdict{ok >= 99, fmt("%.0f/100 seeds <= 0.05, largest %.4f", ok, worst)};
  });

  run(4, "ICA consistency, noiseless L=M=3", 300.0, [] {
    int ok       = 0;
    double worst = 0.0;
    std::vector<SourceSpec> const specs = {
        {SourceLaw::Laplace, 1.0}, {SourceLaw::Uniform, 1.0}, {SourceLaw::Rademacher, 1.0}};
    for (std::uint64_t seed = 0; seed < 100; ++seed)
    {
      std::mt19937_64 rng(simkit::derive_seed(404, {seed, 1}));
      Matrix const a = normal_matrix(3, 3, rng);
      Matrix const s = simkit::draw_sources(specs, 10000, simkit::derive_seed(404, {seed, 2}));
      double const amari = ica::amari_index(ica::separate(a * s, 3).unmixing * a);
      worst = std::max(worst, amari);
      ok += amari <= 0.05 ? 1 : 0;
    }
    return Verdict{ok >= 95, fmt("%.0f/100 seeds with Amari <= 0.05, worst %.4f", ok, worst)};
  });

  // Criteria 5 and 6 share the k = 6 trials.
  std::vector<TrialOutcome> k6;
  run(5, "SDC curve structure, scenario 1 at k=6", 900.0, [&k6] {
    ScenarioConfig const c = scenario("scenario1.cfg");
    k6 = trials_at(c, grid_index(c, 6.0), {Method::Sdc}, 100);
    int strict = 0;
    std::vector<double> ratios;
    for (auto const &o : k6)
    {
      auto const &v = o.sdc->values;
      double const at_m = v.at(4);
      double other      = std::numeric_limits<double>::infinity();
      for (auto const &[n, value] : v)
      {
        if (n != 4)
        {
          other = std::min(other, value);
        }
      }
      strict += at_m < other ? 1 : 0;
      ratios.push_back(at_m > 0.0 ? other / at_m : std::numeric_limits<double>::infinity());
    }
    std::sort(ratios.begin(), ratios.end());
    double const median = 0.5 * (ratios[49] + ratios[50]);
    return Verdict{strict >= 95 && median >= 10.0,
                   fmt("SDC(4) strict minimum in %.0f/100, median ratio %.2f", strict, median)};
  });

  run(6, "SDC consistency trend, scenario 1 k=1 vs k=6", 0.0, [&k6] {
    ScenarioConfig const c = scenario("scenario1.cfg");
    auto const k1 = trials_at(c, grid_index(c, 1.0), {Method::Sdc}, 100);
    double const e1 = error_rate(k1, Method::Sdc);
    double const e6 = error_rate(k6, Method::Sdc);
    return Verdict{e6 <= e1 && e6 <= 0.05,
                   fmt("error rate k=1 %.2f, k=6 %.2f", e1, e6)};
  });

  run(7, "Perturbed white noise ordering, scenario 2", 1200.0, [] {
    ScenarioConfig const c = scenario("scenario2.cfg");
    std::vector<Method> const methods = {Method::Sdc, Method::Mdl};
    auto const e0 = trials_at(c, grid_index(c, 0.0), methods, 100);
    auto const e3 = trials_at(c, grid_index(c, 3.0), methods, 100);
    double const sdc0 = error_rate(e0, Method::Sdc);
    double const mdl0 = error_rate(e0, Method::Mdl);
    double const sdc3 = error_rate(e3, Method::Sdc);
    double const mdl3 = error_rate(e3, Method::Mdl);
    bool const pass = sdc0 <= 0.15 && mdl0 <= 0.15 && mdl3 >= sdc3;
    return Verdict{pass, fmt("eps=0: SDC %.2f MDL %.2f; ", sdc0, mdl0) +
                             fmt("eps=3: SDC %.2f MDL %.2f", sdc3, mdl3)};
  });

  run(8, "Correlated noise robustness, scenario 4a at 30 dB", 1200.0, [] {
    ScenarioConfig const c = scenario("scenario4a.cfg");
    auto const out = trials_at(c, grid_index(c, 30.0), {Method::Sdc, Method::Mdl}, 100);
    double const sdc = error_rate(out, Method::Sdc);
    double const mdl = error_rate(out, Method::Mdl);
    return Verdict{sdc <= 0.15 && mdl >= sdc, fmt("SDC %.2f, MDL %.2f", sdc, mdl)};
  });

  run(9, "MDL and SORTE match brute-force criteria", 1.0, [] {
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int mismatches = 0;
    for (int i = 0; i < 100; ++i)
    {
      int const l      = std::uniform_int_distribution<int>(4, 12)(rng);
      int const spikes = std::uniform_int_distribution<int>(0, l - 1)(rng);
      std::vector<double> v;
      for (int j = 0; j < l; ++j)
      {
        double const floor = 1.0 + 0.3 * unit(rng);
        v.push_back(j < spikes ? floor * std::pow(10.0, 3.0 * unit(rng)) : floor);
      }
      std::sort(v.rbegin(), v.rend());
      EigenSpectrum s{Eigen::Map<Vector>(v.data(), l), std::uniform_int_distribution<int>(50, 5000)(rng)};
      mismatches += estimators::mdl_estimate(s).m_hat != mdl_brute(s) ? 1 : 0;
      mismatches += estimators::sorte_estimate(s).m_hat != sorte_brute(s) ? 1 : 0;
    }
    return Verdict{mismatches == 0, fmt("%.0f argmin mismatches over 100 spectra", mismatches)};
  });

  run(10, "Weyl sandwich on generated population covariances", 5.0, [] {
    double worst = -std::numeric_limits<double>::infinity();
    NoiseKind const kinds[] = {NoiseKind::White, NoiseKind::PerturbedDiagonal,
                               NoiseKind::UniformDiagonal, NoiseKind::Tridiagonal};
    for (int i = 0; i < 50; ++i)
    {
      Eigen::Index const l = 4 + i % 7;
      Eigen::Index const m = 2 + i % static_cast<int>(l - 2);
      std::uint64_t const seed = simkit::derive_seed(1010, {static_cast<std::uint64_t>(i)});
      Matrix const a = simkit::draw_mixing(l, m, i % 2 ? MixingLaw::StdUniform01 : MixingLaw::StdGaussian,
                                           seed);
      NoiseModel model;
      model.kind      = kinds[i % 4];
      model.variance  = db_to_linear(-20.0 + i);
      model.spread_db = 10.0;
      model.correlation = 0.1;
      Matrix const r  = simkit::build_noise_cov(model, l, seed + 1);
      Matrix const aa = a * a.transpose();
      Vector const x  = numerics::sym_eig(aa + r).values;
      Vector const s  = numerics::sym_eig(aa).values;
      Vector const n  = numerics::sym_eig(r).values;
      for (Eigen::Index k = 0; k < l; ++k)
      {
        worst = std::max(worst, (s[k] + n[l - 1]) - x[k]);
        worst = std::max(worst, x[k] - (s[k] + n[0]));
      }
    }
    return Verdict{worst <= 1e-9, fmt("largest bound violation %.2e", worst)};
  });

  run(11, "simulate is byte-for-byte repeatable", 0.0, [] {
    namespace fs = std::filesystem;
    fs::path const root = fs::temp_directory_path() / ("sdcount_accept_" + std::to_string(::getpid()));
    fs::remove_all(root);
    std::string const cli = SDCOUNT_CLI;
    std::vector<std::string> const cfgs = {"scenario2.cfg", "scenario3b.cfg"};
    bool same   = true;
    int compared = 0;
    for (auto const &cfg : cfgs)
    {
      for (char const *run_name : {"a", "b"})
      {
        std::string const cmd = cli + " simulate --config " + SDCOUNT_CONFIG_DIR + "/" + cfg +
                                " --out " + (root / cfg / run_name).string() +
                                " --trials 2 --threads 2 > /dev/null";
        if (std::system(cmd.c_str()) != 0)
        {
          fs::remove_all(root);
          return Verdict{false, "simulate exited non-zero for " + cfg};
        }
      }
      for (auto const &entry : fs::directory_iterator(root / cfg / "a"))
      {
        std::string const name = entry.path().filename().string();
        if (name == "manifest.txt")
        {
          continue;
        }
        same = same && slurp(entry.path()) == slurp(root / cfg / "b" / name);
        ++compared;
      }
    }
    fs::remove_all(root);
    return Verdict{same && compared >= 4,
                   fmt("%.0f result files compared, identical: ", compared) + (same ? "yes" : "no")};
  });

  std::cout << (g_failures == 0 ? "all criteria passed" : std::to_string(g_failures) + " criteria failed")
            << std::endl;
  return g_failures == 0 ? 0 : 1;
}

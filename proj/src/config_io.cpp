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
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace sdcount::harness {

namespace {

std::string trim(std::string_view s)
{
  auto const first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
  {
    return {};
  }
  auto const last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep)
{
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true)
  {
    auto const pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos)
    {
      break;
    }
    start = pos + 1;
  }
  return parts;
}

double to_double(std::string const &text, std::string const &key)
{
  double value    = 0.0;
  auto const *end = text.data() + text.size();
  auto const res  = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end || text.empty())
  {
    throw ConfigError("key '" + key + "': '" + text + "' is not a number");
  }
  return value;
}

long long to_integer(std::string const &text, std::string const &key)
{
  long long value = 0;
  auto const *end = text.data() + text.size();
  auto const res  = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end || text.empty())
  {
    throw ConfigError("key '" + key + "': '" + text + "' is not an integer");
  }
  return value;
}

std::vector<double> to_doubles(std::string const &text, std::string const &key)
{
  std::vector<double> out;
  for (auto const &part : split(text, ','))
  {
    out.push_back(to_double(part, key));
  }
  return out;
}

std::vector<Eigen::Index> to_source_counts(std::string const &text)
{
  std::vector<Eigen::Index> out;
  auto const dash = text.find('-');
  if (dash != std::string::npos && text.find(',') == std::string::npos)
  {
    auto const lo = to_integer(trim(text.substr(0, dash)), "sources");
    auto const hi = to_integer(trim(text.substr(dash + 1)), "sources");
    if (hi < lo)
    {
      throw ConfigError("key 'sources': empty range " + text);
    }
    for (auto m = lo; m <= hi; ++m)
    {
      out.push_back(static_cast<Eigen::Index>(m));
    }
    return out;
  }
  for (auto const &part : split(text, ','))
  {
    out.push_back(static_cast<Eigen::Index>(to_integer(part, "sources")));
  }
  return out;
}

std::string join_doubles(std::vector<double> const &values)
{
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i)
  {
    if (i > 0)
    {
      out += ",";
    }
    out += format_double(values[i]);
  }
  return out;
}

// Raw key/values of one block, assembled into a config once the block ends.
struct Block
{
  int line = 0;
  std::map<std::string, std::string> values;
};

std::vector<double> per_point(Block const &block, std::string const &key, std::size_t n,
                              std::optional<double> fallback)
{
  auto const it = block.values.find(key);
  if (it == block.values.end())
  {
    if (!fallback)
    {
      throw ConfigError("missing key '" + key + "'");
    }
    return std::vector<double>(n, *fallback);
  }
  auto values = to_doubles(it->second, key);
  if (values.size() == 1)
  {
    return std::vector<double>(n, values.front());
  }
  if (values.size() != n)
  {
    throw ConfigError("key '" + key + "' has " + std::to_string(values.size()) +
                      " values for a grid of " + std::to_string(n));
  }
  return values;
}

ScenarioConfig build(Block const &block)
{
  static std::set<std::string> const known = {
      "id",    "name",     "sensors",   "sources",   "source_laws",       "dominant_source_db",
      "mixing", "smallest_singular", "noise", "noise_correlation", "grid_label", "grid",
      "samples", "noise_db", "spread_db", "trials", "seed", "methods", "alpha"};
  for (auto const &[key, value] : block.values)
  {
    if (known.count(key) == 0)
    {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  auto required = [&block](std::string const &key) -> std::string const & {
    auto const it = block.values.find(key);
    if (it == block.values.end())
    {
      throw ConfigError("missing key '" + key + "'");
    }
    return it->second;
  };
  auto optional = [&block](std::string const &key) -> std::optional<std::string> {
    auto const it = block.values.find(key);
    return it == block.values.end() ? std::nullopt : std::optional<std::string>(it->second);
  };

  ScenarioConfig c;
  c.scenario_id   = static_cast<int>(to_integer(required("id"), "id"));
  c.name          = optional("name").value_or("scenario" + std::to_string(c.scenario_id));
  c.sensors       = static_cast<Eigen::Index>(to_integer(required("sensors"), "sensors"));
  c.source_counts = to_source_counts(required("sources"));

  c.source_laws.clear();
  for (auto const &name : split(required("source_laws"), ','))
  {
    auto const law = parse_source_law(name);
    if (!law)
    {
      throw ConfigError("unknown source law '" + name + "'");
    }
    c.source_laws.push_back(*law);
  }
  if (auto v = optional("dominant_source_db"))
  {
    c.dominant_source_db = to_double(*v, "dominant_source_db");
  }
  if (auto v = optional("mixing"))
  {
    auto const law = parse_mixing_law(*v);
    if (!law)
    {
      throw ConfigError("unknown mixing law '" + *v + "'");
    }
    c.mixing = *law;
  }
  if (auto v = optional("smallest_singular"))
  {
    c.smallest_singular = to_double(*v, "smallest_singular");
  }
  if (auto v = optional("noise"))
  {
    auto const kind = parse_noise_kind(*v);
    if (!kind)
    {
      throw ConfigError("unknown noise kind '" + *v + "'");
    }
    c.noise = *kind;
  }
  if (auto v = optional("noise_correlation"))
  {
    c.noise_correlation = to_double(*v, "noise_correlation");
  }
  c.grid_label = optional("grid_label").value_or("grid");

  auto const grid    = to_doubles(required("grid"), "grid");
  auto const samples = per_point(block, "samples", grid.size(), std::nullopt);
  auto const noise   = per_point(block, "noise_db", grid.size(), std::nullopt);
  auto const spread  = per_point(block, "spread_db", grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i)
  {
    if (samples[i] != std::floor(samples[i]) || samples[i] < 1.0)
    {
      throw ConfigError("samples must be positive integers");
    }
    c.grid.push_back({grid[i], static_cast<Eigen::Index>(samples[i]), noise[i], spread[i]});
  }

  if (auto v = optional("trials"))
  {
    c.trials = static_cast<int>(to_integer(*v, "trials"));
  }
  if (auto v = optional("seed"))
  {
    std::uint64_t seed = 0;
    auto const *end    = v->data() + v->size();
    auto const res     = std::from_chars(v->data(), end, seed);
    if (res.ec != std::errc{} || res.ptr != end)
    {
      throw ConfigError("key 'seed': '" + *v + "' is not an unsigned 64-bit integer");
    }
    c.base_seed = seed;
  }
  if (auto v = optional("methods"))
  {
    c.methods = parse_method_list(*v);
  }
  if (auto v = optional("alpha"))
  {
    c.alpha = to_double(*v, "alpha");
  }
  c.validate();
  return c;
}

}  // namespace

std::vector<Method> parse_method_list(std::string const &text)
{
  std::vector<Method> out;
  for (auto const &name : split(text, ','))
  {
    auto const m = parse_method(name);
    if (!m)
    {
      throw ConfigError("unknown method '" + name + "'");
    }
    if (std::find(out.begin(), out.end(), *m) == out.end())
    {
      out.push_back(*m);
    }
  }
  if (out.empty())
  {
    throw ConfigError("empty method list");
  }
  return out;
}

std::vector<ScenarioConfig> parse_config(std::istream &in)
{
  std::vector<Block> blocks;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line))
  {
    ++line_no;
    auto const hash = line.find('#');
    std::string const text = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (text.empty())
    {
      continue;
    }
    if (text == "[scenario]")
    {
      blocks.push_back(Block{line_no, {}});
      continue;
    }
    auto const eq = text.find('=');
    if (eq == std::string::npos)
    {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    if (blocks.empty())
    {
      throw ConfigError("line " + std::to_string(line_no) + ": key outside a [scenario] block");
    }
    std::string const key = trim(text.substr(0, eq));
    if (!blocks.back().values.emplace(key, trim(text.substr(eq + 1))).second)
    {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  if (blocks.empty())
  {
    throw ConfigError("config has no [scenario] block");
  }

  std::vector<ScenarioConfig> out;
  std::set<std::string> names;
  for (auto const &block : blocks)
  {
    try
    {
      out.push_back(build(block));
    }
    catch (ConfigError const &e)
    {
      throw ConfigError("block at line " + std::to_string(block.line) + ": " + e.what());
    }
    if (!names.insert(out.back().name).second)
    {
      throw ConfigError("duplicate scenario name '" + out.back().name + "'");
    }
  }
  return out;
}

std::vector<ScenarioConfig> load_config(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ConfigError("cannot open config '" + path + "'");
  }
  return parse_config(in);
}

std::string format_config(ScenarioConfig const &c)
{
  std::ostringstream out;
  auto collect = [&c](auto member) {
    std::vector<double> values;
    for (auto const &p : c.grid)
    {
      values.push_back(static_cast<double>(std::invoke(member, p)));
    }
    return join_doubles(values);
  };

  out << "[scenario]\n";
  out << "id = " << c.scenario_id << "\n";
  out << "name = " << c.name << "\n";
  out << "sensors = " << c.sensors << "\n";
  out << "sources = ";
  for (std::size_t i = 0; i < c.source_counts.size(); ++i)
  {
    out << (i ? "," : "") << c.source_counts[i];
  }
  out << "\nsource_laws = ";
  for (std::size_t i = 0; i < c.source_laws.size(); ++i)
  {
    out << (i ? "," : "") << source_law_name(c.source_laws[i]);
  }
  out << "\n";
  if (c.dominant_source_db)
  {
    out << "dominant_source_db = " << format_double(*c.dominant_source_db) << "\n";
  }
  out << "mixing = " << mixing_law_name(c.mixing) << "\n";
  if (c.smallest_singular)
  {
    out << "smallest_singular = " << format_double(*c.smallest_singular) << "\n";
  }
  out << "noise = " << noise_kind_name(c.noise) << "\n";
  out << "noise_correlation = " << format_double(c.noise_correlation) << "\n";
  out << "grid_label = " << c.grid_label << "\n";
  out << "grid = " << collect(&GridPoint::value) << "\n";
  out << "samples = " << collect(&GridPoint::samples) << "\n";
  out << "noise_db = " << collect(&GridPoint::noise_db) << "\n";
  out << "spread_db = " << collect(&GridPoint::spread_db) << "\n";
  out << "trials = " << c.trials << "\n";
  out << "seed = " << c.base_seed << "\n";
  out << "methods = ";
  for (std::size_t i = 0; i < c.methods.size(); ++i)
  {
    out << (i ? "," : "") << method_name(c.methods[i]);
  }
  out << "\nalpha = " << format_double(c.alpha) << "\n";
  return out.str();
}

}  // namespace sdcount::harness

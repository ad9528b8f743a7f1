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

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace sdcount::harness {

namespace {

std::vector<std::string> split_fields(std::string const &line)
{
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ','))
  {
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',')
  {
    out.emplace_back();
  }
  return out;
}

std::string strip(std::string s)
{
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t'))
  {
    s.pop_back();
  }
  std::size_t i = 0;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
  {
    ++i;
  }
  return s.substr(i);
}

double parse_field(std::string const &raw, int line_no)
{
  std::string const text = strip(raw);
  double value           = 0.0;
  auto const *end        = text.data() + text.size();
  auto const res         = std::from_chars(text.data(), end, value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != end || !std::isfinite(value))
  {
    throw ParseError("line " + std::to_string(line_no) + ": '" + text + "' is not a finite number");
  }
  return value;
}

int parse_count(std::string const &raw, int line_no)
{
  std::string const text = strip(raw);
  int value              = 0;
  auto const *end        = text.data() + text.size();
  auto const res         = std::from_chars(text.data(), end, value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != end || value < 0)
  {
    throw ParseError("line " + std::to_string(line_no) + ": '" + text + "' is not a count");
  }
  return value;
}

}  // namespace

std::string format_double(double value)
{
  std::array<char, 64> buf{};
  auto const res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

Matrix read_matrix_csv(std::istream &in)
{
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line))
  {
    ++line_no;
    if (strip(line).empty())
    {
      continue;
    }
    std::vector<double> row;
    for (auto const &field : split_fields(line))
    {
      row.push_back(parse_field(field, line_no));
    }
    if (!rows.empty() && row.size() != rows.front().size())
    {
      throw ParseError("line " + std::to_string(line_no) + ": " + std::to_string(row.size()) +
                       " values, expected " + std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty())
  {
    throw ParseError("matrix CSV is empty");
  }
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
  {
    for (std::size_t j = 0; j < rows[i].size(); ++j)
    {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

Matrix read_matrix_csv_file(std::string const &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw ParseError("cannot open '" + path + "'");
  }
  return read_matrix_csv(in);
}

void write_matrix_csv(std::ostream &out, Matrix const &m)
{
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i)
  {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
    {
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out << (j ? "," : "") << buf;
    }
    out << '\n';
  }
}

void write_results_csv(std::ostream &out, SweepResult const &result)
{
  auto const &c = result.config;
  out << kResultsHeader << '\n';
  for (auto const &point : result.points)
  {
    for (auto method : c.methods)
    {
      auto const it = point.methods.find(method);
      if (it == point.methods.end())
      {
        continue;
      }
      MethodOutcome const &mo = it->second;
      out << c.name << ',' << c.grid_label << ',' << format_double(point.point.value) << ','
          << method_name(method) << ',' << mo.trials << ',' << mo.errors << ','
          << format_double(mo.error_rate()) << '\n';
    }
  }
}

void write_curve_csv(std::ostream &out, SweepResult const &result)
{
  auto const &c = result.config;
  out << kCurveHeader << '\n';
  for (auto const &point : result.points)
  {
    for (auto const &[n, value] : point.mean_sdc_curve)
    {
      out << c.name << ',' << c.grid_label << ',' << format_double(point.point.value) << ','
          << n << ',' << format_double(value) << '\n';
    }
  }
}

std::vector<ResultRow> read_results_csv(std::istream &in)
{
  std::string line;
  if (!std::getline(in, line))
  {
    throw ParseError("results file is empty");
  }
  if (strip(line) != kResultsHeader)
  {
    throw ParseError("results header mismatch: expected '" + std::string(kResultsHeader) + "'");
  }
  std::vector<ResultRow> rows;
  int line_no = 1;
  while (std::getline(in, line))
  {
    ++line_no;
    if (strip(line).empty())
    {
      continue;
    }
    auto const fields = split_fields(strip(line));
    if (fields.size() != 7)
    {
      throw ParseError("line " + std::to_string(line_no) + ": expected 7 fields");
    }
    ResultRow row;
    row.scenario   = strip(fields[0]);
    row.grid_label = strip(fields[1]);
    row.grid_value = parse_field(fields[2], line_no);
    row.method     = strip(fields[3]);
    row.trials     = parse_count(fields[4], line_no);
    row.errors     = parse_count(fields[5], line_no);
    row.error_rate = parse_field(fields[6], line_no);
    if (row.error_rate < 0.0 || row.error_rate > 1.0 || row.errors > row.trials)
    {
      throw ParseError("line " + std::to_string(line_no) + ": inconsistent counts");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty())
  {
    throw ParseError("results file has no data rows");
  }
  return rows;
}

void write_file_atomically(std::string const &path, std::string const &contents)
{
  namespace fs = std::filesystem;
  fs::path const target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
    {
      throw InputError("cannot write '" + tmp.string() + "'");
    }
    out << contents;
    out.flush();
    if (!out)
    {
      throw InputError("write to '" + tmp.string() + "' failed");
    }
  }
  fs::rename(tmp, target);
}

}  // namespace sdcount::harness

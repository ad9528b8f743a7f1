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

#include <stdexcept>
#include <string>

namespace sdcount {

// Two families: InputError means the caller handed us something invalid
// (CLI exit 2), ComputationError means valid input the numerics could not
// handle (CLI exit 3).
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error
{
public:
  using Error::Error;
};

class ComputationError : public Error
{
public:
  using Error::Error;
};

class DimensionError : public InputError
{
public:
  using InputError::InputError;
};

class SymmetryError : public InputError
{
public:
  using InputError::InputError;
};

class SampleSizeError : public InputError
{
public:
  using InputError::InputError;
};

class HypothesisRangeError : public InputError
{
public:
  using InputError::InputError;
};

class DomainError : public InputError
{
public:
  using InputError::InputError;
};

class ParseError : public InputError
{
public:
  using InputError::InputError;
};

class ConfigError : public InputError
{
public:
  using InputError::InputError;
};

class RankDeficiencyError : public ComputationError
{
public:
  using ComputationError::ComputationError;
};

class NotPsdError : public ComputationError
{
public:
  using ComputationError::ComputationError;
};

}  // namespace sdcount

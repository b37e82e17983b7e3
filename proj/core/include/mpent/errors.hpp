// Copyright 2026 The mpent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace mpent {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter, grid or configuration value violates its documented range.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A splitter transfer matrix is not unitary.
class NonUnitarySplitter : public Error {
 public:
  using Error::Error;
};

/// Coherent laser amplitude survives at the detector mode.
class LaserLeakage : public Error {
 public:
  using Error::Error;
};

/// The time grid is too coarse for the requested counting statistics.
class QuadratureResolution : public Error {
 public:
  using Error::Error;
};

/// Quadrature produced a negative photon-number variance.
class NonPositiveVariance : public Error {
 public:
  using Error::Error;
};

/// Mandel Q requested for a zero mean count.
class UndefinedQ : public Error {
 public:
  using Error::Error;
};

/// Jump operators do not reproduce the single-atom decay rates.
class ChannelIncompleteness : public Error {
 public:
  using Error::Error;
};

/// Trajectory norm decayed by too much within one propagation step.
class NormUnderflow : public Error {
 public:
  using Error::Error;
};

/// The E and MM count distributions overlap too much to herald.
class Indistinguishable : public Error {
 public:
  using Error::Error;
};

/// Malformed scenario text. Carries the 1-based position when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ", column " +
                             std::to_string(column) + ")"
                       : what),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Deterministic and Monte Carlo results disagree beyond tolerance.
class CrossCheckFailure : public Error {
 public:
  using Error::Error;
};

/// File-system failure while reading or writing results.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace mpent

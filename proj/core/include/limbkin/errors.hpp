// Copyright 2026 The limbkin Authors
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
#include <utility>
#include <vector>

namespace limbkin {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or invalid configuration: bad units, unknown keys, violated
/// type invariants. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An argument outside the domain of an operation (angle outside the
/// workspace, x outside the terrain, negative torque rating...).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A closure triangle of the four-bar cannot be formed.
class InfeasibleLinkage : public Error {
 public:
  InfeasibleLinkage(std::string triangle, const std::string& what)
      : Error(what), triangle_(std::move(triangle)) {}
  const std::string& triangle() const noexcept { return triangle_; }

 private:
  std::string triangle_;
};

/// Force transmission degenerates (transmission angle near 0 or pi).
class SingularityError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Installation-angle calibration found no root. Carries the sampled
/// residual curve (theta_ins rad, residual rad; NaN where infeasible).
class CalibrationError : public Error {
 public:
  CalibrationError(const std::string& what,
                   std::vector<std::pair<double, double>> residual_curve)
      : Error(what), residual_curve_(std::move(residual_curve)) {}
  const std::vector<std::pair<double, double>>& residual_curve() const noexcept {
    return residual_curve_;
  }

 private:
  std::vector<std::pair<double, double>> residual_curve_;
};

class IllegalTransition : public Error {
 public:
  using Error::Error;
};

}  // namespace limbkin

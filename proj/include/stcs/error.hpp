// SPDX-License-Identifier: Apache-2.0
//
// stcs - spatio-temporal compressed sensing toolkit
// Copyright (C) 2026 The stcs authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace stcs {

// Base for every error raised by the library. `kind()` maps onto the CLI
// exit-code classes: validation problems vs. numerical failures.
class Error : public std::runtime_error {
 public:
  enum class Kind { validation, numerical, io };

  Error(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class InvalidDimension : public Error {
 public:
  explicit InvalidDimension(const std::string& what) : Error(Kind::validation, what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(Kind::validation, what) {}
};

class UndefinedMetric : public Error {
 public:
  explicit UndefinedMetric(const std::string& what) : Error(Kind::validation, what) {}
};

class IllConditioned : public Error {
 public:
  explicit IllConditioned(const std::string& what) : Error(Kind::numerical, what) {}
};

class SingularSystem : public Error {
 public:
  explicit SingularSystem(const std::string& what) : Error(Kind::numerical, what) {}
};

class Divergence : public Error {
 public:
  Divergence(const std::string& what, int iteration)
      : Error(Kind::numerical, what), iteration_(iteration) {}

  int iteration() const noexcept { return iteration_; }

 private:
  int iteration_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(Kind::io, what) {}
};

}  // namespace stcs

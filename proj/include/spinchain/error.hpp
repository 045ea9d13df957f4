// Copyright 2026 The spinchain Authors
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

namespace spinchain {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent parameters (bad family, negative rates, missing keys).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string &msg, std::string key = {})
        : Error(msg), key_(std::move(key)) {}

    /// Name of the offending configuration key, empty when not applicable.
    const std::string &key() const noexcept { return key_; }

private:
    std::string key_;
};

/// A request exceeds a hard size limit (full-space oracle, brute-force enumeration).
class SizeLimitError : public Error {
public:
    using Error::Error;
};

/// Input data violates a physical constraint (non-Hermitian density, wrong dimension).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Solver failure: eigensolver did not converge, ODE step-size underflow, ...
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace spinchain

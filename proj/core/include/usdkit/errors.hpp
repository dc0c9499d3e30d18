// Copyright 2026 The usdkit Authors
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

#ifndef USDKIT_ERRORS_HPP
#define USDKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace usdkit {

/// Base class of all usdkit exceptions.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string &msg) : std::runtime_error(msg) {}
};

/// Parameter or operator fails a domain invariant (bad prior, overlap out of
/// range, non-state input, ...). Message names the failing constraint.
class ValidationError : public Error {
  public:
    explicit ValidationError(const std::string &msg) : Error(msg) {}
};

/// A measurement schedule or optimizer manifold constraint is violated
/// (q-product mismatch, POVM element not PSD, singular Gram, ...).
class ConstraintError : public Error {
  public:
    explicit ConstraintError(const std::string &msg) : Error(msg) {}
};

/// Malformed input text (JSON configs). Carries a 1-based line/column.
class ParseError : public Error {
  public:
    ParseError(const std::string &msg, int line, int column)
        : Error(msg), line(line), column(column) {}
    int line;
    int column;
};

} // namespace usdkit

#endif

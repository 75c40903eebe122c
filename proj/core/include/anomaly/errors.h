// Copyright 2026 The Anomaly Score Authors
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

#ifndef ANOMALY_ERRORS_H_
#define ANOMALY_ERRORS_H_

#include <exception>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace anomaly {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or unreadable input: missing files, malformed records, violated
// preconditions. The CLI maps this to exit code 1.
class InputError : public Error {
 public:
  using Error::Error;
};

// Non-finite values or degenerate numerics. The CLI maps this to exit code 2.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Runs `fn` and re-throws any failure with `context` prepended, keeping the
// error category.
template <class Fn>
decltype(auto) with_context(std::string_view context, Fn&& fn) {
  try {
    return std::forward<Fn>(fn)();
  } catch (const NumericError& e) {
    throw NumericError(std::string(context) + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(std::string(context) + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(std::string(context) + ": " + e.what());
  }
}

}  // namespace anomaly

#endif  // ANOMALY_ERRORS_H_

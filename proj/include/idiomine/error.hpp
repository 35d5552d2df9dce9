// Copyright 2026 the idiomine authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IDIOMINE_ERROR_HPP_
#define IDIOMINE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace idiomine {

/// Base of every error this library throws deliberately.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problems with user-supplied data or options. CLI exit code 1.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Invalid configuration values (iteration counts, tensions, ...).
class ConfigError : public InputError {
 public:
  using InputError::InputError;
};

namespace detail {
inline std::string locate(std::string_view message, std::string_view file,
                          long line) {
  std::string out;
  if (!file.empty()) {
    out.append(file);
    out.push_back(':');
  }
  if (line >= 0) {
    out.append(std::to_string(line));
    out.push_back(':');
  }
  if (!out.empty()) out.push_back(' ');
  out.append(message);
  return out;
}
}  // namespace detail

/// A line that failed to parse. Carries the 1-based line number when known.
class ParseError : public InputError {
 public:
  explicit ParseError(std::string_view message, std::string_view file = {},
                      long line = -1)
      : InputError(detail::locate(message, file, line)), line_(line) {}

  long line_number() const { return line_; }

 private:
  long line_ = -1;
};

/// Byte sequences that are not valid UTF-8.
class EncodingError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// A lexicon line whose canonical source phrase was already seen.
class DuplicateIdiomError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// A lexicon entry with fewer than two source tokens.
class IdiomArityError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// A broken internal invariant (mismatched indices, inconsistent inputs
/// that should have been produced by this toolkit). CLI exit code 2.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

}  // namespace idiomine

#endif  // IDIOMINE_ERROR_HPP_

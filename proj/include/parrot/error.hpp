// Copyright 2026 The Parrot Authors
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

#ifndef PARROT_ERROR_HPP
#define PARROT_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace parrot {

enum class ErrorKind {
  InvalidWidth,
  ValueOutOfRange,
  InvalidIdentifier,
  ReservedName,
  DuplicateName,
  UndeclaredName,
  WidthMismatch,
  MissingField,
  TooShort,
  WriteToInput,
  OutputUndeclared,
  NotBoolean,
  OpenScope,
  AtomicNesting,
  MissingLookahead,
  MalformedPacket,
  UnknownTemplate,
  IoError,
  InvalidDocument,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidWidth: return "InvalidWidth";
    case ErrorKind::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorKind::InvalidIdentifier: return "InvalidIdentifier";
    case ErrorKind::ReservedName: return "ReservedName";
    case ErrorKind::DuplicateName: return "DuplicateName";
    case ErrorKind::UndeclaredName: return "UndeclaredName";
    case ErrorKind::WidthMismatch: return "WidthMismatch";
    case ErrorKind::MissingField: return "MissingField";
    case ErrorKind::TooShort: return "TooShort";
    case ErrorKind::WriteToInput: return "WriteToInput";
    case ErrorKind::OutputUndeclared: return "OutputUndeclared";
    case ErrorKind::NotBoolean: return "NotBoolean";
    case ErrorKind::OpenScope: return "OpenScope";
    case ErrorKind::AtomicNesting: return "AtomicNesting";
    case ErrorKind::MissingLookahead: return "MissingLookahead";
    case ErrorKind::MalformedPacket: return "MalformedPacket";
    case ErrorKind::UnknownTemplate: return "UnknownTemplate";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidDocument: return "InvalidDocument";
  }
  return "Unknown";
}

// Base of every error raised by the library. The message is prefixed with
// the kind so that what() alone is a usable diagnostic.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind),
        detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

// Raised by processor builder calls. `site` is the ordinal of the builder
// call that failed; ordinal 0 denotes the processor declaration itself.
class SemanticError : public Error {
 public:
  SemanticError(ErrorKind kind, const std::string& message, std::size_t site)
      : Error(kind, message + " (builder call #" + std::to_string(site) + ")"),
        site_(site) {}

  std::size_t site() const noexcept { return site_; }

 private:
  std::size_t site_;
};

}  // namespace parrot

#endif  // PARROT_ERROR_HPP

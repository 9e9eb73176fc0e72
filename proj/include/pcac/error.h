/* The copyright in this software is being made available under the BSD
 * Licence, included below.  This software may be subject to other third
 * party and contributor rights, including patent rights, and no such
 * rights are granted under this licence.
 *
 * Copyright (c) 2017-2018, ISO/IEC
 * All rights reserved.
 *
 * Redistribution and use in source and binary forms, with or without
 * modification, are permitted provided that the following conditions are met:
 *
 * * Redistributions of source code must retain the above copyright
 *   notice, this list of conditions and the following disclaimer.
 *
 * * Redistributions in binary form must reproduce the above copyright
 *   notice, this list of conditions and the following disclaimer in the
 *   documentation and/or other materials provided with the distribution.
 *
 * * Neither the name of the ISO/IEC nor the names of its contributors
 *   may be used to endorse or promote products derived from this
 *   software without specific prior written permission.
 *
 * THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
 * AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
 * IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE
 * ARE DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS BE
 * LIABLE FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR
 * CONSEQUENTIAL DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF
 * SUBSTITUTE GOODS OR SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS
 * INTERRUPTION) HOWEVER CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN
 * CONTRACT, STRICT LIABILITY, OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE)
 * ARISING IN ANY WAY OUT OF THE USE OF THIS SOFTWARE, EVEN IF ADVISED OF THE
 * POSSIBILITY OF SUCH DAMAGE.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcac {

//============================================================================
// Error hierarchy.  The CLI maps each family onto a distinct exit code.

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Unreadable / unwritable files and truncated input.
class IoError : public Error {
public:
  using Error::Error;
};

// Malformed input data: PLY headers, bitstreams, geometry mismatches.
class FormatError : public Error {
public:
  using Error::Error;
};

class ParseError : public FormatError {
public:
  ParseError(std::size_t line, const std::string& what)
    : FormatError("line " + std::to_string(line) + ": " + what), line_(line)
  {}

  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class UnsupportedFormatError : public FormatError {
public:
  using FormatError::FormatError;
};

class BitstreamError : public FormatError {
public:
  enum class Kind { kBadMagic, kBadVersion, kCrcMismatch, kCorrupt };

  BitstreamError(Kind kind, const std::string& what)
    : FormatError(what), kind_(kind)
  {}

  Kind kind() const { return kind_; }

private:
  Kind kind_;
};

class GeometryMismatchError : public FormatError {
public:
  using FormatError::FormatError;
};

// Invalid parameters, e.g. a kd-tree depth the point count cannot support.
class ConfigError : public Error {
public:
  using Error::Error;
};

class InsufficientDataError : public Error {
public:
  using Error::Error;
};

}  // namespace pcac

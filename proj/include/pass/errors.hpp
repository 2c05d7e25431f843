// Copyright 2026 PASS Contributors
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

#ifndef PASS__ERRORS_HPP_
#define PASS__ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace pass
{

/// Base class for every error raised by the pipeline libraries.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// geometry
class DegenerateCorrespondence : public Error
{
public:
  using Error::Error;
};
class PointAtInfinity : public Error
{
public:
  using Error::Error;
};
class ZeroTimeDelta : public Error
{
public:
  using Error::Error;
};

// perception
class ZeroAreaBox : public Error
{
public:
  using Error::Error;
};

// tracking
class NonMonotonicTimestamp : public Error
{
public:
  using Error::Error;
};

// messages
class QuantizationOverflow : public Error
{
public:
  using Error::Error;
};
class UnknownMessageType : public Error
{
public:
  using Error::Error;
};
class TruncatedFrame : public Error
{
public:
  using Error::Error;
};
class FieldOutOfRange : public Error
{
public:
  using Error::Error;
};

// pscw
class NonPositiveEpsilon : public Error
{
public:
  using Error::Error;
};
class OutOfProjectionRange : public Error
{
public:
  using Error::Error;
};
class NonPositiveDeceleration : public Error
{
public:
  using Error::Error;
};

// rsu-net
class SocketFailure : public Error
{
public:
  using Error::Error;
};
class EncodingFailure : public Error
{
public:
  using Error::Error;
};
class EmptySample : public Error
{
public:
  using Error::Error;
};

// eval
class LengthMismatch : public Error
{
public:
  using Error::Error;
};

// file / configuration ingestion
class ConfigError : public Error
{
public:
  using Error::Error;
};
class ParseError : public Error
{
public:
  using Error::Error;
};

}  // namespace pass

#endif  // PASS__ERRORS_HPP_

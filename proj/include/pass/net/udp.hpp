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

#ifndef PASS__NET__UDP_HPP_
#define PASS__NET__UDP_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pass::net
{

struct Endpoint
{
  std::string host{"127.0.0.1"};
  std::uint16_t port{0};
};

/// Accepts "host:port", ":port", or "port".
Endpoint parse_endpoint(std::string_view spec, std::uint16_t default_port = 0);

/// Thin RAII wrapper over an IPv4 datagram socket — the DSRC stand-in.
/// One message per datagram, no fragmentation.
class UdpSocket
{
public:
  /// Binds (port 0 picks an ephemeral port). Throws SocketFailure.
  static UdpSocket bind(const std::string & addr, std::uint16_t port);

  UdpSocket(UdpSocket && other) noexcept;
  UdpSocket & operator=(UdpSocket && other) noexcept;
  UdpSocket(const UdpSocket &) = delete;
  UdpSocket & operator=(const UdpSocket &) = delete;
  ~UdpSocket();

  std::uint16_t local_port() const { return port_; }

  void send_to(std::span<const std::uint8_t> payload, const Endpoint & dst) const;

  /// Blocks up to timeout_ms; nullopt on timeout.
  std::optional<std::vector<std::uint8_t>> receive(int timeout_ms) const;

  void enable_broadcast() const;

private:
  explicit UdpSocket(int fd, std::uint16_t port) : fd_(fd), port_(port) {}

  int fd_{-1};
  std::uint16_t port_{0};
};

/// Epoch-anchored monotonic clock: system-epoch offset captured once, then
/// advanced by the steady clock. All pipeline stamps come from here so
/// latency deltas stay non-negative on one host.
std::int64_t host_clock_ms();

}  // namespace pass::net

#endif  // PASS__NET__UDP_HPP_

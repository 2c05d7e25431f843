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

#include "pass/net/udp.hpp"

#include "pass/errors.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <charconv>
#include <chrono>
#include <cstring>

namespace pass::net
{

Endpoint parse_endpoint(std::string_view spec, std::uint16_t default_port)
{
  Endpoint ep;
  ep.port = default_port;
  const std::size_t colon = spec.rfind(':');
  std::string_view host = colon == std::string_view::npos ? spec : spec.substr(0, colon);
  std::string_view port = colon == std::string_view::npos ? "" : spec.substr(colon + 1);
  if (colon == std::string_view::npos && !spec.empty() &&
      spec.find_first_not_of("0123456789") == std::string_view::npos) {
    // Bare number means a port.
    host = "";
    port = spec;
  }
  if (!host.empty()) ep.host = std::string(host);
  if (!port.empty()) {
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
    if (ec != std::errc() || ptr != port.data() + port.size() || value > 65535) {
      throw ConfigError("bad port in endpoint '" + std::string(spec) + "'");
    }
    ep.port = static_cast<std::uint16_t>(value);
  }
  return ep;
}

UdpSocket UdpSocket::bind(const std::string & addr, std::uint16_t port)
{
  const int fd = ::socket(AF_INET, SOCK_DGRAM | SOCK_CLOEXEC, 0);
  if (fd < 0) {
    throw SocketFailure("udp socket: " + std::string(std::strerror(errno)));
  }
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_port = htons(port);
  if (::inet_pton(AF_INET, addr.c_str(), &sa.sin_addr) != 1) {
    ::close(fd);
    throw SocketFailure("udp bind: bad address " + addr);
  }
  if (::bind(fd, reinterpret_cast<sockaddr *>(&sa), sizeof(sa)) != 0) {
    const std::string err = std::strerror(errno);
    ::close(fd);
    throw SocketFailure("udp bind " + addr + ":" + std::to_string(port) + ": " + err);
  }
  socklen_t len = sizeof(sa);
  ::getsockname(fd, reinterpret_cast<sockaddr *>(&sa), &len);
  return UdpSocket(fd, ntohs(sa.sin_port));
}

UdpSocket::UdpSocket(UdpSocket && other) noexcept : fd_(other.fd_), port_(other.port_)
{
  other.fd_ = -1;
}

UdpSocket & UdpSocket::operator=(UdpSocket && other) noexcept
{
  if (this != &other) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = other.fd_;
    port_ = other.port_;
    other.fd_ = -1;
  }
  return *this;
}

UdpSocket::~UdpSocket()
{
  if (fd_ >= 0) {
    ::close(fd_);
  }
}

void UdpSocket::send_to(std::span<const std::uint8_t> payload, const Endpoint & dst) const
{
  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_port = htons(dst.port);
  if (::inet_pton(AF_INET, dst.host.c_str(), &sa.sin_addr) != 1) {
    throw SocketFailure("udp send: bad destination " + dst.host);
  }
  const ssize_t sent = ::sendto(
    fd_, payload.data(), payload.size(), 0, reinterpret_cast<sockaddr *>(&sa), sizeof(sa));
  if (sent != static_cast<ssize_t>(payload.size())) {
    throw SocketFailure(
      "udp send to " + dst.host + ":" + std::to_string(dst.port) + ": " +
      std::strerror(errno));
  }
}

std::optional<std::vector<std::uint8_t>> UdpSocket::receive(int timeout_ms) const
{
  pollfd pfd{fd_, POLLIN, 0};
  const int ready = ::poll(&pfd, 1, timeout_ms);
  if (ready < 0) {
    if (errno == EINTR) return std::nullopt;
    throw SocketFailure("udp poll: " + std::string(std::strerror(errno)));
  }
  if (ready == 0) return std::nullopt;

  std::vector<std::uint8_t> buffer(2048);
  const ssize_t n = ::recvfrom(fd_, buffer.data(), buffer.size(), 0, nullptr, nullptr);
  if (n < 0) {
    if (errno == EAGAIN || errno == EWOULDBLOCK || errno == EINTR) return std::nullopt;
    throw SocketFailure("udp recv: " + std::string(std::strerror(errno)));
  }
  buffer.resize(static_cast<std::size_t>(n));
  return buffer;
}

void UdpSocket::enable_broadcast() const
{
  const int one = 1;
  if (::setsockopt(fd_, SOL_SOCKET, SO_BROADCAST, &one, sizeof(one)) != 0) {
    throw SocketFailure("udp broadcast flag: " + std::string(std::strerror(errno)));
  }
}

std::int64_t host_clock_ms()
{
  using namespace std::chrono;
  // Epoch anchor + steady progression, captured once per process.
  static const auto anchor_steady = steady_clock::now();
  static const std::int64_t anchor_epoch_ms =
    duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
  const auto elapsed = duration_cast<milliseconds>(steady_clock::now() - anchor_steady);
  return anchor_epoch_ms + elapsed.count();
}

}  // namespace pass::net

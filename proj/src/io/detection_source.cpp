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

#include "pass/io/detection_source.hpp"

#include "pass/errors.hpp"
#include "text_util.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace pass::io
{

namespace
{

std::vector<std::string_view> split_commas(std::string_view line)
{
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double field_double(std::string_view text)
{
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("bad numeric detection field '" + std::string(text) + "'");
  }
  return value;
}

std::int64_t field_int(std::string_view text)
{
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("bad integer detection field '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

perception::Detection parse_detection_line(std::string_view line)
{
  const auto fields = split_commas(line);
  if (fields.size() != 7) {
    throw ParseError(
      "detection line needs 7 comma-separated fields, got " + std::to_string(fields.size()));
  }
  perception::Detection d;
  d.frame_ts = field_int(fields[0]);
  d.class_flag = static_cast<int>(field_int(fields[1]));
  d.confidence = field_double(fields[2]);
  d.anchor.px = field_double(fields[3]);
  d.anchor.py = field_double(fields[4]);
  d.box_h = field_double(fields[5]);
  d.box_w = field_double(fields[6]);
  return d;
}

std::string format_detection_line(const perception::Detection & d)
{
  char buf[192];
  std::snprintf(
    buf, sizeof(buf), "%lld,%d,%.6f,%.9f,%.9f,%.9f,%.9f", static_cast<long long>(d.frame_ts),
    d.class_flag, d.confidence, d.anchor.px, d.anchor.py, d.box_h, d.box_w);
  return buf;
}

std::vector<DetectionFrame> load_detection_replay(const std::string & path)
{
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open detection replay: " + path);
  }
  std::vector<DetectionFrame> frames;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    perception::Detection d;
    try {
      d = parse_detection_line(line);
    } catch (const ParseError & e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    if (frames.empty() || frames.back().ts != d.frame_ts) {
      frames.push_back(DetectionFrame{d.frame_ts, {}});
    }
    frames.back().detections.push_back(d);
  }
  return frames;
}

void write_detection_replay(
  const std::string & path, const std::vector<DetectionFrame> & frames)
{
  std::ofstream out(path);
  if (!out) {
    throw ParseError("cannot write detection replay: " + path);
  }
  for (const auto & frame : frames) {
    for (const auto & d : frame.detections) {
      out << format_detection_line(d) << '\n';
    }
  }
}

DetectionSocketSource::DetectionSocketSource(
  const std::string & bind_addr, std::uint16_t port, BoundedQueue<DetectionFrame> & sink)
: sink_(sink)
{
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (listen_fd_ < 0) {
    throw SocketFailure("detection socket: " + std::string(std::strerror(errno)));
  }
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, bind_addr.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw SocketFailure("detection socket: bad bind address " + bind_addr);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr *>(&addr), sizeof(addr)) != 0) {
    const std::string err = std::strerror(errno);
    ::close(listen_fd_);
    throw SocketFailure("detection socket bind: " + err);
  }
  if (::listen(listen_fd_, 1) != 0) {
    const std::string err = std::strerror(errno);
    ::close(listen_fd_);
    throw SocketFailure("detection socket listen: " + err);
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr *>(&addr), &len);
  port_ = ntohs(addr.sin_port);

  thread_ = std::thread([this] { serve(); });
}

DetectionSocketSource::~DetectionSocketSource()
{
  stop();
}

void DetectionSocketSource::stop()
{
  stop_.store(true);
  if (thread_.joinable()) {
    thread_.join();
  }
  if (listen_fd_ >= 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
}

void DetectionSocketSource::serve()
{
  while (!stop_.load()) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, 100);
    if (ready <= 0) continue;

    const int conn = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (conn < 0) continue;

    std::string buffer;
    DetectionFrame frame;
    bool frame_open = false;
    char chunk[4096];
    while (!stop_.load()) {
      pollfd cfd{conn, POLLIN, 0};
      const int r = ::poll(&cfd, 1, 100);
      if (r < 0) break;
      if (r == 0) continue;
      const ssize_t n = ::recv(conn, chunk, sizeof(chunk), 0);
      if (n <= 0) break;
      buffer.append(chunk, static_cast<std::size_t>(n));

      std::size_t eol;
      while ((eol = buffer.find('\n')) != std::string::npos) {
        std::string line = buffer.substr(0, eol);
        buffer.erase(0, eol + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
          // Frame delimiter; empty frames still advance the clock upstream
          // only when they carry a stamp, so drop them silently.
          if (frame_open) {
            sink_.push(std::move(frame));
            frame = DetectionFrame{};
            frame_open = false;
          }
          continue;
        }
        try {
          const perception::Detection d = parse_detection_line(line);
          if (!frame_open) {
            frame.ts = d.frame_ts;
            frame_open = true;
          }
          frame.detections.push_back(d);
        } catch (const ParseError &) {
          malformed_.fetch_add(1);
        }
      }
    }
    if (frame_open) {
      sink_.push(std::move(frame));
    }
    ::close(conn);
  }
}

}  // namespace pass::io

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

#ifndef PASS__IO__DETECTION_SOURCE_HPP_
#define PASS__IO__DETECTION_SOURCE_HPP_

#include "pass/bounded_queue.hpp"
#include "pass/perception.hpp"

#include <atomic>
#include <cstdint>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace pass::io
{

/// All detections sharing one capture stamp.
struct DetectionFrame
{
  std::int64_t ts{0};
  std::vector<perception::Detection> detections;
};

/// One replay/socket line: `frame_ts,class_flag,confidence,px,py,ph,pw`.
perception::Detection parse_detection_line(std::string_view line);
std::string format_detection_line(const perception::Detection & d);

/// Reads a whole replay file, grouping consecutive lines with identical
/// frame_ts into frames. Throws ParseError with the line number on
/// malformed input.
std::vector<DetectionFrame> load_detection_replay(const std::string & path);
void write_detection_replay(
  const std::string & path, const std::vector<DetectionFrame> & frames);

/// Live source: accepts one TCP connection on a local port and streams
/// line-format detections into the queue; a blank line closes a frame.
/// Malformed lines are counted and skipped.
class DetectionSocketSource
{
public:
  DetectionSocketSource(
    const std::string & bind_addr, std::uint16_t port, BoundedQueue<DetectionFrame> & sink);
  ~DetectionSocketSource();

  DetectionSocketSource(const DetectionSocketSource &) = delete;
  DetectionSocketSource & operator=(const DetectionSocketSource &) = delete;

  std::uint16_t local_port() const { return port_; }
  std::uint64_t malformed_lines() const { return malformed_.load(); }
  void stop();

private:
  void serve();

  int listen_fd_{-1};
  std::uint16_t port_{0};
  BoundedQueue<DetectionFrame> & sink_;
  std::atomic<bool> stop_{false};
  std::atomic<std::uint64_t> malformed_{0};
  std::thread thread_;
};

}  // namespace pass::io

#endif  // PASS__IO__DETECTION_SOURCE_HPP_

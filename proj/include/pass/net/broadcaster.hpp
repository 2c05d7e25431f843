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

#ifndef PASS__NET__BROADCASTER_HPP_
#define PASS__NET__BROADCASTER_HPP_

#include "pass/messages.hpp"
#include "pass/net/latency.hpp"
#include "pass/net/udp.hpp"
#include "pass/pscw.hpp"
#include "pass/tracking.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace pass::net
{

/// How the 100 ms PSM cadence is driven.
///  - kFrameSynced (default): a fresh track snapshot triggers the tick and
///    re-anchors the deadline, so broadcast latency tracks the camera, and
///    the period timer only fires as a fallback (re-broadcasting the last
///    snapshots) when the pipeline stalls.
///  - kTimer: pure absolute-deadline schedule, independent of snapshots.
enum class TickMode { kFrameSynced, kTimer };

struct BroadcastConfig
{
  std::string bind_addr{"0.0.0.0"};
  std::uint16_t bind_port{0};  // 0 = ephemeral
  std::vector<Endpoint> subscribers;
  std::int64_t psm_period_ms{100};
  std::int64_t alert_cooldown_ms{1000};
  TickMode tick_mode{TickMode::kFrameSynced};
  messages::PsmConfig psm;
  std::int64_t bsm_max_age_ms{1000};
};

struct BroadcastStats
{
  std::uint64_t ticks{0};
  std::uint64_t psm_datagrams{0};
  std::uint64_t alert_datagrams{0};
  std::uint64_t alerts_suppressed{0};
  std::uint64_t encode_failures{0};
  std::uint64_t socket_errors{0};
  std::uint64_t bsms_received{0};
  std::uint64_t rx_decode_errors{0};
};

/// The simulated DSRC roadside unit. Owns the datagram socket; a sender
/// thread drives the PSM cadence and a receiver thread collects BSMs from
/// vehicle clients. Alerts bypass the tick and go out on the caller's
/// thread immediately.
class Broadcaster
{
public:
  explicit Broadcaster(BroadcastConfig config);
  ~Broadcaster();

  Broadcaster(const Broadcaster &) = delete;
  Broadcaster & operator=(const Broadcaster &) = delete;

  void start();
  void stop();

  std::uint16_t local_port() const;

  /// Hands the latest track snapshots to the broadcaster. Never blocks;
  /// an unsent previous snapshot is simply replaced.
  void publish_tracks(std::vector<tracking::PedestrianTrack> snapshot, std::int64_t frame_ts);

  /// Sends one alert datagram immediately, subject to the per-pair
  /// cooldown. Returns false when suppressed.
  bool send_alert(const messages::Alert & alert, std::int64_t frame_ts);

  /// BSMs received from vehicles within the freshness window, newest per
  /// sender.
  std::vector<messages::Bsm> bsm_snapshot(std::int64_t now_ms) const;

  BroadcastStats stats() const;

  /// Invoked (on the sender thread) with the stamps of every datagram,
  /// before and independent of delivery.
  std::function<void(const SendRecord &)> on_send;

  /// Invoked at the start of every tick on the sender thread; lets tests
  /// inject handling stalls against the deadline schedule.
  std::function<void()> tick_hook;

private:
  void sender_loop();
  void receiver_loop();
  void send_psm_batch(
    const std::vector<tracking::PedestrianTrack> & tracks, std::int64_t frame_ts);

  BroadcastConfig config_;
  UdpSocket socket_;

  mutable std::mutex mutex_;
  std::condition_variable cv_;
  bool stop_requested_{false};
  bool running_{false};
  std::optional<std::pair<std::vector<tracking::PedestrianTrack>, std::int64_t>> fresh_snapshot_;
  std::vector<tracking::PedestrianTrack> latest_tracks_;
  std::int64_t latest_frame_ts_{0};

  mutable std::mutex gate_mutex_;
  pscw::AlertGate alert_gate_;

  mutable std::mutex bsm_mutex_;
  struct TimedBsm
  {
    messages::Bsm bsm;
    std::int64_t received_ts;
  };
  std::map<std::uint32_t, TimedBsm> bsm_cache_;

  mutable std::mutex stats_mutex_;
  BroadcastStats stats_;

  std::thread sender_;
  std::thread receiver_;
};

}  // namespace pass::net

#endif  // PASS__NET__BROADCASTER_HPP_

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

#include "pass/net/broadcaster.hpp"

#include "pass/errors.hpp"

#include <chrono>
#include <cstdio>
#include <utility>

namespace pass::net
{

using std::chrono::milliseconds;
using std::chrono::steady_clock;

Broadcaster::Broadcaster(BroadcastConfig config)
: config_(std::move(config)),
  socket_(UdpSocket::bind(config_.bind_addr, config_.bind_port)),
  alert_gate_(config_.alert_cooldown_ms)
{
  socket_.enable_broadcast();
}

Broadcaster::~Broadcaster()
{
  stop();
}

std::uint16_t Broadcaster::local_port() const
{
  return socket_.local_port();
}

void Broadcaster::start()
{
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (running_) return;
    running_ = true;
    stop_requested_ = false;
  }
  sender_ = std::thread([this] { sender_loop(); });
  receiver_ = std::thread([this] { receiver_loop(); });
}

void Broadcaster::stop()
{
  {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!running_) return;
    stop_requested_ = true;
  }
  cv_.notify_all();
  if (sender_.joinable()) sender_.join();
  if (receiver_.joinable()) receiver_.join();
  std::lock_guard<std::mutex> lock(mutex_);
  running_ = false;
}

void Broadcaster::publish_tracks(
  std::vector<tracking::PedestrianTrack> snapshot, std::int64_t frame_ts)
{
  {
    std::lock_guard<std::mutex> lock(mutex_);
    fresh_snapshot_ = std::make_pair(std::move(snapshot), frame_ts);
  }
  cv_.notify_all();
}

bool Broadcaster::send_alert(const messages::Alert & alert, std::int64_t frame_ts)
{
  {
    std::lock_guard<std::mutex> lock(gate_mutex_);
    if (!alert_gate_.admit(alert.pedestrian_temp_id, alert.vehicle_temp_id, host_clock_ms())) {
      std::lock_guard<std::mutex> stats_lock(stats_mutex_);
      ++stats_.alerts_suppressed;
      return false;
    }
  }

  SendRecord record;
  record.msg_type = messages::kAlertType;
  record.id_a = alert.pedestrian_temp_id;
  record.id_b = alert.vehicle_temp_id;
  record.msg_count = 0;
  record.msg_timestamp_ms = alert.timestamp_ms;
  record.frame_ts = frame_ts;
  record.built_ts = alert.timestamp_ms;

  try {
    const auto frame = messages::encode(alert);
    record.sent_ts = host_clock_ms();
    for (const auto & dst : config_.subscribers) {
      socket_.send_to(frame, dst);
    }
  } catch (const FieldOutOfRange &) {
    std::lock_guard<std::mutex> lock(stats_mutex_);
    ++stats_.encode_failures;
    return false;
  } catch (const SocketFailure & e) {
    std::fprintf(stderr, "[broadcaster] alert send failed: %s\n", e.what());
    std::lock_guard<std::mutex> lock(stats_mutex_);
    ++stats_.socket_errors;
    return false;
  }

  if (on_send) on_send(record);
  std::lock_guard<std::mutex> lock(stats_mutex_);
  ++stats_.alert_datagrams;
  return true;
}

std::vector<messages::Bsm> Broadcaster::bsm_snapshot(std::int64_t now_ms) const
{
  std::vector<messages::Bsm> out;
  std::lock_guard<std::mutex> lock(bsm_mutex_);
  for (const auto & [id, timed] : bsm_cache_) {
    if (now_ms - timed.received_ts <= config_.bsm_max_age_ms) {
      out.push_back(timed.bsm);
    }
  }
  return out;
}

BroadcastStats Broadcaster::stats() const
{
  std::lock_guard<std::mutex> lock(stats_mutex_);
  return stats_;
}

void Broadcaster::send_psm_batch(
  const std::vector<tracking::PedestrianTrack> & tracks, std::int64_t frame_ts)
{
  for (const auto & track : tracks) {
    SendRecord record;
    record.msg_type = messages::kPsmType;
    record.id_a = track.temp_id;
    record.msg_count = track.msg_count;
    record.frame_ts = frame_ts;

    try {
      record.built_ts = host_clock_ms();
      const messages::Psm psm = messages::build_psm(track, record.built_ts, config_.psm);
      record.msg_timestamp_ms = psm.timestamp_ms;
      const auto frame = messages::encode(psm);
      record.sent_ts = host_clock_ms();
      for (const auto & dst : config_.subscribers) {
        socket_.send_to(frame, dst);
      }
    } catch (const Error & e) {
      std::lock_guard<std::mutex> lock(stats_mutex_);
      if (dynamic_cast<const SocketFailure *>(&e) != nullptr) {
        ++stats_.socket_errors;
      } else {
        ++stats_.encode_failures;
      }
      continue;
    }

    if (on_send) on_send(record);
    std::lock_guard<std::mutex> lock(stats_mutex_);
    ++stats_.psm_datagrams;
  }
}

void Broadcaster::sender_loop()
{
  const auto period = milliseconds(config_.psm_period_ms);
  auto deadline = steady_clock::now() + period;

  std::unique_lock<std::mutex> lock(mutex_);
  while (!stop_requested_) {
    cv_.wait_until(lock, deadline, [this] {
      return stop_requested_ ||
             (config_.tick_mode == TickMode::kFrameSynced && fresh_snapshot_.has_value());
    });
    if (stop_requested_) break;

    const bool fresh = fresh_snapshot_.has_value();
    if (config_.tick_mode == TickMode::kFrameSynced && fresh) {
      // Snapshot arrival is the tick: send now, re-anchor the fallback.
      latest_tracks_ = std::move(fresh_snapshot_->first);
      latest_frame_ts_ = fresh_snapshot_->second;
      fresh_snapshot_.reset();
      deadline = steady_clock::now() + period;
    } else {
      if (steady_clock::now() < deadline) {
        continue;  // spurious wake
      }
      // Timer tick. In timer mode adopt any pending snapshot first.
      if (fresh) {
        latest_tracks_ = std::move(fresh_snapshot_->first);
        latest_frame_ts_ = fresh_snapshot_->second;
        fresh_snapshot_.reset();
      }
      // Absolute schedule: the next deadline derives from the previous
      // deadline, not from send completion, so handling jitter cannot
      // accumulate. Skip whole periods if we fell far behind.
      do {
        deadline += period;
      } while (deadline <= steady_clock::now());
    }

    const std::vector<tracking::PedestrianTrack> batch = latest_tracks_;
    const std::int64_t frame_ts = latest_frame_ts_;
    lock.unlock();

    if (tick_hook) tick_hook();
    {
      std::lock_guard<std::mutex> stats_lock(stats_mutex_);
      ++stats_.ticks;
    }
    if (!batch.empty()) {
      send_psm_batch(batch, frame_ts);
    }

    lock.lock();
  }
}

void Broadcaster::receiver_loop()
{
  while (true) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (stop_requested_) return;
    }
    std::optional<std::vector<std::uint8_t>> datagram;
    try {
      datagram = socket_.receive(50);
    } catch (const SocketFailure & e) {
      std::fprintf(stderr, "[broadcaster] receive failed: %s\n", e.what());
      std::lock_guard<std::mutex> lock(stats_mutex_);
      ++stats_.socket_errors;
      continue;
    }
    if (!datagram) continue;

    try {
      const messages::Message msg = messages::decode(*datagram);
      if (const auto * bsm = std::get_if<messages::Bsm>(&msg)) {
        std::lock_guard<std::mutex> lock(bsm_mutex_);
        bsm_cache_[bsm->temp_id] = TimedBsm{*bsm, host_clock_ms()};
        std::lock_guard<std::mutex> stats_lock(stats_mutex_);
        ++stats_.bsms_received;
      }
      // Non-BSM traffic to the RSU port is tolerated and ignored.
    } catch (const Error &) {
      std::lock_guard<std::mutex> lock(stats_mutex_);
      ++stats_.rx_decode_errors;
    }
  }
}

}  // namespace pass::net

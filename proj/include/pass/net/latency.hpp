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

#ifndef PASS__NET__LATENCY_HPP_
#define PASS__NET__LATENCY_HPP_

#include "pass/messages.hpp"

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

namespace pass::net
{

/// Stamped lifecycle of one broadcast message on a single host clock.
/// Stamps that a given measurement point cannot know stay unset: a
/// standalone subscriber sees only the message timestamp and its own
/// receive stamp; the in-process join fills everything.
struct LatencyRecord
{
  std::optional<std::int64_t> frame_ts;      // camera capture
  std::optional<std::int64_t> psm_built_ts;  // message construction
  std::optional<std::int64_t> sent_ts;       // datagram handed to the socket
  std::int64_t received_ts{0};               // stamped at the subscriber

  std::optional<double> compute_ms() const
  {
    if (!frame_ts || !psm_built_ts) return std::nullopt;
    return static_cast<double>(*psm_built_ts - *frame_ts);
  }
  std::optional<double> network_ms() const
  {
    if (!sent_ts) return std::nullopt;
    return static_cast<double>(received_ts - *sent_ts);
  }
  std::optional<double> end_to_end_ms() const
  {
    if (!frame_ts) return std::nullopt;
    return static_cast<double>(received_ts - *frame_ts);
  }
  std::optional<double> build_to_receive_ms() const
  {
    if (!psm_built_ts) return std::nullopt;
    return static_cast<double>(received_ts - *psm_built_ts);
  }
};

/// Sender-side stamps for one datagram, joinable with the subscriber via
/// the identity carried inside the message.
struct SendRecord
{
  std::uint8_t msg_type{0};
  std::uint32_t id_a{0};  // PSM temp_id / Alert pedestrian id
  std::uint32_t id_b{0};  // Alert vehicle id
  std::uint8_t msg_count{0};
  std::int64_t msg_timestamp_ms{0};
  std::int64_t frame_ts{0};
  std::int64_t built_ts{0};
  std::int64_t sent_ts{0};
};

/// Joins broadcaster send stamps with subscriber receive stamps on the
/// (type, ids, message timestamp, count) identity. Thread-safe.
class LatencyJoiner
{
public:
  void add_send(const SendRecord & record);

  /// Returns the full record when the message matches a logged send;
  /// otherwise a subscriber-only record (message timestamp as built_ts).
  LatencyRecord on_received(const messages::Message & msg, std::int64_t received_ts);

private:
  using Key = std::tuple<std::uint8_t, std::uint32_t, std::uint32_t, std::int64_t, std::uint8_t>;
  std::mutex mutex_;
  std::map<Key, SendRecord> pending_;
};

struct LatencySummaryRow
{
  std::string type;
  std::size_t count{0};
  double min_ms{0.0};
  double max_ms{0.0};
  double mean_ms{0.0};
};

struct LatencySummary
{
  std::vector<LatencySummaryRow> rows;
  // 1 ms bins over the end-to-end latency (or build-to-receive when the
  // capture stamp is unknown).
  std::map<std::int64_t, std::uint64_t> histogram;
};

/// Min/max/mean per measurable latency type plus the 1 ms histogram.
/// Throws EmptySample on an empty span.
LatencySummary latency_report(std::span<const LatencyRecord> records);

/// Writes `latency.csv` (type,count,min_ms,max_ms,mean_ms) and
/// `histogram.csv` (bin_start_ms,count) into dir.
void write_latency_csv(const LatencySummary & summary, const std::string & dir);

}  // namespace pass::net

#endif  // PASS__NET__LATENCY_HPP_

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

#include "pass/net/latency.hpp"

#include "pass/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>

namespace pass::net
{

void LatencyJoiner::add_send(const SendRecord & record)
{
  std::lock_guard<std::mutex> lock(mutex_);
  pending_[{record.msg_type, record.id_a, record.id_b, record.msg_timestamp_ms,
            record.msg_count}] = record;
  // Keep the pending map bounded; joins normally happen within one tick.
  if (pending_.size() > 200000) {
    pending_.erase(pending_.begin());
  }
}

LatencyRecord LatencyJoiner::on_received(const messages::Message & msg, std::int64_t received_ts)
{
  LatencyRecord record;
  record.received_ts = received_ts;

  Key key{};
  if (const auto * psm = std::get_if<messages::Psm>(&msg)) {
    key = {messages::kPsmType, psm->temp_id, 0, psm->timestamp_ms, psm->msg_count};
    record.psm_built_ts = psm->timestamp_ms;
  } else if (const auto * bsm = std::get_if<messages::Bsm>(&msg)) {
    key = {messages::kBsmType, bsm->temp_id, 0, bsm->timestamp_ms, bsm->msg_count};
    record.psm_built_ts = bsm->timestamp_ms;
  } else {
    const auto & alert = std::get<messages::Alert>(msg);
    key = {
      messages::kAlertType, alert.pedestrian_temp_id, alert.vehicle_temp_id,
      alert.timestamp_ms, 0};
    record.psm_built_ts = alert.timestamp_ms;
  }

  std::lock_guard<std::mutex> lock(mutex_);
  const auto it = pending_.find(key);
  if (it != pending_.end()) {
    record.frame_ts = it->second.frame_ts;
    record.psm_built_ts = it->second.built_ts;
    record.sent_ts = it->second.sent_ts;
    pending_.erase(it);
  }
  return record;
}

LatencySummary latency_report(std::span<const LatencyRecord> records)
{
  if (records.empty()) {
    throw EmptySample("latency report needs at least one record");
  }

  struct Extractor
  {
    const char * name;
    std::function<std::optional<double>(const LatencyRecord &)> get;
  };
  const Extractor extractors[] = {
    {"compute", [](const LatencyRecord & r) { return r.compute_ms(); }},
    {"network", [](const LatencyRecord & r) { return r.network_ms(); }},
    {"end_to_end", [](const LatencyRecord & r) { return r.end_to_end_ms(); }},
    {"build_to_receive", [](const LatencyRecord & r) { return r.build_to_receive_ms(); }},
  };

  LatencySummary summary;
  for (const auto & ex : extractors) {
    LatencySummaryRow row;
    row.type = ex.name;
    double sum = 0.0;
    for (const auto & r : records) {
      const auto v = ex.get(r);
      if (!v) continue;
      if (row.count == 0) {
        row.min_ms = row.max_ms = *v;
      } else {
        row.min_ms = std::min(row.min_ms, *v);
        row.max_ms = std::max(row.max_ms, *v);
      }
      sum += *v;
      ++row.count;
    }
    if (row.count > 0) {
      row.mean_ms = sum / static_cast<double>(row.count);
      summary.rows.push_back(row);
    }
  }

  for (const auto & r : records) {
    auto v = r.end_to_end_ms();
    if (!v) v = r.build_to_receive_ms();
    if (!v) continue;
    ++summary.histogram[static_cast<std::int64_t>(std::floor(*v))];
  }
  return summary;
}

void write_latency_csv(const LatencySummary & summary, const std::string & dir)
{
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);

  std::ofstream latency(base / "latency.csv");
  latency << "type,count,min_ms,max_ms,mean_ms\n";
  char buf[192];
  for (const auto & row : summary.rows) {
    std::snprintf(
      buf, sizeof(buf), "%s,%zu,%.3f,%.3f,%.3f\n", row.type.c_str(), row.count, row.min_ms,
      row.max_ms, row.mean_ms);
    latency << buf;
  }

  std::ofstream histogram(base / "histogram.csv");
  histogram << "bin_start_ms,count\n";
  for (const auto & [bin, count] : summary.histogram) {
    histogram << bin << ',' << count << '\n';
  }
}

}  // namespace pass::net

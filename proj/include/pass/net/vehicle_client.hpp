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

#ifndef PASS__NET__VEHICLE_CLIENT_HPP_
#define PASS__NET__VEHICLE_CLIENT_HPP_

#include "pass/messages.hpp"
#include "pass/net/udp.hpp"

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>

namespace pass::net
{

struct ReceivedMessage
{
  messages::Message msg;
  std::int64_t received_ts{0};
};

struct ClientStats
{
  std::uint64_t received{0};
  std::uint64_t decode_errors{0};
};

/// A connected-vehicle endpoint on the broadcast fabric: receives and
/// decodes PSM/alert datagrams, stamping arrival times, and can send BSMs
/// back to the roadside unit.
class VehicleClient
{
public:
  VehicleClient(const std::string & bind_addr, std::uint16_t port);
  ~VehicleClient();

  VehicleClient(const VehicleClient &) = delete;
  VehicleClient & operator=(const VehicleClient &) = delete;

  std::uint16_t local_port() const { return socket_.local_port(); }

  /// Spawns the receive thread; on_message runs there. Malformed
  /// datagrams are counted, never fatal.
  void start(std::function<void(const ReceivedMessage &)> on_message);
  void stop();

  void send_bsm(const messages::Bsm & bsm, const Endpoint & rsu) const;

  ClientStats stats() const
  {
    return ClientStats{received_.load(), decode_errors_.load()};
  }

private:
  void receive_loop();

  UdpSocket socket_;
  std::function<void(const ReceivedMessage &)> on_message_;
  std::atomic<bool> stop_{false};
  std::atomic<std::uint64_t> received_{0};
  std::atomic<std::uint64_t> decode_errors_{0};
  std::thread thread_;
};

}  // namespace pass::net

#endif  // PASS__NET__VEHICLE_CLIENT_HPP_

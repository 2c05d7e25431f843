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

#include "pass/net/vehicle_client.hpp"

#include "pass/errors.hpp"

#include <cstdio>
#include <utility>

namespace pass::net
{

VehicleClient::VehicleClient(const std::string & bind_addr, std::uint16_t port)
: socket_(UdpSocket::bind(bind_addr, port))
{
}

VehicleClient::~VehicleClient()
{
  stop();
}

void VehicleClient::start(std::function<void(const ReceivedMessage &)> on_message)
{
  on_message_ = std::move(on_message);
  stop_.store(false);
  thread_ = std::thread([this] { receive_loop(); });
}

void VehicleClient::stop()
{
  stop_.store(true);
  if (thread_.joinable()) {
    thread_.join();
  }
}

void VehicleClient::send_bsm(const messages::Bsm & bsm, const Endpoint & rsu) const
{
  socket_.send_to(messages::encode(bsm), rsu);
}

void VehicleClient::receive_loop()
{
  while (!stop_.load()) {
    std::optional<std::vector<std::uint8_t>> datagram;
    try {
      datagram = socket_.receive(50);
    } catch (const SocketFailure & e) {
      std::fprintf(stderr, "[vehicle-client] receive failed: %s\n", e.what());
      continue;
    }
    if (!datagram) continue;

    const std::int64_t received_ts = host_clock_ms();
    try {
      ReceivedMessage received{messages::decode(*datagram), received_ts};
      received_.fetch_add(1);
      if (on_message_) on_message_(received);
    } catch (const Error &) {
      decode_errors_.fetch_add(1);
    }
  }
}

}  // namespace pass::net

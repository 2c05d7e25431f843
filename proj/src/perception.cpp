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

#include "pass/perception.hpp"

#include "pass/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace pass::perception
{

namespace
{

struct Box
{
  double x0, x1, y0, y1;
};

Box extent(const Detection & d)
{
  return Box{
    d.anchor.px - d.box_w / 2.0, d.anchor.px + d.box_w / 2.0, d.anchor.py - d.box_h,
    d.anchor.py};
}

bool higher_priority(const Detection & a, const Detection & b)
{
  if (a.confidence != b.confidence) return a.confidence > b.confidence;
  if (a.anchor.px != b.anchor.px) return a.anchor.px < b.anchor.px;
  return a.anchor.py < b.anchor.py;
}

}  // namespace

double iou(const Detection & a, const Detection & b)
{
  if (a.box_h * a.box_w == 0.0 || b.box_h * b.box_w == 0.0) {
    throw ZeroAreaBox("iou requires boxes with positive area");
  }
  const Box ba = extent(a);
  const Box bb = extent(b);
  const double ix = std::max(0.0, std::min(ba.x1, bb.x1) - std::max(ba.x0, bb.x0));
  const double iy = std::max(0.0, std::min(ba.y1, bb.y1) - std::max(ba.y0, bb.y0));
  const double inter = ix * iy;
  // Areas from the same extent arithmetic, so identical boxes give exactly 1.
  const double area_a = (ba.x1 - ba.x0) * (ba.y1 - ba.y0);
  const double area_b = (bb.x1 - bb.x0) * (bb.y1 - bb.y0);
  const double uni = area_a + area_b - inter;
  return inter / uni;
}

std::vector<Detection> nms(std::vector<Detection> dets, double iou_threshold)
{
  std::sort(dets.begin(), dets.end(), higher_priority);
  std::vector<Detection> kept;
  std::vector<bool> suppressed(dets.size(), false);
  for (std::size_t i = 0; i < dets.size(); ++i) {
    if (suppressed[i]) continue;
    kept.push_back(dets[i]);
    for (std::size_t j = i + 1; j < dets.size(); ++j) {
      if (!suppressed[j] && iou(dets[i], dets[j]) > iou_threshold) {
        suppressed[j] = true;
      }
    }
  }
  return kept;
}

std::vector<Detection> mask_filter(const std::vector<Detection> & dets, const RoadMask & mask)
{
  std::vector<Detection> kept;
  kept.reserve(dets.size());
  for (const auto & d : dets) {
    const long col = std::lround(d.anchor.px * (mask.width - 1));
    const long row = std::lround(d.anchor.py * (mask.height - 1));
    if (row < 0 || row >= mask.height || col < 0 || col >= mask.width) continue;
    if (mask.at(static_cast<int>(row), static_cast<int>(col))) {
      kept.push_back(d);
    }
  }
  return kept;
}

RoadMask load_road_mask_pgm(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open road mask: " + path);
  }

  // Header tokens may be separated by whitespace and '#' comments.
  auto next_token = [&in, &path]() {
    std::string tok;
    while (true) {
      const int c = in.peek();
      if (c == EOF) throw ParseError("truncated PGM header: " + path);
      if (c == '#') {
        std::string line;
        std::getline(in, line);
        continue;
      }
      if (std::isspace(c)) {
        in.get();
        continue;
      }
      in >> tok;
      return tok;
    }
  };

  if (next_token() != "P5") {
    throw ParseError("road mask is not a binary PGM (P5): " + path);
  }
  const int width = std::stoi(next_token());
  const int height = std::stoi(next_token());
  const int maxval = std::stoi(next_token());
  if (width <= 0 || height <= 0) {
    throw ParseError("road mask has empty dimensions: " + path);
  }
  if (maxval <= 0 || maxval > 255) {
    throw ParseError("road mask maxval out of single-byte range: " + path);
  }
  in.get();  // single whitespace after maxval

  std::vector<char> raw(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw ParseError("road mask pixel data truncated: " + path);
  }

  RoadMask mask;
  mask.width = width;
  mask.height = height;
  mask.bits.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    mask.bits[i] = static_cast<std::uint8_t>(raw[i]) >= 128 ? 1 : 0;
  }
  return mask;
}

}  // namespace pass::perception

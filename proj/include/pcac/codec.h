/* The copyright in this software is being made available under the BSD
 * Licence, included below.  This software may be subject to other third
 * party and contributor rights, including patent rights, and no such
 * rights are granted under this licence.
 *
 * Copyright (c) 2017-2018, ISO/IEC
 * All rights reserved.
 *
 * Redistribution and use in source and binary forms, with or without
 * modification, are permitted provided that the following conditions are met:
 *
 * * Redistributions of source code must retain the above copyright
 *   notice, this list of conditions and the following disclaimer.
 *
 * * Redistributions in binary form must reproduce the above copyright
 *   notice, this list of conditions and the following disclaimer in the
 *   documentation and/or other materials provided with the distribution.
 *
 * * Neither the name of the ISO/IEC nor the names of its contributors
 *   may be used to endorse or promote products derived from this
 *   software without specific prior written permission.
 *
 * THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS "AS IS"
 * AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED TO, THE
 * IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR PURPOSE
 * ARE DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR CONTRIBUTORS BE
 * LIABLE FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL, EXEMPLARY, OR
 * CONSEQUENTIAL DAMAGES (INCLUDING, BUT NOT LIMITED TO, PROCUREMENT OF
 * SUBSTITUTE GOODS OR SERVICES; LOSS OF USE, DATA, OR PROFITS; OR BUSINESS
 * INTERRUPTION) HOWEVER CAUSED AND ON ANY THEORY OF LIABILITY, WHETHER IN
 * CONTRACT, STRICT LIABILITY, OR TORT (INCLUDING NEGLIGENCE OR OTHERWISE)
 * ARISING IN ANY WAY OUT OF THE USE OF THIS SOFTWARE, EVEN IF ADVISED OF THE
 * POSSIBILITY OF SUCH DAMAGE.
 */

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pcac/bitstream.h"
#include "pcac/color.h"
#include "pcac/partition.h"
#include "pcac/ply.h"
#include "pcac/transform.h"

namespace pcac {

struct ToolToggles {
  bool slices = true;
  bool intra = true;              // off: every block uses DC
  bool adaptiveTransform = true;  // off: every block uses DCT
  bool scanSelect = true;         // off: raster scan only

  bool operator==(const ToolToggles&) const = default;
};

struct EncoderConfig {
  double q = 32.0;  // quantization step, shared by Y, U and V
  SliceParams slicing;
  std::optional<int> depth;  // kd-tree depth per slice; default chooseDepth
  double delta = 0.0;        // graph weight scale; <= 0 adaptive per block
  double tau = 0.0;          // graph distance threshold; <= 0 adaptive
  LambdaQModel lambda;
  ToolToggles tools;
  int threads = 1;
};

struct EncodeStats {
  std::size_t blocks = 0;
  std::array<std::size_t, kIntraModeCount> intraModes{};
  std::array<std::size_t, 2> transformModes{};  // DCT, GFT
  std::array<std::size_t, kScanModeCount> scanModes{};
  std::size_t keptSymbols = 0;
};

struct EncodeResult {
  std::vector<std::uint8_t> bytes;
  Bitstream bitstream;
  // encoder-side closed-loop reconstruction
  YuvAttributes reconstructedYuv;
  PointCloud reconstruction;
  EncodeStats stats;

  double bitsPerPoint() const;
};

// Slice partition, per-slice kd-tree, then per block in coding order:
// intra mode decision against reconstructed references, Lagrangian
// transform decision, quantization, scan selection and arithmetic coding.
EncodeResult encode(const PointCloud& cloud, const EncoderConfig& cfg);

struct DecodeResult {
  YuvAttributes yuv;
  PointCloud cloud;
};

// geometry must be the frame's positions in encoder order.  Throws
// GeometryMismatchError on a point-count mismatch and BitstreamError on a
// corrupt stream.
DecodeResult decode(
  std::span<const std::uint8_t> bytes,
  std::span<const Vec3d> geometry,
  int threads = 1);

// Slices as signalled by a header, rebuilt from geometry.
std::vector<Slice> slicesFromHeader(
  const BitstreamHeader& header, std::span<const Vec3d> geometry);

}  // namespace pcac

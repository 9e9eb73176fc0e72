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
#include <span>
#include <string>
#include <vector>

#include "pcac/entropy.h"
#include "pcac/quant_scan.h"

namespace pcac {

enum class TransformMode : std::uint8_t { kDct = 0, kGft = 1 };

const char* toString(TransformMode mode);

constexpr int kIntraModeCount = 6;

//============================================================================
// Per-block coded payload.

struct BlockRecord {
  int intraMode = 5;
  TransformMode transform = TransformMode::kDct;
  int scanMode = 0;
  // scan output with the trailing zero run removed; kept == symbols.size()
  std::vector<std::int32_t> symbols;

  std::size_t kept() const { return symbols.size(); }

  bool operator==(const BlockRecord&) const = default;
};

// Adaptive state for one slice.  Coefficients are modelled per component
// and per coefficient band (DC, low, high).
struct RecordContexts {
  static constexpr int kBands = 3;

  std::array<BinaryContext, 8> intraMode;
  BinaryContext transform;
  std::array<BinaryContext, 8> scanMode;
  IntegerContexts kept;
  std::array<IntegerContexts, 3 * kBands> coeff;

  static int band(std::size_t row) { return row == 0 ? 0 : row < 8 ? 1 : 2; }

  IntegerContexts& coeffContext(int component, std::size_t row)
  {
    return coeff[component * kBands + band(row)];
  }
};

namespace detail {

  template<typename Coder>
  void encodeTree3(Coder& coder, std::array<BinaryContext, 8>& ctx, int value)
  {
    std::size_t node = 1;
    for (int b = 2; b >= 0; b--) {
      const bool bit = (value >> b) & 1;
      coder.encode(bit, ctx[node]);
      node = 2 * node + bit;
    }
  }

  template<typename Decoder>
  int decodeTree3(Decoder& dec, std::array<BinaryContext, 8>& ctx)
  {
    std::size_t node = 1;
    for (int b = 0; b < 3; b++)
      node = 2 * node + dec.decode(ctx[node]);
    return int(node - 8);
  }

}  // namespace detail

// Works with RangeEncoder and CostEstimator.  rows is the block size n.
template<typename Coder>
void
writeRecord(
  Coder& coder, RecordContexts& ctx, const BlockRecord& rec, std::size_t rows)
{
  detail::encodeTree3(coder, ctx.intraMode, rec.intraMode);
  coder.encode(rec.transform == TransformMode::kGft, ctx.transform);
  detail::encodeTree3(coder, ctx.scanMode, rec.scanMode);
  encodeUnsigned(coder, ctx.kept, std::uint32_t(rec.kept()));
  for (std::size_t pos = 0; pos < rec.symbols.size(); pos++) {
    const auto p = scanPosition(rec.scanMode, pos, rows);
    encodeSigned(coder, ctx.coeffContext(p.component, p.row), rec.symbols[pos]);
  }
}

// Throws BitstreamError on out-of-range fields.
BlockRecord readRecord(RangeDecoder& dec, RecordContexts& ctx, std::size_t rows);

//============================================================================
// Container.  Little-endian layout:
//
//   "PCAC" | version u8 | flags u8 | point_count u32 | slice_count u16 |
//   per slice { depth u8 | Q f32 | delta f32 | tau f32 |
//               map_length u32 | map bytes } |
//   header CRC32 u32 |
//   per slice { length u32 | arithmetic-coded bytes | segment CRC32 u32 }
//
// A zero delta or tau selects the per-block adaptive value.  The slice map
// is empty for a single-slice frame; otherwise it is the probe depth (u8)
// followed by one bit per probe block (LSB first) marking the blocks that
// belong to this slice.

constexpr std::array<char, 4> kMagic = {'P', 'C', 'A', 'C'};
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kFlagSegmentCrc = 0x01;

struct SliceHeader {
  std::uint8_t depth = 0;
  float q = 1.0f;
  float delta = 0.0f;
  float tau = 0.0f;
  std::vector<std::uint8_t> indexMap;

  bool operator==(const SliceHeader&) const = default;
};

struct BitstreamHeader {
  std::uint8_t version = kVersion;
  std::uint8_t flags = kFlagSegmentCrc;
  std::uint32_t pointCount = 0;
  std::vector<SliceHeader> slices;

  bool operator==(const BitstreamHeader&) const = default;
};

struct Bitstream {
  BitstreamHeader header;
  // one arithmetic-coded segment per slice
  std::vector<std::vector<std::uint8_t>> segments;

  bool operator==(const Bitstream&) const = default;
};

std::vector<std::uint8_t> writeBitstream(const Bitstream& bs);
Bitstream readBitstream(std::span<const std::uint8_t> bytes);

// Entropy codes one slice; records must be in coding order and
// blockSizes[i] is the point count of record i's block.
std::vector<std::uint8_t> encodeSliceRecords(
  std::span<const BlockRecord> records, std::span<const std::size_t> blockSizes);

std::vector<BlockRecord> decodeSliceRecords(
  std::span<const std::uint8_t> segment, std::span<const std::size_t> blockSizes);

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

// Probe-block membership bitmap helpers for SliceHeader::indexMap.
std::vector<std::uint8_t> packSliceMap(int probeDepth, const std::vector<bool>& member);
std::vector<bool> unpackSliceMap(std::span<const std::uint8_t> map, int& probeDepth);

}  // namespace pcac

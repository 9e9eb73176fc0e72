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
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace pcac {

//============================================================================
// Adaptive binary model driven by frequency counts.  Counts are halved once
// their sum reaches kLimit, which bounds the coder's division.

class BinaryContext {
public:
  static constexpr std::uint32_t kInit = 16;
  static constexpr std::uint32_t kIncrement = 32;
  static constexpr std::uint32_t kLimit = 1u << 16;

  std::uint32_t zeros() const { return c0_; }
  std::uint32_t total() const { return c0_ + c1_; }

  double probability(bool bit) const
  {
    return double(bit ? c1_ : c0_) / double(c0_ + c1_);
  }

  void update(bool bit)
  {
    (bit ? c1_ : c0_) += kIncrement;
    if (c0_ + c1_ >= kLimit) {
      c0_ = (c0_ + 1) >> 1;
      c1_ = (c1_ + 1) >> 1;
    }
  }

private:
  std::uint32_t c0_ = kInit;
  std::uint32_t c1_ = kInit;
};

//============================================================================
// Byte-oriented range coder (carry propagated through a cached byte).

class RangeEncoder {
public:
  void encode(bool bit, BinaryContext& ctx);
  void encodeBypass(bool bit);

  // Flushes the coder; the encoder must not be used afterwards.
  std::vector<std::uint8_t> finish();

private:
  void shiftLow();

  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint8_t cache_ = 0;
  std::uint64_t cacheSize_ = 1;
  std::vector<std::uint8_t> out_;
};

class RangeDecoder {
public:
  explicit RangeDecoder(std::span<const std::uint8_t> data);

  bool decode(BinaryContext& ctx);
  bool decodeBypass();

  // Bytes pulled so far, including any read past the end of the input.
  std::size_t consumed() const { return pos_; }

private:
  std::uint8_t nextByte();
  void normalize();

  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint32_t code_ = 0;
};

// Drop-in for RangeEncoder that accumulates the adaptive code length
// -log2(p) instead of producing bytes.  Contexts are updated identically.
class CostEstimator {
public:
  void encode(bool bit, BinaryContext& ctx)
  {
    bits_ -= std::log2(ctx.probability(bit));
    ctx.update(bit);
  }

  void encodeBypass(bool) { bits_ += 1.0; }

  double bits() const { return bits_; }

private:
  double bits_ = 0.0;
};

//============================================================================
// Integer binarization.  An unsigned u is coded as v = u + 1: the bit
// length class of v in unary (adaptive, one context per position), then the
// bits below the leading one, MSB first.  The first kTreeBits of them use a
// binary-tree context per class, the remainder bypass.  Class kEscapeClass
// escapes to a raw 32-bit value.  Signed values are zig-zag folded first.

struct IntegerContexts {
  static constexpr int kEscapeClass = 16;
  static constexpr int kTreeBits = 6;

  std::array<BinaryContext, kEscapeClass> prefix;
  std::array<std::array<BinaryContext, 1 << kTreeBits>, kEscapeClass> tree;
};

constexpr std::uint32_t
zigzag(std::int32_t v)
{
  return (std::uint32_t(v) << 1) ^ std::uint32_t(v >> 31);
}

constexpr std::int32_t
unzigzag(std::uint32_t u)
{
  return std::int32_t(u >> 1) ^ -std::int32_t(u & 1);
}

template<typename Coder>
void
encodeUnsigned(Coder& coder, IntegerContexts& ctx, std::uint32_t u)
{
  const std::uint64_t v = std::uint64_t(u) + 1;
  const int cls = std::bit_width(v) - 1;

  if (cls >= IntegerContexts::kEscapeClass) {
    for (int j = 0; j < IntegerContexts::kEscapeClass; j++)
      coder.encode(true, ctx.prefix[j]);
    for (int b = 31; b >= 0; b--)
      coder.encodeBypass((u >> b) & 1);
    return;
  }

  for (int j = 0; j < cls; j++)
    coder.encode(true, ctx.prefix[j]);
  coder.encode(false, ctx.prefix[cls]);

  std::size_t node = 1;
  for (int b = cls - 1; b >= 0; b--) {
    const bool bit = (v >> b) & 1;
    if (cls - 1 - b < IntegerContexts::kTreeBits) {
      coder.encode(bit, ctx.tree[cls][node]);
      node = 2 * node + bit;
    } else {
      coder.encodeBypass(bit);
    }
  }
}

template<typename Decoder>
std::uint32_t
decodeUnsigned(Decoder& dec, IntegerContexts& ctx)
{
  int cls = 0;
  while (cls < IntegerContexts::kEscapeClass && dec.decode(ctx.prefix[cls]))
    cls++;

  if (cls == IntegerContexts::kEscapeClass) {
    std::uint32_t u = 0;
    for (int b = 0; b < 32; b++)
      u = (u << 1) | std::uint32_t(dec.decodeBypass());
    return u;
  }

  std::uint64_t v = 1;
  std::size_t node = 1;
  for (int b = cls - 1; b >= 0; b--) {
    bool bit;
    if (cls - 1 - b < IntegerContexts::kTreeBits) {
      bit = dec.decode(ctx.tree[cls][node]);
      node = 2 * node + bit;
    } else {
      bit = dec.decodeBypass();
    }
    v = (v << 1) | std::uint64_t(bit);
  }
  return std::uint32_t(v - 1);
}

template<typename Coder>
void
encodeSigned(Coder& coder, IntegerContexts& ctx, std::int32_t value)
{
  encodeUnsigned(coder, ctx, zigzag(value));
}

template<typename Decoder>
std::int32_t
decodeSigned(Decoder& dec, IntegerContexts& ctx)
{
  return unzigzag(decodeUnsigned(dec, ctx));
}

//============================================================================
// Standalone symbol-list coding with a single adaptive context set.

std::vector<std::uint8_t> encodeSymbols(std::span<const std::int32_t> symbols);

// Throws BitstreamError if the stream is shorter than the symbols require.
std::vector<std::int32_t> decodeSymbols(
  std::span<const std::uint8_t> bytes, std::size_t count);

}  // namespace pcac

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

#include "pcac/entropy.h"

#include "pcac/error.h"

namespace pcac {

namespace {
  constexpr std::uint32_t kTop = 1u << 24;
}

//============================================================================

void
RangeEncoder::encode(bool bit, BinaryContext& ctx)
{
  const std::uint32_t bound = (range_ / ctx.total()) * ctx.zeros();
  if (!bit) {
    range_ = bound;
  } else {
    low_ += bound;
    range_ -= bound;
  }
  ctx.update(bit);
  while (range_ < kTop) {
    range_ <<= 8;
    shiftLow();
  }
}

void
RangeEncoder::encodeBypass(bool bit)
{
  range_ >>= 1;
  if (bit)
    low_ += range_;
  while (range_ < kTop) {
    range_ <<= 8;
    shiftLow();
  }
}

void
RangeEncoder::shiftLow()
{
  if (std::uint32_t(low_) < 0xFF000000u || (low_ >> 32) != 0) {
    const auto carry = std::uint8_t(low_ >> 32);
    std::uint8_t temp = cache_;
    do {
      out_.push_back(std::uint8_t(temp + carry));
      temp = 0xFF;
    } while (--cacheSize_ != 0);
    cache_ = std::uint8_t(low_ >> 24);
  }
  cacheSize_++;
  low_ = (low_ & 0x00FFFFFFu) << 8;
}

std::vector<std::uint8_t>
RangeEncoder::finish()
{
  for (int i = 0; i < 5; i++)
    shiftLow();
  return std::move(out_);
}

//============================================================================

RangeDecoder::RangeDecoder(std::span<const std::uint8_t> data) : data_(data)
{
  for (int i = 0; i < 5; i++)
    code_ = (code_ << 8) | nextByte();
}

std::uint8_t
RangeDecoder::nextByte()
{
  const std::uint8_t b = pos_ < data_.size() ? data_[pos_] : 0;
  pos_++;
  return b;
}

void
RangeDecoder::normalize()
{
  while (range_ < kTop) {
    range_ <<= 8;
    code_ = (code_ << 8) | nextByte();
  }
}

bool
RangeDecoder::decode(BinaryContext& ctx)
{
  const std::uint32_t bound = (range_ / ctx.total()) * ctx.zeros();
  bool bit;
  if (code_ < bound) {
    range_ = bound;
    bit = false;
  } else {
    code_ -= bound;
    range_ -= bound;
    bit = true;
  }
  ctx.update(bit);
  normalize();
  return bit;
}

bool
RangeDecoder::decodeBypass()
{
  range_ >>= 1;
  bool bit = false;
  if (code_ >= range_) {
    code_ -= range_;
    bit = true;
  }
  normalize();
  return bit;
}

//============================================================================

std::vector<std::uint8_t>
encodeSymbols(std::span<const std::int32_t> symbols)
{
  RangeEncoder enc;
  IntegerContexts ctx;
  for (auto s : symbols)
    encodeSigned(enc, ctx, s);
  return enc.finish();
}

std::vector<std::int32_t>
decodeSymbols(std::span<const std::uint8_t> bytes, std::size_t count)
{
  RangeDecoder dec(bytes);
  IntegerContexts ctx;
  std::vector<std::int32_t> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; i++) {
    out.push_back(decodeSigned(dec, ctx));
    if (dec.consumed() > bytes.size())
      throw BitstreamError(
        BitstreamError::Kind::kCorrupt, "symbol stream ends prematurely");
  }
  return out;
}

}  // namespace pcac

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

#include "pcac/bitstream.h"

#include <bit>
#include <cstring>
#include <zlib.h>

#include "pcac/error.h"

namespace pcac {

const char*
toString(TransformMode mode)
{
  return mode == TransformMode::kGft ? "GFT" : "DCT";
}

//============================================================================

BlockRecord
readRecord(RangeDecoder& dec, RecordContexts& ctx, std::size_t rows)
{
  BlockRecord rec;
  rec.intraMode = detail::decodeTree3(dec, ctx.intraMode);
  rec.transform =
    dec.decode(ctx.transform) ? TransformMode::kGft : TransformMode::kDct;
  rec.scanMode = detail::decodeTree3(dec, ctx.scanMode);
  if (rec.intraMode >= kIntraModeCount || rec.scanMode >= kScanModeCount)
    throw BitstreamError(BitstreamError::Kind::kCorrupt, "mode out of range");

  const std::uint32_t kept = decodeUnsigned(dec, ctx.kept);
  if (kept > 3 * rows)
    throw BitstreamError(
      BitstreamError::Kind::kCorrupt, "kept count exceeds block size");

  rec.symbols.resize(kept);
  for (std::size_t pos = 0; pos < kept; pos++) {
    const auto p = scanPosition(rec.scanMode, pos, rows);
    rec.symbols[pos] = decodeSigned(dec, ctx.coeffContext(p.component, p.row));
  }
  return rec;
}

std::vector<std::uint8_t>
encodeSliceRecords(
  std::span<const BlockRecord> records, std::span<const std::size_t> blockSizes)
{
  assert(records.size() == blockSizes.size());
  RangeEncoder enc;
  RecordContexts ctx;
  for (std::size_t i = 0; i < records.size(); i++)
    writeRecord(enc, ctx, records[i], blockSizes[i]);
  return enc.finish();
}

std::vector<BlockRecord>
decodeSliceRecords(
  std::span<const std::uint8_t> segment, std::span<const std::size_t> blockSizes)
{
  RangeDecoder dec(segment);
  RecordContexts ctx;
  std::vector<BlockRecord> records;
  records.reserve(blockSizes.size());
  for (auto rows : blockSizes) {
    records.push_back(readRecord(dec, ctx, rows));
    if (dec.consumed() > segment.size())
      throw BitstreamError(
        BitstreamError::Kind::kCorrupt, "slice segment ends prematurely");
  }
  if (dec.consumed() != segment.size())
    throw BitstreamError(
      BitstreamError::Kind::kCorrupt, "slice segment length mismatch");
  return records;
}

//============================================================================

std::uint32_t
crc32(std::span<const std::uint8_t> bytes)
{
  uLong crc = ::crc32(0L, Z_NULL, 0);
  return std::uint32_t(::crc32(crc, bytes.data(), uInt(bytes.size())));
}

std::vector<std::uint8_t>
packSliceMap(int probeDepth, const std::vector<bool>& member)
{
  std::vector<std::uint8_t> map(1 + (member.size() + 7) / 8, 0);
  map[0] = std::uint8_t(probeDepth);
  for (std::size_t j = 0; j < member.size(); j++)
    if (member[j])
      map[1 + j / 8] |= std::uint8_t(1u << (j % 8));
  return map;
}

std::vector<bool>
unpackSliceMap(std::span<const std::uint8_t> map, int& probeDepth)
{
  if (map.empty())
    throw BitstreamError(BitstreamError::Kind::kCorrupt, "empty slice map");
  probeDepth = map[0];
  if (probeDepth > 30)
    throw BitstreamError(BitstreamError::Kind::kCorrupt, "bad probe depth");
  const std::size_t blocks = std::size_t(1) << probeDepth;
  if (map.size() != 1 + (blocks + 7) / 8)
    throw BitstreamError(BitstreamError::Kind::kCorrupt, "slice map size");
  std::vector<bool> member(blocks);
  for (std::size_t j = 0; j < blocks; j++)
    member[j] = (map[1 + j / 8] >> (j % 8)) & 1;
  return member;
}

//============================================================================

namespace {

  class Writer {
  public:
    template<typename T>
    void put(T v)
    {
      if constexpr (std::is_same_v<T, float>) {
        put(std::bit_cast<std::uint32_t>(v));
      } else {
        for (std::size_t i = 0; i < sizeof(T); i++)
          bytes.push_back(std::uint8_t(std::uint64_t(v) >> (8 * i)));
      }
    }

    void put(std::span<const std::uint8_t> data)
    {
      bytes.insert(bytes.end(), data.begin(), data.end());
    }

    std::vector<std::uint8_t> bytes;
  };

  class Reader {
  public:
    explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

    template<typename T>
    T get()
    {
      if constexpr (std::is_same_v<T, float>) {
        return std::bit_cast<float>(get<std::uint32_t>());
      } else {
        need(sizeof(T));
        std::uint64_t v = 0;
        for (std::size_t i = 0; i < sizeof(T); i++)
          v |= std::uint64_t(data_[pos_ + i]) << (8 * i);
        pos_ += sizeof(T);
        return T(v);
      }
    }

    std::span<const std::uint8_t> take(std::size_t n)
    {
      need(n);
      auto out = data_.subspan(pos_, n);
      pos_ += n;
      return out;
    }

    std::size_t position() const { return pos_; }
    std::size_t remaining() const { return data_.size() - pos_; }

  private:
    void need(std::size_t n) const
    {
      if (data_.size() - pos_ < n)
        throw BitstreamError(BitstreamError::Kind::kCorrupt, "truncated bitstream");
    }

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
  };

}  // namespace

std::vector<std::uint8_t>
writeBitstream(const Bitstream& bs)
{
  const auto& h = bs.header;
  assert(bs.segments.size() == h.slices.size());

  Writer w;
  for (char c : kMagic)
    w.put(std::uint8_t(c));
  w.put(h.version);
  w.put(h.flags);
  w.put(h.pointCount);
  w.put(std::uint16_t(h.slices.size()));
  for (const auto& s : h.slices) {
    w.put(s.depth);
    w.put(s.q);
    w.put(s.delta);
    w.put(s.tau);
    w.put(std::uint32_t(s.indexMap.size()));
    w.put(std::span<const std::uint8_t>(s.indexMap));
  }
  w.put(crc32(w.bytes));

  for (const auto& seg : bs.segments) {
    w.put(std::uint32_t(seg.size()));
    w.put(std::span<const std::uint8_t>(seg));
    if (h.flags & kFlagSegmentCrc)
      w.put(crc32(seg));
  }
  return std::move(w.bytes);
}

Bitstream
readBitstream(std::span<const std::uint8_t> bytes)
{
  using Kind = BitstreamError::Kind;

  if (bytes.size() < kMagic.size()
      || std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0)
    throw BitstreamError(Kind::kBadMagic, "not a PCAC bitstream");

  Reader r(bytes);
  r.take(kMagic.size());

  Bitstream bs;
  auto& h = bs.header;
  h.version = r.get<std::uint8_t>();
  if (h.version != kVersion)
    throw BitstreamError(
      Kind::kBadVersion, "unsupported bitstream version " + std::to_string(h.version));

  // a corrupted count field surfaces as a CRC failure rather than a
  // truncation
  try {
    h.flags = r.get<std::uint8_t>();
    h.pointCount = r.get<std::uint32_t>();
    const auto sliceCount = r.get<std::uint16_t>();
    for (int i = 0; i < sliceCount; i++) {
      SliceHeader s;
      s.depth = r.get<std::uint8_t>();
      s.q = r.get<float>();
      s.delta = r.get<float>();
      s.tau = r.get<float>();
      const auto mapLen = r.get<std::uint32_t>();
      auto map = r.take(mapLen);
      s.indexMap.assign(map.begin(), map.end());
      h.slices.push_back(std::move(s));
    }
    const std::size_t headerLen = r.position();
    const auto stored = r.get<std::uint32_t>();
    if (stored != crc32(bytes.first(headerLen)))
      throw BitstreamError(Kind::kCrcMismatch, "header CRC mismatch");
  } catch (const BitstreamError& e) {
    if (e.kind() == Kind::kCorrupt)
      throw BitstreamError(Kind::kCrcMismatch, "header CRC mismatch (header unreadable)");
    throw;
  }

  for (std::size_t i = 0; i < h.slices.size(); i++) {
    const auto len = r.get<std::uint32_t>();
    auto seg = r.take(len);
    if (h.flags & kFlagSegmentCrc) {
      if (r.get<std::uint32_t>() != crc32(seg))
        throw BitstreamError(
          Kind::kCrcMismatch, "slice " + std::to_string(i) + " CRC mismatch");
    }
    bs.segments.emplace_back(seg.begin(), seg.end());
  }
  if (r.remaining() != 0)
    throw BitstreamError(Kind::kCorrupt, "trailing bytes after last slice");
  return bs;
}

}  // namespace pcac

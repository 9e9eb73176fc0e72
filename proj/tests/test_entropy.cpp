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

#include "doctest.h"

#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "pcac/bitstream.h"
#include "pcac/entropy.h"
#include "pcac/error.h"
#include "oracles.h"

using namespace pcac;

namespace {

BlockRecord
randomRecord(std::mt19937& rng, std::size_t rows)
{
  std::uniform_int_distribution<int> intra(0, 5), scanMode(0, 6), flag(0, 1);
  std::uniform_int_distribution<std::size_t> kept(0, 3 * rows);
  std::geometric_distribution<int> mag(0.3);
  BlockRecord r;
  r.intraMode = intra(rng);
  r.transform = flag(rng) ? TransformMode::kGft : TransformMode::kDct;
  r.scanMode = scanMode(rng);
  r.symbols.resize(kept(rng));
  for (auto& s : r.symbols)
    s = flag(rng) ? mag(rng) : -mag(rng);
  if (!r.symbols.empty() && r.symbols.back() == 0)
    r.symbols.back() = 1;
  return r;
}

}  // namespace

TEST_CASE("zig-zag folding")
{
  CHECK(zigzag(0) == 0u);
  CHECK(zigzag(-1) == 1u);
  CHECK(zigzag(1) == 2u);
  CHECK(zigzag(-2) == 3u);
  CHECK(zigzag(std::numeric_limits<std::int32_t>::max()) == 0xFFFFFFFEu);
  CHECK(zigzag(std::numeric_limits<std::int32_t>::min()) == 0xFFFFFFFFu);
  for (std::int32_t v : {0, 1, -1, 77, -77, 1 << 20, -(1 << 30)})
    CHECK(unzigzag(zigzag(v)) == v);
}

TEST_CASE("context adaptation and halving")
{
  BinaryContext c;
  CHECK(c.probability(false) == 0.5);
  c.update(true);
  CHECK(c.probability(true) == doctest::Approx(48.0 / 64));
  for (int i = 0; i < 5000; i++) {
    c.update(true);
    CHECK(c.total() < BinaryContext::kLimit);
  }
  CHECK(c.zeros() >= 1u);
  CHECK(c.probability(true) > 0.99);
}

TEST_CASE("empty symbol list")
{
  const auto bytes = encodeSymbols({});
  CHECK(decodeSymbols(bytes, 0).empty());
}

TEST_CASE("uniform i.i.d. symbols code near their entropy")
{
  std::mt19937 rng(2);
  for (int range : {2, 16, 200}) {
    std::uniform_int_distribution<int> d(-range / 2, range / 2 - 1);
    std::vector<std::int32_t> s(10000);
    for (auto& v : s)
      v = d(rng);
    const auto bytes = encodeSymbols(s);
    CHECK(decodeSymbols(bytes, s.size()) == s);
    const double h = test::empiricalEntropyBits(s);
    INFO("range " << range << " bits " << 8.0 * bytes.size() << " entropy " << h);
    CHECK(8.0 * double(bytes.size()) <= 1.05 * h);
  }
}

TEST_CASE("skewed i.i.d. symbols code near their entropy")
{
  std::mt19937 rng(3);
  std::geometric_distribution<int> g(0.25);
  std::bernoulli_distribution sign(0.5);
  std::vector<std::int32_t> s(10000);
  for (auto& v : s)
    v = sign(rng) ? g(rng) : -g(rng);
  const auto bytes = encodeSymbols(s);
  CHECK(decodeSymbols(bytes, s.size()) == s);
  CHECK(8.0 * double(bytes.size()) <= 1.05 * test::empiricalEntropyBits(s));
}

TEST_CASE("identical symbols cost what the adaptive model predicts")
{
  // Independent simulation of the count model: each zero symbol is a single
  // 0 decision in one context.
  const std::size_t n = 10000;
  double c0 = 16, c1 = 16, loss = 0;
  for (std::size_t i = 0; i < n; i++) {
    loss -= std::log2(c0 / (c0 + c1));
    c0 += 32;
    if (c0 + c1 >= 65536) {
      c0 = std::floor((c0 + 1) / 2);
      c1 = std::floor((c1 + 1) / 2);
    }
  }
  const std::vector<std::int32_t> s(n, 0);
  const auto bytes = encodeSymbols(s);
  CHECK(decodeSymbols(bytes, n) == s);
  const double bits = 8.0 * double(bytes.size());
  CHECK(bits / double(n) < 0.05);
  CHECK(bits <= loss + 48);
  CHECK(bits >= loss - 8);
}

TEST_CASE("large magnitudes use the escape path")
{
  const std::vector<std::int32_t> s{
    0,          1 << 14,   -(1 << 14),  (1 << 15) - 1, 1 << 15,
    -(1 << 15), 65535,     1 << 20,     -(1 << 29),    std::numeric_limits<std::int32_t>::max(),
    std::numeric_limits<std::int32_t>::min(), 3, -3};
  CHECK(decodeSymbols(encodeSymbols(s), s.size()) == s);
}

TEST_CASE("truncated symbol stream is detected")
{
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> d(-1000, 1000);
  std::vector<std::int32_t> s(500);
  for (auto& v : s)
    v = d(rng);
  auto bytes = encodeSymbols(s);
  bytes.resize(bytes.size() / 2);
  CHECK_THROWS_AS(decodeSymbols(bytes, s.size()), BitstreamError);
}

TEST_CASE("cost estimate tracks the coded size")
{
  std::mt19937 rng(9);
  for (int t = 0; t < 20; t++) {
    std::vector<BlockRecord> recs;
    std::vector<std::size_t> sizes;
    for (int b = 0; b < 40; b++) {
      sizes.push_back(1 + std::size_t(b * 7 % 150));
      recs.push_back(randomRecord(rng, sizes.back()));
    }
    RecordContexts ctx;
    CostEstimator est;
    for (std::size_t i = 0; i < recs.size(); i++)
      writeRecord(est, ctx, recs[i], sizes[i]);
    const auto bytes = encodeSliceRecords(recs, sizes);
    CHECK(std::abs(8.0 * double(bytes.size()) - est.bits()) <= 48 + 0.002 * est.bits());
  }
}

//============================================================================

TEST_CASE("block records round trip")
{
  std::mt19937 rng(21);
  for (int t = 0; t < 30; t++) {
    std::vector<BlockRecord> recs;
    std::vector<std::size_t> sizes;
    for (int b = 0; b < 1 + t * 3; b++) {
      sizes.push_back(1 + std::size_t((b * 13 + t) % 200));
      recs.push_back(randomRecord(rng, sizes.back()));
    }
    const auto bytes = encodeSliceRecords(recs, sizes);
    CHECK(decodeSliceRecords(bytes, sizes) == recs);
  }
  CHECK(decodeSliceRecords(encodeSliceRecords({}, {}), {}).empty());
}

TEST_CASE("corrupt slice segments are rejected")
{
  std::mt19937 rng(22);
  std::vector<BlockRecord> recs;
  std::vector<std::size_t> sizes;
  for (int b = 0; b < 50; b++) {
    sizes.push_back(100);
    recs.push_back(randomRecord(rng, 100));
  }
  auto bytes = encodeSliceRecords(recs, sizes);
  auto shorter = bytes;
  shorter.resize(bytes.size() - 10);
  CHECK_THROWS_AS(decodeSliceRecords(shorter, sizes), BitstreamError);
  auto longer = bytes;
  longer.push_back(0);
  CHECK_THROWS_AS(decodeSliceRecords(longer, sizes), BitstreamError);
}

TEST_CASE("slice map packing")
{
  std::vector<bool> member{true, false, false, true, true, false, true, false, true, true};
  member.resize(16, false);
  const auto map = packSliceMap(4, member);
  CHECK(map.size() == 3);
  CHECK(map[0] == 4);
  CHECK(map[1] == 0x59);
  int depth = -1;
  CHECK(unpackSliceMap(map, depth) == member);
  CHECK(depth == 4);
  auto bad = map;
  bad.pop_back();
  CHECK_THROWS_AS(unpackSliceMap(bad, depth), BitstreamError);
  CHECK_THROWS_AS(unpackSliceMap({}, depth), BitstreamError);
}

TEST_CASE("CRC32 reference value")
{
  const std::string s = "123456789";
  CHECK(crc32({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()})
        == 0xCBF43926u);
}

namespace {

Bitstream
sampleBitstream(std::mt19937& rng, int slices)
{
  Bitstream bs;
  bs.header.pointCount = 12345;
  for (int i = 0; i < slices; i++) {
    SliceHeader sh;
    sh.depth = std::uint8_t(3 + i);
    sh.q = 16.5f;
    sh.delta = i ? 1.25f : 0.0f;
    sh.tau = 0.0f;
    if (slices > 1)
      sh.indexMap = packSliceMap(3, std::vector<bool>(8, i == 1));
    bs.header.slices.push_back(sh);
    std::vector<std::uint8_t> seg(std::size_t(20 + 17 * i));
    for (auto& b : seg)
      b = std::uint8_t(rng());
    bs.segments.push_back(seg);
  }
  return bs;
}

}  // namespace

TEST_CASE("bitstream container round trip")
{
  std::mt19937 rng(8);
  Bitstream empty;
  const auto headerOnly = writeBitstream(empty);
  CHECK(readBitstream(headerOnly) == empty);
  CHECK(headerOnly.size() == 4 + 1 + 1 + 4 + 2 + 4);

  for (int slices = 1; slices <= 2; slices++) {
    const auto bs = sampleBitstream(rng, slices);
    const auto bytes = writeBitstream(bs);
    CHECK(readBitstream(bytes) == bs);
    CHECK(writeBitstream(readBitstream(bytes)) == bytes);
  }
}

TEST_CASE("bitstream corruption is reported by kind")
{
  std::mt19937 rng(10);
  const auto bs = sampleBitstream(rng, 2);
  const auto bytes = writeBitstream(bs);
  std::size_t headerLen = 4 + 1 + 1 + 4 + 2;
  for (const auto& s : bs.header.slices)
    headerLen += 1 + 4 + 4 + 4 + 4 + s.indexMap.size();
  headerLen += 4;

  auto kindAfterFlip = [&](std::size_t pos, std::uint8_t mask) {
    auto b = bytes;
    b[pos] ^= mask;
    try {
      readBitstream(b);
    } catch (const BitstreamError& e) {
      return int(e.kind());
    }
    return -1;
  };

  for (std::size_t pos = 0; pos < headerLen; pos++)
    for (std::uint8_t mask : {0x01, 0x80, 0xFF}) {
      INFO("byte " << pos << " mask " << int(mask));
      const int kind = kindAfterFlip(pos, mask);
      if (pos < 4)
        CHECK(kind == int(BitstreamError::Kind::kBadMagic));
      else if (pos == 4)
        CHECK(kind == int(BitstreamError::Kind::kBadVersion));
      else
        CHECK(kind == int(BitstreamError::Kind::kCrcMismatch));
    }

  // every body byte is covered by a segment CRC or length check
  for (std::size_t pos = headerLen; pos < bytes.size(); pos++)
    CHECK(kindAfterFlip(pos, 0x10) >= 0);

  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(readBitstream(truncated), BitstreamError);
  auto extended = bytes;
  extended.push_back(0);
  CHECK_THROWS_AS(readBitstream(extended), BitstreamError);
  CHECK_THROWS_AS(readBitstream({}), BitstreamError);
}

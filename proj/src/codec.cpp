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

#include "pcac/codec.h"

#include <algorithm>
#include <numeric>

#include "pcac/error.h"
#include "pcac/parallel.h"
#include "pcac/prediction.h"

namespace pcac {

double
EncodeResult::bitsPerPoint() const
{
  const std::size_t n = reconstruction.count();
  return n ? 8.0 * double(bytes.size()) / double(n) : 0.0;
}

//============================================================================

namespace {

  // GFT bases are computed in batches so memory stays bounded (a basis is
  // n^2 doubles) while still letting workers run ahead of the
  // strictly sequential coding loop.
  constexpr std::size_t kBasisBatchPerThread = 16;

  std::vector<Vec3d> gather(
    std::span<const Vec3d> values, std::span<const PointIndex> indices)
  {
    std::vector<Vec3d> out;
    out.reserve(indices.size());
    for (auto i : indices)
      out.push_back(values[i]);
    return out;
  }

  GftBasis blockBasis(
    std::span<const Vec3d> positions,
    const Block& block,
    const SliceHeader& sh)
  {
    const auto pts = gather(positions, block.pointIndices);
    return gftBasis(buildGraph(pts, sh.delta, sh.tau));
  }

  std::size_t batchSize(int threads)
  {
    return kBasisBatchPerThread * std::size_t(std::max(threads, 1));
  }

  // Single-precision header fields are what the decoder sees, so the
  // encoder works with the same rounded values.
  double asStored(double v) { return double(float(v)); }

  //--------------------------------------------------------------------------

  struct SliceCoding {
    SliceHeader header;
    std::vector<std::uint8_t> segment;
  };

  SliceCoding encodeSlice(
    std::span<const Vec3d> positions,
    std::span<const Vec3d> yuv,
    const Slice& slice,
    const EncoderConfig& cfg,
    YuvAttributes& recon,
    EncodeStats& stats)
  {
    SliceCoding out;
    auto& sh = out.header;
    const int depth = cfg.depth.value_or(chooseDepth(slice.pointIndices.size()));
    sh.depth = std::uint8_t(depth);
    sh.q = float(cfg.q);
    sh.delta = cfg.delta > 0.0 ? float(cfg.delta) : 0.0f;
    sh.tau = cfg.tau > 0.0 ? float(cfg.tau) : 0.0f;

    const double q = sh.q;
    const double lambda = lambdaFromQ(q, cfg.lambda);

    const KdTree tree = buildKdTree(positions, slice.pointIndices, depth);
    const BlockLayout layout = enumerateBlocks(tree);
    const auto& blocks = layout.blocks;

    RangeEncoder enc;
    RecordContexts ctx;
    ReferenceStore refs;

    const std::size_t batch = batchSize(cfg.threads);
    std::vector<GftBasis> bases;
    for (std::size_t start = 0; start < blocks.size(); start += batch) {
      const std::size_t end = std::min(blocks.size(), start + batch);
      if (cfg.tools.adaptiveTransform) {
        bases.assign(end - start, GftBasis{});
        parallelFor(end - start, cfg.threads, [&](std::size_t j) {
          bases[j] = blockBasis(positions, blocks[start + j], sh);
        });
      }

      for (std::size_t b = start; b < end; b++) {
        const Block& block = blocks[b];
        const std::size_t n = block.pointIndices.size();
        const auto blockYuv = gather(yuv, block.pointIndices);

        const auto intra = selectIntraMode(
          blockYuv, refs.references(block.index, cfg.tools.intra));

        TransformDecisionInput in;
        in.residuals = intra.residuals;
        in.gft = cfg.tools.adaptiveTransform ? &bases[b - start] : nullptr;
        in.q = q;
        in.lambda = lambda;
        in.intraMode = intra.mode;
        in.scanSelect = cfg.tools.scanSelect;
        const auto decision = selectTransformMode(in, ctx);
        const auto& chosen = decision.chosen;

        writeRecord(enc, ctx, chosen.record, n);

        std::vector<Vec3d> blockRecon(n);
        for (std::size_t i = 0; i < n; i++) {
          for (int c = 0; c < 3; c++)
            blockRecon[i][c] = intra.reference[c] + chosen.reconstructed[i][c];
          recon[block.pointIndices[i]] = blockRecon[i];
        }
        refs.add(block.index, mean(blockRecon), n);

        stats.blocks++;
        stats.intraModes[intra.mode]++;
        stats.transformModes[int(chosen.mode)]++;
        stats.scanModes[chosen.record.scanMode]++;
        stats.keptSymbols += chosen.record.kept();
      }
    }

    out.segment = enc.finish();
    return out;
  }

  //--------------------------------------------------------------------------

  void decodeSlice(
    std::span<const Vec3d> positions,
    const Slice& slice,
    const SliceHeader& sh,
    std::span<const std::uint8_t> segment,
    int threads,
    YuvAttributes& recon)
  {
    using Kind = BitstreamError::Kind;
    if (sh.depth > 30
        || slice.pointIndices.size() < (std::size_t(1) << sh.depth))
      throw BitstreamError(Kind::kCorrupt, "slice depth exceeds its point count");
    if (!(sh.q > 0.0f))
      throw BitstreamError(Kind::kCorrupt, "non-positive quantization step");

    const KdTree tree = buildKdTree(positions, slice.pointIndices, sh.depth);
    const BlockLayout layout = enumerateBlocks(tree);
    const auto& blocks = layout.blocks;

    std::vector<std::size_t> sizes;
    sizes.reserve(blocks.size());
    for (const auto& b : blocks)
      sizes.push_back(b.pointIndices.size());
    const auto records = decodeSliceRecords(segment, sizes);

    const double q = sh.q;
    ReferenceStore refs;
    const std::size_t batch = batchSize(threads);
    std::vector<std::optional<GftBasis>> bases;

    for (std::size_t start = 0; start < blocks.size(); start += batch) {
      const std::size_t end = std::min(blocks.size(), start + batch);
      bases.assign(end - start, std::nullopt);
      parallelFor(end - start, threads, [&](std::size_t j) {
        if (records[start + j].transform == TransformMode::kGft)
          bases[j] = blockBasis(positions, blocks[start + j], sh);
      });

      for (std::size_t b = start; b < end; b++) {
        const Block& block = blocks[b];
        const auto& rec = records[b];
        const std::size_t n = block.pointIndices.size();

        const auto available = refs.references(block.index);
        if (!available[rec.intraMode])
          throw BitstreamError(Kind::kCorrupt, "intra reference not available");
        const Vec3d ref = *available[rec.intraMode];

        const GftBasis* gft = bases[b - start] ? &*bases[b - start] : nullptr;
        const auto residual = reconstructResidual(rec, n, q, gft);

        std::vector<Vec3d> blockRecon(n);
        for (std::size_t i = 0; i < n; i++) {
          for (int c = 0; c < 3; c++)
            blockRecon[i][c] = ref[c] + residual[i][c];
          recon[block.pointIndices[i]] = blockRecon[i];
        }
        refs.add(block.index, mean(blockRecon), n);
      }
    }
  }

}  // namespace

//============================================================================

EncodeResult
encode(const PointCloud& cloud, const EncoderConfig& cfg)
{
  validate(cloud);
  if (!(cfg.q > 0.0) || !(float(cfg.q) > 0.0f))
    throw ConfigError("quantization step must be positive");
  if (cloud.count() > 0xFFFFFFFFu)
    throw ConfigError("too many points");

  const auto& positions = cloud.positions;
  const YuvAttributes yuv = rgbToYuv(cloud.colors);

  SlicePartition partition;
  if (cfg.tools.slices && cloud.count() > 0) {
    partition = partitionSlices(positions, yuv, cfg.slicing);
  } else {
    partition.slices = slicesFromProbeFlags(positions, 0, {});
  }
  if (cloud.count() == 0)
    partition.slices.clear();

  EncodeResult result;
  result.reconstructedYuv.assign(cloud.count(), Vec3d{0, 0, 0});
  auto& header = result.bitstream.header;
  header.pointCount = std::uint32_t(cloud.count());

  EncoderConfig sliceCfg = cfg;
  sliceCfg.q = asStored(cfg.q);
  sliceCfg.delta = cfg.delta > 0.0 ? asStored(cfg.delta) : 0.0;
  sliceCfg.tau = cfg.tau > 0.0 ? asStored(cfg.tau) : 0.0;

  for (const auto& slice : partition.slices) {
    auto coded = encodeSlice(
      positions, yuv, slice, sliceCfg, result.reconstructedYuv, result.stats);
    if (!partition.nonSmooth.empty()) {
      std::vector<bool> member(partition.nonSmooth.size());
      for (std::size_t j = 0; j < member.size(); j++)
        member[j] = partition.nonSmooth[j] == (slice.id == 1);
      coded.header.indexMap = packSliceMap(partition.probeDepth, member);
    }
    header.slices.push_back(std::move(coded.header));
    result.bitstream.segments.push_back(std::move(coded.segment));
  }

  result.bytes = writeBitstream(result.bitstream);
  result.reconstruction.positions = cloud.positions;
  result.reconstruction.colors = yuvToRgb(result.reconstructedYuv);
  return result;
}

//----------------------------------------------------------------------------

std::vector<Slice>
slicesFromHeader(const BitstreamHeader& header, std::span<const Vec3d> geometry)
{
  using Kind = BitstreamError::Kind;
  const std::size_t n = geometry.size();

  if (header.slices.empty()) {
    if (n != 0)
      throw BitstreamError(Kind::kCorrupt, "no slices for a non-empty frame");
    return {};
  }
  if (header.slices.size() == 1 && header.slices[0].indexMap.empty())
    return slicesFromProbeFlags(geometry, 0, {});

  int probeDepth = -1;
  std::vector<std::vector<bool>> members;
  for (const auto& sh : header.slices) {
    int d = 0;
    members.push_back(unpackSliceMap(sh.indexMap, d));
    if (probeDepth >= 0 && d != probeDepth)
      throw BitstreamError(Kind::kCorrupt, "inconsistent slice probe depth");
    probeDepth = d;
  }
  if ((std::size_t(1) << probeDepth) > n)
    throw BitstreamError(Kind::kCorrupt, "probe depth exceeds point count");

  std::vector<PointIndex> all(n);
  std::iota(all.begin(), all.end(), PointIndex(0));
  const KdTree probe = buildKdTree(geometry, all, probeDepth);

  std::vector<Slice> slices;
  std::vector<int> owner(probe.leaves.size(), -1);
  for (std::size_t s = 0; s < members.size(); s++) {
    Slice slice{int(s), {}};
    for (std::size_t j = 0; j < probe.leaves.size(); j++) {
      if (!members[s][j])
        continue;
      if (owner[j] >= 0)
        throw BitstreamError(Kind::kCorrupt, "probe block in two slices");
      owner[j] = int(s);
      const auto& leaf = probe.leaves[j];
      slice.pointIndices.insert(slice.pointIndices.end(), leaf.begin(), leaf.end());
    }
    std::sort(slice.pointIndices.begin(), slice.pointIndices.end());
    if (slice.pointIndices.empty())
      throw BitstreamError(Kind::kCorrupt, "empty slice");
    slices.push_back(std::move(slice));
  }
  if (std::find(owner.begin(), owner.end(), -1) != owner.end())
    throw BitstreamError(Kind::kCorrupt, "probe block not covered by any slice");
  return slices;
}

DecodeResult
decode(
  std::span<const std::uint8_t> bytes,
  std::span<const Vec3d> geometry,
  int threads)
{
  const Bitstream bs = readBitstream(bytes);
  if (bs.header.pointCount != geometry.size())
    throw GeometryMismatchError(
      "geometry has " + std::to_string(geometry.size())
      + " points, bitstream expects " + std::to_string(bs.header.pointCount));

  const auto slices = slicesFromHeader(bs.header, geometry);

  DecodeResult out;
  out.yuv.assign(geometry.size(), Vec3d{0, 0, 0});
  for (std::size_t s = 0; s < slices.size(); s++)
    decodeSlice(geometry, slices[s], bs.header.slices[s], bs.segments[s],
                threads, out.yuv);

  out.cloud.positions.assign(geometry.begin(), geometry.end());
  out.cloud.colors = yuvToRgb(out.yuv);
  return out;
}

}  // namespace pcac

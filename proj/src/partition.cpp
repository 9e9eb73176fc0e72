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

#include "pcac/partition.h"

#include <algorithm>
#include <cassert>
#include <numeric>

#include "pcac/error.h"

namespace pcac {

int
chooseDepth(std::size_t pointCount)
{
  int depth = 0;
  while (double(pointCount) / double(std::size_t(1) << depth) >= 200.0)
    depth++;
  return depth;
}

//----------------------------------------------------------------------------

Vec3d
coordinateVariance(
  std::span<const Vec3d> positions, std::span<const PointIndex> indices)
{
  Vec3d mean{0, 0, 0};
  Vec3d var{0, 0, 0};
  if (indices.empty())
    return var;

  for (auto i : indices)
    for (int k = 0; k < 3; k++)
      mean[k] += positions[i][k];
  for (int k = 0; k < 3; k++)
    mean[k] /= double(indices.size());

  for (auto i : indices)
    for (int k = 0; k < 3; k++) {
      const double d = positions[i][k] - mean[k];
      var[k] += d * d;
    }
  for (int k = 0; k < 3; k++)
    var[k] /= double(indices.size());
  return var;
}

double
blockColorVariance(
  std::span<const Vec3d> yuv, std::span<const PointIndex> indices)
{
  // same statistic as the coordinate case, applied to (Y, U, V)
  const Vec3d v = coordinateVariance(yuv, indices);
  return (v[0] + v[1] + v[2]) / 3.0;
}

//============================================================================

namespace {

  int maxVarianceAxis(const Vec3d& var)
  {
    int axis = 0;
    for (int k = 1; k < 3; k++)
      if (var[k] > var[axis])
        axis = k;
    return axis;
  }

  struct AxisLess {
    std::span<const Vec3d> positions;
    int axis;

    bool operator()(PointIndex a, PointIndex b) const
    {
      const double pa = positions[a][axis];
      const double pb = positions[b][axis];
      if (pa != pb)
        return pa < pb;
      return a < b;
    }
  };

}  // namespace

KdTree
buildKdTree(
  std::span<const Vec3d> positions,
  std::span<const PointIndex> indices,
  int depth)
{
  if (depth < 0 || depth > 30)
    throw ConfigError("kd-tree depth out of range");
  const std::size_t leafCount = std::size_t(1) << depth;
  if (indices.size() < leafCount)
    throw ConfigError(
      "kd-tree depth " + std::to_string(depth) + " needs at least "
      + std::to_string(leafCount) + " points, got "
      + std::to_string(indices.size()));

  KdTree tree;
  tree.depth = depth;
  tree.splits.resize(leafCount);

  std::vector<PointIndex> work(indices.begin(), indices.end());

  // boundaries of each node's range inside work, level by level
  std::vector<std::size_t> bounds{0, work.size()};
  for (int level = 0; level < depth; level++) {
    const std::size_t first = std::size_t(1) << level;
    std::vector<std::size_t> next;
    next.reserve(bounds.size() * 2);
    next.push_back(0);
    for (std::size_t j = 0; j + 1 < bounds.size(); j++) {
      auto begin = work.begin() + std::ptrdiff_t(bounds[j]);
      auto end = work.begin() + std::ptrdiff_t(bounds[j + 1]);
      const std::size_t m = bounds[j + 1] - bounds[j];
      const std::size_t leftSize = (m + 1) / 2;

      std::span<const PointIndex> nodePts(&*begin, m);
      const int axis = maxVarianceAxis(coordinateVariance(positions, nodePts));
      AxisLess less{positions, axis};

      auto mid = begin + std::ptrdiff_t(leftSize);
      // mid - 1 becomes the largest left element, everything before it
      // compares lower and everything after it higher
      std::nth_element(begin, mid - 1, end, less);

      tree.splits[first + j] = {axis, positions[*(mid - 1)][axis]};
      next.push_back(bounds[j] + leftSize);
      next.push_back(bounds[j + 1]);
    }
    bounds.swap(next);
  }

  tree.leaves.resize(leafCount);
  for (std::size_t j = 0; j < leafCount; j++) {
    std::vector<PointIndex> leaf(
      work.begin() + std::ptrdiff_t(bounds[j]),
      work.begin() + std::ptrdiff_t(bounds[j + 1]));
    const int axis = maxVarianceAxis(coordinateVariance(positions, leaf));
    std::sort(leaf.begin(), leaf.end(), AxisLess{positions, axis});
    tree.leaves[j] = std::move(leaf);
  }
  return tree;
}

//----------------------------------------------------------------------------

std::vector<PointIndex>
KdTree::nodePoints(std::size_t heapNode) const
{
  assert(heapNode >= 1);
  const std::size_t leafBase = std::size_t(1) << depth;
  std::size_t lo = heapNode, hi = heapNode;
  while (lo < leafBase) {
    lo = 2 * lo;
    hi = 2 * hi + 1;
  }
  std::vector<PointIndex> out;
  for (std::size_t node = lo; node <= hi; node++) {
    const auto& leaf = leaves[node - leafBase];
    out.insert(out.end(), leaf.begin(), leaf.end());
  }
  return out;
}

//----------------------------------------------------------------------------

BlockLayout
enumerateBlocks(const KdTree& tree)
{
  BlockLayout layout;
  layout.blocks.reserve(tree.leaves.size());
  for (std::size_t j = 0; j < tree.leaves.size(); j++)
    layout.blocks.push_back({int(j) + 1, tree.leaves[j]});

  if (tree.depth > 0) {
    const int macroCount = int(tree.leaves.size() / 2);
    for (int i = 1; i <= macroCount; i++)
      layout.macroblocks.push_back({i, 2 * i - 1, 2 * i});
  }
  return layout;
}

//============================================================================

std::vector<Slice>
slicesFromProbeFlags(
  std::span<const Vec3d> positions,
  int probeDepth,
  const std::vector<bool>& nonSmooth)
{
  std::vector<PointIndex> all(positions.size());
  std::iota(all.begin(), all.end(), PointIndex(0));

  if (nonSmooth.empty())
    return {Slice{0, std::move(all)}};

  if (nonSmooth.size() != (std::size_t(1) << probeDepth))
    throw FormatError("slice map size does not match probe depth");

  const KdTree probe = buildKdTree(positions, all, probeDepth);
  std::vector<PointIndex> smooth, rough;
  for (std::size_t j = 0; j < probe.leaves.size(); j++) {
    auto& dst = nonSmooth[j] ? rough : smooth;
    dst.insert(dst.end(), probe.leaves[j].begin(), probe.leaves[j].end());
  }
  std::sort(smooth.begin(), smooth.end());
  std::sort(rough.begin(), rough.end());

  std::vector<Slice> slices;
  if (!smooth.empty())
    slices.push_back({0, std::move(smooth)});
  if (!rough.empty())
    slices.push_back({int(slices.size()), std::move(rough)});
  return slices;
}

SlicePartition
partitionSlices(
  std::span<const Vec3d> positions,
  std::span<const Vec3d> yuv,
  const SliceParams& params)
{
  SlicePartition out;
  const std::size_t n = positions.size();
  out.probeDepth =
    params.probeDepth >= 0 ? params.probeDepth : chooseDepth(n);

  if (n > 1 && (std::size_t(1) << out.probeDepth) <= n) {
    std::vector<PointIndex> all(n);
    std::iota(all.begin(), all.end(), PointIndex(0));
    const KdTree probe = buildKdTree(positions, all, out.probeDepth);

    std::vector<bool> flags(probe.leaves.size());
    std::size_t rough = 0;
    for (std::size_t j = 0; j < probe.leaves.size(); j++) {
      flags[j] = blockColorVariance(yuv, probe.leaves[j]) > params.threshold1;
      rough += flags[j];
    }

    const double fraction = double(rough) / double(flags.size());
    // a split needs both sides populated
    if (fraction > params.threshold2 && rough < flags.size())
      out.nonSmooth = std::move(flags);
  }

  out.slices = slicesFromProbeFlags(positions, out.probeDepth, out.nonSmooth);
  return out;
}

}  // namespace pcac

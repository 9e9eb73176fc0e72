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

#include <cstdint>
#include <span>
#include <vector>

#include "pcac/color.h"
#include "pcac/types.h"

namespace pcac {

using PointIndex = std::uint32_t;

//============================================================================
// Layered structure: frame -> slices -> macroblocks -> blocks.

struct Slice {
  int id = 0;
  // Indices into the frame, ascending (frame order).
  std::vector<PointIndex> pointIndices;
};

struct KdSplit {
  int axis = 0;             // 0 = x, 1 = y, 2 = z
  double value = 0.0;       // largest coordinate on the lower (left) side
};

// Median-split kd-tree with heap numbering: node 1 is the root, node k has
// children 2k and 2k + 1.  Internal nodes are 1 .. 2^depth - 1; leaf j
// (0-based, breadth-first) is heap node 2^depth + j.
struct KdTree {
  int depth = 0;
  std::vector<KdSplit> splits;                   // indexed by heap node
  std::vector<std::vector<PointIndex>> leaves;   // breadth-first order
  // Point sets of internal nodes are not retained; use
  // nodePoints() to recover them from the leaves.

  std::vector<PointIndex> nodePoints(std::size_t heapNode) const;
};

// Leaf of the kd-tree.  index is 1-based and equals coding order.
struct Block {
  int index = 0;
  std::vector<PointIndex> pointIndices;
};

// Parent of blocks 2i - 1 and 2i.
struct Macroblock {
  int index = 0;
  int firstChild = 0;
  int secondChild = 0;
};

// Smallest depth whose average block size drops below 200 points; 0 for
// clouds under 200 points.  The result always leaves >= 100 points per
// block on average when depth > 0.
int chooseDepth(std::size_t pointCount);

// Recursive median split.  At each node the axis of largest coordinate
// variance is chosen (ties: x, then y, then z) and the lower ceil(m/2)
// points by (coordinate, index) go to the left child.  Leaf points are
// ordered along the leaf's own largest-variance axis.
// Throws ConfigError if indices.size() < 2^depth.
KdTree buildKdTree(
  std::span<const Vec3d> positions,
  std::span<const PointIndex> indices,
  int depth);

struct BlockLayout {
  std::vector<Block> blocks;
  std::vector<Macroblock> macroblocks;
};

BlockLayout enumerateBlocks(const KdTree& tree);

// Population variance per axis of the given points.
Vec3d coordinateVariance(
  std::span<const Vec3d> positions, std::span<const PointIndex> indices);

// Mean of the per-component population variances of Y, U and V.
double blockColorVariance(
  std::span<const Vec3d> yuv, std::span<const PointIndex> indices);

//============================================================================
// Two-slice partition driven by probe-block color variance.

struct SliceParams {
  double threshold1 = 100.0;  // block variance above this is non-smooth
  double threshold2 = 0.3;    // split if the non-smooth fraction exceeds this
  int probeDepth = -1;        // < 0: chooseDepth(point count)
};

struct SlicePartition {
  std::vector<Slice> slices;
  int probeDepth = 0;
  // One flag per probe block (breadth-first); true = non-smooth.  Together
  // with the geometry this reproduces the slices at the decoder.
  std::vector<bool> nonSmooth;
};

SlicePartition partitionSlices(
  std::span<const Vec3d> positions,
  std::span<const Vec3d> yuv,
  const SliceParams& params);

// Rebuilds the probe tree from geometry and regroups its points.  Slice 0
// holds smooth blocks, slice 1 non-smooth ones; a side with no points is
// dropped, so a single slice always covers the whole frame.
std::vector<Slice> slicesFromProbeFlags(
  std::span<const Vec3d> positions,
  int probeDepth,
  const std::vector<bool>& nonSmooth);

}  // namespace pcac

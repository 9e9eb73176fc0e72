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
#include <optional>
#include <span>
#include <vector>

#include "pcac/types.h"

namespace pcac {

//============================================================================
// Block-based intra prediction.  Every mode predicts all points of a block
// with a single (Y, U, V) reference taken from reconstructed data:
//
//   mode 0, 1, 2   mean of block k-1, k-2, k-3
//   mode 3, 4      mean of macroblock i-1, i-2, where i = ceil(k/2) is the
//                  current block's parent
//   mode 5         DC, fixed mid-gray
//
// Block indices are 1-based and local to a slice.

constexpr int kDcMode = 5;

Vec3d dcReference();

std::vector<Vec3d> predict(std::span<const Vec3d> yuv, const Vec3d& reference);

// Sum of absolute orthonormal DCT-II coefficients of the per-point
// component sum r_i = dY_i + dU_i + dV_i.
double satd(std::span<const Vec3d> residuals);

// Point-count weighted mean of two child means.
Vec3d macroblockReference(
  const Vec3d& firstMean, std::size_t firstCount,
  const Vec3d& secondMean, std::size_t secondCount);

Vec3d mean(std::span<const Vec3d> values);

using IntraReferences = std::array<std::optional<Vec3d>, 6>;

// Reconstructed block means of one slice, recorded in coding order.
class ReferenceStore {
public:
  void add(int blockIndex, const Vec3d& mean, std::size_t count);

  bool coded(int blockIndex) const;
  std::optional<Vec3d> blockMean(int blockIndex) const;
  std::optional<Vec3d> macroblockMean(int macroblockIndex) const;

  // References available to block blockIndex; with intra disabled only DC.
  IntraReferences references(int blockIndex, bool intraEnabled = true) const;

private:
  struct Entry {
    Vec3d mean;
    std::size_t count;
  };
  std::vector<std::optional<Entry>> entries_;  // index 0 unused
};

struct IntraDecision {
  int mode = kDcMode;
  Vec3d reference{};
  std::vector<Vec3d> residuals;
  std::array<std::optional<double>, 6> satd;  // per evaluated mode
};

// Minimum-SATD mode among the available references (ties: lowest id).
IntraDecision selectIntraMode(
  std::span<const Vec3d> yuv, const IntraReferences& references);

}  // namespace pcac

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

#include "pcac/prediction.h"

#include <cmath>

#include "pcac/transform.h"

namespace pcac {

Vec3d
dcReference()
{
  return {128.0, 0.0, 0.0};
}

std::vector<Vec3d>
predict(std::span<const Vec3d> yuv, const Vec3d& reference)
{
  std::vector<Vec3d> out(yuv.size());
  for (std::size_t i = 0; i < yuv.size(); i++)
    for (int c = 0; c < 3; c++)
      out[i][c] = yuv[i][c] - reference[c];
  return out;
}

double
satd(std::span<const Vec3d> residuals)
{
  std::vector<double> summed(residuals.size());
  for (std::size_t i = 0; i < residuals.size(); i++)
    summed[i] = residuals[i][0] + residuals[i][1] + residuals[i][2];
  double total = 0.0;
  for (double c : dctForward(summed))
    total += std::abs(c);
  return total;
}

Vec3d
macroblockReference(
  const Vec3d& firstMean, std::size_t firstCount,
  const Vec3d& secondMean, std::size_t secondCount)
{
  const double n1 = double(firstCount), n2 = double(secondCount);
  Vec3d out;
  for (int c = 0; c < 3; c++)
    out[c] = (n1 * firstMean[c] + n2 * secondMean[c]) / (n1 + n2);
  return out;
}

Vec3d
mean(std::span<const Vec3d> values)
{
  Vec3d sum{0, 0, 0};
  for (const auto& v : values)
    for (int c = 0; c < 3; c++)
      sum[c] += v[c];
  if (!values.empty())
    for (int c = 0; c < 3; c++)
      sum[c] /= double(values.size());
  return sum;
}

//============================================================================

void
ReferenceStore::add(int blockIndex, const Vec3d& mean, std::size_t count)
{
  assert(blockIndex >= 1);
  if (entries_.size() <= std::size_t(blockIndex))
    entries_.resize(std::size_t(blockIndex) + 1);
  entries_[blockIndex] = Entry{mean, count};
}

bool
ReferenceStore::coded(int blockIndex) const
{
  return blockIndex >= 1 && std::size_t(blockIndex) < entries_.size()
    && entries_[blockIndex].has_value();
}

std::optional<Vec3d>
ReferenceStore::blockMean(int blockIndex) const
{
  if (!coded(blockIndex))
    return std::nullopt;
  return entries_[blockIndex]->mean;
}

std::optional<Vec3d>
ReferenceStore::macroblockMean(int macroblockIndex) const
{
  const int first = 2 * macroblockIndex - 1;
  const int second = 2 * macroblockIndex;
  if (macroblockIndex < 1 || !coded(first) || !coded(second))
    return std::nullopt;
  const auto& a = *entries_[first];
  const auto& b = *entries_[second];
  return macroblockReference(a.mean, a.count, b.mean, b.count);
}

IntraReferences
ReferenceStore::references(int blockIndex, bool intraEnabled) const
{
  IntraReferences refs;
  refs[kDcMode] = dcReference();
  if (!intraEnabled)
    return refs;

  for (int m = 0; m < 3; m++)
    if (blockIndex - 1 - m >= 1)
      refs[m] = blockMean(blockIndex - 1 - m);

  const int parent = (blockIndex + 1) / 2;
  for (int m = 0; m < 2; m++)
    refs[3 + m] = macroblockMean(parent - 1 - m);
  return refs;
}

//----------------------------------------------------------------------------

IntraDecision
selectIntraMode(std::span<const Vec3d> yuv, const IntraReferences& references)
{
  assert(references[kDcMode].has_value());
  IntraDecision best;
  bool found = false;
  for (int mode = 0; mode < 6; mode++) {
    if (!references[mode])
      continue;
    auto residuals = predict(yuv, *references[mode]);
    const double cost = satd(residuals);
    best.satd[mode] = cost;
    if (!found || cost < *best.satd[best.mode]) {
      found = true;
      best.mode = mode;
      best.reference = *references[mode];
      best.residuals = std::move(residuals);
    }
  }
  return best;
}

}  // namespace pcac

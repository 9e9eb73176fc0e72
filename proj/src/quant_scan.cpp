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

#include "pcac/quant_scan.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pcac {

std::int32_t
quantize(double value, double step)
{
  assert(step > 0.0);
  // std::round rounds halfway cases away from zero
  const double q = std::round(value / step);
  constexpr double kMax = std::numeric_limits<std::int32_t>::max();
  return std::int32_t(std::clamp(q, -kMax, kMax));
}

Levels
quantize(std::span<const Vec3d> coeffs, double step)
{
  Levels out(coeffs.size());
  for (std::size_t i = 0; i < coeffs.size(); i++)
    for (int c = 0; c < 3; c++)
      out[i][c] = quantize(coeffs[i][c], step);
  return out;
}

std::vector<Vec3d>
dequantize(std::span<const Level3> levels, double step)
{
  std::vector<Vec3d> out(levels.size());
  for (std::size_t i = 0; i < levels.size(); i++)
    for (int c = 0; c < 3; c++)
      out[i][c] = double(levels[i][c]) * step;
  return out;
}

//============================================================================

namespace {

  constexpr int kColumnOrder[kScanModeCount][3] = {
    {0, 1, 2},  // unused by the raster scan
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

}  // namespace

ScanPosition
scanPosition(int mode, std::size_t pos, std::size_t rows)
{
  assert(mode >= 0 && mode < kScanModeCount);
  if (mode == 0)
    return {pos / 3, int(pos % 3)};
  return {pos % rows, kColumnOrder[mode][pos / rows]};
}

std::vector<std::int32_t>
scan(std::span<const Level3> levels, int mode)
{
  const std::size_t n = levels.size();
  std::vector<std::int32_t> out(3 * n);
  for (std::size_t pos = 0; pos < out.size(); pos++) {
    const auto p = scanPosition(mode, pos, n);
    out[pos] = levels[p.row][p.component];
  }
  return out;
}

Levels
inverseScan(std::span<const std::int32_t> symbols, int mode, std::size_t rows)
{
  assert(symbols.size() <= 3 * rows);
  Levels out(rows, Level3{0, 0, 0});
  for (std::size_t pos = 0; pos < symbols.size(); pos++) {
    const auto p = scanPosition(mode, pos, rows);
    out[p.row][p.component] = symbols[pos];
  }
  return out;
}

std::size_t
trailingZeros(std::span<const std::int32_t> symbols)
{
  std::size_t run = 0;
  while (run < symbols.size() && symbols[symbols.size() - 1 - run] == 0)
    run++;
  return run;
}

//----------------------------------------------------------------------------

ScannedBlock
selectScanMode(std::span<const Level3> levels, bool enabled)
{
  ScannedBlock best;
  std::size_t bestRun = 0;
  const int modes = enabled ? kScanModeCount : 1;
  for (int mode = 0; mode < modes; mode++) {
    auto symbols = scan(levels, mode);
    const std::size_t run = trailingZeros(symbols);
    if (mode == 0 || run > bestRun) {
      bestRun = run;
      symbols.resize(symbols.size() - run);
      best.mode = mode;
      best.symbols = std::move(symbols);
    }
  }
  return best;
}

}  // namespace pcac

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
#include <cstdint>
#include <span>
#include <vector>

#include "pcac/types.h"

namespace pcac {

using Level3 = std::array<std::int32_t, 3>;
using Levels = std::vector<Level3>;

//============================================================================
// Uniform scalar quantization, rounding half away from zero.

std::int32_t quantize(double value, double step);

Levels quantize(std::span<const Vec3d> coeffs, double step);
std::vector<Vec3d> dequantize(std::span<const Level3> levels, double step);

//============================================================================
// Reordering scans of an n x 3 level matrix.
//
//  mode 0      raster: Y1 U1 V1 Y2 U2 V2 ...
//  mode 1..6   whole columns, one component after another, in the order
//              YUV, YVU, UYV, UVY, VYU, VUY

constexpr int kScanModeCount = 7;

// Component (0 = Y, 1 = U, 2 = V) and row visited at scan position pos.
struct ScanPosition {
  std::size_t row;
  int component;
};

ScanPosition scanPosition(int mode, std::size_t pos, std::size_t rows);

std::vector<std::int32_t> scan(std::span<const Level3> levels, int mode);

// symbols may be shorter than 3n; missing trailing entries are zero.
Levels inverseScan(
  std::span<const std::int32_t> symbols, int mode, std::size_t rows);

std::size_t trailingZeros(std::span<const std::int32_t> symbols);

struct ScannedBlock {
  int mode = 0;
  // scan output with its trailing zero run removed
  std::vector<std::int32_t> symbols;

  std::size_t kept() const { return symbols.size(); }
};

// Picks the scan with the longest trailing zero run (ties: lowest mode).
// With selection disabled the raster scan is used; truncation still applies.
ScannedBlock selectScanMode(std::span<const Level3> levels, bool enabled = true);

}  // namespace pcac

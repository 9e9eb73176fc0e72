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
#include <filesystem>
#include <vector>

#include "pcac/types.h"

namespace pcac {

using Rgb = std::array<std::uint8_t, 3>;

//============================================================================
// A static frame: per-point positions with 8-bit RGB colors.

struct PointCloud {
  std::vector<Vec3d> positions;
  std::vector<Rgb> colors;

  std::size_t count() const { return positions.size(); }

  bool operator==(const PointCloud&) const = default;
};

// Throws pcac::Error if the per-point arrays disagree in length or a
// coordinate is not finite.
void validate(const PointCloud& cloud);

enum class PlyEncoding { kAscii, kBinaryLittleEndian };

// Reads the vertex element of an ascii or binary_little_endian PLY file.
// x, y, z may be float or double; red, green, blue must be uchar.  Other
// vertex properties are skipped; elements after "vertex" are ignored.
PointCloud loadPly(const std::filesystem::path& path);

// Positions only; color properties may be absent.
std::vector<Vec3d> loadPlyGeometry(const std::filesystem::path& path);

// Coordinates are written as double so a binary round-trip is bit exact.
void savePly(
  const PointCloud& cloud,
  const std::filesystem::path& path,
  PlyEncoding encoding = PlyEncoding::kBinaryLittleEndian);

}  // namespace pcac

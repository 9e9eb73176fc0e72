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

#include "pcac/color.h"

#include <algorithm>
#include <cmath>

namespace pcac {

Vec3d
rgbToYuv(const Rgb& rgb)
{
  using namespace bt709;
  const double r = rgb[0], g = rgb[1], b = rgb[2];
  const double y = kKr * r + kKg * g + kKb * b;
  return {y, (b - y) / kUScale, (r - y) / kVScale};
}

//----------------------------------------------------------------------------

namespace {

  std::uint8_t toChannel(double x)
  {
    return std::uint8_t(std::clamp(std::round(x), 0.0, 255.0));
  }

}  // namespace

Rgb
yuvToRgb(const Vec3d& yuv)
{
  using namespace bt709;
  const double y = yuv[0];
  const double r = y + kVScale * yuv[2];
  const double b = y + kUScale * yuv[1];
  const double g = (y - kKr * r - kKb * b) / kKg;
  return {toChannel(r), toChannel(g), toChannel(b)};
}

//----------------------------------------------------------------------------

YuvAttributes
rgbToYuv(std::span<const Rgb> rgb)
{
  YuvAttributes out;
  out.reserve(rgb.size());
  for (const auto& c : rgb)
    out.push_back(rgbToYuv(c));
  return out;
}

std::vector<Rgb>
yuvToRgb(std::span<const Vec3d> yuv)
{
  std::vector<Rgb> out;
  out.reserve(yuv.size());
  for (const auto& c : yuv)
    out.push_back(yuvToRgb(c));
  return out;
}

}  // namespace pcac

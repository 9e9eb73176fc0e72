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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "pcac/ply.h"

namespace pcac::test {

inline std::uint8_t
clampChannel(double v)
{
  return std::uint8_t(std::clamp(std::lround(v), 0L, 255L));
}

// Voxelized wavy sheet (a typical scanned-surface shape) with a smooth
// color gradient.  A spatially contiguous patch holding `noiseFraction` of
// the points gets uniformly random colors.
inline PointCloud
texturedCloud(std::size_t n, std::uint32_t seed, double noiseFraction = 0.1)
{
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> byte(0, 255);

  PointCloud cloud;
  cloud.positions.reserve(n);
  cloud.colors.reserve(n);
  const double extent = 4.0 * std::sqrt(double(n));
  for (std::size_t i = 0; i < n; i++) {
    const double u = unit(rng), v = unit(rng);
    const double x = std::round(u * extent);
    const double y = std::round(v * extent);
    const double z = std::round(0.15 * extent * std::sin(3.0 * u) * std::cos(2.0 * v));
    cloud.positions.push_back({x, y, z});

    Rgb c;
    if (u < noiseFraction) {
      c = {std::uint8_t(byte(rng)), std::uint8_t(byte(rng)), std::uint8_t(byte(rng))};
    } else {
      c = {clampChannel(40 + 170 * u + 10 * std::sin(9 * v)),
           clampChannel(200 - 120 * v + 15 * std::cos(7 * u)),
           clampChannel(90 + 60 * std::sin(4 * u + 3 * v))};
    }
    cloud.colors.push_back(c);
  }
  return cloud;
}

// Assorted random clouds: uniform boxes, sheets and clusters with smooth or
// noisy colors.  Duplicate positions occur for the voxelized variants.
inline PointCloud
randomCloud(std::size_t n, std::uint32_t seed)
{
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int shape = int(seed % 3);
  const double noise = 4.0 + 30.0 * unit(rng);

  PointCloud cloud;
  const Vec3d base{unit(rng) * 255, unit(rng) * 255, unit(rng) * 255};
  const Vec3d grad{gauss(rng) * 80, gauss(rng) * 80, gauss(rng) * 80};
  for (std::size_t i = 0; i < n; i++) {
    Vec3d p;
    if (shape == 0) {
      p = {unit(rng) * 100, unit(rng) * 100, unit(rng) * 100};
    } else if (shape == 1) {
      p = {std::round(unit(rng) * 200), std::round(unit(rng) * 200),
           std::round(10 * unit(rng))};
    } else {
      const int cluster = int(unit(rng) * 4);
      p = {cluster * 50 + gauss(rng) * 5, cluster * 20 + gauss(rng) * 5,
           gauss(rng) * 5};
    }
    cloud.positions.push_back(p);
    const double t = (p[0] + p[1] + p[2]) / 300.0;
    Rgb c;
    for (int k = 0; k < 3; k++)
      c[k] = clampChannel(base[k] + grad[k] * t + noise * gauss(rng));
    cloud.colors.push_back(c);
  }
  return cloud;
}

inline PointCloud
uniformCloud(std::size_t n, std::uint32_t seed, Rgb color)
{
  PointCloud cloud = randomCloud(n, seed);
  std::fill(cloud.colors.begin(), cloud.colors.end(), color);
  return cloud;
}

}  // namespace pcac::test

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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pcac/codec.h"
#include "pcac/transform.h"

namespace pcac {

// PSNR reported for identical signals.
constexpr double kPsnrCap = 100.0;

// 10 log10(255^2 / MSE) of one YUV component (0 = Y), capped at kPsnrCap.
// Throws Error on a point-count mismatch.
double psnr(
  std::span<const Vec3d> original, std::span<const Vec3d> reconstructed,
  int component);

inline double
psnrY(std::span<const Vec3d> original, std::span<const Vec3d> reconstructed)
{
  return psnr(original, reconstructed, 0);
}

double mseFromPsnr(double psnrDb);

struct RdPoint {
  double q = 0;
  double bpp = 0;
  double psnrY = 0;
  double psnrU = 0;
  double psnrV = 0;
  double encodeMs = 0;
  double decodeMs = 0;
};

struct RdCurve {
  std::string label;
  std::vector<RdPoint> points;  // in sweep order
};

// Bjontegaard delta rate of test against reference in percent (negative
// means test needs fewer bits for the same PSNR-Y).  log10(bpp) is fitted
// as a least-squares cubic in PSNR for each curve and the difference is
// averaged over the overlapping PSNR interval.
// Throws InsufficientDataError with fewer than 4 points in a curve and
// Error if the PSNR ranges do not overlap.
double bdRate(const RdCurve& reference, const RdCurve& test);

// Encodes and decodes at every Q.  Throws Error if a decode does not match
// the encoder's reconstruction bit for bit.
RdCurve runRdSweep(
  const PointCloud& cloud,
  const EncoderConfig& cfg,
  std::span<const double> qs,
  const std::string& label = "sweep");

// Columns: Q,bpp,psnr_y,psnr_u,psnr_v,encode_ms,decode_ms
void writeCurveCsv(const RdCurve& curve, const std::filesystem::path& path);
RdCurve readCurveCsv(const std::filesystem::path& path);

// Per-point (Q, bpp, MSE) with MSE averaged over Y, U and V.
std::vector<RdSample> lambdaSamples(const RdCurve& curve);

//============================================================================
// Tool ablation.  V1 is the baseline (kd-tree blocks, DC prediction, DCT,
// raster scan); V2 adds the adaptive transform, V3 intra prediction, V4
// slice partitioning and V5 scan selection.

constexpr int kAblationModels = 5;

// Throws ConfigError outside 1..kAblationModels.
ToolToggles ablationTools(int model);

struct AblationResult {
  std::array<RdCurve, kAblationModels> curves;
  std::array<double, kAblationModels> bdRateVsV1{};
};

AblationResult runAblation(
  const PointCloud& cloud,
  const EncoderConfig& base,
  std::span<const double> qs);

// Columns: model,Q,bpp,psnr_y,psnr_u,psnr_v,encode_ms,decode_ms,bd_rate_vs_v1
void writeAblationCsv(
  const AblationResult& result, const std::filesystem::path& path);

}  // namespace pcac

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

#include "pcac/evaluation.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "pcac/error.h"

namespace pcac {

double
psnr(
  std::span<const Vec3d> original, std::span<const Vec3d> reconstructed,
  int component)
{
  if (original.size() != reconstructed.size())
    throw Error("PSNR inputs differ in point count");
  if (original.empty())
    return kPsnrCap;

  double sse = 0.0;
  for (std::size_t i = 0; i < original.size(); i++) {
    const double d = original[i][component] - reconstructed[i][component];
    sse += d * d;
  }
  const double mse = sse / double(original.size());
  if (mse == 0.0)
    return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(255.0 * 255.0 / mse));
}

double
mseFromPsnr(double psnrDb)
{
  return 255.0 * 255.0 / std::pow(10.0, psnrDb / 10.0);
}

//============================================================================

namespace {

  // Least-squares cubic through (x, y); coefficients lowest order first.
  std::array<double, 4> fitCubic(
    const std::vector<double>& x, const std::vector<double>& y)
  {
    double ata[4][5] = {};
    for (std::size_t i = 0; i < x.size(); i++) {
      double pw[4] = {1.0, x[i], x[i] * x[i], x[i] * x[i] * x[i]};
      for (int r = 0; r < 4; r++) {
        for (int c = 0; c < 4; c++)
          ata[r][c] += pw[r] * pw[c];
        ata[r][4] += pw[r] * y[i];
      }
    }
    // Gaussian elimination with partial pivoting
    for (int col = 0; col < 4; col++) {
      int pivot = col;
      for (int r = col + 1; r < 4; r++)
        if (std::abs(ata[r][col]) > std::abs(ata[pivot][col]))
          pivot = r;
      if (pivot != col)
        for (int c = 0; c < 5; c++)
          std::swap(ata[col][c], ata[pivot][c]);
      if (ata[col][col] == 0.0)
        throw InsufficientDataError("degenerate RD curve for BD-rate fit");
      for (int r = col + 1; r < 4; r++) {
        const double f = ata[r][col] / ata[col][col];
        for (int c = col; c < 5; c++)
          ata[r][c] -= f * ata[col][c];
      }
    }
    std::array<double, 4> coef{};
    for (int r = 3; r >= 0; r--) {
      double v = ata[r][4];
      for (int c = r + 1; c < 4; c++)
        v -= ata[r][c] * coef[c];
      coef[r] = v / ata[r][r];
    }
    return coef;
  }

  double integrateCubic(const std::array<double, 4>& p, double lo, double hi)
  {
    auto prim = [&](double x) {
      return p[0] * x + p[1] * x * x / 2 + p[2] * x * x * x / 3
        + p[3] * x * x * x * x / 4;
    };
    return prim(hi) - prim(lo);
  }

}  // namespace

double
bdRate(const RdCurve& reference, const RdCurve& test)
{
  if (reference.points.size() < 4 || test.points.size() < 4)
    throw InsufficientDataError("BD-rate needs at least 4 points per curve");

  auto range = [](const RdCurve& c) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& p : c.points)
      lo = std::min(lo, p.psnrY), hi = std::max(hi, p.psnrY);
    return std::pair{lo, hi};
  };
  const auto [refLo, refHi] = range(reference);
  const auto [testLo, testHi] = range(test);
  const double lo = std::max(refLo, testLo);
  const double hi = std::min(refHi, testHi);
  if (!(hi > lo))
    throw Error("BD-rate curves have no overlapping PSNR range");

  // PSNR is centred on the interval for a better conditioned fit
  const double centre = 0.5 * (lo + hi);
  auto fit = [&](const RdCurve& c) {
    std::vector<double> x, y;
    for (const auto& p : c.points) {
      x.push_back(p.psnrY - centre);
      y.push_back(std::log10(p.bpp));
    }
    return fitCubic(x, y);
  };

  const double refArea = integrateCubic(fit(reference), lo - centre, hi - centre);
  const double testArea = integrateCubic(fit(test), lo - centre, hi - centre);
  const double avgDiff = (testArea - refArea) / (hi - lo);
  return (std::pow(10.0, avgDiff) - 1.0) * 100.0;
}

//============================================================================

RdCurve
runRdSweep(
  const PointCloud& cloud,
  const EncoderConfig& cfg,
  std::span<const double> qs,
  const std::string& label)
{
  using Clock = std::chrono::steady_clock;
  auto ms = [](Clock::duration d) {
    return std::chrono::duration<double, std::milli>(d).count();
  };

  const YuvAttributes original = rgbToYuv(cloud.colors);
  RdCurve curve;
  curve.label = label;
  for (double q : qs) {
    EncoderConfig c = cfg;
    c.q = q;

    const auto t0 = Clock::now();
    const auto enc = encode(cloud, c);
    const auto t1 = Clock::now();
    const auto dec = decode(enc.bytes, cloud.positions, cfg.threads);
    const auto t2 = Clock::now();

    if (dec.yuv != enc.reconstructedYuv)
      throw Error("decoder reconstruction differs from encoder at Q="
                  + std::to_string(q));

    RdPoint p;
    p.q = q;
    p.bpp = enc.bitsPerPoint();
    p.psnrY = psnr(original, dec.yuv, 0);
    p.psnrU = psnr(original, dec.yuv, 1);
    p.psnrV = psnr(original, dec.yuv, 2);
    p.encodeMs = ms(t1 - t0);
    p.decodeMs = ms(t2 - t1);
    curve.points.push_back(p);
  }
  return curve;
}

//----------------------------------------------------------------------------

namespace {

  constexpr const char* kCurveColumns =
    "Q,bpp,psnr_y,psnr_u,psnr_v,encode_ms,decode_ms";

  void writeRow(std::ostream& out, const RdPoint& p)
  {
    out << p.q << ',' << p.bpp << ',' << p.psnrY << ',' << p.psnrU << ','
        << p.psnrV << ',' << p.encodeMs << ',' << p.decodeMs;
  }

  std::vector<double> splitNumbers(const std::string& line, std::size_t lineNo)
  {
    std::vector<double> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double v;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw ParseError(lineNo, "bad number '" + cell + "'");
      }
      if (used != cell.size())
        throw ParseError(lineNo, "bad number '" + cell + "'");
      out.push_back(v);
    }
    return out;
  }

}  // namespace

void
writeCurveCsv(const RdCurve& curve, const std::filesystem::path& path)
{
  std::ofstream out(path);
  if (!out)
    throw IoError("cannot write " + path.string());
  out.precision(17);
  out << kCurveColumns << '\n';
  for (const auto& p : curve.points) {
    writeRow(out, p);
    out << '\n';
  }
  if (!out)
    throw IoError("write failed for " + path.string());
}

RdCurve
readCurveCsv(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line) || line != kCurveColumns)
    throw ParseError(1, "expected CSV header '" + std::string(kCurveColumns) + "'");

  RdCurve curve;
  curve.label = path.stem().string();
  std::size_t lineNo = 1;
  while (std::getline(in, line)) {
    lineNo++;
    if (line.empty())
      continue;
    const auto v = splitNumbers(line, lineNo);
    if (v.size() != 7)
      throw ParseError(lineNo, "expected 7 columns");
    curve.points.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6]});
  }
  return curve;
}

std::vector<RdSample>
lambdaSamples(const RdCurve& curve)
{
  std::vector<RdSample> out;
  for (const auto& p : curve.points) {
    const double mse =
      (mseFromPsnr(p.psnrY) + mseFromPsnr(p.psnrU) + mseFromPsnr(p.psnrV)) / 3.0;
    out.push_back({p.q, p.bpp, mse});
  }
  return out;
}

//============================================================================

ToolToggles
ablationTools(int model)
{
  if (model < 1 || model > kAblationModels)
    throw ConfigError("ablation model must be in 1.." + std::to_string(kAblationModels));
  ToolToggles t{false, false, false, false};
  t.adaptiveTransform = model >= 2;
  t.intra = model >= 3;
  t.slices = model >= 4;
  t.scanSelect = model >= 5;
  return t;
}

AblationResult
runAblation(
  const PointCloud& cloud, const EncoderConfig& base, std::span<const double> qs)
{
  AblationResult result;
  for (int m = 1; m <= kAblationModels; m++) {
    EncoderConfig cfg = base;
    cfg.tools = ablationTools(m);
    result.curves[m - 1] =
      runRdSweep(cloud, cfg, qs, "V" + std::to_string(m));
  }
  for (int m = 0; m < kAblationModels; m++) {
    try {
      result.bdRateVsV1[m] = bdRate(result.curves[0], result.curves[m]);
    } catch (const Error&) {
      result.bdRateVsV1[m] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return result;
}

void
writeAblationCsv(const AblationResult& result, const std::filesystem::path& path)
{
  std::ofstream out(path);
  if (!out)
    throw IoError("cannot write " + path.string());
  out.precision(17);
  out << "model," << kCurveColumns << ",bd_rate_vs_v1\n";
  for (int m = 0; m < kAblationModels; m++) {
    for (const auto& p : result.curves[m].points) {
      out << result.curves[m].label << ',';
      writeRow(out, p);
      out << ',' << result.bdRateVsV1[m] << '\n';
    }
  }
  if (!out)
    throw IoError("write failed for " + path.string());
}

}  // namespace pcac

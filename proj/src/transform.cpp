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

#include "pcac/transform.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "pcac/eigen.h"
#include "pcac/error.h"

namespace pcac {

//============================================================================

const Matrix&
dctMatrix(std::size_t n)
{
  thread_local std::unordered_map<std::size_t, Matrix> cache;
  auto it = cache.find(n);
  if (it != cache.end())
    return it->second;

  Matrix m(n, n);
  const double scale0 = std::sqrt(1.0 / double(n));
  const double scale = std::sqrt(2.0 / double(n));
  for (std::size_t k = 0; k < n; k++)
    for (std::size_t i = 0; i < n; i++)
      m(k, i) = (k == 0 ? scale0 : scale)
        * std::cos(std::numbers::pi * double((2 * i + 1) * k) / double(2 * n));
  return cache.emplace(n, std::move(m)).first->second;
}

std::vector<double>
dctForward(std::span<const double> x)
{
  const std::size_t n = x.size();
  const Matrix& m = dctMatrix(n);
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; k++) {
    auto row = m.row(k);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; i++)
      sum += row[i] * x[i];
    out[k] = sum;
  }
  return out;
}

std::vector<double>
dctInverse(std::span<const double> coeffs)
{
  const std::size_t n = coeffs.size();
  const Matrix& m = dctMatrix(n);
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; k++) {
    auto row = m.row(k);
    for (std::size_t i = 0; i < n; i++)
      out[i] += row[i] * coeffs[k];
  }
  return out;
}

std::vector<Vec3d>
forwardTransform(const Matrix& basis, std::span<const Vec3d> x)
{
  const std::size_t n = x.size();
  assert(basis.rows() == n && basis.cols() == n);
  std::vector<Vec3d> out(n, Vec3d{0, 0, 0});
  for (std::size_t k = 0; k < n; k++) {
    auto row = basis.row(k);
    Vec3d sum{0, 0, 0};
    for (std::size_t i = 0; i < n; i++)
      for (int c = 0; c < 3; c++)
        sum[c] += row[i] * x[i][c];
    out[k] = sum;
  }
  return out;
}

std::vector<Vec3d>
inverseTransform(const Matrix& basis, std::span<const Vec3d> coeffs)
{
  const std::size_t n = coeffs.size();
  assert(basis.rows() == n && basis.cols() == n);
  std::vector<Vec3d> out(n, Vec3d{0, 0, 0});
  for (std::size_t k = 0; k < n; k++) {
    if (coeffs[k] == Vec3d{0, 0, 0})
      continue;
    auto row = basis.row(k);
    for (std::size_t i = 0; i < n; i++)
      for (int c = 0; c < 3; c++)
        out[i][c] += row[i] * coeffs[k][c];
  }
  return out;
}

//============================================================================

namespace {

  double squaredDistance(const Vec3d& a, const Vec3d& b)
  {
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return dx * dx + dy * dy + dz * dz;
  }

}  // namespace

double
adaptiveDeltaSquared(std::span<const Vec3d> positions)
{
  const std::size_t n = positions.size();
  if (n < 2)
    return 1.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; i++)
    for (std::size_t j = i + 1; j < n; j++)
      sum += squaredDistance(positions[i], positions[j]);
  const double mean = sum / (double(n) * double(n - 1) / 2.0);
  return mean > 0.0 ? mean : 1.0;
}

double
adaptiveTau(std::span<const Vec3d> positions)
{
  const std::size_t n = positions.size();
  std::vector<double> nearest;
  nearest.reserve(n);
  for (std::size_t i = 0; i < n; i++) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; j++) {
      const double d = squaredDistance(positions[i], positions[j]);
      if (d > 0.0 && d < best)
        best = d;
    }
    if (std::isfinite(best))
      nearest.push_back(best);
  }
  if (nearest.empty())
    return 1.0;
  auto mid = nearest.begin() + std::ptrdiff_t((nearest.size() - 1) / 2);
  std::nth_element(nearest.begin(), mid, nearest.end());
  return 3.0 * *mid;
}

BlockGraph
buildGraph(std::span<const Vec3d> positions, double delta, double tau)
{
  const std::size_t n = positions.size();
  BlockGraph g;
  g.deltaSquared = delta > 0.0 ? delta * delta : adaptiveDeltaSquared(positions);
  g.tau = tau > 0.0 ? tau : adaptiveTau(positions);
  g.weights = Matrix(n, n);
  g.degree.assign(n, 0.0);

  for (std::size_t i = 0; i < n; i++)
    for (std::size_t j = i + 1; j < n; j++) {
      const double d2 = squaredDistance(positions[i], positions[j]);
      if (d2 <= g.tau) {
        const double w = std::exp(-d2 / g.deltaSquared);
        g.weights(i, j) = w;
        g.weights(j, i) = w;
      }
    }

  g.laplacian = Matrix(n, n);
  for (std::size_t i = 0; i < n; i++) {
    double deg = 0.0;
    for (std::size_t j = 0; j < n; j++)
      deg += g.weights(i, j);
    g.degree[i] = deg;
    for (std::size_t j = 0; j < n; j++)
      g.laplacian(i, j) = (i == j ? deg : 0.0) - g.weights(i, j);
  }
  return g;
}

//----------------------------------------------------------------------------

GftBasis
gftBasis(const BlockGraph& graph)
{
  const std::size_t n = graph.laplacian.rows();
  SymmetricEigen eig = symmetricEigen(graph.laplacian);

  for (std::size_t k = 0; k < n; k++) {
    auto v = eig.vectors.row(k);
    for (std::size_t i = 0; i < n; i++) {
      if (std::abs(v[i]) > kSignTolerance) {
        if (v[i] < 0.0)
          for (auto& x : v)
            x = -x;
        break;
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t(0));
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (eig.values[a] != eig.values[b])
      return eig.values[a] < eig.values[b];
    return a < b;
  });

  double scale = 1.0;
  for (double v : eig.values)
    scale = std::max(scale, std::abs(v));
  const double tol = kEigenTieTolerance * scale;

  auto lexGreater = [&](std::size_t a, std::size_t b) {
    auto va = eig.vectors.row(a);
    auto vb = eig.vectors.row(b);
    for (std::size_t i = 0; i < n; i++)
      if (va[i] != vb[i])
        return va[i] > vb[i];
    return a < b;
  };

  for (std::size_t start = 0; start < n;) {
    std::size_t end = start + 1;
    while (end < n && eig.values[order[end]] - eig.values[order[end - 1]] <= tol)
      end++;
    if (end - start > 1)
      std::sort(order.begin() + std::ptrdiff_t(start),
                order.begin() + std::ptrdiff_t(end), lexGreater);
    start = end;
  }

  GftBasis out;
  out.basis = Matrix(n, n);
  out.eigenvalues.resize(n);
  for (std::size_t k = 0; k < n; k++) {
    const std::size_t src = order[k];
    out.eigenvalues[k] = std::max(0.0, eig.values[src]);
    auto from = eig.vectors.row(src);
    std::copy(from.begin(), from.end(), out.basis.row(k).begin());
  }
  return out;
}

//============================================================================

double
lambdaFromQ(double q, const LambdaQModel& model)
{
  return model.a * std::pow(q, model.b);
}

LambdaFit
fitLambdaQ(const std::vector<std::vector<RdSample>>& curves)
{
  std::map<double, int> distinctQ;
  std::vector<double> xs, ys;

  for (auto curve : curves) {
    std::sort(curve.begin(), curve.end(),
              [](const RdSample& a, const RdSample& b) { return a.q < b.q; });
    for (const auto& s : curve)
      distinctQ[s.q]++;
    for (std::size_t k = 1; k + 1 < curve.size(); k++) {
      const double dR = curve[k + 1].bpp - curve[k - 1].bpp;
      const double dD = curve[k + 1].mse - curve[k - 1].mse;
      if (dR == 0.0)
        continue;
      const double lambda = -dD / dR;
      if (!(lambda > 0.0) || !(curve[k].q > 0.0))
        continue;
      xs.push_back(std::log(curve[k].q));
      ys.push_back(std::log(lambda));
    }
  }

  if (distinctQ.size() < 3)
    throw InsufficientDataError("lambda-Q fit needs at least 3 distinct Q values");
  if (xs.size() < 2)
    throw InsufficientDataError("lambda-Q fit found fewer than 2 usable slopes");

  const double m = double(xs.size());
  const double meanX = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
  const double meanY = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); i++) {
    sxx += (xs[i] - meanX) * (xs[i] - meanX);
    sxy += (xs[i] - meanX) * (ys[i] - meanY);
    syy += (ys[i] - meanY) * (ys[i] - meanY);
  }
  if (sxx == 0.0)
    throw InsufficientDataError("lambda-Q fit needs slopes at distinct Q values");

  LambdaFit fit;
  fit.model.b = sxy / sxx;
  fit.model.a = std::exp(meanY - fit.model.b * meanX);
  fit.slopeCount = xs.size();

  double ssRes = 0;
  for (std::size_t i = 0; i < xs.size(); i++) {
    const double r = ys[i] - (meanY + fit.model.b * (xs[i] - meanX));
    ssRes += r * r;
  }
  fit.rSquare = syy > 0.0 ? 1.0 - ssRes / syy : 1.0;
  return fit;
}

void
saveLambdaModel(const LambdaFit& fit, const std::filesystem::path& path)
{
  std::ofstream out(path);
  if (!out)
    throw IoError("cannot write " + path.string());
  out.precision(17);
  out << "a = " << fit.model.a << "\n"
      << "b = " << fit.model.b << "\n"
      << "r_square = " << fit.rSquare << "\n"
      << "slopes = " << fit.slopeCount << "\n";
  if (!out)
    throw IoError("write failed for " + path.string());
}

LambdaQModel
loadLambdaModel(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot open " + path.string());

  LambdaQModel model;
  bool haveA = false, haveB = false;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    lineNo++;
    if (line.empty() || line[0] == '#')
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(lineNo, "expected key = value");
    std::string key = line.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    std::istringstream value(line.substr(eq + 1));
    double v;
    if (!(value >> v))
      throw ParseError(lineNo, "bad value for " + key);
    if (key == "a")
      model.a = v, haveA = true;
    else if (key == "b")
      model.b = v, haveB = true;
  }
  if (!haveA || !haveB)
    throw FormatError(path.string() + ": lambda model needs both a and b");
  if (!(model.a > 0.0))
    throw FormatError(path.string() + ": lambda model needs a > 0");
  return model;
}

//============================================================================

std::vector<Vec3d>
reconstructResidual(
  const BlockRecord& record, std::size_t rows, double q, const GftBasis* gft)
{
  const Levels levels = inverseScan(record.symbols, record.scanMode, rows);
  const auto coeffs = dequantize(levels, q);
  if (record.transform == TransformMode::kGft) {
    assert(gft);
    return inverseTransform(gft->basis, coeffs);
  }
  return inverseTransform(dctMatrix(rows), coeffs);
}

TransformCandidate
evaluateTransform(
  TransformMode mode, const TransformDecisionInput& in, const RecordContexts& ctx)
{
  const std::size_t n = in.residuals.size();
  const Matrix& basis =
    mode == TransformMode::kGft ? in.gft->basis : dctMatrix(n);

  TransformCandidate cand;
  cand.mode = mode;

  const Levels levels = quantize(forwardTransform(basis, in.residuals), in.q);
  ScannedBlock scanned = selectScanMode(levels, in.scanSelect);
  cand.record.intraMode = in.intraMode;
  cand.record.transform = mode;
  cand.record.scanMode = scanned.mode;
  cand.record.symbols = std::move(scanned.symbols);

  cand.reconstructed = reconstructResidual(cand.record, n, in.q, in.gft);

  double sse = 0.0;
  for (std::size_t i = 0; i < n; i++)
    for (int c = 0; c < 3; c++) {
      const double d = in.residuals[i][c] - cand.reconstructed[i][c];
      sse += d * d;
    }
  cand.distortion = n ? sse / double(3 * n) : 0.0;

  RecordContexts scratch = ctx;
  CostEstimator estimator;
  writeRecord(estimator, scratch, cand.record, n);
  cand.rate = n ? estimator.bits() / double(n) : 0.0;
  cand.cost = cand.distortion + in.lambda * cand.rate;
  return cand;
}

TransformDecision
selectTransformMode(const TransformDecisionInput& in, const RecordContexts& ctx)
{
  TransformDecision out;
  out.candidates.push_back(evaluateTransform(TransformMode::kDct, in, ctx));
  if (in.gft)
    out.candidates.push_back(evaluateTransform(TransformMode::kGft, in, ctx));

  std::size_t best = 0;
  for (std::size_t i = 1; i < out.candidates.size(); i++)
    if (out.candidates[i].cost < out.candidates[best].cost)
      best = i;
  out.chosen = out.candidates[best];
  return out;
}

}  // namespace pcac

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

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "pcac/bitstream.h"
#include "pcac/quant_scan.h"
#include "pcac/types.h"

namespace pcac {

//============================================================================
// Orthonormal 1-D DCT-II (forward) / DCT-III (inverse).

// Row k is the k-th DCT basis vector of length n.  Cached per thread.
const Matrix& dctMatrix(std::size_t n);

std::vector<double> dctForward(std::span<const double> x);
std::vector<double> dctInverse(std::span<const double> coeffs);

// Applies an orthonormal basis (one basis vector per row) to each of the
// three attribute columns, and its transpose for the inverse.
std::vector<Vec3d> forwardTransform(const Matrix& basis, std::span<const Vec3d> x);
std::vector<Vec3d> inverseTransform(const Matrix& basis, std::span<const Vec3d> c);

//============================================================================
// Graph over a block's points.
//
//   w_ij = exp(-d_ij^2 / delta^2)  if d_ij^2 <= tau, else 0;  w_ii = 0
//   L = D - W,  D_ii = sum_j w_ij

struct BlockGraph {
  Matrix weights;
  std::vector<double> degree;
  Matrix laplacian;
  double deltaSquared = 1.0;
  double tau = 1.0;
};

// Mean squared pairwise distance; 1 when undefined or zero.
double adaptiveDeltaSquared(std::span<const Vec3d> positions);

// Three times the median over points of the squared distance to the
// nearest distinct neighbour; 1 when no two points differ.
double adaptiveTau(std::span<const Vec3d> positions);

// delta <= 0 or tau <= 0 selects the adaptive value.
BlockGraph buildGraph(std::span<const Vec3d> positions, double delta, double tau);

struct GftBasis {
  // Row k is the eigenvector of eigenvalues[k]; this is A^T for L = A Λ A^T.
  Matrix basis;
  // ascending up to kEigenTieTolerance; each stays paired with its vector
  std::vector<double> eigenvalues;
};

// Eigenvalues closer than this (relative to max(1, largest |eigenvalue|))
// are treated as equal when ordering the basis.
constexpr double kEigenTieTolerance = 1e-10;
// Entries at or below this magnitude are skipped when fixing signs.
constexpr double kSignTolerance = 1e-12;

// Eigendecomposition of the Laplacian (see symmetricEigen).  Eigenvectors are
// sign normalized (first significant entry positive) and sorted by ascending
// eigenvalue; equal eigenvalues are ordered by descending lexicographic
// comparison of the normalized vectors.
GftBasis gftBasis(const BlockGraph& graph);

//============================================================================
// Lambda-Q model, lambda = a * Q^b.

struct LambdaQModel {
  double a = 0.14;
  double b = 1.72;
};

double lambdaFromQ(double q, const LambdaQModel& model = {});

struct RdSample {
  double q = 0;
  double bpp = 0;
  double mse = 0;
};

struct LambdaFit {
  LambdaQModel model;
  double rSquare = 0;
  std::size_t slopeCount = 0;
};

// Each curve is a set of operating points of one content.  Within a curve,
// lambda at every interior Q is the central difference
// -(D[k+1] - D[k-1]) / (R[k+1] - R[k-1]); a least-squares line through
// (log Q, log lambda) over all curves gives log a and b.
// Throws InsufficientDataError with fewer than 3 distinct Q values or no
// usable slope.
LambdaFit fitLambdaQ(const std::vector<std::vector<RdSample>>& curves);

void saveLambdaModel(const LambdaFit& fit, const std::filesystem::path& path);
LambdaQModel loadLambdaModel(const std::filesystem::path& path);

//============================================================================
// Lagrangian transform mode decision.

struct TransformCandidate {
  TransformMode mode = TransformMode::kDct;
  BlockRecord record;
  std::vector<Vec3d> reconstructed;  // reconstructed residuals
  double distortion = 0;  // MSE over all n x 3 entries
  double rate = 0;        // bits per point of the whole block record
  double cost = 0;        // distortion + lambda * rate
};

// Dequantizes the record's levels and applies its inverse transform.  The
// encoder's search and the decoder both reconstruct through this.
std::vector<Vec3d> reconstructResidual(
  const BlockRecord& record, std::size_t rows, double q, const GftBasis* gft);

struct TransformDecisionInput {
  std::span<const Vec3d> residuals;
  const GftBasis* gft = nullptr;  // null: DCT is the only candidate
  double q = 1;
  double lambda = 0;
  int intraMode = 5;
  bool scanSelect = true;
};

// Evaluates a single transform mode.  Rate is the adaptive code length of
// the complete block record measured against a copy of ctx.
TransformCandidate evaluateTransform(
  TransformMode mode, const TransformDecisionInput& in, const RecordContexts& ctx);

struct TransformDecision {
  TransformCandidate chosen;
  std::vector<TransformCandidate> candidates;
};

// Minimum J = D + lambda * R; ties go to DCT.
TransformDecision selectTransformMode(
  const TransformDecisionInput& in, const RecordContexts& ctx);

}  // namespace pcac

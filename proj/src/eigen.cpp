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

#include "pcac/eigen.h"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cassert>
#include <numeric>

namespace pcac {

namespace {

  // Index sets of the connected components of the nonzero pattern, each
  // ascending, ordered by their smallest index.
  std::vector<std::vector<std::size_t>> components(const Matrix& a)
  {
    const std::size_t n = a.rows();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t(0));
    auto find = [&](std::size_t x) {
      while (parent[x] != x)
        x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t p = 0; p < n; p++)
      for (std::size_t q = p + 1; q < n; q++)
        if (a(p, q) != 0.0 || a(q, p) != 0.0) {
          const std::size_t rp = find(p), rq = find(q);
          if (rp != rq)
            parent[std::max(rp, rq)] = std::min(rp, rq);
        }

    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> slot(n, n);
    for (std::size_t i = 0; i < n; i++) {
      const std::size_t root = find(i);
      if (slot[root] == n) {
        slot[root] = out.size();
        out.emplace_back();
      }
      out[slot[root]].push_back(i);
    }
    return out;
  }

}  // namespace

//============================================================================

SymmetricEigen
symmetricEigen(const Matrix& input)
{
  assert(input.rows() == input.cols());
  const std::size_t n = input.rows();

  SymmetricEigen out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);

  std::size_t next = 0;
  for (const auto& idx : components(input)) {
    const auto m = Eigen::Index(idx.size());
    Eigen::MatrixXd a(m, m);
    for (Eigen::Index i = 0; i < m; i++)
      for (Eigen::Index j = 0; j < m; j++)
        a(i, j) = input(idx[std::size_t(i)], idx[std::size_t(j)]);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    const auto& values = solver.eigenvalues();
    const auto& vectors = solver.eigenvectors();
    for (Eigen::Index k = 0; k < m; k++, next++) {
      out.values[next] = values(k);
      auto dst = out.vectors.row(next);
      for (Eigen::Index i = 0; i < m; i++)
        dst[idx[std::size_t(i)]] = vectors(i, k);
    }
  }
  return out;
}

}  // namespace pcac

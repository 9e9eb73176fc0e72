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

#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "pcac/color.h"
#include "pcac/error.h"
#include "pcac/partition.h"
#include "synthetic.h"

using namespace pcac;

namespace {

std::vector<PointIndex>
iota(std::size_t n)
{
  std::vector<PointIndex> v(n);
  std::iota(v.begin(), v.end(), PointIndex(0));
  return v;
}

// Brute-force population variance, written independently of the library.
double
naiveVariance(const std::vector<double>& v)
{
  double s = 0, s2 = 0;
  for (double x : v)
    s += x;
  const double m = s / double(v.size());
  for (double x : v)
    s2 += (x - m) * (x - m);
  return s2 / double(v.size());
}

}  // namespace

TEST_CASE("depth selection")
{
  CHECK(chooseDepth(0) == 0);
  CHECK(chooseDepth(150) == 0);
  CHECK(chooseDepth(199) == 0);
  CHECK(chooseDepth(200) == 1);
  CHECK(chooseDepth(399) == 1);
  CHECK(chooseDepth(400) == 2);
  CHECK(chooseDepth(301626) == 11);
  CHECK(chooseDepth(1009132) == 13);
  for (std::size_t n = 200; n < 200000; n = n * 3 + 7) {
    const int d = chooseDepth(n);
    CHECK(double(n) / double(1 << d) < 200.0);
    CHECK(double(n) / double(1 << (d - 1)) >= 200.0);
  }
}

TEST_CASE("eight points on a line split at the medians")
{
  std::vector<Vec3d> pos;
  for (int i = 0; i < 8; i++)
    pos.push_back({double(7 - i), 0.0, 0.0});  // reversed order
  const auto tree = buildKdTree(pos, iota(8), 3);
  REQUIRE(tree.leaves.size() == 8);
  // leaf j holds the point with x == j, which is index 7 - j
  for (int j = 0; j < 8; j++) {
    REQUIRE(tree.leaves[j].size() == 1);
    CHECK(tree.leaves[j][0] == PointIndex(7 - j));
  }
  CHECK(tree.splits[1].axis == 0);
  CHECK(tree.splits[1].value == 3.0);
  CHECK(tree.splits[2].value == 1.0);
  CHECK(tree.splits[3].value == 5.0);

  const auto layout = enumerateBlocks(tree);
  REQUIRE(layout.blocks.size() == 8);
  REQUIRE(layout.macroblocks.size() == 4);
  for (int i = 1; i <= 4; i++) {
    CHECK(layout.macroblocks[i - 1].index == i);
    CHECK(layout.macroblocks[i - 1].firstChild == 2 * i - 1);
    CHECK(layout.macroblocks[i - 1].secondChild == 2 * i);
  }
  for (int k = 1; k <= 8; k++)
    CHECK(layout.blocks[k - 1].index == k);
}

TEST_CASE("odd sizes put the extra point on the left")
{
  std::vector<Vec3d> pos;
  for (int i = 0; i < 5; i++)
    pos.push_back({0.0, double(i), 0.0});
  const auto tree = buildKdTree(pos, iota(5), 1);
  CHECK(tree.splits[1].axis == 1);
  CHECK(tree.leaves[0] == std::vector<PointIndex>{0, 1, 2});
  CHECK(tree.leaves[1] == std::vector<PointIndex>{3, 4});
}

TEST_CASE("equal coordinates split by point index")
{
  std::vector<Vec3d> pos(6, Vec3d{1, 1, 1});
  const auto tree = buildKdTree(pos, iota(6), 1);
  CHECK(tree.splits[1].axis == 0);  // all variances zero: x wins the tie
  CHECK(tree.leaves[0] == std::vector<PointIndex>{0, 1, 2});
  CHECK(tree.leaves[1] == std::vector<PointIndex>{3, 4, 5});
}

TEST_CASE("depth that exceeds the point count is rejected")
{
  std::vector<Vec3d> pos(5, Vec3d{0, 0, 0});
  CHECK_THROWS_AS(buildKdTree(pos, iota(5), 3), ConfigError);
  CHECK_THROWS_AS(buildKdTree(pos, iota(5), -1), ConfigError);
  CHECK_NOTHROW(buildKdTree(pos, iota(5), 2));
}

TEST_CASE("kd-tree invariants on random clouds")
{
  for (std::uint32_t seed = 1; seed <= 9; seed++) {
    const std::size_t n = 300 + 517 * seed;
    const auto cloud = test::randomCloud(n, seed);
    const int depth = chooseDepth(n) + int(seed % 2);
    const auto tree = buildKdTree(cloud.positions, iota(n), depth);
    REQUIRE(tree.leaves.size() == (std::size_t(1) << depth));

    // leaves partition the input
    std::vector<PointIndex> all;
    for (const auto& leaf : tree.leaves)
      all.insert(all.end(), leaf.begin(), leaf.end());
    std::sort(all.begin(), all.end());
    CHECK(all == iota(n));

    // leaf sizes differ by at most one along each split and at most depth overall
    std::size_t lo = n, hi = 0;
    for (const auto& leaf : tree.leaves) {
      lo = std::min(lo, leaf.size());
      hi = std::max(hi, leaf.size());
    }
    CHECK(hi - lo <= std::size_t(std::max(depth, 1)));

    for (std::size_t node = 1; node < tree.leaves.size(); node++) {
      const auto pts = tree.nodePoints(node);
      const auto left = tree.nodePoints(2 * node);
      const auto right = tree.nodePoints(2 * node + 1);
      CHECK(left.size() == (pts.size() + 1) / 2);
      CHECK(left.size() + right.size() == pts.size());

      // axis is the argmax of the per-axis variance
      double var[3];
      for (int k = 0; k < 3; k++) {
        std::vector<double> c;
        for (auto i : pts)
          c.push_back(cloud.positions[i][k]);
        var[k] = naiveVariance(c);
      }
      const int axis = tree.splits[node].axis;
      for (int k = 0; k < 3; k++) {
        // allow rounding noise between the two variance evaluations
        CHECK(var[axis] >= var[k] * (1 - 1e-12));
      }

      // left side is below or at the split value, right side at or above
      for (auto i : left)
        CHECK(cloud.positions[i][axis] <= tree.splits[node].value);
      for (auto i : right)
        CHECK(cloud.positions[i][axis] >= tree.splits[node].value);
    }

    // deterministic and independent of input order
    auto shuffled = iota(n);
    std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937(seed));
    const auto again = buildKdTree(cloud.positions, shuffled, depth);
    CHECK(again.leaves == tree.leaves);
  }
}

TEST_CASE("leaf points are ordered along the leaf's widest axis")
{
  const auto cloud = test::randomCloud(4000, 5);
  const auto tree = buildKdTree(cloud.positions, iota(4000), 4);
  for (const auto& leaf : tree.leaves) {
    const Vec3d var = coordinateVariance(cloud.positions, leaf);
    const int axis = int(std::max_element(var.begin(), var.end()) - var.begin());
    for (std::size_t i = 1; i < leaf.size(); i++) {
      const double a = cloud.positions[leaf[i - 1]][axis];
      const double b = cloud.positions[leaf[i]][axis];
      CHECK((a < b || (a == b && leaf[i - 1] < leaf[i])));
    }
  }
}

TEST_CASE("enumerateBlocks at depth zero and one")
{
  std::vector<Vec3d> pos{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
  auto layout = enumerateBlocks(buildKdTree(pos, iota(3), 0));
  REQUIRE(layout.blocks.size() == 1);
  CHECK(layout.blocks[0].index == 1);
  CHECK(layout.blocks[0].pointIndices.size() == 3);
  CHECK(layout.macroblocks.empty());

  layout = enumerateBlocks(buildKdTree(pos, iota(3), 1));
  REQUIRE(layout.blocks.size() == 2);
  REQUIRE(layout.macroblocks.size() == 1);
  CHECK(layout.macroblocks[0].firstChild == 1);
  CHECK(layout.macroblocks[0].secondChild == 2);
}

TEST_CASE("variance statistics")
{
  std::vector<Vec3d> pos{{0, 0, 0}, {2, 4, 0}, {4, 8, 0}};
  const Vec3d v = coordinateVariance(pos, iota(3));
  CHECK(v[0] == doctest::Approx(8.0 / 3));
  CHECK(v[1] == doctest::Approx(32.0 / 3));
  CHECK(v[2] == 0.0);
  CHECK(blockColorVariance(pos, iota(3)) == doctest::Approx(40.0 / 9));
  CHECK(coordinateVariance(pos, {}) == Vec3d{0, 0, 0});
}

//============================================================================

TEST_CASE("uniform color gives a single slice")
{
  const auto cloud = test::uniformCloud(3000, 4, Rgb{10, 200, 30});
  const auto yuv = rgbToYuv(cloud.colors);
  const auto part = partitionSlices(cloud.positions, yuv, {});
  REQUIRE(part.slices.size() == 1);
  CHECK(part.slices[0].pointIndices == iota(3000));
  CHECK(part.nonSmooth.empty());
}

TEST_CASE("half noisy probe blocks split into two slices")
{
  // points along x: the upper half of the probe blocks gets random colors
  const std::size_t n = 1600;
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<Vec3d> pos;
  std::vector<Rgb> colors;
  for (std::size_t i = 0; i < n; i++) {
    pos.push_back({double(i), double(i % 7), 0.0});
    if (i < n / 2)
      colors.push_back({100, 120, 140});
    else
      colors.push_back({std::uint8_t(byte(rng)), std::uint8_t(byte(rng)),
                        std::uint8_t(byte(rng))});
  }
  const auto yuv = rgbToYuv(colors);
  const auto part = partitionSlices(pos, yuv, {});
  CHECK(part.probeDepth == chooseDepth(n));
  REQUIRE(part.slices.size() == 2);

  // independent reference: probe blocks are contiguous index ranges here
  const std::size_t blocks = std::size_t(1) << part.probeDepth;
  const std::size_t per = n / blocks;
  std::vector<PointIndex> smooth, rough;
  for (std::size_t b = 0; b < blocks; b++) {
    double total = 0;
    for (int k = 0; k < 3; k++) {
      std::vector<double> comp;
      for (std::size_t i = b * per; i < (b + 1) * per; i++)
        comp.push_back(yuv[i][k]);
      total += naiveVariance(comp);
    }
    auto& dst = total / 3 > 100.0 ? rough : smooth;
    for (std::size_t i = b * per; i < (b + 1) * per; i++)
      dst.push_back(PointIndex(i));
  }
  CHECK(part.slices[0].id == 0);
  CHECK(part.slices[1].id == 1);
  CHECK(part.slices[0].pointIndices == smooth);
  CHECK(part.slices[1].pointIndices == rough);

  // the decoder reproduces the slices from the flags alone
  CHECK(slicesFromProbeFlags(pos, part.probeDepth, part.nonSmooth)[1].pointIndices
        == rough);

  // a stricter fraction threshold suppresses the split
  SliceParams strict;
  strict.threshold2 = 0.6;
  CHECK(partitionSlices(pos, yuv, strict).slices.size() == 1);
}

TEST_CASE("all blocks non-smooth gives a single slice")
{
  const std::size_t n = 1000;
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<Vec3d> pos;
  std::vector<Rgb> colors;
  for (std::size_t i = 0; i < n; i++) {
    pos.push_back({double(i), 0.0, 0.0});
    colors.push_back(
      {std::uint8_t(byte(rng)), std::uint8_t(byte(rng)), std::uint8_t(byte(rng))});
  }
  const auto part = partitionSlices(pos, rgbToYuv(colors), {});
  REQUIRE(part.slices.size() == 1);
  CHECK(part.slices[0].pointIndices.size() == n);
}

TEST_CASE("degenerate slice inputs")
{
  std::vector<Vec3d> one{{1, 2, 3}};
  std::vector<Vec3d> yuv{{1, 2, 3}};
  auto part = partitionSlices(one, yuv, {});
  REQUIRE(part.slices.size() == 1);
  CHECK(part.slices[0].pointIndices.size() == 1);

  part = partitionSlices({}, {}, {});
  REQUIRE(part.slices.size() == 1);
  CHECK(part.slices[0].pointIndices.empty());

  std::vector<Vec3d> pos(8, Vec3d{0, 0, 0});
  CHECK_THROWS_AS(slicesFromProbeFlags(pos, 2, std::vector<bool>(3)), FormatError);
}

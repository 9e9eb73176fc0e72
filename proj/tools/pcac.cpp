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

// pcac: point cloud color attribute codec command line front end.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pcac/codec.h"
#include "pcac/color.h"
#include "pcac/error.h"
#include "pcac/evaluation.h"
#include "pcac/ply.h"
#include "pcac/transform.h"

using namespace pcac;

namespace {

enum ExitCode {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitFormat = 4,
  kExitData = 5,
};

int
defaultThreads()
{
  if (const char* env = std::getenv("PCAC_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1)
        return n;
    } catch (const std::exception&) {
    }
    throw ConfigError("PCAC_THREADS must be a positive integer");
  }
  return int(std::max(1u, std::thread::hardware_concurrency()));
}

//============================================================================

struct EncoderOptions {
  double q = 32.0;
  bool noSlices = false;
  bool noIntra = false;
  bool noAdaptiveTransform = false;
  bool noScanSelect = false;
  std::optional<int> depth;
  double t1 = SliceParams{}.threshold1;
  double t2 = SliceParams{}.threshold2;
  double delta = 0.0;
  double tau = 0.0;
  double lambdaA = LambdaQModel{}.a;
  double lambdaB = LambdaQModel{}.b;
  std::string lambdaModel;
  int threads = 0;

  EncoderConfig config() const
  {
    EncoderConfig cfg;
    cfg.q = q;
    cfg.tools.slices = !noSlices;
    cfg.tools.intra = !noIntra;
    cfg.tools.adaptiveTransform = !noAdaptiveTransform;
    cfg.tools.scanSelect = !noScanSelect;
    cfg.depth = depth;
    cfg.slicing.threshold1 = t1;
    cfg.slicing.threshold2 = t2;
    cfg.delta = delta;
    cfg.tau = tau;
    cfg.lambda = lambdaModel.empty() ? LambdaQModel{lambdaA, lambdaB}
                                     : loadLambdaModel(lambdaModel);
    cfg.threads = threads > 0 ? threads : defaultThreads();
    return cfg;
  }
};

void
addEncoderOptions(CLI::App* cmd, EncoderOptions& o, bool withQ)
{
  if (withQ)
    cmd->add_option("--q", o.q, "Quantization step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_flag("--no-slices", o.noSlices, "Disable slice partitioning");
  cmd->add_flag("--no-intra", o.noIntra, "Disable intra prediction (DC only)");
  cmd->add_flag("--no-adaptive-transform", o.noAdaptiveTransform,
                "Disable the GFT/DCT decision (DCT only)");
  cmd->add_flag("--no-scan-select", o.noScanSelect, "Disable scan selection (raster only)");
  cmd->add_option("--depth", o.depth, "Kd-tree depth per slice (default: automatic)")
    ->check(CLI::Range(0, 30));
  cmd->add_option("--t1", o.t1, "Block color variance threshold for non-smooth blocks")
    ->check(CLI::NonNegativeNumber)
    ->capture_default_str();
  cmd->add_option("--t2", o.t2, "Non-smooth block fraction that triggers two slices")
    ->check(CLI::Range(0.0, 1.0))
    ->capture_default_str();
  cmd->add_option("--delta", o.delta, "Graph weight scale (0: adaptive per block)")
    ->check(CLI::NonNegativeNumber)
    ->capture_default_str();
  cmd->add_option("--tau", o.tau, "Graph squared distance threshold (0: adaptive)")
    ->check(CLI::NonNegativeNumber)
    ->capture_default_str();
  auto* a = cmd->add_option("--lambda-a", o.lambdaA, "Lambda model coefficient a")
              ->check(CLI::PositiveNumber)
              ->capture_default_str();
  auto* b = cmd->add_option("--lambda-b", o.lambdaB, "Lambda model exponent b")
              ->capture_default_str();
  cmd->add_option("--lambda-model", o.lambdaModel, "Lambda model file from fit-lambda")
    ->check(CLI::ExistingFile)
    ->excludes(a)
    ->excludes(b);
  cmd->add_option("--threads", o.threads,
                  "Worker threads (default: PCAC_THREADS or all cores)")
    ->check(CLI::PositiveNumber);
}

std::vector<std::uint8_t>
readFile(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad())
    throw IoError("read failed for " + path);
  return bytes;
}

void
writeFile(const std::string& path, const std::vector<std::uint8_t>& bytes)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
  if (!out)
    throw IoError("write failed for " + path);
}

void
printCurve(const RdCurve& c)
{
  std::printf("%-6s %8s %9s %9s %9s %11s %11s\n", "model", "Q", "bpp", "psnr_y",
              "psnr_u", "psnr_v", "encode_ms");
  for (const auto& p : c.points)
    std::printf("%-6s %8g %9.4f %9.3f %9.3f %9.3f %11.1f\n", c.label.c_str(), p.q,
                p.bpp, p.psnrY, p.psnrU, p.psnrV, p.encodeMs);
}

//============================================================================

int
runEncode(const std::string& input, const std::string& output, const EncoderOptions& o)
{
  const PointCloud cloud = loadPly(input);
  const auto enc = encode(cloud, o.config());
  writeFile(output, enc.bytes);

  const auto yuv = rgbToYuv(cloud.colors);
  std::printf("points     %zu\n", cloud.count());
  std::printf("bytes      %zu\n", enc.bytes.size());
  std::printf("bpp        %.4f\n", enc.bitsPerPoint());
  std::printf("slices     %zu\n", enc.bitstream.header.slices.size());
  std::printf("blocks     %zu (GFT %zu, DCT %zu)\n", enc.stats.blocks,
              enc.stats.transformModes[1], enc.stats.transformModes[0]);
  if (cloud.count())
    std::printf("psnr_y     %.3f dB\n", psnrY(yuv, enc.reconstructedYuv));
  return kExitOk;
}

int
runDecode(const std::string& input, const std::string& geometryPath,
          const std::string& output, bool ascii, bool reportPsnr, int threads)
{
  const auto bytes = readFile(input);
  std::optional<PointCloud> reference;
  std::vector<Vec3d> geometry;
  if (reportPsnr) {
    reference = loadPly(geometryPath);
    geometry = reference->positions;
  } else {
    geometry = loadPlyGeometry(geometryPath);
  }

  const auto dec = decode(bytes, geometry, threads > 0 ? threads : defaultThreads());
  savePly(dec.cloud, output,
          ascii ? PlyEncoding::kAscii : PlyEncoding::kBinaryLittleEndian);

  std::printf("points     %zu\n", dec.cloud.count());
  if (reference && reference->count()) {
    const auto orig = rgbToYuv(reference->colors);
    std::printf("psnr_y     %.3f dB\n", psnr(orig, dec.yuv, 0));
    std::printf("psnr_u     %.3f dB\n", psnr(orig, dec.yuv, 1));
    std::printf("psnr_v     %.3f dB\n", psnr(orig, dec.yuv, 2));
  }
  return kExitOk;
}

int
runSweep(const std::string& input, const std::vector<double>& qs,
         const std::string& csv, const EncoderOptions& o)
{
  const PointCloud cloud = loadPly(input);
  const auto curve = runRdSweep(cloud, o.config(), qs, "sweep");
  printCurve(curve);
  if (!csv.empty())
    writeCurveCsv(curve, csv);
  return kExitOk;
}

int
runAblate(const std::string& input, const std::vector<double>& qs,
          const std::string& csv, const EncoderOptions& o)
{
  const PointCloud cloud = loadPly(input);
  const auto result = runAblation(cloud, o.config(), qs);
  for (const auto& c : result.curves)
    printCurve(c);
  std::printf("\nBD-rate vs V1\n");
  for (int m = 0; m < kAblationModels; m++)
    std::printf("  %s %8.3f %%\n", result.curves[m].label.c_str(), result.bdRateVsV1[m]);
  if (!csv.empty())
    writeAblationCsv(result, csv);
  return kExitOk;
}

int
runFitLambda(const std::vector<std::string>& csvs, const std::string& output)
{
  std::vector<std::vector<RdSample>> curves;
  for (const auto& path : csvs)
    curves.push_back(lambdaSamples(readCurveCsv(path)));
  const auto fit = fitLambdaQ(curves);
  std::printf("a          %.6g\n", fit.model.a);
  std::printf("b          %.6g\n", fit.model.b);
  std::printf("r_square   %.6f\n", fit.rSquare);
  std::printf("slopes     %zu\n", fit.slopeCount);
  if (!output.empty())
    saveLambdaModel(fit, output);
  return kExitOk;
}

int
runInfo(const std::string& input)
{
  const auto bytes = readFile(input);
  const auto bs = readBitstream(bytes);
  const auto& h = bs.header;
  std::printf("version    %u\n", unsigned(h.version));
  std::printf("flags      0x%02x\n", unsigned(h.flags));
  std::printf("points     %u\n", h.pointCount);
  std::printf("bytes      %zu\n", bytes.size());
  if (h.pointCount)
    std::printf("bpp        %.4f\n", 8.0 * double(bytes.size()) / double(h.pointCount));
  std::printf("slices     %zu\n", h.slices.size());
  for (std::size_t i = 0; i < h.slices.size(); i++) {
    const auto& s = h.slices[i];
    std::printf("  slice %zu: depth %u, Q %g, delta %s, tau %s, map %zu bytes, "
                "payload %zu bytes\n",
                i, unsigned(s.depth), double(s.q),
                s.delta > 0 ? std::to_string(s.delta).c_str() : "adaptive",
                s.tau > 0 ? std::to_string(s.tau).c_str() : "adaptive",
                s.indexMap.size(), bs.segments[i].size());
  }
  return kExitOk;
}

}  // namespace

//============================================================================

int
main(int argc, char** argv)
{
  CLI::App app{"Point cloud color attribute codec"};
  app.require_subcommand(1);

  std::string input, output, geometry, csv;
  std::vector<double> qs{8, 16, 32, 64};
  std::vector<std::string> csvs;
  bool ascii = false, reportPsnr = false;
  int threads = 0;
  EncoderOptions enc;

  auto* encodeCmd = app.add_subcommand("encode", "Encode the colors of a PLY point cloud");
  encodeCmd->add_option("-i,--input", input, "Input PLY")->required()->check(CLI::ExistingFile);
  encodeCmd->add_option("-o,--output", output, "Output bitstream")->required();
  addEncoderOptions(encodeCmd, enc, true);

  auto* decodeCmd = app.add_subcommand("decode", "Decode colors onto the given geometry");
  decodeCmd->add_option("-i,--input", input, "Input bitstream")->required()->check(CLI::ExistingFile);
  decodeCmd->add_option("--geometry", geometry, "PLY holding the frame geometry")
    ->required()
    ->check(CLI::ExistingFile);
  decodeCmd->add_option("-o,--output", output, "Output PLY")->required();
  decodeCmd->add_flag("--ascii", ascii, "Write an ASCII PLY");
  decodeCmd->add_flag("--psnr", reportPsnr, "Report PSNR against the geometry PLY colors");
  decodeCmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

  auto* sweepCmd = app.add_subcommand("sweep", "Rate-distortion sweep over Q");
  sweepCmd->add_option("-i,--input", input, "Input PLY")->required()->check(CLI::ExistingFile);
  sweepCmd->add_option("--q", qs, "Quantization steps")
    ->delimiter(',')
    ->check(CLI::PositiveNumber)
    ->capture_default_str();
  sweepCmd->add_option("--csv", csv, "CSV output");
  addEncoderOptions(sweepCmd, enc, false);

  auto* ablateCmd = app.add_subcommand("ablate", "Tool ablation V1..V5 with BD-rates");
  ablateCmd->add_option("-i,--input", input, "Input PLY")->required()->check(CLI::ExistingFile);
  ablateCmd->add_option("--q", qs, "Quantization steps")
    ->delimiter(',')
    ->check(CLI::PositiveNumber)
    ->capture_default_str();
  ablateCmd->add_option("--csv", csv, "CSV output");
  ablateCmd->add_option("--threads", enc.threads, "Worker threads")
    ->check(CLI::PositiveNumber);

  auto* fitCmd = app.add_subcommand("fit-lambda", "Fit the lambda-Q model to sweep CSVs");
  fitCmd->add_option("--csv", csvs, "Sweep CSV files")
    ->required()
    ->delimiter(',')
    ->check(CLI::ExistingFile);
  fitCmd->add_option("-o,--output", output, "Model file output");

  auto* infoCmd = app.add_subcommand("info", "Print a bitstream header");
  infoCmd->add_option("-i,--input", input, "Input bitstream")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*encodeCmd)
      return runEncode(input, output, enc);
    if (*decodeCmd)
      return runDecode(input, geometry, output, ascii, reportPsnr, threads);
    if (*sweepCmd)
      return runSweep(input, qs, csv, enc);
    if (*ablateCmd)
      return runAblate(input, qs, csv, enc);
    if (*fitCmd)
      return runFitLambda(csvs, output);
    if (*infoCmd)
      return runInfo(input);
  } catch (const ConfigError& e) {
    std::cerr << "pcac: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "pcac: " << e.what() << '\n';
    return kExitIo;
  } catch (const InsufficientDataError& e) {
    std::cerr << "pcac: " << e.what() << '\n';
    return kExitData;
  } catch (const FormatError& e) {
    std::cerr << "pcac: " << e.what() << '\n';
    return kExitFormat;
  } catch (const std::exception& e) {
    std::cerr << "pcac: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

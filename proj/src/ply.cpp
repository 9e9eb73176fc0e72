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

#include "pcac/ply.h"

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "pcac/error.h"

namespace pcac {

void
validate(const PointCloud& cloud)
{
  if (cloud.positions.size() != cloud.colors.size())
    throw Error("point cloud position/color count mismatch");
  for (const auto& p : cloud.positions)
    for (double x : p)
      if (!std::isfinite(x))
        throw Error("point cloud has a non-finite coordinate");
}

//============================================================================

namespace {

  enum class ScalarType { kInt8, kUInt8, kInt16, kUInt16, kInt32, kUInt32,
                          kFloat32, kFloat64 };

  std::optional<ScalarType> parseScalarType(std::string_view name)
  {
    if (name == "char" || name == "int8") return ScalarType::kInt8;
    if (name == "uchar" || name == "uint8") return ScalarType::kUInt8;
    if (name == "short" || name == "int16") return ScalarType::kInt16;
    if (name == "ushort" || name == "uint16") return ScalarType::kUInt16;
    if (name == "int" || name == "int32") return ScalarType::kInt32;
    if (name == "uint" || name == "uint32") return ScalarType::kUInt32;
    if (name == "float" || name == "float32") return ScalarType::kFloat32;
    if (name == "double" || name == "float64") return ScalarType::kFloat64;
    return std::nullopt;
  }

  std::size_t scalarSize(ScalarType t)
  {
    switch (t) {
    case ScalarType::kInt8:
    case ScalarType::kUInt8: return 1;
    case ScalarType::kInt16:
    case ScalarType::kUInt16: return 2;
    case ScalarType::kInt32:
    case ScalarType::kUInt32:
    case ScalarType::kFloat32: return 4;
    case ScalarType::kFloat64: return 8;
    }
    return 0;
  }

  struct Property {
    std::string name;
    ScalarType type;
    bool isList = false;
    std::size_t offset = 0;  // byte offset within a binary record
  };

  struct Element {
    std::string name;
    std::size_t count = 0;
    std::vector<Property> properties;
  };

  struct Header {
    PlyEncoding encoding = PlyEncoding::kAscii;
    std::vector<Element> elements;
    std::size_t lineCount = 0;
  };

  std::vector<std::string_view> tokenize(std::string_view line)
  {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace((unsigned char)line[i]))
        i++;
      std::size_t start = i;
      while (i < line.size() && !std::isspace((unsigned char)line[i]))
        i++;
      if (i > start)
        tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
  }

  template<typename T>
  bool parseNumber(std::string_view s, T& out)
  {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
  }

  //--------------------------------------------------------------------------

  Header readHeader(std::istream& in)
  {
    Header header;
    std::string line;
    std::size_t lineNo = 0;
    bool sawFormat = false;

    auto next = [&]() -> bool {
      if (!std::getline(in, line))
        return false;
      lineNo++;
      if (!line.empty() && line.back() == '\r')
        line.pop_back();
      return true;
    };

    if (!next())
      throw IoError("empty file");
    if (line != "ply")
      throw ParseError(lineNo, "missing 'ply' magic");

    while (true) {
      if (!next())
        throw ParseError(lineNo, "unexpected end of header");
      auto tok = tokenize(line);
      if (tok.empty())
        continue;

      if (tok[0] == "end_header") {
        if (!sawFormat)
          throw ParseError(lineNo, "end_header before format line");
        break;
      }
      if (tok[0] == "comment" || tok[0] == "obj_info")
        continue;

      if (tok[0] == "format") {
        if (tok.size() != 3)
          throw ParseError(lineNo, "malformed format line");
        if (tok[1] == "ascii")
          header.encoding = PlyEncoding::kAscii;
        else if (tok[1] == "binary_little_endian")
          header.encoding = PlyEncoding::kBinaryLittleEndian;
        else if (tok[1] == "binary_big_endian")
          throw UnsupportedFormatError("binary_big_endian PLY not supported");
        else
          throw ParseError(lineNo, "unknown format '" + std::string(tok[1]) + "'");
        if (tok[2] != "1.0")
          throw ParseError(lineNo, "unsupported PLY version");
        sawFormat = true;
        continue;
      }

      if (tok[0] == "element") {
        Element e;
        if (tok.size() != 3 || !parseNumber(tok[2], e.count))
          throw ParseError(lineNo, "malformed element line");
        e.name = tok[1];
        header.elements.push_back(std::move(e));
        continue;
      }

      if (tok[0] == "property") {
        if (header.elements.empty())
          throw ParseError(lineNo, "property outside of an element");
        Property p;
        if (tok.size() == 5 && tok[1] == "list") {
          auto t = parseScalarType(tok[3]);
          if (!t || !parseScalarType(tok[2]))
            throw ParseError(lineNo, "unknown list property type");
          p.isList = true;
          p.type = *t;
          p.name = tok[4];
        } else if (tok.size() == 3) {
          auto t = parseScalarType(tok[1]);
          if (!t)
            throw ParseError(lineNo, "unknown property type '" + std::string(tok[1]) + "'");
          p.type = *t;
          p.name = tok[2];
        } else {
          throw ParseError(lineNo, "malformed property line");
        }
        header.elements.back().properties.push_back(std::move(p));
        continue;
      }

      throw ParseError(lineNo, "unknown header keyword '" + std::string(tok[0]) + "'");
    }

    header.lineCount = lineNo;
    return header;
  }

  //--------------------------------------------------------------------------

  struct VertexLayout {
    int xyz[3] = {-1, -1, -1};
    int rgb[3] = {-1, -1, -1};
    std::size_t stride = 0;
  };

  VertexLayout resolveLayout(Element& vertex, bool needColors)
  {
    static const char* kCoord[3] = {"x", "y", "z"};
    static const char* kColor[3] = {"red", "green", "blue"};

    VertexLayout layout;
    for (std::size_t i = 0; i < vertex.properties.size(); i++) {
      auto& p = vertex.properties[i];
      if (p.isList)
        throw UnsupportedFormatError("list property in vertex element");
      p.offset = layout.stride;
      layout.stride += scalarSize(p.type);
      for (int k = 0; k < 3; k++) {
        if (p.name == kCoord[k]) {
          if (p.type != ScalarType::kFloat32 && p.type != ScalarType::kFloat64)
            throw UnsupportedFormatError("coordinate property must be float or double");
          layout.xyz[k] = int(i);
        }
        if (p.name == kColor[k]) {
          if (p.type != ScalarType::kUInt8)
            throw UnsupportedFormatError("color property must be uchar");
          layout.rgb[k] = int(i);
        }
      }
    }
    for (int k = 0; k < 3; k++) {
      if (layout.xyz[k] < 0)
        throw UnsupportedFormatError(std::string("missing vertex property ") + kCoord[k]);
      if (needColors && layout.rgb[k] < 0)
        throw UnsupportedFormatError(std::string("missing vertex property ") + kColor[k]);
    }
    return layout;
  }

  template<typename T>
  T readLe(const char* p)
  {
    T v;
    std::memcpy(&v, p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
      auto* b = reinterpret_cast<unsigned char*>(&v);
      for (std::size_t i = 0; i < sizeof(T) / 2; i++)
        std::swap(b[i], b[sizeof(T) - 1 - i]);
    }
    return v;
  }

  template<typename T>
  void writeLe(std::ostream& out, T v)
  {
    if constexpr (std::endian::native == std::endian::big) {
      auto* b = reinterpret_cast<unsigned char*>(&v);
      for (std::size_t i = 0; i < sizeof(T) / 2; i++)
        std::swap(b[i], b[sizeof(T) - 1 - i]);
    }
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }

}  // namespace

//============================================================================

namespace {

  // Colors are left empty when the file has none and needColors is false.
  PointCloud readPly(const std::filesystem::path& path, bool needColors)
  {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw IoError("cannot open " + path.string());

    Header header = readHeader(in);

    Element* vertex = nullptr;
    for (auto& e : header.elements) {
      if (e.name == "vertex") {
        vertex = &e;
        break;
      }
      if (e.count > 0)
        throw UnsupportedFormatError("element '" + e.name + "' precedes vertex");
    }
    if (!vertex)
      throw UnsupportedFormatError("no vertex element");

    const VertexLayout layout = resolveLayout(*vertex, needColors);
    const bool hasColors = layout.rgb[0] >= 0 && layout.rgb[1] >= 0 && layout.rgb[2] >= 0;
    const auto& props = vertex->properties;
    const std::size_t n = vertex->count;

    PointCloud cloud;
    cloud.positions.resize(n);
    if (hasColors)
      cloud.colors.resize(n);

    if (header.encoding == PlyEncoding::kBinaryLittleEndian) {
      std::vector<char> buf(n * layout.stride);
      in.read(buf.data(), std::streamsize(buf.size()));
      if (std::size_t(in.gcount()) != buf.size())
        throw IoError("truncated PLY body in " + path.string());

      for (std::size_t i = 0; i < n; i++) {
        const char* rec = buf.data() + i * layout.stride;
        for (int k = 0; k < 3; k++) {
          const auto& p = props[layout.xyz[k]];
          cloud.positions[i][k] = p.type == ScalarType::kFloat64
            ? readLe<double>(rec + p.offset)
            : double(readLe<float>(rec + p.offset));
          if (hasColors)
            cloud.colors[i][k] = std::uint8_t(rec[props[layout.rgb[k]].offset]);
        }
      }
    } else {
      std::string line;
      std::size_t lineNo = header.lineCount;
      for (std::size_t i = 0; i < n; i++) {
        if (!std::getline(in, line))
          throw IoError("truncated PLY body in " + path.string());
        lineNo++;
        auto tok = tokenize(line);
        if (tok.size() < props.size())
          throw ParseError(lineNo, "too few values for vertex");
        for (int k = 0; k < 3; k++) {
          if (!parseNumber(tok[layout.xyz[k]], cloud.positions[i][k]))
            throw ParseError(lineNo, "bad coordinate value");
          if (!hasColors)
            continue;
          unsigned c = 0;
          if (!parseNumber(tok[layout.rgb[k]], c) || c > 255)
            throw ParseError(lineNo, "bad color value");
          cloud.colors[i][k] = std::uint8_t(c);
        }
      }
    }

    return cloud;
  }

}  // namespace

PointCloud
loadPly(const std::filesystem::path& path)
{
  PointCloud cloud = readPly(path, true);
  validate(cloud);
  return cloud;
}

std::vector<Vec3d>
loadPlyGeometry(const std::filesystem::path& path)
{
  PointCloud cloud = readPly(path, false);
  for (const auto& p : cloud.positions)
    for (double x : p)
      if (!std::isfinite(x))
        throw Error("point cloud has a non-finite coordinate");
  return std::move(cloud.positions);
}

//----------------------------------------------------------------------------

void
savePly(
  const PointCloud& cloud,
  const std::filesystem::path& path,
  PlyEncoding encoding)
{
  validate(cloud);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot write " + path.string());

  out << "ply\n"
      << (encoding == PlyEncoding::kAscii ? "format ascii 1.0\n"
                                          : "format binary_little_endian 1.0\n")
      << "element vertex " << cloud.count() << "\n"
      << "property double x\nproperty double y\nproperty double z\n"
      << "property uchar red\nproperty uchar green\nproperty uchar blue\n"
      << "end_header\n";

  if (encoding == PlyEncoding::kBinaryLittleEndian) {
    for (std::size_t i = 0; i < cloud.count(); i++) {
      for (double x : cloud.positions[i])
        writeLe(out, x);
      for (auto c : cloud.colors[i])
        writeLe(out, c);
    }
  } else {
    char buf[64];
    for (std::size_t i = 0; i < cloud.count(); i++) {
      for (double x : cloud.positions[i]) {
        auto res = std::to_chars(buf, buf + sizeof(buf), x);
        out.write(buf, res.ptr - buf);
        out.put(' ');
      }
      const auto& c = cloud.colors[i];
      out << unsigned(c[0]) << ' ' << unsigned(c[1]) << ' ' << unsigned(c[2])
          << '\n';
    }
  }

  out.flush();
  if (!out)
    throw IoError("write failed for " + path.string());
}

}  // namespace pcac

#pragma once

// Mesh and field export: ASCII PLY, OBJ, CSV and a curvature JSON document.
// Numbers are written with 17 significant digits so that re-import
// reproduces the in-memory doubles exactly.

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "weier4/geometry.hpp"

namespace weier4 {

enum class Projection { xyz, xyw, xzw, yzw, none };
enum class ExportFormat { ply, obj, csv, curvature_json };

inline Projection parse_projection(const std::string& s) {
  if (s == "xyz") return Projection::xyz;
  if (s == "xyw") return Projection::xyw;
  if (s == "xzw") return Projection::xzw;
  if (s == "yzw") return Projection::yzw;
  if (s == "none") return Projection::none;
  throw Error(Errc::UnsupportedProjection, "unknown projection '" + s + "'");
}

/// Indices of the kept coordinates followed by the dropped one.
inline std::array<int, 4> projection_axes(Projection p) {
  switch (p) {
    case Projection::xyz: return {0, 1, 2, 3};
    case Projection::xyw: return {0, 1, 3, 2};
    case Projection::xzw: return {0, 2, 3, 1};
    case Projection::yzw: return {1, 2, 3, 0};
    case Projection::none: break;
  }
  throw Error(Errc::UnsupportedProjection, "mesh formats need a 3-coordinate projection");
}

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Grid quads split into two triangles with consistent winding.
inline std::vector<std::array<int, 3>> grid_triangles(int rows, int cols) {
  std::vector<std::array<int, 3>> tris;
  for (int r = 0; r + 1 < rows; ++r) {
    for (int c = 0; c + 1 < cols; ++c) {
      const int v00 = r * cols + c, v01 = v00 + 1, v10 = v00 + cols, v11 = v10 + 1;
      tris.push_back({v00, v01, v11});
      tris.push_back({v00, v11, v10});
    }
  }
  return tris;
}

inline void write_ply(std::ostream& os, const SurfacePatch& patch, Projection proj) {
  const auto ax = projection_axes(proj);
  const bool curv = patch.curvature.size() == patch.points.size();
  const auto tris = grid_triangles(patch.rows, patch.cols);
  os << "ply\nformat ascii 1.0\nelement vertex " << patch.points.size() << "\n"
     << "property float x\nproperty float y\nproperty float z\nproperty float w\n";
  if (curv) os << "property float gauss_k\nproperty float normal_k\n";
  os << "element face " << tris.size() << "\nproperty list uchar int vertex_indices\nend_header\n";
  for (std::size_t i = 0; i < patch.points.size(); ++i) {
    const Vec4& x = patch.points[i];
    os << fmt17(x[ax[0]]) << ' ' << fmt17(x[ax[1]]) << ' ' << fmt17(x[ax[2]]) << ' ' << fmt17(x[ax[3]]);
    if (curv) os << ' ' << fmt17(patch.curvature[i].K) << ' ' << fmt17(patch.curvature[i].kappa);
    os << '\n';
  }
  for (const auto& t : tris) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

inline void write_obj(std::ostream& os, const SurfacePatch& patch, Projection proj) {
  const auto ax = projection_axes(proj);
  for (const Vec4& x : patch.points)
    os << "v " << fmt17(x[ax[0]]) << ' ' << fmt17(x[ax[1]]) << ' ' << fmt17(x[ax[2]]) << '\n';
  for (const auto& t : grid_triangles(patch.rows, patch.cols))
    os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

/// Columns: u,v,x1,x2,x3,x4,E (+ K,kappa,nu,mu when curvature is attached).
inline void write_csv(std::ostream& os, const SurfacePatch& patch) {
  const bool curv = patch.curvature.size() == patch.points.size();
  os << "u,v,x1,x2,x3,x4,E" << (curv ? ",K,kappa,nu,mu" : "") << '\n';
  for (int r = 0; r < patch.rows; ++r) {
    for (int c = 0; c < patch.cols; ++c) {
      const std::size_t i = patch.index(r, c);
      const Vec4& x = patch.points[i];
      os << fmt17(patch.grid.u(c)) << ',' << fmt17(patch.grid.v(r));
      for (int k = 0; k < 4; ++k) os << ',' << fmt17(x[k]);
      os << ',' << fmt17(patch.E[i]);
      if (curv) {
        const auto& s = patch.curvature[i];
        os << ',' << fmt17(s.K) << ',' << fmt17(s.kappa) << ',' << fmt17(s.nu) << ',' << fmt17(s.mu);
      }
      os << '\n';
    }
  }
}

inline nlohmann::json curvature_json(const SurfacePatch& patch) {
  if (patch.curvature.size() != patch.points.size())
    throw Error(Errc::InvalidArgument, "patch carries no curvature samples");
  nlohmann::json doc;
  doc["grid"] = {{"u0", patch.grid.u0}, {"v0", patch.grid.v0}, {"h", patch.grid.h},
                 {"rows", patch.rows},  {"cols", patch.cols}};
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t i = 0; i < patch.points.size(); ++i) {
    const Vec4& x = patch.points[i];
    const auto& s = patch.curvature[i];
    nodes.push_back({{"x", {x[0], x[1], x[2], x[3]}},
                     {"K", s.K},
                     {"kappa", s.kappa},
                     {"nu", s.nu},
                     {"mu", s.mu},
                     {"E", patch.E[i]}});
  }
  doc["nodes"] = std::move(nodes);
  return doc;
}

inline void write_curvature_json(std::ostream& os, const SurfacePatch& patch) { os << curvature_json(patch).dump(2) << '\n'; }

inline void export_patch(const std::string& path, const SurfacePatch& patch, ExportFormat format, Projection proj) {
  if ((format == ExportFormat::ply || format == ExportFormat::obj) && proj == Projection::none)
    throw Error(Errc::UnsupportedProjection, "mesh formats need a 3-coordinate projection");
  std::ofstream os(path);
  if (!os) throw Error(Errc::IoError, "cannot open '" + path + "' for writing");
  switch (format) {
    case ExportFormat::ply: write_ply(os, patch, proj); break;
    case ExportFormat::obj: write_obj(os, patch, proj); break;
    case ExportFormat::csv: write_csv(os, patch); break;
    case ExportFormat::curvature_json: write_curvature_json(os, patch); break;
  }
  if (!os) throw Error(Errc::IoError, "failed writing '" + path + "'");
}

inline ExportFormat format_from_path(const std::string& path) {
  auto ends = [&](const char* ext) {
    const std::string e(ext);
    return path.size() >= e.size() && path.compare(path.size() - e.size(), e.size(), e) == 0;
  };
  if (ends(".ply")) return ExportFormat::ply;
  if (ends(".obj")) return ExportFormat::obj;
  if (ends(".csv")) return ExportFormat::csv;
  if (ends(".json")) return ExportFormat::curvature_json;
  throw Error(Errc::InvalidArgument, "cannot infer export format from '" + path + "'");
}

// ---------------------------------------------------------------------------
// Re-import

/// Rows of a CSV written by write_csv, as parsed doubles.
inline std::vector<std::vector<double>> read_csv_rows(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(Errc::IoError, "empty CSV");
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Vertex records (all properties, in header order) of an ASCII PLY file.
inline std::vector<std::vector<double>> read_ply_vertices(std::istream& is) {
  std::string line;
  std::size_t nvert = 0, nprops = 0;
  bool in_vertex = false;
  while (std::getline(is, line)) {
    if (line == "end_header") break;
    std::stringstream ss(line);
    std::string a, b, c;
    ss >> a >> b >> c;
    if (a == "element") {
      in_vertex = b == "vertex";
      if (in_vertex) nvert = std::stoul(c);
    } else if (a == "property" && in_vertex) {
      ++nprops;
    }
  }
  std::vector<std::vector<double>> verts(nvert, std::vector<double>(nprops));
  for (auto& v : verts) {
    if (!std::getline(is, line)) throw Error(Errc::IoError, "PLY vertex list truncated");
    std::stringstream ss(line);
    std::string tok;
    for (auto& x : v) {
      if (!(ss >> tok)) throw Error(Errc::IoError, "PLY vertex record too short");
      x = std::strtod(tok.c_str(), nullptr);
    }
  }
  return verts;
}

}  // namespace weier4

// Line-oriented text format for polygonal meshes:
//
//   vem-mesh 1
//   vertices N
//   x y                (N lines)
//   cells M
//   k i1 i2 ... ik     (M lines, 0-based counterclockwise)
//   star x y           (optional, applies to the preceding cell)
//
// Lines starting with '#' are ignored. Coordinates round-trip bit exactly.

#ifndef POLYVEM_MESH_IO_HPP
#define POLYVEM_MESH_IO_HPP

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "polyvem/mesh.hpp"

namespace polyvem {

inline Mesh load_mesh(std::istream& in) {
  auto next_line = [&in](std::string& line) {
    while (std::getline(in, line)) {
      std::size_t i = line.find_first_not_of(" \t\r");
      if (i == std::string::npos) continue;
      if (line[i] == '#') continue;
      return true;
    }
    return false;
  };

  std::string line;
  if (!next_line(line)) throw ConfigError("mesh file: empty input");
  {
    std::istringstream ls(line);
    std::string magic;
    int version = 0;
    if (!(ls >> magic >> version) || magic != "vem-mesh" || version != 1)
      throw ConfigError("mesh file: expected header 'vem-mesh 1'");
  }

  if (!next_line(line)) throw ConfigError("mesh file: missing vertex section");
  int n_vertices = 0;
  {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag >> n_vertices) || tag != "vertices" || n_vertices <= 0)
      throw ConfigError("mesh file: expected 'vertices N'");
  }
  std::vector<Vec2> vertices(static_cast<std::size_t>(n_vertices));
  for (int i = 0; i < n_vertices; ++i) {
    if (!next_line(line)) throw ConfigError("mesh file: truncated vertex list");
    std::istringstream ls(line);
    if (!(ls >> vertices[static_cast<std::size_t>(i)].x() >> vertices[static_cast<std::size_t>(i)].y()))
      throw ConfigError("mesh file: bad vertex line '" + line + "'");
  }

  if (!next_line(line)) throw ConfigError("mesh file: missing cell section");
  int n_cells = 0;
  {
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag >> n_cells) || tag != "cells" || n_cells <= 0)
      throw ConfigError("mesh file: expected 'cells M'");
  }
  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<std::size_t>(n_cells));
  std::map<int, Vec2> stars;
  while (static_cast<int>(cells.size()) < n_cells) {
    if (!next_line(line)) throw ConfigError("mesh file: truncated cell list");
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (first == "star") {
      if (cells.empty()) throw ConfigError("mesh file: 'star' before any cell");
      Vec2 s;
      if (!(ls >> s.x() >> s.y())) throw ConfigError("mesh file: bad star line");
      stars[static_cast<int>(cells.size()) - 1] = s;
      continue;
    }
    int k = std::stoi(first);
    if (k < 3) throw ConfigError("mesh file: cell with fewer than 3 vertices");
    std::vector<int> cell(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i)
      if (!(ls >> cell[static_cast<std::size_t>(i)]))
        throw ConfigError("mesh file: truncated cell line '" + line + "'");
    cells.push_back(std::move(cell));
  }
  // trailing star for the last cell
  if (next_line(line)) {
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (first == "star") {
      Vec2 s;
      if (!(ls >> s.x() >> s.y())) throw ConfigError("mesh file: bad star line");
      stars[static_cast<int>(cells.size()) - 1] = s;
    }
  }

  return Mesh(std::move(vertices), std::move(cells), std::move(stars));
}

inline Mesh load_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open mesh file '" + path + "'");
  return load_mesh(in);
}

inline std::string save_mesh(const Mesh& mesh) {
  std::ostringstream out;
  char buf[64];
  out << "vem-mesh 1\n";
  out << "vertices " << mesh.n_vertices() << "\n";
  for (const Vec2& v : mesh.vertices()) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g", v.x(), v.y());
    out << buf << "\n";
  }
  out << "cells " << mesh.n_cells() << "\n";
  for (const auto& cell : mesh.cells()) {
    out << cell.size();
    for (int v : cell) out << " " << v;
    out << "\n";
  }
  return out.str();
}

}  // namespace polyvem

#endif

// Mesh families on the unit square for convergence studies. All generators
// are deterministic for a given (level, seed) and emit star-shaped cells.

#ifndef POLYVEM_MESH_GENERATORS_HPP
#define POLYVEM_MESH_GENERATORS_HPP

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "polyvem/mesh.hpp"

namespace polyvem {

/// Regular n x n grid of squares, n = 2^level.
inline Mesh square_grid(int level) {
  if (level < 0) throw ConfigError("square-grid: level must be >= 0");
  const int n = 1 << level;
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i)
      vertices.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<std::size_t>(n * n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
  return Mesh(std::move(vertices), std::move(cells));
}

/// Square grid with interior vertices displaced by up to 30% of the grid
/// spacing (seeded, deterministic).
inline Mesh perturbed_quads(int level, std::uint64_t seed = 0) {
  if (level < 0) throw ConfigError("perturbed-quads: level must be >= 0");
  const int n = 1 << level;
  const double h = 1.0 / n;
  std::mt19937_64 rng(seed * 2654435761ULL + 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(level));
  std::uniform_real_distribution<double> shift(-0.3 * h, 0.3 * h);
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      Vec2 p(static_cast<double>(i) / n, static_cast<double>(j) / n);
      const double dx = shift(rng), dy = shift(rng);  // always draw: keeps layout seed-stable
      if (i > 0 && i < n && j > 0 && j < n) p += Vec2(dx, dy);
      vertices.push_back(p);
    }
  auto vid = [n](int i, int j) { return j * (n + 1) + i; };
  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<std::size_t>(n * n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
  return Mesh(std::move(vertices), std::move(cells));
}

/// Staggered-brick mesh whose interior cells are hexagons: brick corners of
/// one row land on the half-points of the next, and those shared mid-edge
/// vertices are offset vertically so the cells are genuinely six-sided.
/// Offset rows are padded with half-width quads at the domain sides.
inline Mesh hex_dominant(int level) {
  if (level < 0) throw ConfigError("hex-dominant: level must be >= 0");
  const int nx = 1 << (level + 1);
  const int ny = 1 << (level + 1);
  const double w = 1.0 / nx;
  const double row_h = 1.0 / ny;
  const double delta = 0.2 * row_h;

  // Vertices live on half-grid columns (spacing w/2) and row lines.
  std::map<std::pair<int, int>, int> vid;  // (column in w/2 units, row line) -> id
  std::vector<Vec2> vertices;
  auto offset_units = [](int row) { return (row % 2 != 0) ? 1 : 0; };  // in w/2 units
  auto vertex_id = [&](int col, int line) {
    auto [it, fresh] = vid.try_emplace({col, line}, static_cast<int>(vertices.size()));
    if (fresh) {
      double y = line * row_h;
      if (line > 0 && line < ny) {
        // A point is the mid-edge vertex of exactly one adjacent row; push it
        // toward that row's interior so both cells become hexagons.
        const bool mid_of_below = (col - offset_units(line - 1)) % 2 != 0;
        y += mid_of_below ? delta : -delta;
      }
      vertices.emplace_back(col * 0.5 * w, y);
    }
    return it->second;
  };

  std::vector<std::vector<int>> cells;
  for (int row = 0; row < ny; ++row) {
    const int off = offset_units(row);
    // Brick left borders in w/2 units: off, off+2, ..., plus half bricks at
    // the sides of offset rows.
    std::vector<std::pair<int, int>> spans;  // [left, right] in w/2 units
    if (off == 1) spans.push_back({0, 1});
    for (int left = off; left + 2 <= 2 * nx; left += 2) spans.push_back({left, left + 2});
    if (off == 1 && 2 * nx - 1 >= 1) spans.push_back({2 * nx - 1, 2 * nx});

    for (auto [left, right] : spans) {
      std::vector<int> cell;
      for (int col = left; col <= right; ++col) cell.push_back(vertex_id(col, row));
      for (int col = right; col >= left; --col) cell.push_back(vertex_id(col, row + 1));
      cells.push_back(std::move(cell));
    }
  }
  return Mesh(std::move(vertices), std::move(cells));
}

/// Dispatch by family name: square-grid | perturbed-quads | hex-dominant.
inline Mesh generate_mesh(const std::string& family, int level, std::uint64_t seed = 0) {
  if (family == "square-grid" || family == "square") return square_grid(level);
  if (family == "perturbed-quads" || family == "perturbed") return perturbed_quads(level, seed);
  if (family == "hex-dominant" || family == "hex") return hex_dominant(level);
  throw ConfigError("unknown mesh family '" + family + "'");
}

}  // namespace polyvem

#endif

#include <cstddef>
#include <stdexcept>

#include "parity_forge/analysis.hpp"

namespace pf {

std::vector<Rat> solve_linear(std::vector<std::vector<Rat>> a, std::vector<Rat> b) {
  const size_t n = b.size();
  if (a.size() != n) throw Error("solve_linear: shape mismatch");
  for (auto& row : a)
    if (row.size() != n) throw Error("solve_linear: shape mismatch");

  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && a[piv][col].is_zero()) ++piv;
    if (piv == n) throw Error("solve_linear: singular system");
    if (piv != col) {
      std::swap(a[piv], a[col]);
      std::swap(b[piv], b[col]);
    }
    const Rat inv = Rat(1) / a[col][col];
    for (size_t j = col; j < n; ++j) a[col][j] = a[col][j] * inv;
    b[col] = b[col] * inv;
    for (size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      const Rat f = a[r][col];
      for (size_t j = col; j < n; ++j) a[r][j] = a[r][j] - f * a[col][j];
      b[r] = b[r] - f * b[col];
    }
  }
  return b;
}

}  // namespace pf

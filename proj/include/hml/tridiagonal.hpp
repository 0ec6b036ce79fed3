#pragma once

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hml {

/// Real symmetric tridiagonal matrix. diag holds the (i,i) entries, offdiag
/// the (i,i+1) = (i+1,i) entries; index 0 is the top-left corner.
struct TridiagonalMatrix {
  std::vector<double> diag;
  std::vector<double> offdiag;

  TridiagonalMatrix() = default;

  explicit TridiagonalMatrix(std::size_t n)
      : diag(n, 0.0), offdiag(n > 0 ? n - 1 : 0, 0.0) {}

  TridiagonalMatrix(std::vector<double> d, std::vector<double> e)
      : diag(std::move(d)), offdiag(std::move(e)) {
    if (diag.empty())
      throw std::invalid_argument("TridiagonalMatrix: dim must be positive");
    if (offdiag.size() + 1 != diag.size())
      throw std::invalid_argument(
          "TridiagonalMatrix: offdiag must have dim-1 entries");
  }

  std::size_t dim() const { return diag.size(); }
};

/// Principal minor: drop the first row and column.
inline TridiagonalMatrix minor_of(const TridiagonalMatrix& x) {
  if (x.dim() < 2)
    throw std::invalid_argument("minor_of: need dim >= 2");
  return TridiagonalMatrix(
      std::vector<double>(x.diag.begin() + 1, x.diag.end()),
      std::vector<double>(x.offdiag.begin() + 1, x.offdiag.end()));
}

}

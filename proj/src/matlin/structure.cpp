#include "nearkit/errors.hpp"
#include "nearkit/kernels.hpp"
#include "nearkit/matlin.hpp"

#include <cmath>
#include <string>

namespace nearkit {

Structure parse_structure(std::string_view name) {
  if (name == "symmetric") return Structure::symmetric;
  if (name == "skew") return Structure::skew;
  if (name == "hankel") return Structure::hankel;
  if (name == "toeplitz") return Structure::toeplitz;
  if (name == "circulant") return Structure::circulant;
  if (name == "nonnegative") return Structure::nonnegative;
  throw DomainError("unknown structure kind '" + std::string(name) + "'");
}

std::string_view to_string(Structure s) {
  switch (s) {
    case Structure::symmetric: return "symmetric";
    case Structure::skew: return "skew";
    case Structure::hankel: return "hankel";
    case Structure::toeplitz: return "toeplitz";
    case Structure::circulant: return "circulant";
    case Structure::nonnegative: return "nonnegative";
  }
  return "?";
}

bool is_subspace(Structure s) { return s != Structure::nonnegative; }

namespace {

bool needs_square(Structure s) {
  return s == Structure::symmetric || s == Structure::skew || s == Structure::toeplitz ||
         s == Structure::circulant;
}

void check_shape(Structure s, Index rows, Index cols) {
  if (rows < 1 || cols < 1) throw DomainError("structure: empty matrix");
  if (needs_square(s) && rows != cols)
    throw DomainError(std::string(to_string(s)) + " structure needs a square matrix");
}

}  // namespace

Matrix project_structure(const Matrix& M, Structure s) {
  check_shape(s, M.rows(), M.cols());
  switch (s) {
    case Structure::symmetric: return 0.5 * (M + M.transpose());
    case Structure::skew: return 0.5 * (M - M.transpose());
    case Structure::hankel: return kernels::antidiagonal_mean(M);
    case Structure::toeplitz: return kernels::diagonal_mean(M);
    case Structure::circulant: return kernels::circulant_mean(M);
    case Structure::nonnegative: return M.cwiseMax(0.0);
  }
  throw DomainError("project_structure: bad kind");
}

std::vector<Matrix> structure_basis(Structure s, Index rows, Index cols) {
  check_shape(s, rows, cols);
  const double h = 1.0 / std::sqrt(2.0);
  std::vector<Matrix> basis;
  auto by_class = [&](Index classes, auto label) {
    for (Index k = 0; k < classes; ++k) {
      Matrix E = Matrix::Zero(rows, cols);
      for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
          if (label(i, j) == k) E(i, j) = 1.0;
      E /= E.norm();
      basis.push_back(std::move(E));
    }
  };
  switch (s) {
    case Structure::symmetric:
      for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i <= j; ++i) {
          Matrix E = Matrix::Zero(rows, cols);
          if (i == j) {
            E(i, i) = 1.0;
          } else {
            E(i, j) = h;
            E(j, i) = h;
          }
          basis.push_back(std::move(E));
        }
      break;
    case Structure::skew:
      for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < j; ++i) {
          Matrix E = Matrix::Zero(rows, cols);
          E(i, j) = h;
          E(j, i) = -h;
          basis.push_back(std::move(E));
        }
      break;
    case Structure::hankel:
      by_class(rows + cols - 1, [](Index i, Index j) { return i + j; });
      break;
    case Structure::toeplitz:
      by_class(rows + cols - 1, [cols](Index i, Index j) { return i - j + cols - 1; });
      break;
    case Structure::circulant:
      by_class(rows, [rows](Index i, Index j) { return (j - i + rows) % rows; });
      break;
    case Structure::nonnegative:
      throw DomainError("the nonnegative orthant is not a subspace and has no basis");
  }
  return basis;
}

}  // namespace nearkit

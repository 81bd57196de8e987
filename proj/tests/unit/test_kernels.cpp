#include "nearkit/kernels.hpp"
#include "nearkit/random.hpp"
#include "nearkit/schatten.hpp"

#include <doctest.h>

using namespace nearkit;

namespace {

double max_abs(const Matrix& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

// Sizes straddle kParallelThreshold so both code paths run.
TEST_SUITE("kernels") {
  TEST_CASE("kron: parallel matches serial bit for bit") {
    Rng rng(21);
    for (Index n : {3, 12, 40}) {
      const Matrix A = gaussian(n, n + 1, rng), B = gaussian(n - 1, n, rng);
      CHECK(max_abs(kernels::kron(A, B) - kernels::serial::kron(A, B)) == 0.0);
    }
  }

  TEST_CASE("rearrange2 and its inverse") {
    Rng rng(22);
    for (BlockShape s : {BlockShape{2, 3, 3, 2}, BlockShape{12, 11, 13, 10}}) {
      const Matrix A = gaussian(s.rows(), s.cols(), rng);
      const Matrix R = kernels::serial::rearrange2(A, s);
      CHECK(max_abs(kernels::rearrange2(A, s) - R) == 0.0);
      CHECK(max_abs(kernels::rearrange2_inv(R, s) - kernels::serial::rearrange2_inv(R, s)) == 0.0);
    }
  }

  TEST_CASE("rearrange3 and its inverse") {
    Rng rng(23);
    for (TripleShape s : {TripleShape{2, 2, 2, 2, 2, 2}, TripleShape{5, 6, 5, 5, 6, 5}}) {
      const Matrix A = gaussian(s.rows(), s.cols(), rng);
      const Matrix R = kernels::serial::rearrange3(A, s);
      CHECK(max_abs(kernels::rearrange3(A, s) - R) == 0.0);
      CHECK(max_abs(kernels::rearrange3_inv(R, s) - kernels::serial::rearrange3_inv(R, s)) == 0.0);
    }
  }

  TEST_CASE("partial trace") {
    Rng rng(24);
    for (Index p : {2, 13}) {
      const Matrix X = gaussian(p * p, p * p, rng);
      CHECK(max_abs(kernels::partial_trace(X, p) - kernels::serial::partial_trace(X, p)) <= 1e-12);
    }
  }

  TEST_CASE("structure means") {
    Rng rng(25);
    for (Index n : {4, 150}) {
      const Matrix M = gaussian(n, n, rng);
      CHECK(max_abs(kernels::antidiagonal_mean(M) - kernels::serial::antidiagonal_mean(M)) <= 1e-13);
      CHECK(max_abs(kernels::diagonal_mean(M) - kernels::serial::diagonal_mean(M)) <= 1e-13);
      CHECK(max_abs(kernels::circulant_mean(M) - kernels::serial::circulant_mean(M)) <= 1e-13);
    }
  }

  TEST_CASE("antidiagonal mean of a small matrix") {
    const Matrix M = (Matrix(2, 3) << 1, 2, 3, 4, 5, 6).finished();
    const Matrix expect = (Matrix(2, 3) << 1, 3, 4, 3, 4, 6).finished();
    CHECK(max_abs(kernels::serial::antidiagonal_mean(M) - expect) <= 1e-15);
  }

  TEST_CASE("schatten roots") {
    Rng rng(26);
    for (Index n : {5, 500}) {
      const Vector s = gaussian_vector(n, rng).cwiseAbs() * 3.0;
      for (double p : {1.5, 2.0, 3.0}) {
        const Vector a = kernels::schatten_roots(s, 0.7, p);
        CHECK(max_abs(a - kernels::serial::schatten_roots(s, 0.7, p)) == 0.0);
        for (Index i = 0; i < n; ++i) {
          CHECK(a(i) >= 0.0);
          CHECK(a(i) <= s(i));
          CHECK(std::abs(p * std::pow(a(i), p - 1) + 0.7 * (a(i) - s(i))) <= 1e-10 * (1 + s(i)));
        }
      }
    }
  }
}

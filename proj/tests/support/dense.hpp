#pragma once

// Small dense-matrix oracle for stabilizer tests (a handful of qubits only).

#include <complex>
#include <cstddef>
#include <vector>

#include "lxe/pauli.hpp"

namespace oracle {

using cd = std::complex<double>;

struct Matrix {
  std::size_t dim = 0;
  std::vector<cd> a;

  explicit Matrix(std::size_t d = 0) : dim(d), a(d * d) {}
  static Matrix identity(std::size_t d) {
    Matrix m(d);
    for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
    return m;
  }
  cd& operator()(std::size_t i, std::size_t j) { return a[i * dim + j]; }
  cd operator()(std::size_t i, std::size_t j) const { return a[i * dim + j]; }

  Matrix operator*(const Matrix& o) const {
    Matrix r(dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t k = 0; k < dim; ++k) {
        const cd v = (*this)(i, k);
        if (v == cd{}) continue;
        for (std::size_t j = 0; j < dim; ++j) r(i, j) += v * o(k, j);
      }
    return r;
  }
  Matrix operator+(const Matrix& o) const {
    Matrix r = *this;
    for (std::size_t i = 0; i < a.size(); ++i) r.a[i] += o.a[i];
    return r;
  }
  Matrix operator*(cd s) const {
    Matrix r = *this;
    for (auto& v : r.a) v *= s;
    return r;
  }
  Matrix dagger() const {
    Matrix r(dim);
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
  }
  cd trace() const {
    cd t = 0;
    for (std::size_t i = 0; i < dim; ++i) t += (*this)(i, i);
    return t;
  }
  double distance(const Matrix& o) const {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - o.a[i]));
    return d;
  }
};

inline Matrix kron(const Matrix& x, const Matrix& y) {
  Matrix r(x.dim * y.dim);
  for (std::size_t i = 0; i < x.dim; ++i)
    for (std::size_t j = 0; j < x.dim; ++j)
      for (std::size_t k = 0; k < y.dim; ++k)
        for (std::size_t l = 0; l < y.dim; ++l) r(i * y.dim + k, j * y.dim + l) = x(i, j) * y(k, l);
  return r;
}

inline Matrix single(char c) {
  Matrix m(2);
  const cd i{0, 1};
  switch (c) {
    case 'I': m(0, 0) = 1; m(1, 1) = 1; break;
    case 'X': m(0, 1) = 1; m(1, 0) = 1; break;
    case 'Y': m(0, 1) = -i; m(1, 0) = i; break;
    case 'Z': m(0, 0) = 1; m(1, 1) = -1; break;
  }
  return m;
}

/// Site 0 is the most significant tensor factor.
inline Matrix pauli_matrix(const lxe::PauliOperator& p) {
  Matrix m = Matrix::identity(1);
  for (std::size_t j = 0; j < p.n_sites(); ++j) {
    const char c = p.x(j) ? (p.z(j) ? 'Y' : 'X') : (p.z(j) ? 'Z' : 'I');
    m = kron(m, single(c));
  }
  return m * cd(p.sign());
}

/// rho = prod_i (1 + g_i)/2, normalised to unit trace.
inline Matrix density_from_generators(std::size_t n, const std::vector<lxe::PauliOperator>& gens) {
  const std::size_t d = std::size_t{1} << n;
  Matrix rho = Matrix::identity(d);
  for (const auto& g : gens) rho = rho * ((Matrix::identity(d) + pauli_matrix(g)) * cd(0.5));
  const cd t = rho.trace();
  return rho * (1.0 / t);
}

inline double expectation(const Matrix& rho, const lxe::PauliOperator& p) {
  return (rho * pauli_matrix(p)).trace().real();
}

/// Post-measurement state for outcome s in {+1,-1}.
inline Matrix project(const Matrix& rho, const lxe::PauliOperator& p, int s) {
  const Matrix proj = (Matrix::identity(rho.dim) + pauli_matrix(p) * cd(s)) * cd(0.5);
  Matrix r = proj * rho * proj;
  return r * (1.0 / r.trace());
}

inline Matrix dephase(const Matrix& rho, const lxe::PauliOperator& p) {
  const Matrix pm = pauli_matrix(p);
  return (rho + pm * rho * pm) * cd(0.5);
}

}  // namespace oracle

// Copyright 2026 The qrc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QRC_LINALG_HPP
#define QRC_LINALG_HPP

#include <algorithm>
#include <complex>
#include <cstddef>
#include <vector>

#include "qrc/common.hpp"

namespace qrc {

using cx = std::complex<double>;

// Small dense row-major matrix. Everything here targets dimensions of at
// most 64 (6 qubits) or 16 (two-qubit superoperators), so plain cubic
// algorithms are used throughout.
template <class T>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(size_t rows, size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, T{}) {}
  Mat(size_t rows, size_t cols, std::initializer_list<T> vals)
      : rows_(rows), cols_(cols), a_(vals) {
    if (a_.size() != rows * cols) throw InternalError("matrix initializer size mismatch");
  }

  static Mat identity(size_t n) {
    Mat m(n, n);
    for (size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  T& operator()(size_t r, size_t c) { return a_[r * cols_ + c]; }
  const T& operator()(size_t r, size_t c) const { return a_[r * cols_ + c]; }

  Mat operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw InternalError("matrix product shape mismatch");
    Mat out(rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i) {
      for (size_t k = 0; k < cols_; ++k) {
        const T aik = a_[i * cols_ + k];
        if (aik == T{}) continue;
        const T* brow = &o.a_[k * o.cols_];
        T* orow = &out.a_[i * o.cols_];
        for (size_t j = 0; j < o.cols_; ++j) orow[j] += aik * brow[j];
      }
    }
    return out;
  }

  Mat operator+(const Mat& o) const {
    Mat out = *this;
    for (size_t i = 0; i < a_.size(); ++i) out.a_[i] += o.a_[i];
    return out;
  }

  Mat operator-(const Mat& o) const {
    Mat out = *this;
    for (size_t i = 0; i < a_.size(); ++i) out.a_[i] -= o.a_[i];
    return out;
  }

  Mat operator*(T s) const {
    Mat out = *this;
    for (auto& v : out.a_) v *= s;
    return out;
  }

  Mat& operator+=(const Mat& o) {
    for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }

  Mat transpose() const {
    Mat out(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  // Conjugate transpose. For real T this is just the transpose.
  Mat adjoint() const {
    Mat out(cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) out(j, i) = conj_value((*this)(i, j));
    return out;
  }

  T trace() const {
    T t{};
    for (size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  double norm_fro() const {
    double s = 0;
    for (const auto& v : a_) s += std::norm(cx(v));
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0;
    for (const auto& v : a_) m = std::max(m, std::abs(cx(v)));
    return m;
  }

  const std::vector<T>& data() const { return a_; }

 private:
  static T conj_value(const T& v) {
    if constexpr (std::is_same_v<T, cx>) {
      return std::conj(v);
    } else {
      return v;
    }
  }

  size_t rows_, cols_;
  std::vector<T> a_;
};

using CMat = Mat<cx>;
using RMat = Mat<double>;

template <class T>
Mat<T> operator*(T s, const Mat<T>& m) {
  return m * s;
}

template <class T>
Mat<T> kron(const Mat<T>& a, const Mat<T>& b) {
  Mat<T> out(a.rows() * b.rows(), a.cols() * b.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) {
      const T aij = a(i, j);
      if (aij == T{}) continue;
      for (size_t k = 0; k < b.rows(); ++k)
        for (size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

inline CMat to_complex(const RMat& m) {
  CMat out(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

// Strips a complex matrix known to be real up to numerical noise.
inline RMat to_real(const CMat& m, double tol = 1e-9) {
  RMat out(m.rows(), m.cols());
  for (size_t i = 0; i < m.rows(); ++i)
    for (size_t j = 0; j < m.cols(); ++j) {
      if (std::abs(m(i, j).imag()) > tol)
        throw InternalError("matrix has unexpected imaginary part");
      out(i, j) = m(i, j).real();
    }
  return out;
}

// Solves A X = B by LU decomposition with partial pivoting.
template <class T>
Mat<T> solve(Mat<T> a, Mat<T> b) {
  const size_t n = a.rows();
  if (a.cols() != n || b.rows() != n) throw InternalError("solve shape mismatch");
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    double best = std::abs(cx(a(col, col)));
    for (size_t r = col + 1; r < n; ++r) {
      double v = std::abs(cx(a(r, col)));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) throw InternalError("singular matrix in solve");
    if (piv != col) {
      for (size_t c = 0; c < n; ++c) std::swap(a(col, c), a(piv, c));
      for (size_t c = 0; c < b.cols(); ++c) std::swap(b(col, c), b(piv, c));
    }
    const T d = a(col, col);
    for (size_t r = col + 1; r < n; ++r) {
      const T f = a(r, col) / d;
      if (f == T{}) continue;
      a(r, col) = T{};
      for (size_t c = col + 1; c < n; ++c) a(r, c) -= f * a(col, c);
      for (size_t c = 0; c < b.cols(); ++c) b(r, c) -= f * b(col, c);
    }
  }
  // Back substitution.
  Mat<T> x(n, b.cols());
  for (size_t ri = n; ri-- > 0;) {
    for (size_t c = 0; c < b.cols(); ++c) {
      T s = b(ri, c);
      for (size_t k = ri + 1; k < n; ++k) s -= a(ri, k) * x(k, c);
      x(ri, c) = s / a(ri, ri);
    }
  }
  return x;
}

template <class T>
Mat<T> inverse(const Mat<T>& a) {
  return solve(a, Mat<T>::identity(a.rows()));
}

// Eigenvalues of a Hermitian matrix by the cyclic complex Jacobi method.
// Returned ascending.
inline std::vector<double> hermitian_eigenvalues(CMat a) {
  const size_t n = a.rows();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (size_t p = 0; p < n; ++p)
      for (size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (off < 1e-26) break;
    for (size_t p = 0; p < n; ++p) {
      for (size_t q = p + 1; q < n; ++q) {
        const cx apq = a(p, q);
        if (std::abs(apq) < 1e-300) continue;
        // Unitary rotation in the (p, q) plane that zeroes a(p, q).
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double absApq = std::abs(apq);
        const cx phase = apq / absApq;
        const double tau = (aqq - app) / (2.0 * absApq);
        const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const cx s = phase * (t * c);
        // A <- J^H A J with J = [[c, s], [-conj(s), c]] acting on (p, q).
        for (size_t k = 0; k < n; ++k) {
          const cx akp = a(k, p);
          const cx akq = a(k, q);
          a(k, p) = c * akp - std::conj(s) * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (size_t k = 0; k < n; ++k) {
          const cx apk = a(p, k);
          const cx aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = std::conj(s) * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (size_t i = 0; i < n; ++i) ev[i] = a(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

namespace detail {

// Householder reduction to upper Hessenberg form, in place.
inline void hessenberg(CMat& h) {
  const size_t n = h.rows();
  if (n < 3) return;
  for (size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0;
    for (size_t i = k + 1; i < n; ++i) xnorm += std::norm(h(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm < 1e-300) continue;
    cx x0 = h(k + 1, k);
    cx alpha = (std::abs(x0) > 0 ? -(x0 / std::abs(x0)) : cx(-1.0)) * xnorm;
    std::vector<cx> v(n, cx(0));
    for (size_t i = k + 1; i < n; ++i) v[i] = h(i, k);
    v[k + 1] -= alpha;
    double vnorm2 = 0;
    for (size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
    if (vnorm2 < 1e-300) continue;
    // H <- (I - 2 v v^H / |v|^2) H (same from the right).
    for (size_t j = 0; j < n; ++j) {
      cx dot(0);
      for (size_t i = k + 1; i < n; ++i) dot += std::conj(v[i]) * h(i, j);
      dot *= 2.0 / vnorm2;
      for (size_t i = k + 1; i < n; ++i) h(i, j) -= dot * v[i];
    }
    for (size_t i = 0; i < n; ++i) {
      cx dot(0);
      for (size_t j = k + 1; j < n; ++j) dot += h(i, j) * v[j];
      dot *= 2.0 / vnorm2;
      for (size_t j = k + 1; j < n; ++j) h(i, j) -= dot * std::conj(v[j]);
    }
  }
}

inline cx wilkinson_shift(const cx& a, const cx& b, const cx& c, const cx& d) {
  // Eigenvalue of [[a, b], [c, d]] closer to d.
  const cx tr = a + d;
  const cx disc = std::sqrt((a - d) * (a - d) + 4.0 * b * c);
  const cx l1 = (tr + disc) * 0.5;
  const cx l2 = (tr - disc) * 0.5;
  return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

}  // namespace detail

// Eigenvalues of a general complex matrix: Hessenberg reduction followed by
// the explicitly shifted QR iteration with Givens rotations.
inline std::vector<cx> eigenvalues(CMat a) {
  const size_t n = a.rows();
  if (a.cols() != n) throw InternalError("eigenvalues need a square matrix");
  std::vector<cx> ev(n);
  if (n == 0) return ev;
  if (n == 1) return {a(0, 0)};
  detail::hessenberg(a);
  size_t m = n - 1;  // active block is rows/cols [0 .. m]
  int iters = 0;
  const int max_iters = 200 * static_cast<int>(n);
  while (true) {
    // Deflate converged subdiagonal entries.
    while (m > 0) {
      const double sub = std::abs(a(m, m - 1));
      const double scale = std::abs(a(m - 1, m - 1)) + std::abs(a(m, m));
      if (sub <= 1e-15 * std::max(scale, 1e-300)) {
        a(m, m - 1) = 0;
        ev[m] = a(m, m);
        --m;
      } else {
        break;
      }
    }
    if (m == 0) {
      ev[0] = a(0, 0);
      break;
    }
    if (++iters > max_iters) throw InternalError("QR eigenvalue iteration did not converge");
    // Find the top of the unreduced block containing m.
    size_t l = m;
    while (l > 0) {
      const double sub = std::abs(a(l, l - 1));
      const double scale = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
      if (sub <= 1e-15 * std::max(scale, 1e-300)) break;
      --l;
    }
    cx mu = detail::wilkinson_shift(a(m - 1, m - 1), a(m - 1, m), a(m, m - 1), a(m, m));
    if (iters % 30 == 0) {
      // Exceptional shift to break rare limit cycles.
      mu = a(m, m) + cx(0.75 * std::abs(a(m, m - 1)), 0.0);
    }
    // One explicit QR step on the active block: Q R = (H - mu I), H <- R Q + mu I.
    const size_t bs = m - l + 1;
    std::vector<double> cs(bs - 1);
    std::vector<cx> sn(bs - 1);
    for (size_t i = l; i <= m; ++i) a(i, i) -= mu;
    for (size_t i = l; i < m; ++i) {
      // Givens rotation zeroing a(i+1, i) against a(i, i).
      const cx f = a(i, i);
      const cx g = a(i + 1, i);
      const double r = std::sqrt(std::norm(f) + std::norm(g));
      double c;
      cx s;
      if (r < 1e-300) {
        c = 1.0;
        s = cx(0);
      } else {
        c = std::abs(f) / r;
        const cx fp = std::abs(f) > 0 ? f / std::abs(f) : cx(1.0);
        s = fp * std::conj(g) / r;
      }
      cs[i - l] = c;
      sn[i - l] = s;
      for (size_t j = i; j <= m; ++j) {
        const cx t1 = a(i, j);
        const cx t2 = a(i + 1, j);
        a(i, j) = c * t1 + s * t2;
        a(i + 1, j) = -std::conj(s) * t1 + c * t2;
      }
    }
    for (size_t i = l; i < m; ++i) {
      const double c = cs[i - l];
      const cx s = sn[i - l];
      const size_t jmax = std::min(m, i + 1);
      for (size_t j = l; j <= jmax; ++j) {
        const cx t1 = a(j, i);
        const cx t2 = a(j, i + 1);
        a(j, i) = c * t1 + std::conj(s) * t2;
        a(j, i + 1) = -s * t1 + c * t2;
      }
    }
    for (size_t i = l; i <= m; ++i) a(i, i) += mu;
  }
  return ev;
}

// Matrix exponential by scaling and squaring with a truncated Taylor series.
inline CMat expm(const CMat& a) {
  const size_t n = a.rows();
  const double nrm = a.norm_fro();
  int s = 0;
  double scaled = nrm;
  while (scaled > 0.25) {
    scaled *= 0.5;
    ++s;
  }
  CMat b = a * cx(std::ldexp(1.0, -s), 0.0);
  CMat sum = CMat::identity(n);
  CMat term = CMat::identity(n);
  for (int k = 1; k <= 40; ++k) {
    term = term * b;
    term = term * cx(1.0 / k, 0.0);
    sum += term;
    if (term.norm_fro() < 1e-18 * std::max(1.0, sum.norm_fro())) break;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

namespace detail {

// Principal matrix square root by the Denman-Beavers iteration. Requires no
// eigenvalue on the closed negative real axis (the caller checks).
inline CMat sqrtm(const CMat& a) {
  CMat y = a;
  CMat z = CMat::identity(a.rows());
  for (int it = 0; it < 60; ++it) {
    CMat yn = (y + inverse(z)) * cx(0.5, 0.0);
    CMat zn = (z + inverse(y)) * cx(0.5, 0.0);
    const double delta = (yn - y).norm_fro();
    y = yn;
    z = zn;
    if (delta <= 1e-15 * std::max(1.0, y.norm_fro())) return y;
  }
  throw InternalError("matrix square root iteration did not converge");
}

}  // namespace detail

// Principal matrix logarithm by inverse scaling and squaring. The caller is
// responsible for checking that no eigenvalue lies on the closed negative
// real axis; convergence failures are reported as internal errors.
inline CMat logm_principal(CMat a) {
  const size_t n = a.rows();
  const CMat eye = CMat::identity(n);
  int k = 0;
  while ((a - eye).norm_fro() > 0.25) {
    if (k++ > 50) throw InternalError("matrix log scaling did not converge");
    a = detail::sqrtm(a);
  }
  const CMat x = a - eye;
  CMat term = x;
  CMat sum = x;
  for (int j = 2; j <= 60; ++j) {
    term = term * x;
    const CMat contrib = term * cx(((j % 2 == 0) ? -1.0 : 1.0) / j, 0.0);
    sum += contrib;
    if (contrib.norm_fro() < 1e-18 * std::max(1.0, sum.norm_fro())) break;
  }
  return sum * cx(std::ldexp(1.0, k), 0.0);
}

}  // namespace qrc

#endif

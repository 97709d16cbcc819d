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

#ifndef QRC_GATES_HPP
#define QRC_GATES_HPP

#include <array>
#include <cstdint>

#include "qrc/linalg.hpp"

namespace qrc {

// Single-qubit Pauli, 2-bit encoded. The encoding is load-bearing: the
// pseudorandom twirl words are consumed as raw bit pairs with exactly this
// assignment.
enum class Pauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline Pauli pauli_from_code(uint64_t code) { return static_cast<Pauli>(code & 3); }
inline uint8_t pauli_code(Pauli p) { return static_cast<uint8_t>(p); }

inline char pauli_char(Pauli p) { return "IXYZ"[pauli_code(p)]; }

inline Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I':
      return Pauli::I;
    case 'X':
      return Pauli::X;
    case 'Y':
      return Pauli::Y;
    case 'Z':
      return Pauli::Z;
    default:
      throw ConfigError(std::string("unknown Pauli letter '") + c + "'");
  }
}

// Fixed phase conventions for the whole project:
//   Z(phi) = diag(e^{-i phi/2}, e^{+i phi/2})
//   X90    = exp(-i (pi/4) X)
// Every lookup table below depends on these; they are pinned by tests.
inline CMat zrot(double phi) {
  CMat m(2, 2);
  m(0, 0) = std::polar(1.0, -phi / 2.0);
  m(1, 1) = std::polar(1.0, +phi / 2.0);
  return m;
}

inline CMat xrot(double theta) {
  CMat m(2, 2);
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  m(0, 0) = c;
  m(0, 1) = cx(0, -s);
  m(1, 0) = cx(0, -s);
  m(1, 1) = c;
  return m;
}

inline CMat x90_matrix() { return xrot(kPi / 2.0); }

inline CMat pauli_matrix(Pauli p) {
  CMat m(2, 2);
  switch (p) {
    case Pauli::I:
      m(0, 0) = 1;
      m(1, 1) = 1;
      break;
    case Pauli::X:
      m(0, 1) = 1;
      m(1, 0) = 1;
      break;
    case Pauli::Y:
      m(0, 1) = cx(0, -1);
      m(1, 0) = cx(0, 1);
      break;
    case Pauli::Z:
      m(0, 0) = 1;
      m(1, 1) = -1;
      break;
  }
  return m;
}

enum class TwoQubitGateKind : uint8_t { CZ = 0, CNOT = 1, IDENTITY = 2 };

inline const char* gate_kind_name(TwoQubitGateKind k) {
  switch (k) {
    case TwoQubitGateKind::CZ:
      return "cz";
    case TwoQubitGateKind::CNOT:
      return "cnot";
    case TwoQubitGateKind::IDENTITY:
      return "identity";
  }
  return "?";
}

inline TwoQubitGateKind gate_kind_from_name(const std::string& s) {
  if (s == "cz") return TwoQubitGateKind::CZ;
  if (s == "cnot") return TwoQubitGateKind::CNOT;
  if (s == "identity") return TwoQubitGateKind::IDENTITY;
  throw ConfigError("unknown two-qubit gate kind '" + s + "'");
}

// 4x4 matrix of a two-qubit gate in the basis |first, second> with the first
// qubit as the high bit. For CNOT the first qubit is the control.
inline CMat two_qubit_gate_matrix(TwoQubitGateKind kind) {
  CMat m = CMat::identity(4);
  switch (kind) {
    case TwoQubitGateKind::CZ:
      m(3, 3) = -1;
      break;
    case TwoQubitGateKind::CNOT:
      m(2, 2) = 0;
      m(3, 3) = 0;
      m(2, 3) = 1;
      m(3, 2) = 1;
      break;
    case TwoQubitGateKind::IDENTITY:
      break;
  }
  return m;
}

// |Tr(A^H B)| / dim: 1 exactly iff the unitaries agree up to a global phase.
inline double hs_overlap(const CMat& a, const CMat& b) {
  cx t(0);
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) t += std::conj(a(i, j)) * b(i, j);
  return std::abs(t) / static_cast<double>(a.rows());
}

// Max elementwise deviation after removing the best global phase.
inline double deviation_up_to_phase(const CMat& a, const CMat& b) {
  cx t(0);
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) t += std::conj(a(i, j)) * b(i, j);
  const cx phase = std::abs(t) > 1e-12 ? t / std::abs(t) : cx(1.0);
  double dev = 0;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j)
      dev = std::max(dev, std::abs(b(i, j) - phase * a(i, j)));
  return dev;
}

}  // namespace qrc

#endif

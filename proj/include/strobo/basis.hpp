#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "strobo/errors.hpp"

namespace strobo {

// Computational basis convention shared by every module:
//   qubit i (1-based) lives at bit position N - i of the basis index, so
//   qubit 1 is the most significant bit and |00...0> is index 0.
//   Bit value 0 is spin up (z = +1), bit value 1 is spin down (z = -1).

inline constexpr int kMaxQubits = 12;

inline void checkQubitCount(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw SizeError("qubit count " + std::to_string(n_qubits) + " outside [1, " +
                    std::to_string(kMaxQubits) + "]");
  }
}

inline std::uint64_t hilbertDimension(int n_qubits) {
  checkQubitCount(n_qubits);
  return std::uint64_t{1} << n_qubits;
}

inline int bitPosition(int n_qubits, int qubit) { return n_qubits - qubit; }

inline std::uint64_t qubitMask(int n_qubits, int qubit) {
  return std::uint64_t{1} << bitPosition(n_qubits, qubit);
}

/// z eigenvalue (+1 or -1) of `qubit` in basis state `index`.
inline int spinZ(std::uint64_t index, int n_qubits, int qubit) {
  return (index & qubitMask(n_qubits, qubit)) ? -1 : 1;
}

/// Bit pattern of a basis index, entry k holds qubit k+1.
inline std::vector<int> bitsFromIndex(std::uint64_t index, int n_qubits) {
  std::vector<int> bits(static_cast<std::size_t>(n_qubits));
  for (int q = 1; q <= n_qubits; ++q) {
    bits[static_cast<std::size_t>(q - 1)] = (index & qubitMask(n_qubits, q)) ? 1 : 0;
  }
  return bits;
}

inline std::uint64_t indexFromBits(std::span<const int> bits) {
  const int n = static_cast<int>(bits.size());
  std::uint64_t index = 0;
  for (int q = 1; q <= n; ++q) {
    if (bits[static_cast<std::size_t>(q - 1)] != 0) index |= qubitMask(n, q);
  }
  return index;
}

}  // namespace strobo

#pragma once

#include <complex>

#include <Eigen/Core>

namespace spinsync {

using Complex = std::complex<double>;

/// Operators and density matrices in the spin-1 basis. Row/column 0 is m = +1,
/// 1 is m = 0, 2 is m = -1.
using Matrix3 = Eigen::Matrix3cd;

/// Superoperators acting on column-stacked 3x3 matrices: vec(X)[i + 3 j] = X(i, j).
using SuperMatrix = Eigen::Matrix<Complex, 9, 9>;
using SuperVector = Eigen::Matrix<Complex, 9, 1>;

/// Matrix index of the S_z eigenlabel m.
constexpr int index_of(int m) { return 1 - m; }

/// Eigenlabel m of a matrix index.
constexpr int label_of(int index) { return 1 - index; }

/// Coherence sector m - n of the matrix slot (i, j).
constexpr int sector_of_slot(int i, int j) { return j - i; }

constexpr int vec_index(int i, int j) { return i + 3 * j; }

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kDefaultEta = 0.1;

}  // namespace spinsync

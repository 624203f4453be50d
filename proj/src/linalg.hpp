// Copyright 2026 The Echelon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Shared dense linear algebra over exact rationals or doubles. Internal.

#ifndef ECHELON_LINALG_HPP_
#define ECHELON_LINALG_HPP_

#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace echelon {

using Rational = boost::multiprecision::cpp_rational;

template <typename T>
struct Scalar;

template <>
struct Scalar<double> {
  static double from_double(double v) { return v; }
  static double to_double(double v) { return v; }
  static bool is_zero_pivot(double v, double scale) {
    return (v < 0 ? -v : v) <= 1e-11 * scale;
  }
};

template <>
struct Scalar<Rational> {
  static Rational from_double(double v) { return Rational(v); }
  static double to_double(const Rational& v) { return v.convert_to<double>(); }
  static bool is_zero_pivot(const Rational& v, const Rational&) { return v == 0; }
};

template <typename T>
std::vector<std::vector<T>> convert_matrix(const std::vector<std::vector<double>>& m) {
  std::vector<std::vector<T>> out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    out[i].reserve(m[i].size());
    for (double v : m[i]) out[i].push_back(Scalar<T>::from_double(v));
  }
  return out;
}

// Gaussian elimination with partial pivoting; nullopt on singular systems.
template <typename T>
std::optional<std::vector<T>> solve_linear(std::vector<std::vector<T>> a,
                                           std::vector<T> rhs) {
  const int n = static_cast<int>(rhs.size());
  T scale = T(1);
  for (const auto& row : a)
    for (const auto& v : row) {
      T av = v < T(0) ? T(-v) : v;
      if (av > scale) scale = av;
    }
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    T best = T(0);
    for (int r = col; r < n; ++r) {
      T av = a[r][col] < T(0) ? T(-a[r][col]) : a[r][col];
      if (piv < 0 || av > best) {
        piv = r;
        best = av;
      }
    }
    if (piv < 0 || Scalar<T>::is_zero_pivot(a[piv][col], scale)) return std::nullopt;
    std::swap(a[piv], a[col]);
    std::swap(rhs[piv], rhs[col]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      T f = a[r][col] / a[col][col];
      if (f == T(0)) continue;
      for (int j = col; j < n; ++j) a[r][j] -= f * a[col][j];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<T> x(n);
  for (int i = 0; i < n; ++i) x[i] = rhs[i] / a[i][i];
  return x;
}

}  // namespace echelon

#endif  // ECHELON_LINALG_HPP_

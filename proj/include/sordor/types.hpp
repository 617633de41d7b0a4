// Copyright 2026 The Sordor Authors
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

#ifndef SORDOR_TYPES_HPP
#define SORDOR_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace sordor {

inline constexpr const char* kVersion = "1.0.0";

using cplx = std::complex<double>;

using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Matrix8c = Eigen::Matrix<cplx, 8, 8>;
using Vector4c = Eigen::Vector4cd;

inline constexpr cplx kImag{0.0, 1.0};
inline constexpr double kPi = 3.141592653589793238462643383279502884;

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace sordor

#endif  // SORDOR_TYPES_HPP

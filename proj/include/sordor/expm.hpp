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

#ifndef SORDOR_EXPM_HPP
#define SORDOR_EXPM_HPP

#include <cmath>

#include "sordor/types.hpp"

namespace sordor {

// Dense matrix exponential by scaling-and-squaring with a [13/13] Pade
// approximant. Intended for the small (4x4, 8x8) matrices used throughout;
// accurate to roundoff for 1-norms up to ~1e3 after scaling.
template <typename Mat>
Mat expm(const Mat& m) {
  require(all_finite(m), "expm: non-finite entries");

  static const double b[] = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;

  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
  }
  const Mat a = m / std::pow(2.0, squarings);

  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a4 * a2;
  const Mat ident = Mat::Identity();

  const Mat u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                     b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident);
  const Mat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
                b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident;

  Mat r = (v - u).partialPivLu().solve(v + u);
  for (int i = 0; i < squarings; ++i) r = r * r;
  return r;
}

}  // namespace sordor

#endif  // SORDOR_EXPM_HPP

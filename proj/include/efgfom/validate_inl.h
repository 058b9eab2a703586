// Copyright 2026 The efgfom Authors
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


#ifndef EFGFOM_VALIDATE_INL_H_
#define EFGFOM_VALIDATE_INL_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace efgfom {

template <typename GradientFn>
double QuadraticForm(GradientFn&& gradient, const std::vector<double>& x,
                     const std::vector<double>& m) {
  double room = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (m[i] != 0.0) room = std::min(room, x[i] / std::abs(m[i]));
  }
  if (!std::isfinite(room)) return 0.0;
  const double eps = 1e-4 * room;
  std::vector<double> plus(x), minus(x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    plus[i] += eps * m[i];
    minus[i] -= eps * m[i];
  }
  const std::vector<double> gp = gradient(plus);
  const std::vector<double> gm = gradient(minus);
  double q = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) q += m[i] * (gp[i] - gm[i]);
  return q / (2.0 * eps);
}

}  // namespace efgfom

#endif  // EFGFOM_VALIDATE_INL_H_

// Copyright 2026 The dtude Authors
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


#include "dtude/discretize.h"

#include <cmath>

#include <fmt/format.h>

#include "dtude/errors.h"

namespace dtude {

ZohPair ZohDiscretize(const Mat& a, const Mat& b, double ts) {
  if (!(ts > 0.0) || !std::isfinite(ts)) {
    throw InputError(fmt::format("sampling time must be positive, got {}", ts));
  }
  if (a.rows() != a.cols() || b.rows() != a.rows()) {
    throw DimensionError(fmt::format("zoh_discretize: A is {}x{}, B is {}x{}", a.rows(),
                                     a.cols(), b.rows(), b.cols()));
  }
  const Eigen::Index n = a.rows();
  const Eigen::Index p = b.cols();
  Mat aug = Mat::Zero(n + p, n + p);
  aug.topLeftCorner(n, n) = a;
  aug.topRightCorner(n, p) = b;
  const Mat e = matlib::Expm(aug, ts);
  return {e.topLeftCorner(n, n), e.topRightCorner(n, p)};
}

DiscreteSystem BuildSystem(const Mat& a, const Mat& b, const Mat& c, const Mat& am,
                           const Mat& bm, double ts) {
  const Eigen::Index n = a.rows();
  if (c.cols() != n || am.rows() != n || am.cols() != n || bm.rows() != n ||
      bm.cols() != b.cols()) {
    throw DimensionError(fmt::format(
        "build_system: inconsistent shapes A {}x{}, B {}x{}, C {}x{}, Am {}x{}, Bm {}x{}",
        a.rows(), a.cols(), b.rows(), b.cols(), c.rows(), c.cols(), am.rows(), am.cols(),
        bm.rows(), bm.cols()));
  }
  for (const Complex& ev : matlib::Eigenvalues(am)) {
    if (!(ev.real() < 0.0)) {
      throw StabilityError(fmt::format(
          "build_system: reference model is not stable (Am eigenvalue {}{:+}i)", ev.real(),
          ev.imag()));
    }
  }
  const ZohPair plant = ZohDiscretize(a, b, ts);
  const ZohPair ref = ZohDiscretize(am, bm, ts);
  DiscreteSystem sys{plant.f, plant.g, c, ref.f, ref.g, ts};
  const int ctrb = matlib::Rank(matlib::ControllabilityMatrix(sys.fn, sys.gn));
  if (ctrb < n) {
    throw ControllabilityError(
        fmt::format("build_system: (Fn, Gn) is not controllable (rank {} < {})", ctrb, n));
  }
  const int obsv = matlib::Rank(matlib::ObservabilityMatrix(sys.c, sys.fn));
  if (obsv < n) {
    throw ControllabilityError(
        fmt::format("build_system: (C, Fn) is not observable (rank {} < {})", obsv, n));
  }
  const double rho_m = matlib::SpectralRadius(sys.fm);
  if (!(rho_m < 1.0)) {
    throw StabilityError(fmt::format("build_system: rho(Fm) = {} is not < 1", rho_m));
  }
  return sys;
}

}  // namespace dtude

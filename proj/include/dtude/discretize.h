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


#ifndef DTUDE_DISCRETIZE_H_
#define DTUDE_DISCRETIZE_H_

#include "dtude/matlib.h"

namespace dtude {

// Sampled error dynamics e(k+1) = Fn e(k) + Gn u(k) + Ld(k) together with
// the sampled reference model xm(k+1) = Fm xm(k) + Gm r(k).
struct DiscreteSystem {
  Mat fn;
  Mat gn;
  Mat c;
  Mat fm;
  Mat gm;
  double ts = 0.0;

  Eigen::Index states() const { return fn.rows(); }
  Eigen::Index inputs() const { return gn.cols(); }
  Eigen::Index outputs() const { return c.rows(); }
};

struct ZohPair {
  Mat f;
  Mat g;
};

// F = exp(A Ts) and G = int_0^Ts exp(A s) B ds, both read off a single
// exponential of the augmented matrix [[A, B], [0, 0]].
ZohPair ZohDiscretize(const Mat& a, const Mat& b, double ts);

// Discretizes plant and reference model and checks that (Fn, Gn) is
// controllable, (C, Fn) observable and Am Hurwitz.
DiscreteSystem BuildSystem(const Mat& a, const Mat& b, const Mat& c, const Mat& am,
                           const Mat& bm, double ts);

}  // namespace dtude

#endif  // DTUDE_DISCRETIZE_H_

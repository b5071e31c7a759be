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

#ifndef DTUDE_MATLIB_H_
#define DTUDE_MATLIB_H_

// Dense real linear-algebra kernels for small (desk-scale) matrices.
//
// Eigen provides storage and LU factorizations. The spectral routines
// (Hessenberg + shifted QR), the matrix exponential, the discrete Lyapunov
// solver and pole placement are implemented here.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace dtude {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Complex = std::complex<double>;

namespace matlib {

// exp(A * scale) by scaling and squaring with a degree-12 Taylor series.
Mat Expm(const Mat& a, double scale = 1.0);

// Left pseudo-inverse (B^T B)^{-1} B^T of a full-column-rank matrix.
// Throws SingularityError when the Gram matrix is ill-conditioned.
Mat Pinv(const Mat& b);

// All eigenvalues, with multiplicity, via reduction to upper Hessenberg form
// followed by Francis double-shift QR. Throws NumericalError after 500
// iterations without deflation.
std::vector<Complex> Eigenvalues(const Mat& a);

double SpectralRadius(const Mat& a);

// Largest singular value, from the eigenvalues of A^T A.
double SpectralNorm(const Mat& a);

// Numerical rank by symmetric pivoted elimination of the correlation-scaled
// Gram matrix W W^T. `rel_tol` is relative to the leading pivot.
int Rank(const Mat& w, double rel_tol = 1e-10);

// Kalman controllability matrix [G, FG, ..., F^{n-1}G].
Mat ControllabilityMatrix(const Mat& f, const Mat& g);
// Kalman observability matrix [C; CF; ...; CF^{n-1}].
Mat ObservabilityMatrix(const Mat& c, const Mat& f);

// Solves A^T P A - P = -I through the Kronecker-vectorized linear system.
// Requires rho(A) < 1 (StabilityError otherwise). The returned P is
// symmetrized and verified positive definite.
Mat SolveDlyap(const Mat& a);

// Frobenius norm of A^T P A - P + I.
double DlyapResidual(const Mat& a, const Mat& p);

// One single-input chain of a block-decoupled pair (F, G): the states it
// owns and the input column that drives it.
struct InputBlock {
  std::vector<int> states;
  int input = 0;
};

// Gain K with eig(F - G K) = targets, assigned per block by Ackermann's
// formula. `targets[b]` are the closed-loop poles for `blocks[b]` and must be
// closed under conjugation. Placement is verified a posteriori to `tol`.
Mat PlacePoles(const Mat& f, const Mat& g,
               const std::vector<std::vector<Complex>>& targets,
               const std::vector<InputBlock>& blocks, double tol = 1e-8);

// Largest distance between paired elements after greedy nearest matching;
// infinity when the sizes differ.
double MaxEigenvalueMismatch(const std::vector<Complex>& computed,
                             const std::vector<Complex>& expected);

// Monic real polynomial coefficients (highest degree first) with the given
// roots. Throws InputError when the roots are not conjugate-closed.
std::vector<double> PolyFromRoots(const std::vector<Complex>& roots);

}  // namespace matlib
}  // namespace dtude

#endif  // DTUDE_MATLIB_H_

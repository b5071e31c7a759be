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

#include "dtude/matlib.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "dtude/errors.h"

namespace dtude::matlib {
namespace {

constexpr int kQrIterationCap = 500;
constexpr int kTaylorOrder = 12;
// Pinv refuses Gram matrices whose eigenvalue ratio exceeds this.
constexpr double kGramConditionLimit = 1e14;

void RequireSquare(const Mat& a, const char* op) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw DimensionError(fmt::format("{}: expected a non-empty square matrix, got {}x{}",
                                     op, a.rows(), a.cols()));
  }
}

void RequireFinite(const Mat& a, const char* op) {
  if (!a.allFinite()) {
    throw NumericalError(fmt::format("{}: non-finite entries", op));
  }
}

// Similarity scaling by powers of two so that row and column norms match.
void Balance(Mat& a) {
  constexpr double kRadix = 2.0;
  constexpr double kSqrRadix = kRadix * kRadix;
  const Eigen::Index n = a.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double r = 0.0;
      double c = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j != i) {
          c += std::abs(a(j, i));
          r += std::abs(a(i, j));
        }
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / kRadix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= kRadix;
        c *= kSqrRadix;
      }
      g = r * kRadix;
      while (c > g) {
        f /= kRadix;
        c /= kSqrRadix;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
}

// Householder reduction to upper Hessenberg form, in place.
void ReduceToHessenberg(Mat& a) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k + 2 < n; ++k) {
    const Eigen::Index m = n - k - 1;
    Vec v = a.block(k + 1, k, m, 1);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    const double alpha = v(0) > 0.0 ? -norm : norm;
    v(0) -= alpha;
    const double vnorm = v.norm();
    if (vnorm == 0.0) continue;
    v /= vnorm;
    a.block(k + 1, k, m, n - k) -= 2.0 * v * (v.transpose() * a.block(k + 1, k, m, n - k));
    a.block(0, k + 1, n, m) -= 2.0 * (a.block(0, k + 1, n, m) * v) * v.transpose();
    a.block(k + 2, k, m - 1, 1).setZero();
  }
}

double CopySign(double magnitude, double sign) {
  return sign >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

// Francis double-shift QR on an upper Hessenberg matrix (destroys `a`).
std::vector<Complex> HessenbergQr(Mat& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<Complex> roots(n);
  double anorm = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));
  }
  int nn = n - 1;
  int its = 0;
  int total = 0;
  double t = 0.0;
  double p = 0.0, q = 0.0, r = 0.0, s = 0.0, w = 0.0, x = 0.0, y = 0.0, z = 0.0;
  while (nn >= 0) {
    int l = nn;
    for (; l >= 1; --l) {
      s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
      if (s == 0.0) s = anorm;
      if (std::abs(a(l, l - 1)) + s == s) {
        a(l, l - 1) = 0.0;
        break;
      }
    }
    x = a(nn, nn);
    if (l == nn) {
      roots[nn] = Complex(x + t, 0.0);
      --nn;
      its = 0;
      continue;
    }
    y = a(nn - 1, nn - 1);
    w = a(nn, nn - 1) * a(nn - 1, nn);
    if (l == nn - 1) {
      p = 0.5 * (y - x);
      q = p * p + w;
      z = std::sqrt(std::abs(q));
      x += t;
      if (q >= 0.0) {
        z = p + CopySign(z, p);
        roots[nn - 1] = roots[nn] = Complex(x + z, 0.0);
        if (z != 0.0) roots[nn] = Complex(x - w / z, 0.0);
      } else {
        roots[nn - 1] = Complex(x + p, z);
        roots[nn] = Complex(x + p, -z);
      }
      nn -= 2;
      its = 0;
      continue;
    }
    if (total >= kQrIterationCap) {
      throw NumericalError(fmt::format(
          "eigenvalues: QR iteration did not converge after {} iterations", total));
    }
    if (its > 0 && its % 10 == 0) {
      // Exceptional shift to break cycles.
      t += x;
      for (int i = 0; i <= nn; ++i) a(i, i) -= x;
      s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
      y = x = 0.75 * s;
      w = -0.4375 * s * s;
    }
    ++its;
    ++total;
    int m = nn - 2;
    for (; m >= l; --m) {
      z = a(m, m);
      r = x - z;
      s = y - z;
      p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
      q = a(m + 1, m + 1) - z - r - s;
      r = a(m + 2, m + 1);
      s = std::abs(p) + std::abs(q) + std::abs(r);
      p /= s;
      q /= s;
      r /= s;
      if (m == l) break;
      const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
      const double v =
          std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
      if (u + v == v) break;
    }
    for (int i = m + 2; i <= nn; ++i) {
      a(i, i - 2) = 0.0;
      if (i != m + 2) a(i, i - 3) = 0.0;
    }
    for (int k = m; k <= nn - 1; ++k) {
      if (k != m) {
        p = a(k, k - 1);
        q = a(k + 1, k - 1);
        r = 0.0;
        if (k != nn - 1) r = a(k + 2, k - 1);
        x = std::abs(p) + std::abs(q) + std::abs(r);
        if (x != 0.0) {
          p /= x;
          q /= x;
          r /= x;
        }
      }
      s = CopySign(std::sqrt(p * p + q * q + r * r), p);
      if (s == 0.0) continue;
      if (k == m) {
        if (l != m) a(k, k - 1) = -a(k, k - 1);
      } else {
        a(k, k - 1) = -s * x;
      }
      p += s;
      x = p / s;
      y = q / s;
      z = r / s;
      q /= p;
      r /= p;
      for (int j = k; j <= nn; ++j) {
        p = a(k, j) + q * a(k + 1, j);
        if (k != nn - 1) {
          p += r * a(k + 2, j);
          a(k + 2, j) -= p * z;
        }
        a(k + 1, j) -= p * y;
        a(k, j) -= p * x;
      }
      const int mmin = std::min(nn, k + 3);
      for (int i = l; i <= mmin; ++i) {
        p = x * a(i, k) + y * a(i, k + 1);
        if (k != nn - 1) {
          p += z * a(i, k + 2);
          a(i, k + 2) -= p * r;
        }
        a(i, k + 1) -= p * q;
        a(i, k) -= p;
      }
    }
  }
  return roots;
}

Mat Kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

Mat Expm(const Mat& a, double scale) {
  RequireSquare(a, "expm");
  if (!std::isfinite(scale)) throw InputError("expm: non-finite scale");
  RequireFinite(a, "expm");
  const Eigen::Index n = a.rows();
  Mat x = a * scale;
  const double norm = x.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    x /= std::ldexp(1.0, squarings);
  }
  Mat result = Mat::Identity(n, n);
  Mat term = Mat::Identity(n, n);
  for (int k = 1; k <= kTaylorOrder; ++k) {
    term = term * x / static_cast<double>(k);
    result += term;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  RequireFinite(result, "expm");
  return result;
}

Mat Pinv(const Mat& b) {
  if (b.rows() == 0 || b.cols() == 0 || b.rows() < b.cols()) {
    throw DimensionError(fmt::format(
        "pinv: expected a tall or square matrix with full column rank, got {}x{}", b.rows(),
        b.cols()));
  }
  RequireFinite(b, "pinv");
  const Mat gram = b.transpose() * b;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const Complex& ev : Eigenvalues(gram)) {
    lo = std::min(lo, ev.real());
    hi = std::max(hi, ev.real());
  }
  const double condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(condition < kGramConditionLimit)) {
    throw SingularityError(fmt::format(
        "pinv: Gram matrix B^T B is singular to working precision (condition estimate {:.3e})",
        condition));
  }
  return gram.partialPivLu().solve(b.transpose());
}

std::vector<Complex> Eigenvalues(const Mat& a) {
  RequireSquare(a, "eigenvalues");
  RequireFinite(a, "eigenvalues");
  Mat h = a;
  Balance(h);
  ReduceToHessenberg(h);
  return HessenbergQr(h);
}

double SpectralRadius(const Mat& a) {
  double rho = 0.0;
  for (const Complex& ev : Eigenvalues(a)) rho = std::max(rho, std::abs(ev));
  return rho;
}

double SpectralNorm(const Mat& a) {
  if (a.size() == 0) throw DimensionError("spectral_norm: empty matrix");
  double top = 0.0;
  for (const Complex& ev : Eigenvalues(a.transpose() * a)) top = std::max(top, ev.real());
  return std::sqrt(top);
}

int Rank(const Mat& w, double rel_tol) {
  if (w.size() == 0) return 0;
  Mat gram = w.rows() <= w.cols() ? Mat(w * w.transpose()) : Mat(w.transpose() * w);
  const Eigen::Index n = gram.rows();
  Vec scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    scale(i) = gram(i, i) > 0.0 ? 1.0 / std::sqrt(gram(i, i)) : 0.0;
  }
  gram = scale.asDiagonal() * gram * scale.asDiagonal();
  std::vector<bool> used(n, false);
  double lead = 0.0;
  int rank = 0;
  for (Eigen::Index step = 0; step < n; ++step) {
    Eigen::Index piv = -1;
    double best = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!used[i] && gram(i, i) > best) {
        best = gram(i, i);
        piv = i;
      }
    }
    if (piv < 0) break;
    if (rank == 0) lead = best;
    if (best <= rel_tol * lead) break;
    used[piv] = true;
    ++rank;
    const Vec col = gram.col(piv);
    gram -= col * col.transpose() / best;
  }
  return rank;
}

Mat ControllabilityMatrix(const Mat& f, const Mat& g) {
  RequireSquare(f, "controllability_matrix");
  if (g.rows() != f.rows()) throw DimensionError("controllability_matrix: G rows != F rows");
  const Eigen::Index n = f.rows();
  const Eigen::Index p = g.cols();
  Mat w(n, n * p);
  Mat block = g;
  for (Eigen::Index k = 0; k < n; ++k) {
    w.middleCols(k * p, p) = block;
    block = f * block;
  }
  return w;
}

Mat ObservabilityMatrix(const Mat& c, const Mat& f) {
  return ControllabilityMatrix(f.transpose(), c.transpose()).transpose();
}

Mat SolveDlyap(const Mat& a) {
  RequireSquare(a, "solve_dlyap");
  const double rho = SpectralRadius(a);
  if (!(rho < 1.0)) {
    throw StabilityError(fmt::format(
        "solve_dlyap: A is not Schur (spectral radius {:.12g} >= 1)", rho));
  }
  const Eigen::Index n = a.rows();
  const Mat at = a.transpose();
  const Mat system = Kron(at, at) - Mat::Identity(n * n, n * n);
  const Mat identity = Mat::Identity(n, n);
  const Vec rhs = -Eigen::Map<const Vec>(identity.data(), n * n);
  const Eigen::FullPivLU<Mat> lu(system);
  if (!lu.isInvertible()) {
    throw NumericalError("solve_dlyap: Kronecker system is singular");
  }
  Vec vec_p = lu.solve(rhs);
  // One step of iterative refinement.
  vec_p += lu.solve(rhs - system * vec_p);
  Mat p = Eigen::Map<const Mat>(vec_p.data(), n, n);
  p = 0.5 * (p + p.transpose()).eval();
  RequireFinite(p, "solve_dlyap");
  if (Eigen::LLT<Mat>(p).info() != Eigen::Success) {
    throw NumericalError("solve_dlyap: solution is not positive definite");
  }
  return p;
}

double DlyapResidual(const Mat& a, const Mat& p) {
  return (a.transpose() * p * a - p + Mat::Identity(a.rows(), a.cols())).norm();
}

std::vector<double> PolyFromRoots(const std::vector<Complex>& roots) {
  // Conjugate closure: every non-real root needs a partner.
  std::vector<bool> paired(roots.size(), false);
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double tol = 1e-12 * std::max(1.0, std::abs(roots[i]));
    if (std::abs(roots[i].imag()) <= tol || paired[i]) continue;
    bool found = false;
    for (std::size_t j = i + 1; j < roots.size(); ++j) {
      if (!paired[j] && std::abs(roots[j] - std::conj(roots[i])) <= tol) {
        paired[i] = paired[j] = true;
        found = true;
        break;
      }
    }
    if (!found) {
      throw InputError(fmt::format("pole targets are not closed under conjugation ({}{:+}i)",
                                   roots[i].real(), roots[i].imag()));
    }
  }
  std::vector<Complex> coeffs{Complex(1.0, 0.0)};
  for (const Complex& root : roots) {
    std::vector<Complex> next(coeffs.size() + 1, Complex(0.0, 0.0));
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
      next[k] += coeffs[k];
      next[k + 1] -= coeffs[k] * root;
    }
    coeffs = std::move(next);
  }
  std::vector<double> real(coeffs.size());
  for (std::size_t k = 0; k < coeffs.size(); ++k) real[k] = coeffs[k].real();
  return real;
}

double MaxEigenvalueMismatch(const std::vector<Complex>& computed,
                             const std::vector<Complex>& expected) {
  if (computed.size() != expected.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> taken(computed.size(), false);
  double worst = 0.0;
  for (const Complex& target : expected) {
    std::size_t best_index = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < computed.size(); ++i) {
      if (taken[i]) continue;
      const double d = std::abs(computed[i] - target);
      if (d < best) {
        best = d;
        best_index = i;
      }
    }
    taken[best_index] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

Mat PlacePoles(const Mat& f, const Mat& g, const std::vector<std::vector<Complex>>& targets,
               const std::vector<InputBlock>& blocks, double tol) {
  RequireSquare(f, "place_poles");
  const Eigen::Index n = f.rows();
  if (g.rows() != n) throw DimensionError("place_poles: G rows != F rows");
  if (targets.size() != blocks.size()) {
    throw InputError("place_poles: need one target set per block");
  }
  // Ownership map; every state belongs to exactly one block.
  std::vector<int> owner(n, -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const InputBlock& blk = blocks[b];
    if (blk.input < 0 || blk.input >= g.cols()) {
      throw InputError(fmt::format("place_poles: block {} names input {} out of range", b,
                                   blk.input));
    }
    for (int s : blk.states) {
      if (s < 0 || s >= n || owner[s] != -1) {
        throw InputError(fmt::format("place_poles: block {} has invalid or shared state {}", b, s));
      }
      owner[s] = static_cast<int>(b);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (owner[i] < 0) throw InputError(fmt::format("place_poles: state {} is in no block", i));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (owner[i] != owner[j] && f(i, j) != 0.0) {
        throw InputError(fmt::format(
            "place_poles: F couples state {} (block {}) to state {} (block {})", i, owner[i], j,
            owner[j]));
      }
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (owner[i] != static_cast<int>(b) && g(i, blocks[b].input) != 0.0) {
        throw InputError(fmt::format(
            "place_poles: input {} of block {} drives state {} outside the block",
            blocks[b].input, b, i));
      }
    }
  }

  Mat gain = Mat::Zero(g.cols(), n);
  std::vector<Complex> all_targets;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const std::vector<int>& idx = blocks[b].states;
    const Eigen::Index m = static_cast<Eigen::Index>(idx.size());
    if (static_cast<Eigen::Index>(targets[b].size()) != m) {
      throw InputError(fmt::format("place_poles: block {} has {} states but {} targets", b, m,
                                   targets[b].size()));
    }
    Mat fb(m, m);
    Vec gb(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      gb(i) = g(idx[i], blocks[b].input);
      for (Eigen::Index j = 0; j < m; ++j) fb(i, j) = f(idx[i], idx[j]);
    }
    const Mat wc = ControllabilityMatrix(fb, gb);
    if (Rank(wc) < m) {
      throw ControllabilityError(
          fmt::format("place_poles: block {} (input {}) is not controllable", b, blocks[b].input));
    }
    const std::vector<double> coeffs = PolyFromRoots(targets[b]);
    // Horner evaluation of the desired characteristic polynomial at F_b.
    Mat phi = Mat::Identity(m, m) * coeffs[0];
    for (std::size_t k = 1; k < coeffs.size(); ++k) {
      phi = (phi * fb + coeffs[k] * Mat::Identity(m, m)).eval();
    }
    Vec last = Vec::Zero(m);
    last(m - 1) = 1.0;
    const Vec row = wc.transpose().partialPivLu().solve(last);
    const Eigen::RowVectorXd kb = row.transpose() * phi;
    for (Eigen::Index j = 0; j < m; ++j) gain(blocks[b].input, idx[j]) = kb(j);
    all_targets.insert(all_targets.end(), targets[b].begin(), targets[b].end());
  }

  const double mismatch = MaxEigenvalueMismatch(Eigenvalues(f - g * gain), all_targets);
  if (!(mismatch <= tol)) {
    throw NumericalError(fmt::format(
        "place_poles: a-posteriori eigenvalue mismatch {:.3e} exceeds {:.1e}", mismatch, tol));
  }
  return gain;
}

}  // namespace dtude::matlib

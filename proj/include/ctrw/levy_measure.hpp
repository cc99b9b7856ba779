// Copyright 2026 ctrw authors.
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

#ifndef CTRW_LEVY_MEASURE_HPP_
#define CTRW_LEVY_MEASURE_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ctrw/vec.hpp"

namespace ctrw {

// One-dimensional Pareto tail in a fixed direction:
//   eta([u, inf), v) = c * u^(-beta),  c > 0,  beta in (0,1) or (1,2).
// beta == 1 is rejected (delicate drift centering, unsupported).
struct DirectionalTail {
  double c;
  double beta;

  DirectionalTail(double c, double beta);
};

// eta([u, inf)) = c * u^(-beta); strictly decreasing in u.
double pareto_tail(const DirectionalTail& tail, double u);

// Right-continuous inverse sup{u > 0 : pareto_tail(u) >= x} = (c/x)^(1/beta).
double pareto_inverse_tail(const DirectionalTail& tail, double x);

struct SpectralAtom {
  Vec direction;  // unit vector in R^d
  double weight;  // strictly positive; weights sum to 1
};

// Probability measure on the unit sphere: either a finite atom set or the
// uniform (isotropic) measure.
class SpectralMeasure {
 public:
  static SpectralMeasure make_atoms(std::vector<SpectralAtom> atoms);
  static SpectralMeasure make_uniform_sphere(int dimension);

  bool uniform() const { return atoms_.empty(); }
  int dimension() const { return dimension_; }
  const std::vector<SpectralAtom>& atoms() const { return atoms_; }
  std::size_t atom_count() const { return atoms_.size(); }

 private:
  SpectralMeasure() = default;

  int dimension_ = 0;
  std::vector<SpectralAtom> atoms_;  // empty means uniform on the sphere
};

enum class CenteringMode {
  kNone,      // all beta < 1: truncation threshold tau = 0, no centering
  kFullMean,  // all beta > 1: tau = inf; requires a symmetric spectral measure
};

// Levy measure of the spatial limit via radial decomposition: spectral
// measure sigma plus a Pareto tail per direction. Uniform-sphere models carry
// a single shared tail (the multivariate stable case).
class LevyMeasureModel {
 public:
  LevyMeasureModel(SpectralMeasure spectral, std::vector<DirectionalTail> tails);

  int dimension() const { return spectral_.dimension(); }
  const SpectralMeasure& spectral() const { return spectral_; }
  const std::vector<DirectionalTail>& tails() const { return tails_; }
  const DirectionalTail& tail_of(std::size_t atom_index) const;
  CenteringMode centering_mode() const { return centering_mode_; }
  bool symmetric() const { return symmetric_; }
  bool axis_aligned() const { return axis_aligned_; }

  // eta([u, inf), v) for the given atom; strictly decreasing in u.
  double tail(double u, std::size_t atom_index) const;

  // Right-continuous inverse sup{u > 0 : tail(u) >= x} = (c/x)^(1/beta).
  double inverse_tail(double x, std::size_t atom_index) const;

  // Centering integral -int_{eps <= |x| <= tau} x deta(x) per unit time.
  // Zero when centering is none (empty range) and zero by symmetry in the
  // full-mean case, which is the only supported beta > 1 regime.
  Vec compensator(double eps) const;

 private:
  SpectralMeasure spectral_;
  std::vector<DirectionalTail> tails_;
  CenteringMode centering_mode_ = CenteringMode::kNone;
  bool symmetric_ = false;
  bool axis_aligned_ = false;
};

// Per-atom closed form of the centering integral for beta > 1, tau = inf:
//   weight * c * beta * eps^(1-beta) / (beta - 1) * direction.
// For beta < 1 the integration range is empty (tau = 0) and the result is 0.
Vec atom_compensator(double eps, const SpectralAtom& atom,
                     const DirectionalTail& tail);

// Levy measure of the temporal limit: stable subordinator with index
// alpha in (0,1) and tail c_time * u^(-alpha).
struct SubordinatorTail {
  double alpha;
  double c_time;

  SubordinatorTail(double alpha, double c_time);
};

// (c_time / x)^(1/alpha): maps Poisson arrival levels to subordinator jumps.
double subordinator_inverse_tail(double x, const SubordinatorTail& sub);

// Norming sequences: b_n for the temporal sums, diagonal A_n for the spatial
// sums. b_n = n^(1/alpha) makes n * P(J > b_n x) = c_time * x^(-alpha) exact
// for the engine's Pareto waiting times. A_n has entry n^(-1/beta_i) for the
// atom(s) on axis +-e_i; uniform-sphere (or equal-beta) models get the scalar
// n^(-1/beta) on every axis.
struct Normalization {
  double b_n;
  std::vector<double> spatial_diag;  // diagonal of A_n, length d
};

Normalization normalization(std::uint64_t n, const LevyMeasureModel& model,
                            const SubordinatorTail& sub);

}  // namespace ctrw

#endif  // CTRW_LEVY_MEASURE_HPP_

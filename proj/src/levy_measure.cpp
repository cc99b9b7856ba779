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

#include "ctrw/levy_measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ctrw {

namespace {

constexpr double kGeomTol = 1e-12;

bool close(double a, double b) { return std::abs(a - b) <= kGeomTol; }

bool is_negation(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!close(a[i], -b[i])) return false;
  }
  return true;
}

bool same_direction(const Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!close(a[i], b[i])) return false;
  }
  return true;
}

// +-e_i within tolerance; returns the axis or -1.
int axis_of(const Vec& v) {
  int axis = -1;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (close(std::abs(v[i]), 1.0)) {
      if (axis >= 0) return -1;
      axis = static_cast<int>(i);
    } else if (!close(v[i], 0.0)) {
      return -1;
    }
  }
  return axis;
}

}  // namespace

DirectionalTail::DirectionalTail(double c_in, double beta_in)
    : c(c_in), beta(beta_in) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("DirectionalTail: c must be positive");
  }
  if (!(beta > 0.0 && beta < 2.0) || beta == 1.0) {
    throw std::invalid_argument(
        "DirectionalTail: beta must lie in (0,1) or (1,2); beta == 1 is "
        "unsupported");
  }
}

SpectralMeasure SpectralMeasure::make_atoms(std::vector<SpectralAtom> atoms) {
  if (atoms.empty()) {
    throw std::invalid_argument("SpectralMeasure: atom list is empty");
  }
  const std::size_t d = atoms.front().direction.size();
  if (d == 0) {
    throw std::invalid_argument("SpectralMeasure: zero-dimensional direction");
  }
  double weight_sum = 0.0;
  for (const auto& a : atoms) {
    if (a.direction.size() != d) {
      throw std::invalid_argument("SpectralMeasure: mixed dimensions");
    }
    if (std::abs(norm(a.direction) - 1.0) > kGeomTol) {
      throw std::invalid_argument(
          "SpectralMeasure: direction is not a unit vector");
    }
    if (!(a.weight > 0.0)) {
      throw std::invalid_argument("SpectralMeasure: weight must be positive");
    }
    weight_sum += a.weight;
  }
  if (std::abs(weight_sum - 1.0) > kGeomTol) {
    throw std::invalid_argument("SpectralMeasure: weights must sum to 1");
  }
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (same_direction(atoms[i].direction, atoms[j].direction)) {
        throw std::invalid_argument("SpectralMeasure: duplicate direction");
      }
    }
  }
  SpectralMeasure m;
  m.dimension_ = static_cast<int>(d);
  m.atoms_ = std::move(atoms);
  return m;
}

SpectralMeasure SpectralMeasure::make_uniform_sphere(int dimension) {
  if (dimension < 1) {
    throw std::invalid_argument("SpectralMeasure: dimension must be >= 1");
  }
  SpectralMeasure m;
  m.dimension_ = dimension;
  return m;
}

LevyMeasureModel::LevyMeasureModel(SpectralMeasure spectral,
                                   std::vector<DirectionalTail> tails)
    : spectral_(std::move(spectral)), tails_(std::move(tails)) {
  if (spectral_.uniform()) {
    if (tails_.size() != 1) {
      throw std::invalid_argument(
          "LevyMeasureModel: uniform_sphere requires exactly one shared tail");
    }
  } else if (tails_.size() != spectral_.atom_count()) {
    throw std::invalid_argument(
        "LevyMeasureModel: one tail per spectral atom required");
  }

  bool any_below_one = false;
  bool any_above_one = false;
  for (const auto& t : tails_) {
    (t.beta < 1.0 ? any_below_one : any_above_one) = true;
  }
  if (any_below_one && any_above_one) {
    throw std::invalid_argument(
        "LevyMeasureModel: mixed tail indices across the beta = 1 boundary "
        "are unsupported");
  }
  centering_mode_ =
      any_above_one ? CenteringMode::kFullMean : CenteringMode::kNone;

  if (spectral_.uniform()) {
    symmetric_ = true;  // the uniform measure is symmetric by definition
    axis_aligned_ = false;
  } else {
    const auto& atoms = spectral_.atoms();
    symmetric_ = true;
    for (std::size_t i = 0; i < atoms.size() && symmetric_; ++i) {
      bool paired = false;
      for (std::size_t j = 0; j < atoms.size(); ++j) {
        if (is_negation(atoms[i].direction, atoms[j].direction) &&
            close(atoms[i].weight, atoms[j].weight) &&
            tails_[i].c == tails_[j].c && tails_[i].beta == tails_[j].beta) {
          paired = true;
          break;
        }
      }
      symmetric_ = paired;
    }
    axis_aligned_ = true;
    for (const auto& a : atoms) {
      if (axis_of(a.direction) < 0) {
        axis_aligned_ = false;
        break;
      }
    }
  }

  if (centering_mode_ == CenteringMode::kFullMean && !symmetric_) {
    throw std::invalid_argument(
        "LevyMeasureModel: tail indices above 1 require a symmetric spectral "
        "measure");
  }
}

const DirectionalTail& LevyMeasureModel::tail_of(std::size_t atom_index) const {
  if (spectral_.uniform()) return tails_.front();
  if (atom_index >= tails_.size()) {
    throw std::domain_error("LevyMeasureModel: atom index out of range");
  }
  return tails_[atom_index];
}

double pareto_tail(const DirectionalTail& tail, double u) {
  if (!(u > 0.0)) {
    throw std::domain_error("tail: u must be positive");
  }
  return tail.c * std::pow(u, -tail.beta);
}

double pareto_inverse_tail(const DirectionalTail& tail, double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("inverse_tail: x must be positive");
  }
  return std::pow(tail.c / x, 1.0 / tail.beta);
}

double LevyMeasureModel::tail(double u, std::size_t atom_index) const {
  return pareto_tail(tail_of(atom_index), u);
}

double LevyMeasureModel::inverse_tail(double x, std::size_t atom_index) const {
  return pareto_inverse_tail(tail_of(atom_index), x);
}

Vec LevyMeasureModel::compensator(double eps) const {
  if (!(eps > 0.0)) {
    throw std::domain_error("compensator: eps must be positive");
  }
  // centering none: tau = 0, empty range. full-mean: the constructor has
  // enforced symmetry, under which the atom contributions cancel exactly.
  return zeros(static_cast<std::size_t>(dimension()));
}

Vec atom_compensator(double eps, const SpectralAtom& atom,
                     const DirectionalTail& tail) {
  if (!(eps > 0.0)) {
    throw std::domain_error("atom_compensator: eps must be positive");
  }
  if (tail.beta < 1.0) {
    return zeros(atom.direction.size());
  }
  const double mass = atom.weight * tail.c * tail.beta *
                      std::pow(eps, 1.0 - tail.beta) / (tail.beta - 1.0);
  return scaled(atom.direction, mass);
}

SubordinatorTail::SubordinatorTail(double alpha_in, double c_time_in)
    : alpha(alpha_in), c_time(c_time_in) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument(
        "SubordinatorTail: alpha must lie strictly in (0,1)");
  }
  if (!(c_time > 0.0) || !std::isfinite(c_time)) {
    throw std::invalid_argument("SubordinatorTail: c_time must be positive");
  }
}

double subordinator_inverse_tail(double x, const SubordinatorTail& sub) {
  if (!(x > 0.0)) {
    throw std::domain_error("subordinator_inverse_tail: x must be positive");
  }
  return std::pow(sub.c_time / x, 1.0 / sub.alpha);
}

Normalization normalization(std::uint64_t n, const LevyMeasureModel& model,
                            const SubordinatorTail& sub) {
  if (n < 1) {
    throw std::domain_error("normalization: n must be >= 1");
  }
  Normalization out;
  const double nd = static_cast<double>(n);
  out.b_n = std::pow(nd, 1.0 / sub.alpha);

  const std::size_t d = static_cast<std::size_t>(model.dimension());
  out.spatial_diag.assign(d, 0.0);

  const auto& tails = model.tails();
  const bool equal_beta = std::all_of(
      tails.begin(), tails.end(),
      [&](const DirectionalTail& t) { return t.beta == tails.front().beta; });

  if (model.spectral().uniform() || equal_beta) {
    const double entry = std::pow(nd, -1.0 / tails.front().beta);
    std::fill(out.spatial_diag.begin(), out.spatial_diag.end(), entry);
    return out;
  }
  if (!model.axis_aligned()) {
    throw std::domain_error(
        "normalization: non-axis atoms with unequal beta have no diagonal "
        "normalization");
  }
  // Axis model: entry n^(-1/beta_i) per axis; both signs on an axis must
  // agree on beta, and every axis must carry an atom (fullness).
  std::vector<double> axis_beta(d, 0.0);
  const auto& atoms = model.spectral().atoms();
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    std::size_t axis = 0;
    for (std::size_t j = 0; j < d; ++j) {
      if (std::abs(atoms[i].direction[j]) > 0.5) axis = j;
    }
    const double beta = model.tails()[i].beta;
    if (axis_beta[axis] == 0.0) {
      axis_beta[axis] = beta;
    } else if (axis_beta[axis] != beta) {
      throw std::domain_error(
          "normalization: atoms on the same axis disagree on beta");
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    if (axis_beta[j] == 0.0) {
      throw std::domain_error(
          "normalization: axis model must place an atom on every axis");
    }
    out.spatial_diag[j] = std::pow(nd, -1.0 / axis_beta[j]);
  }
  return out;
}

}  // namespace ctrw

#pragma once

#include <array>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "avtrack/geo.hpp"

namespace avtrack::mlat {

using geo::CartesianPosition;

/// Anchors in a local frame whose origin is anchors[0]; toas aligned with anchors.
struct TdoaMeasurementSet {
  std::vector<CartesianPosition> anchors;
  std::vector<double> toas;  // s
};

enum class RootMultiplicity { Unique, TwoPositive, None };

struct MlatSolution {
  CartesianPosition position;
  double d1 = 0.0;  // range from the emitter to anchors[0], m
  RootMultiplicity root_multiplicity = RootMultiplicity::None;
  double condition_number = 0.0;  // of B^T B
  bool tangent = false;           // discriminant was negative and the vertex was used
};

class MlatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Rank-deficient or badly conditioned anchor layout.
class GeometryError : public MlatError {
 public:
  GeometryError(const std::string& what, double cond) : MlatError(what), condition_number(cond) {}
  double condition_number;
};

class NoSolutionError : public MlatError {
 public:
  using MlatError::MlatError;
};

/// Both positive roots put the emitter above the anchor frame.
class AmbiguityError : public MlatError {
 public:
  AmbiguityError(const MlatSolution& a, const MlatSolution& b)
      : MlatError("two admissible MLAT solutions"), candidates{a, b} {}
  std::array<MlatSolution, 2> candidates;
};

inline constexpr double kMaxConditionNumber = 1e10;

/// d_i1 = (t_i - t_1) c for i = 2..N.
std::vector<double> tdoa_distances(std::span<const double> toas);

/// B q = d1 m + c with B rows = anchors 2..N, m_i = -d_i1, c_i = (D_i^2 - d_i1^2) / 2.
struct LinearSystem {
  Eigen::MatrixX3d B;
  Eigen::VectorXd m;
  Eigen::VectorXd c;
};
LinearSystem build_system(std::span<const CartesianPosition> anchors, std::span<const double> d_i1);

/// Closed-form solution: q = u + d1 v with u = B^+ c, v = B^+ m, and d1 the
/// admissible root of |q|^2 = d1^2. Requires N >= 4 and anchors[0] at the origin.
MlatSolution solve(const TdoaMeasurementSet& meas);

/// Same pipeline for N > 4; the pseudo-inverse is the least-squares fit.
MlatSolution solve_overdetermined(const TdoaMeasurementSet& meas);

/// Anchors and result in an arbitrary common frame; the system is solved with
/// the frame shifted to anchors[origin].
MlatSolution solve_shifted(std::span<const CartesianPosition> anchors, std::span<const double> toas,
                           std::size_t origin = 0);

/// Linearised position covariance for independent per-anchor ToA noise
/// (sigma in seconds), with the emission time treated as unknown.
Eigen::Matrix3d position_covariance(std::span<const CartesianPosition> anchors,
                                    const CartesianPosition& emitter,
                                    std::span<const double> toa_sigma);

}  // namespace avtrack::mlat

#pragma once

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "avtrack/geo.hpp"

namespace avtrack::tracker {

using Vector6d = Eigen::Matrix<double, 6, 1>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

struct TrackState {
  Vector6d s = Vector6d::Zero();  // x y z vx vy vz
  Matrix6d P = Matrix6d::Identity();
  double t = 0.0;
};

/// Constant-velocity model with white-noise acceleration of spectral density
/// sigma_a2 (m^2/s^3) and an optional known acceleration input.
struct MotionModel {
  double sigma_a2 = 1.0;
  Eigen::Vector3d u = Eigen::Vector3d::Zero();
  Eigen::Matrix3d R = default_R();

  static Eigen::Matrix3d default_R();

  Matrix6d Phi(double dt) const;
  Eigen::Matrix<double, 6, 3> beta(double dt) const;
  Matrix6d Q(double dt) const;
  static Eigen::Matrix<double, 3, 6> H();
};

class TrackerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

TrackState initial_state(const geo::CartesianPosition& first_fix, double t, double p0 = 1e6);

TrackState predict(const TrackState& state, const MotionModel& model, double dt);

/// Kalman update with the simple covariance form (I - G H) P, symmetrised.
/// Throws TrackerError if the innovation covariance is numerically singular.
TrackState update(const TrackState& state, const geo::CartesianPosition& z, const MotionModel& model);
/// Same update with the Joseph covariance form.
TrackState update_joseph(const TrackState& state, const geo::CartesianPosition& z,
                         const MotionModel& model);

/// Normalised innovation squared y' S^-1 y of `z` against a predicted state.
double innovation_nis(const TrackState& predicted, const geo::CartesianPosition& z,
                      const MotionModel& model);

struct Fix {
  double t = 0.0;
  geo::CartesianPosition z;
};

/// Initialises from the first fix, then alternates predict/update.
/// Throws std::invalid_argument on non-increasing times.
std::vector<TrackState> track(std::span<const Fix> fixes, const MotionModel& model, double p0 = 1e6);

/// sqrt(dx^2 + dy^2 + (dz / 10)^2)
double localization_error(const geo::CartesianPosition& truth, const geo::CartesianPosition& est);

/// Largest asymmetry and smallest eigenvalue of P.
std::pair<double, double> covariance_health(const Matrix6d& P);

}  // namespace avtrack::tracker

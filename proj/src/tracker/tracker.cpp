#include "avtrack/tracker/tracker.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace avtrack::tracker {

Eigen::Matrix3d MotionModel::default_R() {
  return Eigen::Vector3d(300.0 * 300.0, 300.0 * 300.0, 1000.0 * 1000.0).asDiagonal();
}

Matrix6d MotionModel::Phi(double dt) const {
  Matrix6d F = Matrix6d::Identity();
  F.topRightCorner<3, 3>() = dt * Eigen::Matrix3d::Identity();
  return F;
}

Eigen::Matrix<double, 6, 3> MotionModel::beta(double dt) const {
  Eigen::Matrix<double, 6, 3> b;
  b.topRows<3>() = 0.5 * dt * dt * Eigen::Matrix3d::Identity();
  b.bottomRows<3>() = dt * Eigen::Matrix3d::Identity();
  return b;
}

Matrix6d MotionModel::Q(double dt) const {
  const Eigen::Matrix3d I = Eigen::Matrix3d::Identity();
  Matrix6d q;
  q.topLeftCorner<3, 3>() = dt * dt * dt / 3.0 * I;
  q.topRightCorner<3, 3>() = dt * dt / 2.0 * I;
  q.bottomLeftCorner<3, 3>() = dt * dt / 2.0 * I;
  q.bottomRightCorner<3, 3>() = dt * I;
  return sigma_a2 * q;
}

Eigen::Matrix<double, 3, 6> MotionModel::H() {
  Eigen::Matrix<double, 3, 6> h = Eigen::Matrix<double, 3, 6>::Zero();
  h.leftCols<3>().setIdentity();
  return h;
}

TrackState initial_state(const geo::CartesianPosition& first_fix, double t, double p0) {
  TrackState st;
  st.s.head<3>() = first_fix.vec();
  st.P = p0 * Matrix6d::Identity();
  st.t = t;
  return st;
}

TrackState predict(const TrackState& state, const MotionModel& model, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("predict: dt must be > 0");
  const Matrix6d F = model.Phi(dt);
  TrackState out;
  out.s = F * state.s + model.beta(dt) * model.u;
  out.P = F * state.P * F.transpose() + model.Q(dt);
  out.P = (0.5 * (out.P + out.P.transpose())).eval();
  out.t = state.t + dt;
  return out;
}

namespace {

struct Gain {
  Eigen::Matrix<double, 6, 3> G;
  Eigen::Vector3d innovation;
};

Gain gain(const TrackState& state, const geo::CartesianPosition& z, const MotionModel& model) {
  const auto H = MotionModel::H();
  const Eigen::Matrix3d S = H * state.P * H.transpose() + model.R;
  const Eigen::LDLT<Eigen::Matrix3d> ldlt(S);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || !(ldlt.rcond() > 1e-15))
    throw TrackerError("innovation covariance is singular");
  Gain g;
  g.G = ldlt.solve(H * state.P).transpose();
  g.innovation = z.vec() - H * state.s;
  return g;
}

}  // namespace

TrackState update(const TrackState& state, const geo::CartesianPosition& z, const MotionModel& model) {
  const Gain g = gain(state, z, model);
  TrackState out = state;
  out.s = state.s + g.G * g.innovation;
  out.P = (Matrix6d::Identity() - g.G * MotionModel::H()) * state.P;
  out.P = (0.5 * (out.P + out.P.transpose())).eval();
  return out;
}

TrackState update_joseph(const TrackState& state, const geo::CartesianPosition& z,
                         const MotionModel& model) {
  const Gain g = gain(state, z, model);
  TrackState out = state;
  out.s = state.s + g.G * g.innovation;
  const Matrix6d A = Matrix6d::Identity() - g.G * MotionModel::H();
  out.P = A * state.P * A.transpose() + g.G * model.R * g.G.transpose();
  out.P = (0.5 * (out.P + out.P.transpose())).eval();
  return out;
}

double innovation_nis(const TrackState& predicted, const geo::CartesianPosition& z,
                      const MotionModel& model) {
  const auto H = MotionModel::H();
  const Eigen::Vector3d y = z.vec() - H * predicted.s;
  const Eigen::Matrix3d S = H * predicted.P * H.transpose() + model.R;
  return y.dot(S.ldlt().solve(y));
}

std::vector<TrackState> track(std::span<const Fix> fixes, const MotionModel& model, double p0) {
  std::vector<TrackState> out;
  if (fixes.empty()) return out;
  for (std::size_t i = 1; i < fixes.size(); ++i)
    if (!(fixes[i].t > fixes[i - 1].t)) throw std::invalid_argument("track: fix times must increase");
  TrackState st = update(initial_state(fixes[0].z, fixes[0].t, p0), fixes[0].z, model);
  out.push_back(st);
  for (std::size_t i = 1; i < fixes.size(); ++i) {
    st = update(predict(st, model, fixes[i].t - st.t), fixes[i].z, model);
    out.push_back(st);
  }
  return out;
}

double localization_error(const geo::CartesianPosition& truth, const geo::CartesianPosition& est) {
  const double dx = truth.x - est.x;
  const double dy = truth.y - est.y;
  const double dz = (truth.z - est.z) / 10.0;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

std::pair<double, double> covariance_health(const Matrix6d& P) {
  const double asym = (P - P.transpose()).cwiseAbs().maxCoeff();
  const Eigen::SelfAdjointEigenSolver<Matrix6d> es(0.5 * (P + P.transpose()));
  return {asym, es.eigenvalues().minCoeff()};
}

}  // namespace avtrack::tracker

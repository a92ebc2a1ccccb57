#include "avtrack/mlat/mlat.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "avtrack/constants.hpp"

namespace avtrack::mlat {

std::vector<double> tdoa_distances(std::span<const double> toas) {
  if (toas.size() < 2) throw std::invalid_argument("tdoa_distances needs at least 2 ToAs");
  std::vector<double> d(toas.size() - 1);
  for (std::size_t i = 1; i < toas.size(); ++i) d[i - 1] = (toas[i] - toas[0]) * kSpeedOfLight;
  return d;
}

LinearSystem build_system(std::span<const CartesianPosition> anchors, std::span<const double> d_i1) {
  if (anchors.size() != d_i1.size() + 1)
    throw std::invalid_argument("build_system: need one TDoA per non-reference anchor");
  const auto n = static_cast<Eigen::Index>(d_i1.size());
  LinearSystem sys{Eigen::MatrixX3d(n, 3), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Vector3d a = anchors[static_cast<std::size_t>(i) + 1].vec();
    const double d = d_i1[static_cast<std::size_t>(i)];
    sys.B.row(i) = a.transpose();
    sys.m(i) = -d;
    sys.c(i) = 0.5 * (a.squaredNorm() - d * d);
  }
  return sys;
}

MlatSolution solve(const TdoaMeasurementSet& meas) {
  const std::size_t n = meas.anchors.size();
  if (n < 4) throw std::invalid_argument("MLAT needs at least 4 anchors");
  if (meas.toas.size() != n) throw std::invalid_argument("anchors and ToAs differ in length");
  if (meas.anchors[0].vec().norm() > 1e-9)
    throw std::invalid_argument("anchors[0] must sit at the frame origin");

  const auto d = tdoa_distances(meas.toas);
  const LinearSystem sys = build_system(meas.anchors, d);

  const Eigen::JacobiSVD<Eigen::MatrixX3d> svd(sys.B);
  const auto& sv = svd.singularValues();
  const double cond = sv(2) > 0.0 ? (sv(0) / sv(2)) * (sv(0) / sv(2)) : INFINITY;
  const Eigen::ColPivHouseholderQR<Eigen::MatrixX3d> qr(sys.B);
  if (qr.rank() < 3) throw GeometryError("anchor matrix is rank deficient", cond);
  if (!(cond <= kMaxConditionNumber)) throw GeometryError("anchor geometry is ill-conditioned", cond);

  const Eigen::Vector3d u = qr.solve(sys.c);
  const Eigen::Vector3d v = qr.solve(sys.m);

  // |u + d1 v|^2 = d1^2
  const double a = v.squaredNorm() - 1.0;
  const double b = 2.0 * u.dot(v);
  const double c = u.squaredNorm();

  auto make = [&](double d1) {
    MlatSolution s;
    s.d1 = d1;
    s.position = CartesianPosition::from(u + d1 * v);
    s.condition_number = cond;
    return s;
  };

  std::vector<double> roots;
  bool tangent = false;
  if (std::abs(a) < 1e-12) {
    if (b != 0.0) roots.push_back(-c / b);
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) {
      // Noise pushed the pair of roots off the real axis; the vertex is the
      // closest real candidate.
      roots.push_back(-b / (2.0 * a));
      tangent = true;
    } else {
      const double sq = std::sqrt(disc);
      // Numerically stable pair.
      const double qv = -0.5 * (b + std::copysign(sq, b));
      roots.push_back(qv / a);
      if (qv != 0.0) roots.push_back(c / qv);
    }
  }

  std::vector<double> positive;
  for (double r : roots)
    if (r >= 0.0 && std::isfinite(r)) positive.push_back(r);
  if (positive.empty()) throw NoSolutionError("no non-negative root for d1");

  if (positive.size() == 1) {
    MlatSolution s = make(positive[0]);
    s.root_multiplicity = RootMultiplicity::Unique;
    s.tangent = tangent;
    return s;
  }
  MlatSolution s0 = make(positive[0]);
  MlatSolution s1 = make(positive[1]);
  s0.root_multiplicity = s1.root_multiplicity = RootMultiplicity::TwoPositive;
  const bool up0 = s0.position.z > 0.0;
  const bool up1 = s1.position.z > 0.0;
  if (up0 && up1) throw AmbiguityError(s0, s1);
  if (up0) return s0;
  if (up1) return s1;
  throw NoSolutionError("both roots place the emitter below the anchor frame");
}

MlatSolution solve_overdetermined(const TdoaMeasurementSet& meas) {
  if (meas.anchors.size() <= 4) throw std::invalid_argument("solve_overdetermined needs N > 4");
  return solve(meas);
}

MlatSolution solve_shifted(std::span<const CartesianPosition> anchors, std::span<const double> toas,
                           std::size_t origin) {
  if (origin >= anchors.size()) throw std::out_of_range("origin anchor index");
  if (toas.size() != anchors.size()) throw std::invalid_argument("anchors and ToAs differ in length");
  const Eigen::Vector3d o = anchors[origin].vec();
  TdoaMeasurementSet m;
  m.anchors.push_back({0.0, 0.0, 0.0});
  m.toas.push_back(toas[origin]);
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    if (i == origin) continue;
    m.anchors.push_back(CartesianPosition::from(anchors[i].vec() - o));
    m.toas.push_back(toas[i]);
  }
  auto shift_back = [&](MlatSolution s) {
    s.position = CartesianPosition::from(s.position.vec() + o);
    return s;
  };
  try {
    return shift_back(solve(m));
  } catch (AmbiguityError& e) {
    throw AmbiguityError(shift_back(e.candidates[0]), shift_back(e.candidates[1]));
  }
}

Eigen::Matrix3d position_covariance(std::span<const CartesianPosition> anchors,
                                    const CartesianPosition& emitter,
                                    std::span<const double> toa_sigma) {
  if (anchors.size() != toa_sigma.size() || anchors.size() < 4)
    throw std::invalid_argument("position_covariance: need >= 4 anchors with matching sigmas");
  const auto n = static_cast<Eigen::Index>(anchors.size());
  // Unknowns: position (m) and emission time scaled to metres.
  Eigen::MatrixXd J(n, 4);
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    Eigen::Vector3d dir = emitter.vec() - anchors[k].vec();
    const double r = dir.norm();
    if (r > 0.0) dir /= r;
    J.row(i) << dir.transpose(), 1.0;
    const double s = toa_sigma[k] * kSpeedOfLight;
    w(i) = 1.0 / (s * s);
  }
  const Eigen::Matrix4d info = J.transpose() * w.asDiagonal() * J;
  const Eigen::Matrix4d cov = info.completeOrthogonalDecomposition().pseudoInverse();
  return cov.topLeftCorner<3, 3>();
}

}  // namespace avtrack::mlat

#include "posespace/representation.hpp"
#include "posespace/errors.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <numbers>

namespace posespace {

namespace {

AmbientVector
make_vector(int n)
{
  AmbientVector v(n);
  v.setZero();
  return v;
}

AmbientVector
matrix_representative(const Mat3& m, const Vec3& t)
{
  AmbientVector v(12);
  v.head<9>() = vec(m);
  v.tail<3>() = t;
  return v;
}

AmbientVector
axis_representative(const Vec3& a, const Vec3& t)
{
  AmbientVector v(6);
  v.head<3>() = a;
  v.tail<3>() = t;
  return v;
}

AmbientVector
planar_representative(double c, double s, double lambda, const Vec3& t)
{
  AmbientVector v(4);
  v << lambda * c, lambda * s, t.x(), t.y();
  return v;
}

Mat3
unvec(const AmbientVector& x)
{
  return Eigen::Map<const Mat3>(x.data());
}

} // namespace

AmbientVector
first_representative(const ObjectModel& model, const Pose& pose)
{
  const Mat3& r = pose.rotation();
  const Vec3& t = pose.translation();
  switch (model.kind()) {
    case SymmetryClass::Spherical: {
      AmbientVector v(3);
      v = t;
      return v;
    }
    case SymmetryClass::Revolution:
    case SymmetryClass::RevolutionRotoreflection:
      return axis_representative(model.lambda() * r.col(2), t);
    case SymmetryClass::None3D:
    case SymmetryClass::Finite:
      return matrix_representative(r * model.lambda_matrix(), t);
    case SymmetryClass::Circular2D: {
      AmbientVector v(2);
      v << t.x(), t.y();
      return v;
    }
    case SymmetryClass::None2D:
    case SymmetryClass::Cyclic2D: {
      double theta = pose.transform().planar_angle();
      return planar_representative(std::cos(theta), std::sin(theta),
                                   model.lambda(), t);
    }
  }
  return make_vector(model.ambient_dim());
}

std::vector<AmbientVector>
representatives(const ObjectModel& model, const Pose& pose)
{
  std::vector<AmbientVector> out;
  out.reserve(model.representative_count());
  const Mat3& r = pose.rotation();
  const Vec3& t = pose.translation();
  switch (model.kind()) {
    case SymmetryClass::RevolutionRotoreflection: {
      Vec3 a = model.lambda() * r.col(2);
      out.push_back(axis_representative(a, t));
      out.push_back(axis_representative(-a, t));
      break;
    }
    case SymmetryClass::Finite:
      for (const auto& g : model.group().elements())
        out.push_back(matrix_representative(r * g * model.lambda_matrix(), t));
      break;
    case SymmetryClass::Cyclic2D: {
      double theta = pose.transform().planar_angle();
      double c = std::cos(theta), s = std::sin(theta);
      int n = model.cyclic_order();
      for (int k = 0; k < n; ++k) {
        double a = 2.0 * std::numbers::pi * k / n;
        double ck = std::cos(a), sk = std::sin(a);
        out.push_back(planar_representative(c * ck - s * sk, s * ck + c * sk,
                                            model.lambda(), t));
      }
      break;
    }
    default:
      out.push_back(first_representative(model, pose));
      break;
  }
  return out;
}

AmbientSymmetry
AmbientSymmetry::right_multiply(const Mat3& g)
{
  AmbientSymmetry s(Kind::RightMultiply);
  s.group_element_ = g;
  return s;
}

AmbientSymmetry
AmbientSymmetry::complex_rotation(double angle)
{
  AmbientSymmetry s(Kind::ComplexRotation);
  s.cos_ = std::cos(angle);
  s.sin_ = std::sin(angle);
  return s;
}

AmbientVector
AmbientSymmetry::apply(const AmbientVector& x) const
{
  AmbientVector y = x;
  switch (kind_) {
    case Kind::Identity:
      break;
    case Kind::RightMultiply:
      if (x.size() != 12)
        fail(ErrorKind::InvalidInput, "matrix symmetry needs a 12D point");
      y.head<9>() = vec(unvec(x) * group_element_);
      break;
    case Kind::AxisFlip:
      if (x.size() != 6)
        fail(ErrorKind::InvalidInput, "axis flip needs a 6D point");
      y.head<3>() = -x.head<3>();
      break;
    case Kind::ComplexRotation:
      if (x.size() != 4)
        fail(ErrorKind::InvalidInput, "complex rotation needs a 4D point");
      y[0] = cos_ * x[0] - sin_ * x[1];
      y[1] = sin_ * x[0] + cos_ * x[1];
      break;
  }
  return y;
}

std::vector<AmbientSymmetry>
ambient_symmetries(const ObjectModel& model)
{
  std::vector<AmbientSymmetry> out;
  switch (model.kind()) {
    case SymmetryClass::Finite:
      for (const auto& g : model.group().elements())
        out.push_back(g.isIdentity(0.0) ? AmbientSymmetry::identity()
                                        : AmbientSymmetry::right_multiply(g));
      break;
    case SymmetryClass::RevolutionRotoreflection:
      out.push_back(AmbientSymmetry::identity());
      out.push_back(AmbientSymmetry::axis_flip());
      break;
    case SymmetryClass::Cyclic2D: {
      int n = model.cyclic_order();
      out.push_back(AmbientSymmetry::identity());
      for (int k = 1; k < n; ++k)
        out.push_back(
          AmbientSymmetry::complex_rotation(2.0 * std::numbers::pi * k / n));
      break;
    }
    default:
      out.push_back(AmbientSymmetry::identity());
      break;
  }
  return out;
}

Projection
project_detailed(const ObjectModel& model, const AmbientVector& x)
{
  if (x.size() != model.ambient_dim())
    fail(ErrorKind::InvalidInput,
         "point has dimension " + std::to_string(x.size()) + ", expected " +
           std::to_string(model.ambient_dim()));
  if (!x.allFinite())
    fail(ErrorKind::InvalidInput, "non-finite point");

  Projection out;
  switch (model.kind()) {
    case SymmetryClass::Spherical:
      out.pose = Pose(Mat3::Identity(), x.head<3>());
      break;
    case SymmetryClass::Revolution:
    case SymmetryClass::RevolutionRotoreflection: {
      Vec3 xr = x.head<3>();
      double n = xr.norm();
      if (n < 1e-12)
        throw ProjectionError("axis block vanishes; projection is not unique", n);
      out.pose = Pose(rotation_from_z(xr / n), x.tail<3>());
      break;
    }
    case SymmetryClass::None3D:
    case SymmetryClass::Finite: {
      Mat3 a = unvec(x) * model.lambda_matrix();
      Eigen::JacobiSVD<Mat3> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Vec3& alpha = svd.singularValues();
      if (!(alpha[0] > 0.0) || alpha[1] < 1e-9 * alpha[0])
        throw ProjectionError(
          "rank of the rotation block is below 2; projection is not unique",
          alpha[1]);
      Mat3 u = svd.matrixU();
      Mat3 v = svd.matrixV();
      Mat3 s = Mat3::Identity();
      if (u.determinant() * v.determinant() < 0.0) {
        s(2, 2) = -1.0;
        out.near_degenerate = alpha[1] - alpha[2] < 1e-9 * alpha[0];
      }
      out.pose = Pose(u * s * v.transpose(), x.tail<3>());
      break;
    }
    case SymmetryClass::Circular2D:
      out.pose = Pose(Mat3::Identity(), Vec3(x[0], x[1], 0.0));
      break;
    case SymmetryClass::None2D:
    case SymmetryClass::Cyclic2D: {
      double n = std::hypot(x[0], x[1]);
      if (n < 1e-12)
        throw ProjectionError(
          "orientation block vanishes; projection is not unique", n);
      out.pose = Pose::planar(std::atan2(x[1], x[0]), x[2], x[3]);
      break;
    }
  }
  return out;
}

RepresentativeChoice
closest_representative(const ObjectModel& model,
                       const Pose& pose,
                       const AmbientVector& anchor)
{
  auto reps = representatives(model, pose);
  RepresentativeChoice best;
  best.distance = -1.0;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    double d = (reps[i] - anchor).norm();
    if (best.distance < 0.0 || d < best.distance) {
      best.slot = i;
      best.point = reps[i];
      best.distance = d;
    }
  }
  return best;
}

} // namespace posespace

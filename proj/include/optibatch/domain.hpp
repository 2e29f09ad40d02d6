#pragma once

#include <Eigen/Core>
#include <limits>

#include "optibatch/errors.hpp"

namespace optibatch {

/// Euclidean projection domains: all of R^d, an L2 ball, or a coordinate box.
class ProjectionDomain {
 public:
  enum class Kind { Unconstrained, L2Ball, Box };

  static ProjectionDomain unconstrained() { return ProjectionDomain(Kind::Unconstrained); }

  static ProjectionDomain l2_ball(Eigen::VectorXd center, double radius) {
    if (!(radius > 0.0)) throw InputError("L2 ball radius must be positive");
    ProjectionDomain d(Kind::L2Ball);
    d.center_ = std::move(center);
    d.radius_ = radius;
    return d;
  }

  static ProjectionDomain box(Eigen::VectorXd lower, Eigen::VectorXd upper) {
    if (lower.size() != upper.size()) throw ShapeError("box bounds have mismatched dimensions");
    if ((upper.array() < lower.array()).any()) throw InputError("box upper bound below lower bound");
    ProjectionDomain d(Kind::Box);
    d.lower_ = std::move(lower);
    d.upper_ = std::move(upper);
    return d;
  }

  Eigen::VectorXd project(const Eigen::VectorXd& point) const {
    if (!point.allFinite()) throw InputError("cannot project a point with non-finite coordinates");
    switch (kind_) {
      case Kind::Unconstrained:
        return point;
      case Kind::L2Ball: {
        if (point.size() != center_.size()) throw ShapeError("point dimension does not match ball center");
        const Eigen::VectorXd offset = point - center_;
        const double norm = offset.norm();
        if (norm <= radius_) return point;
        return center_ + offset * (radius_ / norm);
      }
      case Kind::Box:
        if (point.size() != lower_.size()) throw ShapeError("point dimension does not match box bounds");
        return point.cwiseMax(lower_).cwiseMin(upper_);
    }
    return point;
  }

  double diameter() const {
    switch (kind_) {
      case Kind::Unconstrained:
        return std::numeric_limits<double>::infinity();
      case Kind::L2Ball:
        return 2.0 * radius_;
      case Kind::Box:
        return (upper_ - lower_).norm();
    }
    return std::numeric_limits<double>::infinity();
  }

  bool bounded() const { return kind_ != Kind::Unconstrained; }

  double distance(const Eigen::VectorXd& point) const { return (point - project(point)).norm(); }

  Kind kind() const { return kind_; }
  const Eigen::VectorXd& center() const { return center_; }
  double radius() const { return radius_; }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }

 private:
  explicit ProjectionDomain(Kind kind) : kind_(kind) {}

  Kind kind_;
  Eigen::VectorXd center_;
  double radius_ = 0.0;
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

}  // namespace optibatch

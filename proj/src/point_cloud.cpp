#include "bandsurf/point_cloud.hpp"

#include <stdexcept>

#include "bandsurf/errors.hpp"

namespace bandsurf {

PointCloud::PointCloud(Matrix points, std::vector<int> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
    if (points_.rows() == 0) {
        throw std::invalid_argument("point cloud dimension must be positive");
    }
    if (!labels_.empty() && labels_.size() != size()) {
        throw std::invalid_argument("label count does not match point count");
    }
}

void PointCloud::push_back(const Vector& x, std::optional<int> label) {
    if (static_cast<std::size_t>(x.size()) != dims()) {
        throw DimensionMismatch(dims(), static_cast<std::size_t>(x.size()));
    }
    if (label.has_value() != has_labels() && !empty()) {
        throw std::invalid_argument("cannot mix labeled and unlabeled points");
    }
    points_.conservativeResize(Eigen::NoChange, points_.cols() + 1);
    points_.col(points_.cols() - 1) = x;
    if (label) labels_.push_back(*label);
}

void PointCloud::append(const PointCloud& other) {
    if (other.dims() != dims()) {
        throw DimensionMismatch(dims(), other.dims());
    }
    if (other.empty()) return;
    if (!empty() && other.has_labels() != has_labels()) {
        throw std::invalid_argument("cannot mix labeled and unlabeled points");
    }
    const Eigen::Index old = points_.cols();
    points_.conservativeResize(Eigen::NoChange, old + other.points_.cols());
    points_.rightCols(other.points_.cols()) = other.points_;
    labels_.insert(labels_.end(), other.labels_.begin(), other.labels_.end());
}

PointCloud PointCloud::slice(std::size_t first, std::size_t count) const {
    if (first + count > size()) {
        throw std::out_of_range("point cloud slice out of range");
    }
    Matrix pts = points_.middleCols(static_cast<Eigen::Index>(first), static_cast<Eigen::Index>(count));
    std::vector<int> lab;
    if (has_labels()) {
        lab.assign(labels_.begin() + static_cast<std::ptrdiff_t>(first),
                   labels_.begin() + static_cast<std::ptrdiff_t>(first + count));
    }
    return PointCloud(std::move(pts), std::move(lab));
}

} // namespace bandsurf

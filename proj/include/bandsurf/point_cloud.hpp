#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bandsurf/types.hpp"

namespace bandsurf {

/// Ordered points in [0,1)^n stored column-wise, with optional integer
/// component labels (one per point).
class PointCloud {
public:
    explicit PointCloud(std::size_t dims) : points_(dims, 0) {}
    PointCloud(Matrix points, std::vector<int> labels = {});

    std::size_t dims() const { return static_cast<std::size_t>(points_.rows()); }
    std::size_t size() const { return static_cast<std::size_t>(points_.cols()); }
    bool empty() const { return size() == 0; }

    const Matrix& points() const { return points_; }
    Eigen::Ref<const Vector> point(std::size_t i) const { return points_.col(static_cast<Eigen::Index>(i)); }

    bool has_labels() const { return !labels_.empty(); }
    const std::vector<int>& labels() const { return labels_; }

    void push_back(const Vector& x, std::optional<int> label = std::nullopt);
    void append(const PointCloud& other);

    /// Points [first, first+count).
    PointCloud slice(std::size_t first, std::size_t count) const;

private:
    Matrix points_;
    std::vector<int> labels_;
};

} // namespace bandsurf

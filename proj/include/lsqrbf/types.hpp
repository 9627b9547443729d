#ifndef LSQRBF_TYPES_HPP
#define LSQRBF_TYPES_HPP

#include <Eigen/Core>

#include <vector>

namespace lsqrbf {

using Point = Eigen::Vector2d;
using PointList = std::vector<Point>;

} // namespace lsqrbf

#endif

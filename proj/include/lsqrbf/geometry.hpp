#ifndef LSQRBF_GEOMETRY_HPP
#define LSQRBF_GEOMETRY_HPP

#include "lsqrbf/types.hpp"

#include <iosfwd>
#include <string>

namespace lsqrbf {

/// Open disk {x : |x - center| < radius} with boundary theta -> center + radius (cos, sin).
class DiskDomain
{
public:
   explicit DiskDomain(double radius = 1.0, Point center = Point::Zero());

   double radius() const { return radius_; }
   const Point& center() const { return center_; }
   double diameter() const { return 2.0 * radius_; }
   double area() const;
   double perimeter() const;

   /// Strict interior test.
   bool contains(const Point& x) const;
   Point boundary_point(double theta) const;
   Eigen::Vector2d outward_normal(double theta) const;

private:
   double radius_;
   Point center_;
};

/** @brief Trial centers with their fill distance and separation radius.

    Points are pairwise distinct and lie strictly inside the domain. For a
    single point the separation radius is undefined; q_sep is then set to
    h_fill so that mesh_ratio is 1. */
struct NodeSet
{
   PointList points;
   double h_fill = 0.0;
   double q_sep = 0.0;
   double mesh_ratio = 0.0;

   std::size_t size() const { return points.size(); }
};

/// Default fill-distance sampling resolution for a given lattice spacing.
int default_fill_resolution(const DiskDomain& domain, double spacing);

/// Points of the square lattice with step `spacing` through the center that lie in the open disk.
PointList disk_lattice(const DiskDomain& domain, double spacing);

/** Square lattice with step `spacing` through the domain center, clipped to
    the open disk, ordered by (x2, x1). Any positive spacing is allowed; throws
    std::invalid_argument when no lattice point lies inside. */
NodeSet regular_disk_nodes(const DiskDomain& domain, double spacing);

/** Wraps arbitrary points into a NodeSet: checks they are inside and
    distinct and computes h_fill, q_sep. */
NodeSet make_node_set(const DiskDomain& domain, PointList points, int fill_resolution = 256);

/// Half the smallest pairwise distance. Throws std::invalid_argument for fewer than two points.
double separation_radius(const PointList& points);

/** Estimate of sup_{x in closed disk} min_j |x - x_j| over a polar candidate
    grid with about pi * resolution^2 points (spacing ~ radius/resolution). */
double fill_distance(const PointList& points, const DiskDomain& domain, int resolution);

/// CSV with header "x1,x2" and one point per line.
void write_points_csv(std::ostream& out, const PointList& points);
void write_points_csv(const std::string& path, const PointList& points);
PointList read_points_csv(std::istream& in);
PointList read_points_csv(const std::string& path);

} // namespace lsqrbf

#endif

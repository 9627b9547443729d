#include "lsqrbf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace lsqrbf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform bucket grid over the bounding box of the disk for nearest-point queries.
class BucketGrid
{
public:
   BucketGrid(const PointList& points, const DiskDomain& domain) : points_(points)
   {
      const double n = static_cast<double>(std::max<std::size_t>(points.size(), 1));
      origin_ = domain.center() - Point::Constant(domain.radius());
      cells_ = std::clamp(static_cast<int>(std::ceil(std::sqrt(n))), 1, 4096);
      cell_ = domain.diameter() / cells_;
      heads_.assign(static_cast<std::size_t>(cells_) * cells_, -1);
      next_.assign(points.size(), -1);
      for (std::size_t k = 0; k < points.size(); ++k)
      {
         const auto [i, j] = cell_of(points[k]);
         const std::size_t c = static_cast<std::size_t>(j) * cells_ + i;
         next_[k] = heads_[c];
         heads_[c] = static_cast<int>(k);
      }
   }

   double nearest_distance(const Point& x) const
   {
      const auto [ci, cj] = cell_of(x);
      double best = std::numeric_limits<double>::infinity();
      for (int ring = 0; ring <= cells_; ++ring)
      {
         for (int j = cj - ring; j <= cj + ring; ++j)
         {
            if (j < 0 || j >= cells_) { continue; }
            const bool edge_row = (j == cj - ring || j == cj + ring);
            const int step = edge_row ? 1 : 2 * ring;
            for (int i = ci - ring; i <= ci + ring; i += std::max(step, 1))
            {
               if (i < 0 || i >= cells_) { continue; }
               for (int k = heads_[static_cast<std::size_t>(j) * cells_ + i]; k >= 0; k = next_[k])
               {
                  best = std::min(best, (points_[k] - x).norm());
               }
            }
         }
         if (best <= ring * cell_) { break; }
      }
      return best;
   }

private:
   std::pair<int, int> cell_of(const Point& x) const
   {
      const int i = std::clamp(static_cast<int>((x.x() - origin_.x()) / cell_), 0, cells_ - 1);
      const int j = std::clamp(static_cast<int>((x.y() - origin_.y()) / cell_), 0, cells_ - 1);
      return {i, j};
   }

   const PointList& points_;
   Point origin_;
   int cells_;
   double cell_;
   std::vector<int> heads_;
   std::vector<int> next_;
};

} // namespace

DiskDomain::DiskDomain(double radius, Point center) : radius_(radius), center_(std::move(center))
{
   if (!(radius > 0.0) || !std::isfinite(radius))
   {
      throw std::invalid_argument("DiskDomain: radius must be positive");
   }
}

double DiskDomain::area() const { return std::numbers::pi * radius_ * radius_; }

double DiskDomain::perimeter() const { return kTwoPi * radius_; }

bool DiskDomain::contains(const Point& x) const { return (x - center_).norm() < radius_; }

Point DiskDomain::boundary_point(double theta) const
{
   return center_ + radius_ * Point(std::cos(theta), std::sin(theta));
}

Eigen::Vector2d DiskDomain::outward_normal(double theta) const
{
   return {std::cos(theta), std::sin(theta)};
}

int default_fill_resolution(const DiskDomain& domain, double spacing)
{
   return std::max(256, static_cast<int>(std::ceil(20.0 * domain.radius() / spacing)));
}

PointList disk_lattice(const DiskDomain& domain, double spacing)
{
   if (!(spacing > 0.0) || !std::isfinite(spacing))
   {
      throw std::invalid_argument("disk_lattice: spacing must be positive");
   }
   const int m = static_cast<int>(std::floor(domain.radius() / spacing));
   PointList points;
   for (int j = -m; j <= m; ++j)
   {
      for (int i = -m; i <= m; ++i)
      {
         const Point p = domain.center() + Point(i * spacing, j * spacing);
         if (domain.contains(p)) { points.push_back(p); }
      }
   }
   return points;
}

NodeSet regular_disk_nodes(const DiskDomain& domain, double spacing)
{
   NodeSet nodes;
   nodes.points = disk_lattice(domain, spacing);
   if (nodes.points.empty())
   {
      throw std::invalid_argument("regular_disk_nodes: no lattice point inside the domain");
   }
   nodes.h_fill = fill_distance(nodes.points, domain, default_fill_resolution(domain, spacing));
   // nearest lattice neighbours are exactly one step apart
   nodes.q_sep = nodes.size() >= 2 ? 0.5 * spacing : nodes.h_fill;
   nodes.mesh_ratio = nodes.h_fill / nodes.q_sep;
   return nodes;
}

NodeSet make_node_set(const DiskDomain& domain, PointList points, int fill_resolution)
{
   if (points.empty()) { throw std::invalid_argument("make_node_set: empty point set"); }
   for (const Point& p : points)
   {
      if (!domain.contains(p))
      {
         throw std::invalid_argument("make_node_set: point outside the open domain");
      }
   }
   NodeSet nodes;
   nodes.points = std::move(points);
   nodes.h_fill = fill_distance(nodes.points, domain, fill_resolution);
   if (nodes.size() >= 2)
   {
      nodes.q_sep = separation_radius(nodes.points);
      if (!(nodes.q_sep > 0.0))
      {
         throw std::invalid_argument("make_node_set: points are not pairwise distinct");
      }
   }
   else
   {
      nodes.q_sep = nodes.h_fill;
   }
   nodes.mesh_ratio = nodes.h_fill / nodes.q_sep;
   return nodes;
}

double separation_radius(const PointList& points)
{
   if (points.size() < 2)
   {
      throw std::invalid_argument("separation_radius: need at least two points");
   }
   double best = std::numeric_limits<double>::infinity();
   for (std::size_t j = 0; j < points.size(); ++j)
   {
      for (std::size_t k = j + 1; k < points.size(); ++k)
      {
         best = std::min(best, (points[j] - points[k]).squaredNorm());
      }
   }
   return 0.5 * std::sqrt(best);
}

double fill_distance(const PointList& points, const DiskDomain& domain, int resolution)
{
   if (points.empty()) { throw std::invalid_argument("fill_distance: empty point set"); }
   if (resolution < 1) { throw std::invalid_argument("fill_distance: resolution must be positive"); }
   const BucketGrid grid(points, domain);
   double h = 0.0;
   for (int i = 0; i <= resolution; ++i)
   {
      const double r = domain.radius() * i / resolution;
      const int m = std::max(1, static_cast<int>(std::ceil(kTwoPi * i)));
      for (int k = 0; k < m; ++k)
      {
         const double theta = kTwoPi * k / m;
         const Point x = domain.center() + r * Point(std::cos(theta), std::sin(theta));
         h = std::max(h, grid.nearest_distance(x));
      }
   }
   return h;
}

void write_points_csv(std::ostream& out, const PointList& points)
{
   out << "x1,x2\n" << std::setprecision(17);
   for (const Point& p : points) { out << p.x() << ',' << p.y() << '\n'; }
}

void write_points_csv(const std::string& path, const PointList& points)
{
   std::ofstream out(path);
   if (!out) { throw std::runtime_error("cannot open " + path + " for writing"); }
   write_points_csv(out, points);
}

PointList read_points_csv(std::istream& in)
{
   PointList points;
   std::string line;
   while (std::getline(in, line))
   {
      if (line.empty() || line == "x1,x2") { continue; }
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream fields(line);
      double x = 0.0;
      double y = 0.0;
      if (!(fields >> x >> y)) { throw std::runtime_error("read_points_csv: malformed line '" + line + "'"); }
      points.emplace_back(x, y);
   }
   return points;
}

PointList read_points_csv(const std::string& path)
{
   std::ifstream in(path);
   if (!in) { throw std::runtime_error("cannot open " + path); }
   return read_points_csv(in);
}

} // namespace lsqrbf

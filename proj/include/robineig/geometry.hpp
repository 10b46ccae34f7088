#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace robineig {

using Vec2 = Eigen::Vector2d;

enum class DomainKind { interval, disk, ellipse, annulus, stadium };

/// Analytic description of a bounded domain centered at the origin.
///
/// Supported kinds: interval(R) on (-R, R); disk(R); ellipse(a, b);
/// annulus(r_in, r_out); stadium(L, r) = rectangle of length L and
/// half-height r capped by two half-disks of radius r.
struct DomainSpec {
  DomainKind kind = DomainKind::disk;
  double p1 = 1.0;
  double p2 = 0.0;

  static DomainSpec interval(double R);
  static DomainSpec disk(double R);
  static DomainSpec ellipse(double a, double b);
  static DomainSpec annulus(double r_in, double r_out);
  static DomainSpec stadium(double L, double r);

  /// Parse "disk:1", "ellipse:2,0.5", "interval:1", "annulus:0.5,1",
  /// "stadium:2,0.5".
  static DomainSpec parse(const std::string& text);

  int dim() const { return kind == DomainKind::interval ? 1 : 2; }
  double area() const;  // Lebesgue measure (length in 1d)
  bool is_ball() const { return kind == DomainKind::interval || kind == DomainKind::disk; }
  std::string name() const;
};

struct BoundaryEdge {
  std::array<int, 2> nodes;  // 1d: both entries equal (a boundary point)
  Vec2 normal;               // outward unit normal
  double length;             // 1d: 1 (counting measure of a point)
};

/// Piecewise-linear triangulation (2d) or segment grid (1d).
/// Immutable after construction; safe to share across threads.
struct Mesh {
  int dim = 2;
  std::vector<Vec2> nodes;                   // y == 0 in 1d
  std::vector<std::array<int, 3>> elements;  // 1d: third index is -1
  std::vector<BoundaryEdge> boundary_edges;
  std::vector<char> node_on_boundary;
  double h = 0;  // max element diameter

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_elements() const { return static_cast<int>(elements.size()); }
  int nodes_per_element() const { return dim + 1; }
};

/// Per-element constant vector field v with sup-norm budget tau.
struct DriftField {
  std::vector<Vec2> values;  // one per element; y == 0 in 1d
  double tau = 0;
};

/// Map a structured reference grid onto the domain and split into
/// triangles; boundary nodes land exactly on the analytic curve.
/// Throws MeshError when h is too coarse for the geometry or the
/// resulting element quality would fall below 20 degrees.
Mesh triangulate(const DomainSpec& domain, double h);

/// The origin-centered ball with the same measure as the domain.
DomainSpec equimeasurable_ball(const DomainSpec& domain);

/// sign * tau * e_r evaluated at element centroids; zero on elements
/// whose centroid sits at the origin.
DriftField radial_drift(const Mesh& mesh, double tau, int sign);

DriftField zero_drift(const Mesh& mesh);

/// Throws if the drift does not match the mesh or exceeds its budget.
void check_drift(const Mesh& mesh, const DriftField& drift);

double element_area(const Mesh& mesh, int e);    // length in 1d
Vec2 element_centroid(const Mesh& mesh, int e);
/// Gradient of a P1 nodal field, constant on element e (y == 0 in 1d).
Vec2 p1_gradient(const Mesh& mesh, const Eigen::VectorXd& nodal, int e);

double total_area(const Mesh& mesh);
double boundary_length(const Mesh& mesh);
double min_angle_deg(const Mesh& mesh);  // 1d meshes report 60
bool is_connected(const Mesh& mesh);

}  // namespace robineig

#include "robineig/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <unordered_map>
#include <sstream>

#include "robineig/errors.hpp"

namespace robineig {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// Radial extent of the boundary in direction theta, for the star-shaped
// kinds. The domains are origin-centered, so every ray from 0 crosses
// the boundary exactly once.
double radial_extent(const DomainSpec& d, double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  switch (d.kind) {
    case DomainKind::disk:
      return d.p1;
    case DomainKind::ellipse: {
      const double a = d.p1, b = d.p2;
      return a * b / std::hypot(b * c, a * s);
    }
    case DomainKind::stadium: {
      const double half = d.p1 / 2, r = d.p2;
      if (s != 0.0) {
        const double t_side = r / std::abs(s);
        if (std::abs(t_side * c) <= half) return t_side;
      }
      return half * std::abs(c) + std::sqrt(r * r - half * half * s * s);
    }
    default:
      throw std::logic_error("radial_extent: kind is not star-shaped");
  }
}

double max_radial_extent(const DomainSpec& d) {
  switch (d.kind) {
    case DomainKind::disk: return d.p1;
    case DomainKind::ellipse: return std::max(d.p1, d.p2);
    case DomainKind::stadium: return d.p1 / 2 + d.p2;
    default: throw std::logic_error("max_radial_extent: unsupported kind");
  }
}

Mesh make_interval_mesh(double R, double h) {
  if (h > R) throw MeshError("mesh too coarse: need h <= R for interval");
  const int n = std::max(2, static_cast<int>(std::ceil(2 * R / h)));
  Mesh m;
  m.dim = 1;
  m.nodes.reserve(n + 1);
  for (int i = 0; i <= n; ++i) m.nodes.emplace_back(-R + 2 * R * i / n, 0.0);
  // Endpoints exactly on the boundary.
  m.nodes.front() = Vec2(-R, 0.0);
  m.nodes.back() = Vec2(R, 0.0);
  for (int i = 0; i < n; ++i) m.elements.push_back({i, i + 1, -1});
  m.boundary_edges.push_back({{0, 0}, Vec2(-1, 0), 1.0});
  m.boundary_edges.push_back({{n, n}, Vec2(1, 0), 1.0});
  m.node_on_boundary.assign(n + 1, 0);
  m.node_on_boundary.front() = m.node_on_boundary.back() = 1;
  m.h = 2 * R / n;
  return m;
}

struct QuadGrid {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> elements;
  std::vector<char> on_boundary;
};

double min_radial_extent(const DomainSpec& d) {
  switch (d.kind) {
    case DomainKind::disk: return d.p1;
    case DomainKind::ellipse: return std::min(d.p1, d.p2);
    case DomainKind::stadium: return d.p2;
    default: throw std::logic_error("min_radial_extent: unsupported kind");
  }
}

// Arclength parametrization of the boundary rho(theta) e(theta), built
// from a fine fixed sampling. theta_at_fraction inverts the cumulative
// arclength; returned angles still evaluate rho exactly, so ring nodes
// land exactly on scaled copies of the analytic curve.
class BoundaryArc {
public:
  BoundaryArc(const DomainSpec& d, int samples = 16384) : d_(d) {
    cum_.resize(samples + 1);
    cum_[0] = 0;
    Vec2 prev = point_at(0.0);
    for (int i = 1; i <= samples; ++i) {
      const Vec2 p = point_at(2 * kPi * i / samples);
      cum_[i] = cum_[i - 1] + (p - prev).norm();
      prev = p;
    }
  }

  double perimeter() const { return cum_.back(); }

  double theta_at_fraction(double f) const {
    const double target = f * cum_.back();
    const auto it = std::lower_bound(cum_.begin(), cum_.end(), target);
    const size_t hi = std::min<size_t>(std::max<size_t>(it - cum_.begin(), 1), cum_.size() - 1);
    const double t0 = cum_[hi - 1], t1 = cum_[hi];
    const double w = t1 > t0 ? (target - t0) / (t1 - t0) : 0.0;
    const int samples = static_cast<int>(cum_.size()) - 1;
    return 2 * kPi * (static_cast<double>(hi - 1) + w) / samples;
  }

  Vec2 point_at(double theta) const {
    return radial_extent(d_, theta) * Vec2(std::cos(theta), std::sin(theta));
  }

private:
  DomainSpec d_;
  std::vector<double> cum_;
};

// Concentric-ring grid for the star-shaped kinds: ring k is the boundary
// scaled by k/K, nodes equidistributed by arclength with a count that
// balances azimuthal against radial spacing, a node fan at the center,
// and a two-pointer strip triangulation between rings.
QuadGrid ring_star_grid(const DomainSpec& d, double h) {
  const double rho_max = max_radial_extent(d);
  const double rho_min = min_radial_extent(d);
  const int K = std::max(2, static_cast<int>(std::ceil(rho_max / h)));
  const BoundaryArc arc(d);
  // Azimuthal spacing at the geometric mean of the radial gaps keeps the
  // cell aspect ratio within sqrt(rho_max/rho_min) on both ends.
  const double target = std::sqrt(rho_min * rho_max) / K;

  QuadGrid g;
  g.nodes.emplace_back(0, 0);  // center
  g.on_boundary.push_back(0);

  std::vector<int> ring_start(K + 1, 0), ring_count(K + 1, 0);
  for (int k = 1; k <= K; ++k) {
    const double m = static_cast<double>(k) / K;
    const int count = std::max(
        6, static_cast<int>(std::lround(m * arc.perimeter() / target)));
    ring_start[k] = static_cast<int>(g.nodes.size());
    ring_count[k] = count;
    for (int j = 0; j < count; ++j) {
      const double theta = arc.theta_at_fraction(static_cast<double>(j) / count);
      g.nodes.push_back(m * arc.point_at(theta));
      g.on_boundary.push_back(k == K ? 1 : 0);
    }
  }

  // Center fan.
  for (int j = 0; j < ring_count[1]; ++j)
    g.elements.push_back(
        {0, ring_start[1] + j, ring_start[1] + (j + 1) % ring_count[1]});

  // Strips between consecutive rings, merged by arclength fraction.
  for (int k = 1; k < K; ++k) {
    const int nin = ring_count[k], nout = ring_count[k + 1];
    const int in0 = ring_start[k], out0 = ring_start[k + 1];
    int i = 0, j = 0;
    while (i < nin || j < nout) {
      const bool advance_outer =
          j < nout &&
          (i == nin || static_cast<double>(j + 1) / nout <= static_cast<double>(i + 1) / nin);
      if (advance_outer) {
        g.elements.push_back({in0 + i % nin, out0 + j % nout, out0 + (j + 1) % nout});
        ++j;
      } else {
        g.elements.push_back({in0 + i % nin, out0 + j % nout, in0 + (i + 1) % nin});
        ++i;
      }
    }
  }
  return g;
}

double tri_min_angle_deg(const Vec2& a, const Vec2& b, const Vec2& c) {
  const Vec2 u = b - a, v = c - a, w = c - b;
  const double la = u.norm(), lb = v.norm(), lc = w.norm();
  if (la <= 0 || lb <= 0 || lc <= 0) return 0;
  const double A = std::acos(std::clamp(u.dot(v) / (la * lb), -1.0, 1.0));
  const double B = std::acos(std::clamp(-u.dot(w) / (la * lc), -1.0, 1.0));
  const double C = kPi - A - B;
  return std::min({A, B, C}) * 180.0 / kPi;
}

QuadGrid annulus_grid(double r_in, double r_out, double h) {
  if (h > r_out - r_in)
    throw MeshError("mesh too coarse: need h <= r_out - r_in for annulus");
  const int nr = std::max(2, static_cast<int>(std::ceil((r_out - r_in) / h)));
  const int nt = std::max(8, static_cast<int>(std::ceil(2 * kPi * r_out / h)));
  QuadGrid g;
  g.nodes.resize((nr + 1) * nt);
  g.on_boundary.assign((nr + 1) * nt, 0);
  auto id = [nt](int k, int l) { return k * nt + ((l % nt) + nt) % nt; };
  for (int k = 0; k <= nr; ++k) {
    const double r = r_in + (r_out - r_in) * k / nr;
    for (int l = 0; l < nt; ++l) {
      const double th = 2 * kPi * l / nt;
      g.nodes[id(k, l)] = r * Vec2(std::cos(th), std::sin(th));
      if (k == 0 || k == nr) g.on_boundary[id(k, l)] = 1;
    }
  }
  for (int k = 0; k < nr; ++k) {
    for (int l = 0; l < nt; ++l) {
      const int a = id(k, l), b = id(k + 1, l), c = id(k + 1, l + 1), e = id(k, l + 1);
      if ((k + l) % 2 == 0) {
        g.elements.push_back({a, b, c});
        g.elements.push_back({a, c, e});
      } else {
        g.elements.push_back({a, b, e});
        g.elements.push_back({b, c, e});
      }
    }
  }
  return g;
}

double tri_area(const Vec2& p0, const Vec2& p1, const Vec2& p2) {
  return 0.5 * ((p1.x() - p0.x()) * (p2.y() - p0.y()) -
                (p2.x() - p0.x()) * (p1.y() - p0.y()));
}

// Local quality optimization: Lawson-style edge flips and smart
// Laplacian moves, each accepted only when the local minimum angle
// improves. Boundary nodes never move and boundary edges never flip.
void improve_quality(QuadGrid& g) {
  auto area = [&](const std::array<int, 3>& t) {
    return tri_area(g.nodes[t[0]], g.nodes[t[1]], g.nodes[t[2]]);
  };
  auto min_angle = [&](const std::array<int, 3>& t) {
    return tri_min_angle_deg(g.nodes[t[0]], g.nodes[t[1]], g.nodes[t[2]]);
  };
  auto oriented = [&](std::array<int, 3> t) {
    if (area(t) < 0) std::swap(t[1], t[2]);
    return t;
  };

  for (int round = 0; round < 30; ++round) {
    int changes = 0;

    // Edge flips.
    std::unordered_map<long long, std::array<int, 2>> edge2tri;
    edge2tri.reserve(2 * g.elements.size());
    auto ekey = [](int a, int b) {
      if (a > b) std::swap(a, b);
      return (static_cast<long long>(a) << 32) | static_cast<unsigned>(b);
    };
    for (int t = 0; t < static_cast<int>(g.elements.size()); ++t) {
      for (int e = 0; e < 3; ++e) {
        const auto k = ekey(g.elements[t][e], g.elements[t][(e + 1) % 3]);
        auto it = edge2tri.find(k);
        if (it == edge2tri.end())
          edge2tri[k] = {t, -1};
        else
          it->second[1] = t;
      }
    }
    std::vector<char> touched(g.elements.size(), 0);
    for (const auto& [key, ts] : edge2tri) {
      const int t1 = ts[0], t2 = ts[1];
      if (t2 < 0 || touched[t1] || touched[t2]) continue;
      const int a = static_cast<int>(key >> 32);
      const int b = static_cast<int>(key & 0xffffffff);
      auto third = [&](int t) {
        for (int v : g.elements[t])
          if (v != a && v != b) return v;
        return -1;
      };
      const int c = third(t1), e = third(t2);
      if (c < 0 || e < 0 || c == e) continue;
      const std::array<int, 3> n1{a, c, e}, n2{b, e, c};
      if (std::abs(area(n1)) < 1e-14 || std::abs(area(n2)) < 1e-14) continue;
      const double old_min = std::min(min_angle(g.elements[t1]), min_angle(g.elements[t2]));
      const double new_min = std::min(min_angle(n1), min_angle(n2));
      if (new_min > old_min + 1e-9) {
        g.elements[t1] = oriented(n1);
        g.elements[t2] = oriented(n2);
        touched[t1] = touched[t2] = 1;
        ++changes;
      }
    }

    // Smart Laplacian moves.
    std::vector<std::vector<int>> star(g.nodes.size());
    for (int t = 0; t < static_cast<int>(g.elements.size()); ++t)
      for (int v : g.elements[t]) star[v].push_back(t);
    std::vector<std::vector<int>> nbr(g.nodes.size());
    for (const auto& el : g.elements) {
      for (int e = 0; e < 3; ++e) {
        nbr[el[e]].push_back(el[(e + 1) % 3]);
        nbr[el[(e + 1) % 3]].push_back(el[e]);
      }
    }
    for (size_t i = 0; i < g.nodes.size(); ++i) {
      if (g.on_boundary[i] || star[i].empty()) continue;
      auto& nb = nbr[i];
      std::sort(nb.begin(), nb.end());
      nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
      Vec2 mean(0, 0);
      for (int j : nb) mean += g.nodes[j];
      mean /= static_cast<double>(nb.size());
      auto local_min = [&](const Vec2& pos) {
        const Vec2 save = g.nodes[i];
        g.nodes[i] = pos;
        double worst = 180;
        for (int t : star[i]) {
          if (area(g.elements[t]) <= 0) {
            g.nodes[i] = save;
            return -1.0;
          }
          worst = std::min(worst, min_angle(g.elements[t]));
        }
        g.nodes[i] = save;
        return worst;
      };
      const double cur = local_min(g.nodes[i]);
      Vec2 cand = mean;
      for (int halve = 0; halve < 3; ++halve) {
        if (local_min(cand) > cur + 1e-9) {
          g.nodes[i] = cand;
          ++changes;
          break;
        }
        cand = 0.5 * (cand + g.nodes[i]);
      }
    }

    if (changes == 0) break;
  }
}

Mesh finish_2d(QuadGrid&& g) {
  Mesh m;
  m.dim = 2;
  m.nodes = std::move(g.nodes);
  m.elements = std::move(g.elements);
  m.node_on_boundary = std::move(g.on_boundary);

  // Orient all triangles counterclockwise.
  for (auto& el : m.elements) {
    if (tri_area(m.nodes[el[0]], m.nodes[el[1]], m.nodes[el[2]]) < 0)
      std::swap(el[1], el[2]);
  }

  // Boundary edges are the ones incident to exactly one triangle.
  std::map<std::pair<int, int>, std::pair<int, int>> edge_use;  // -> (count, opposite node)
  for (const auto& el : m.elements) {
    for (int a = 0; a < 3; ++a) {
      const int i = el[a], j = el[(a + 1) % 3], k = el[(a + 2) % 3];
      auto key = std::minmax(i, j);
      auto& slot = edge_use[{key.first, key.second}];
      slot.first += 1;
      slot.second = k;
    }
  }
  for (const auto& [key, slot] : edge_use) {
    if (slot.first != 1) continue;
    const Vec2 p = m.nodes[key.first], q = m.nodes[key.second];
    const Vec2 t = q - p;
    Vec2 nrm(t.y(), -t.x());
    nrm.normalize();
    // Orient away from the adjacent triangle.
    const Vec2 inward = m.nodes[slot.second] - 0.5 * (p + q);
    if (nrm.dot(inward) > 0) nrm = -nrm;
    m.boundary_edges.push_back({{key.first, key.second}, nrm, t.norm()});
  }

  double hmax = 0;
  for (const auto& el : m.elements) {
    for (int a = 0; a < 3; ++a)
      hmax = std::max(hmax, (m.nodes[el[a]] - m.nodes[el[(a + 1) % 3]]).norm());
  }
  m.h = hmax;

  for (int e = 0; e < m.num_elements(); ++e) {
    if (element_area(m, e) <= 0) throw MeshError("degenerate element in triangulation");
  }
  if (min_angle_deg(m) < 20.0 - 1e-9)
    throw MeshError("mesh too coarse: element angle below 20 degrees, refine h");
  return m;
}

}  // namespace

DomainSpec DomainSpec::interval(double R) {
  require(R > 0, "interval radius must be positive");
  return {DomainKind::interval, R, 0};
}
DomainSpec DomainSpec::disk(double R) {
  require(R > 0, "disk radius must be positive");
  return {DomainKind::disk, R, 0};
}
DomainSpec DomainSpec::ellipse(double a, double b) {
  require(a > 0 && b > 0, "ellipse semi-axes must be positive");
  return {DomainKind::ellipse, a, b};
}
DomainSpec DomainSpec::annulus(double r_in, double r_out) {
  require(r_in > 0 && r_in < r_out, "annulus requires 0 < r_in < r_out");
  return {DomainKind::annulus, r_in, r_out};
}
DomainSpec DomainSpec::stadium(double L, double r) {
  require(L > 0 && r > 0, "stadium requires positive L and r");
  return {DomainKind::stadium, L, r};
}

DomainSpec DomainSpec::parse(const std::string& text) {
  const auto colon = text.find(':');
  require(colon != std::string::npos, "domain format: kind:params, e.g. disk:1");
  const std::string kind = text.substr(0, colon);
  std::vector<double> p;
  std::stringstream ss(text.substr(colon + 1));
  std::string tok;
  while (std::getline(ss, tok, ',')) p.push_back(std::stod(tok));
  auto arity = [&](size_t k) {
    require(p.size() == k, "domain '" + kind + "' expects " + std::to_string(k) + " parameter(s)");
  };
  if (kind == "interval") { arity(1); return interval(p[0]); }
  if (kind == "disk") { arity(1); return disk(p[0]); }
  if (kind == "ellipse") { arity(2); return ellipse(p[0], p[1]); }
  if (kind == "annulus") { arity(2); return annulus(p[0], p[1]); }
  if (kind == "stadium") { arity(2); return stadium(p[0], p[1]); }
  throw std::invalid_argument("unknown domain kind: " + kind);
}

double DomainSpec::area() const {
  switch (kind) {
    case DomainKind::interval: return 2 * p1;
    case DomainKind::disk: return kPi * p1 * p1;
    case DomainKind::ellipse: return kPi * p1 * p2;
    case DomainKind::annulus: return kPi * (p2 * p2 - p1 * p1);
    case DomainKind::stadium: return 2 * p1 * p2 + kPi * p2 * p2;
  }
  return 0;
}

std::string DomainSpec::name() const {
  std::ostringstream os;
  auto num = [](double x) {
    std::ostringstream o;
    o << x;
    return o.str();
  };
  switch (kind) {
    case DomainKind::interval: os << "interval:" << num(p1); break;
    case DomainKind::disk: os << "disk:" << num(p1); break;
    case DomainKind::ellipse: os << "ellipse:" << num(p1) << "," << num(p2); break;
    case DomainKind::annulus: os << "annulus:" << num(p1) << "," << num(p2); break;
    case DomainKind::stadium: os << "stadium:" << num(p1) << "," << num(p2); break;
  }
  return os.str();
}

Mesh triangulate(const DomainSpec& domain, double h) {
  require(h > 0, "h must be positive");
  switch (domain.kind) {
    case DomainKind::interval:
      return make_interval_mesh(domain.p1, h);
    case DomainKind::disk:
    case DomainKind::ellipse:
    case DomainKind::stadium: {
      if (h > min_radial_extent(domain))
        throw MeshError("mesh too coarse: h exceeds the smallest feature of " + domain.name());
      QuadGrid g = ring_star_grid(domain, h);
      improve_quality(g);
      return finish_2d(std::move(g));
    }
    case DomainKind::annulus: {
      QuadGrid g = annulus_grid(domain.p1, domain.p2, h);
      improve_quality(g);
      return finish_2d(std::move(g));
    }
  }
  throw std::logic_error("unreachable");
}

DomainSpec equimeasurable_ball(const DomainSpec& domain) {
  if (domain.dim() == 1) return DomainSpec::interval(domain.area() / 2);
  return DomainSpec::disk(std::sqrt(domain.area() / kPi));
}

DriftField radial_drift(const Mesh& mesh, double tau, int sign) {
  require(tau >= 0, "tau must be nonnegative");
  require(sign == 1 || sign == -1, "sign must be +1 or -1");
  DriftField f;
  f.tau = tau;
  f.values.reserve(mesh.num_elements());
  for (int e = 0; e < mesh.num_elements(); ++e) {
    const Vec2 c = element_centroid(mesh, e);
    const double r = c.norm();
    f.values.push_back(r < 1e-12 ? Vec2(0, 0) : Vec2(sign * tau * c / r));
  }
  return f;
}

DriftField zero_drift(const Mesh& mesh) {
  return {std::vector<Vec2>(mesh.num_elements(), Vec2(0, 0)), 0.0};
}

void check_drift(const Mesh& mesh, const DriftField& drift) {
  if (static_cast<int>(drift.values.size()) != mesh.num_elements())
    throw std::invalid_argument("drift field does not match mesh element count");
  for (const Vec2& v : drift.values) {
    if (v.norm() > drift.tau + 1e-12)
      throw std::invalid_argument("drift exceeds its sup-norm budget tau");
  }
}

double element_area(const Mesh& mesh, int e) {
  const auto& el = mesh.elements[e];
  if (mesh.dim == 1) return std::abs(mesh.nodes[el[1]].x() - mesh.nodes[el[0]].x());
  return tri_area(mesh.nodes[el[0]], mesh.nodes[el[1]], mesh.nodes[el[2]]);
}

Vec2 element_centroid(const Mesh& mesh, int e) {
  const auto& el = mesh.elements[e];
  Vec2 c(0, 0);
  const int k = mesh.nodes_per_element();
  for (int a = 0; a < k; ++a) c += mesh.nodes[el[a]];
  return c / k;
}

Vec2 p1_gradient(const Mesh& mesh, const Eigen::VectorXd& nodal, int e) {
  const auto& el = mesh.elements[e];
  if (mesh.dim == 1) {
    const double dx = mesh.nodes[el[1]].x() - mesh.nodes[el[0]].x();
    return Vec2((nodal[el[1]] - nodal[el[0]]) / dx, 0.0);
  }
  const Vec2 p0 = mesh.nodes[el[0]], p1 = mesh.nodes[el[1]], p2 = mesh.nodes[el[2]];
  const double twoA = 2 * tri_area(p0, p1, p2);
  // grad of barycentric basis functions, times nodal values
  const Vec2 g0((p1.y() - p2.y()) / twoA, (p2.x() - p1.x()) / twoA);
  const Vec2 g1((p2.y() - p0.y()) / twoA, (p0.x() - p2.x()) / twoA);
  const Vec2 g2((p0.y() - p1.y()) / twoA, (p1.x() - p0.x()) / twoA);
  return nodal[el[0]] * g0 + nodal[el[1]] * g1 + nodal[el[2]] * g2;
}

double total_area(const Mesh& mesh) {
  double s = 0;
  for (int e = 0; e < mesh.num_elements(); ++e) s += element_area(mesh, e);
  return s;
}

double boundary_length(const Mesh& mesh) {
  double s = 0;
  for (const auto& be : mesh.boundary_edges) s += be.length;
  return s;
}

double min_angle_deg(const Mesh& mesh) {
  if (mesh.dim == 1) return 60.0;
  double worst = 180.0;
  for (const auto& el : mesh.elements) {
    for (int a = 0; a < 3; ++a) {
      const Vec2 p = mesh.nodes[el[a]];
      const Vec2 u = mesh.nodes[el[(a + 1) % 3]] - p;
      const Vec2 v = mesh.nodes[el[(a + 2) % 3]] - p;
      const double cosang = u.dot(v) / (u.norm() * v.norm());
      worst = std::min(worst, std::acos(std::clamp(cosang, -1.0, 1.0)) * 180.0 / kPi);
    }
  }
  return worst;
}

bool is_connected(const Mesh& mesh) {
  if (mesh.num_nodes() == 0) return false;
  std::vector<std::vector<int>> nbr(mesh.num_nodes());
  for (const auto& el : mesh.elements) {
    const int k = mesh.dim + 1;
    for (int a = 0; a < k; ++a) {
      const int i = el[a], j = el[(a + 1) % k];
      nbr[i].push_back(j);
      nbr[j].push_back(i);
    }
  }
  std::vector<char> seen(mesh.num_nodes(), 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    const int i = q.front();
    q.pop();
    for (int j : nbr[i]) {
      if (!seen[j]) {
        seen[j] = 1;
        ++count;
        q.push(j);
      }
    }
  }
  return count == mesh.num_nodes();
}

}  // namespace robineig

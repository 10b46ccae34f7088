#include "robineig/assembly.hpp"

#include <stdexcept>

namespace robineig {

BoundaryCondition BoundaryCondition::robin(double beta) {
  if (beta <= 0) throw std::invalid_argument("Robin condition requires beta > 0");
  return {BCKind::robin, beta};
}

namespace {

using Triplet = Eigen::Triplet<double>;

// Gradients of the barycentric basis on one triangle.
std::array<Vec2, 3> basis_gradients(const Vec2& p0, const Vec2& p1, const Vec2& p2,
                                    double area) {
  const double twoA = 2 * area;
  return {Vec2((p1.y() - p2.y()) / twoA, (p2.x() - p1.x()) / twoA),
          Vec2((p2.y() - p0.y()) / twoA, (p0.x() - p2.x()) / twoA),
          Vec2((p0.y() - p1.y()) / twoA, (p1.x() - p0.x()) / twoA)};
}

}  // namespace

AssemblyParts assemble_parts(const Mesh& mesh, const DriftField& drift) {
  check_drift(mesh, drift);
  const int n = mesh.num_nodes();
  std::vector<Triplet> tv, tm, tb;

  if (mesh.dim == 1) {
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const int i = mesh.elements[e][0], j = mesh.elements[e][1];
      const double len = element_area(mesh, e);
      const double v = drift.values[e].x();
      const double k = 1.0 / len;
      // stiffness + convection: conv_ab = v * grad(b) * int(basis_a) = +-v/2
      const double c = v / 2;
      tv.emplace_back(i, i, k - c);
      tv.emplace_back(i, j, -k + c);
      tv.emplace_back(j, i, -k - c);
      tv.emplace_back(j, j, k + c);
      tm.emplace_back(i, i, len / 3);
      tm.emplace_back(j, j, len / 3);
      tm.emplace_back(i, j, len / 6);
      tm.emplace_back(j, i, len / 6);
    }
  } else {
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const auto& el = mesh.elements[e];
      const Vec2 p0 = mesh.nodes[el[0]], p1 = mesh.nodes[el[1]], p2 = mesh.nodes[el[2]];
      const double area = element_area(mesh, e);
      const auto g = basis_gradients(p0, p1, p2, area);
      const Vec2 v = drift.values[e];
      for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
          // centroid quadrature is exact here: v and grad(basis_b) are
          // constant on the element and int(basis_a) = area/3
          const double kab = area * g[a].dot(g[b]);
          const double cab = area / 3 * v.dot(g[b]);
          tv.emplace_back(el[a], el[b], kab + cab);
          tm.emplace_back(el[a], el[b], area / 12 * (a == b ? 2.0 : 1.0));
        }
      }
    }
  }

  // Boundary mass by the trapezoidal rule on each (straight) edge:
  // diagonal contributions length/2 per endpoint. In 1d the edge is a
  // point with unit weight.
  for (const auto& be : mesh.boundary_edges) {
    if (mesh.dim == 1) {
      tb.emplace_back(be.nodes[0], be.nodes[0], 1.0);
    } else {
      tb.emplace_back(be.nodes[0], be.nodes[0], be.length / 2);
      tb.emplace_back(be.nodes[1], be.nodes[1], be.length / 2);
    }
  }

  AssemblyParts parts;
  parts.volume.resize(n, n);
  parts.mass.resize(n, n);
  parts.boundary_mass.resize(n, n);
  parts.volume.setFromTriplets(tv.begin(), tv.end());
  parts.mass.setFromTriplets(tm.begin(), tm.end());
  parts.boundary_mass.setFromTriplets(tb.begin(), tb.end());
  return parts;
}

OperatorPair operator_from_parts(const Mesh& mesh, const AssemblyParts& parts,
                                 BoundaryCondition bc) {
  OperatorPair pair;
  pair.bc = bc;
  const int n = mesh.num_nodes();

  if (bc.kind == BCKind::robin) {
    if (bc.beta <= 0) throw std::invalid_argument("Robin condition requires beta > 0");
    pair.A = parts.volume + bc.beta * parts.boundary_mass;
    pair.M = parts.mass;
    pair.dof_to_node.resize(n);
    for (int i = 0; i < n; ++i) pair.dof_to_node[i] = i;
  } else if (bc.kind == BCKind::neumann) {
    pair.A = parts.volume;
    pair.M = parts.mass;
    pair.dof_to_node.resize(n);
    for (int i = 0; i < n; ++i) pair.dof_to_node[i] = i;
  } else {
    // Eliminate boundary rows and columns.
    std::vector<int> new_index(n, -1);
    for (int i = 0; i < n; ++i) {
      if (!mesh.node_on_boundary[i]) {
        new_index[i] = static_cast<int>(pair.dof_to_node.size());
        pair.dof_to_node.push_back(i);
      }
    }
    const int ni = static_cast<int>(pair.dof_to_node.size());
    if (ni == 0) throw std::invalid_argument("Dirichlet problem has no interior nodes");
    auto restrict_to_interior = [&](const SpMat& full) {
      std::vector<Triplet> t;
      for (int col = 0; col < full.outerSize(); ++col) {
        for (SpMat::InnerIterator it(full, col); it; ++it) {
          const int r = new_index[it.row()], c = new_index[it.col()];
          if (r >= 0 && c >= 0) t.emplace_back(r, c, it.value());
        }
      }
      SpMat out(ni, ni);
      out.setFromTriplets(t.begin(), t.end());
      return out;
    };
    pair.A = restrict_to_interior(parts.volume);
    pair.M = restrict_to_interior(parts.mass);
  }
  pair.A.makeCompressed();
  pair.M.makeCompressed();
  return pair;
}

OperatorPair assemble(const Mesh& mesh, const DriftField& drift, BoundaryCondition bc) {
  return operator_from_parts(mesh, assemble_parts(mesh, drift), bc);
}

SpMat convection_matrix(const Mesh& mesh, const DriftField& drift) {
  check_drift(mesh, drift);
  const int n = mesh.num_nodes();
  std::vector<Triplet> t;
  if (mesh.dim == 1) {
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const int i = mesh.elements[e][0], j = mesh.elements[e][1];
      const double c = drift.values[e].x() / 2;
      t.emplace_back(i, i, -c);
      t.emplace_back(i, j, c);
      t.emplace_back(j, i, -c);
      t.emplace_back(j, j, c);
    }
  } else {
    for (int e = 0; e < mesh.num_elements(); ++e) {
      const auto& el = mesh.elements[e];
      const double area = element_area(mesh, e);
      const auto g = basis_gradients(mesh.nodes[el[0]], mesh.nodes[el[1]],
                                     mesh.nodes[el[2]], area);
      const Vec2 v = drift.values[e];
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          t.emplace_back(el[a], el[b], area / 3 * v.dot(g[b]));
    }
  }
  SpMat C(n, n);
  C.setFromTriplets(t.begin(), t.end());
  return C;
}

Eigen::VectorXd apply_operator(const OperatorPair& pair, const Eigen::VectorXd& x) {
  if (x.size() != pair.A.rows())
    throw std::invalid_argument("apply_operator: vector length does not match dof count");
  return pair.A * x;
}

}  // namespace robineig

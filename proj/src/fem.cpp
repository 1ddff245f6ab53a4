/*
   Copyright 2026 the sbbm authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
#include "sbbm/fem.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace sbbm {

namespace {

struct TriangleGeometry {
  std::array<int, 3> nodes;
  std::array<Eigen::Vector2d, 3> corners;
  std::array<Eigen::Vector2d, 3> grads;  // constant P1 basis gradients
  double area;
};

TriangleGeometry triangle_geometry(const Mesh& mesh, int t) {
  TriangleGeometry g;
  for (int v = 0; v < 3; ++v) {
    g.nodes[v] = mesh.triangles(t, v);
    g.corners[v] = mesh.nodes.row(g.nodes[v]).transpose();
  }
  const Eigen::Vector2d e1 = g.corners[1] - g.corners[0];
  const Eigen::Vector2d e2 = g.corners[2] - g.corners[0];
  g.area = 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
  // grad phi_i = perp(opposite edge) / (2 area), counterclockwise orientation
  for (int v = 0; v < 3; ++v) {
    const Eigen::Vector2d edge = g.corners[(v + 2) % 3] - g.corners[(v + 1) % 3];
    g.grads[v] = Eigen::Vector2d(-edge.y(), edge.x()) / (2.0 * g.area);
  }
  return g;
}

// Scatter a local matrix into dof-indexed triplets, skipping eliminated rows.
void scatter_local(const Mesh& mesh, const TriangleGeometry& g,
                   const Eigen::Matrix3d& local, bool constrained,
                   std::vector<Eigen::Triplet<double>>& out) {
  for (int r = 0; r < 3; ++r) {
    const int gr = constrained ? mesh.node_dof[g.nodes[r]] : g.nodes[r];
    if (gr < 0) continue;
    for (int c = 0; c < 3; ++c) {
      const int gc = constrained ? mesh.node_dof[g.nodes[c]] : g.nodes[c];
      if (gc < 0) continue;
      out.emplace_back(gr, gc, local(r, c));
    }
  }
}

SpMat assemble_p1(const Mesh& mesh, bool mass, bool constrained) {
  const int dim = constrained ? mesh.dof_count : mesh.node_count();
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(9 * mesh.triangle_count());
  Eigen::Matrix3d mass_ref;
  mass_ref << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const TriangleGeometry g = triangle_geometry(mesh, t);
    Eigen::Matrix3d local;
    if (mass) {
      local = (g.area / 12.0) * mass_ref;
    } else {
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) local(r, c) = g.area * g.grads[r].dot(g.grads[c]);
    }
    scatter_local(mesh, g, local, constrained, entries);
  }
  SpMat out(dim, dim);
  out.setFromTriplets(entries.begin(), entries.end());
  out.makeCompressed();
  return out;
}

}  // namespace

SpMat assemble_mass(const Mesh& mesh) { return assemble_p1(mesh, true, true); }
SpMat assemble_stiffness(const Mesh& mesh) { return assemble_p1(mesh, false, true); }
SpMat assemble_mass_full(const Mesh& mesh) { return assemble_p1(mesh, true, false); }
SpMat assemble_stiffness_full(const Mesh& mesh) { return assemble_p1(mesh, false, false); }

Eigen::VectorXd assemble_convection(const Mesh& mesh,
                                    const Eigen::Ref<const Eigen::VectorXd>& u_nodal) {
  if (u_nodal.size() != mesh.node_count()) {
    throw std::invalid_argument("assemble_convection: nodal vector length mismatch");
  }
  const TriQuadRule& rule = quad_degree3();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(mesh.node_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const TriangleGeometry g = triangle_geometry(mesh, t);
    // The gradients are constant, so only the flux integral varies per point.
    double flux = 0.0;
    for (int q = 0; q < rule.point_count(); ++q) {
      double uq = 0.0;
      for (int v = 0; v < 3; ++v) uq += rule.barycentric(q, v) * u_nodal[g.nodes[v]];
      flux += rule.weights[q] * (uq + 0.5 * uq * uq);
    }
    flux *= g.area;
    for (int v = 0; v < 3; ++v) {
      b[g.nodes[v]] += flux * (g.grads[v].x() + g.grads[v].y());
    }
  }
  return b;
}

FemOperators make_operators(Mesh mesh, double nu, double k) {
  if (nu < 0.0) throw std::invalid_argument("make_operators: nu must be >= 0");
  if (k <= 0.0) throw std::invalid_argument("make_operators: k must be > 0");
  FemOperators ops;
  ops.nu = nu;
  ops.k = k;
  ops.M = assemble_mass(mesh);
  ops.A = assemble_stiffness(mesh);
  ops.MA = ops.M + ops.A;
  ops.S = (1.0 + nu * k) * ops.M + ops.A;
  ops.M_full = assemble_mass_full(mesh);
  ops.P = constraint_matrix(mesh);
  auto s_llt = std::make_shared<Eigen::SimplicialLLT<SpMat>>();
  s_llt->compute(ops.S);
  if (s_llt->info() != Eigen::Success) {
    throw std::runtime_error("make_operators: factorization of S failed");
  }
  auto ma_llt = std::make_shared<Eigen::SimplicialLLT<SpMat>>();
  ma_llt->compute(ops.MA);
  if (ma_llt->info() != Eigen::Success) {
    throw std::runtime_error("make_operators: factorization of M+A failed");
  }
  ops.S_factorization = std::move(s_llt);
  ops.MA_factorization = std::move(ma_llt);
  ops.mesh = std::move(mesh);
  return ops;
}

Eigen::VectorXd solve_implicit(const FemOperators& ops,
                               const Eigen::Ref<const Eigen::VectorXd>& b) {
  return ops.S_factorization->solve(b);
}

Eigen::VectorXd solve_h1_system(const FemOperators& ops,
                                const Eigen::Ref<const Eigen::VectorXd>& b) {
  return ops.MA_factorization->solve(b);
}

double h1_inner(const FemOperators& ops, const Eigen::Ref<const Eigen::VectorXd>& u,
                const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (u.size() != ops.MA.rows() || v.size() != ops.MA.rows()) {
    throw std::invalid_argument("h1_inner: dof vector length mismatch");
  }
  return u.dot(ops.MA * v);
}

double h1_norm(const FemOperators& ops, const Eigen::Ref<const Eigen::VectorXd>& u) {
  return std::sqrt(std::max(0.0, h1_inner(ops, u, u)));
}

Eigen::VectorXd elliptic_project(const FemOperators& ops,
                                 const Eigen::Ref<const Eigen::VectorXd>& load_l2,
                                 const Eigen::Ref<const Eigen::VectorXd>& load_h1) {
  if (load_l2.size() != ops.MA.rows() || load_h1.size() != ops.MA.rows()) {
    throw std::invalid_argument("elliptic_project: load length mismatch");
  }
  return solve_h1_system(ops, load_l2 + load_h1);
}

Eigen::VectorXd l2_load(const Mesh& mesh, const ScalarField& v, const TriQuadRule& rule) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(mesh.node_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const TriangleGeometry g = triangle_geometry(mesh, t);
    for (int q = 0; q < rule.point_count(); ++q) {
      Eigen::Vector2d x = Eigen::Vector2d::Zero();
      for (int c = 0; c < 3; ++c) x += rule.barycentric(q, c) * g.corners[c];
      const double vq = v(x.x(), x.y());
      for (int c = 0; c < 3; ++c) {
        b[g.nodes[c]] += g.area * rule.weights[q] * vq * rule.barycentric(q, c);
      }
    }
  }
  return restrict_load(mesh, b);
}

Eigen::VectorXd gradient_load(const Mesh& mesh, const GradientField& grad_v,
                              const TriQuadRule& rule) {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(mesh.node_count());
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const TriangleGeometry g = triangle_geometry(mesh, t);
    for (int q = 0; q < rule.point_count(); ++q) {
      Eigen::Vector2d x = Eigen::Vector2d::Zero();
      for (int c = 0; c < 3; ++c) x += rule.barycentric(q, c) * g.corners[c];
      const Eigen::Vector2d gq = grad_v(x.x(), x.y());
      for (int c = 0; c < 3; ++c) {
        b[g.nodes[c]] += g.area * rule.weights[q] * gq.dot(g.grads[c]);
      }
    }
  }
  return restrict_load(mesh, b);
}

double l2_error(const Mesh& mesh, const Eigen::Ref<const Eigen::VectorXd>& u_nodal,
                const ScalarField& v, const TriQuadRule& rule) {
  if (u_nodal.size() != mesh.node_count()) {
    throw std::invalid_argument("l2_error: nodal vector length mismatch");
  }
  double acc = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const TriangleGeometry g = triangle_geometry(mesh, t);
    for (int q = 0; q < rule.point_count(); ++q) {
      Eigen::Vector2d x = Eigen::Vector2d::Zero();
      double uq = 0.0;
      for (int c = 0; c < 3; ++c) {
        x += rule.barycentric(q, c) * g.corners[c];
        uq += rule.barycentric(q, c) * u_nodal[g.nodes[c]];
      }
      const double d = v(x.x(), x.y()) - uq;
      acc += g.area * rule.weights[q] * d * d;
    }
  }
  return std::sqrt(std::max(0.0, acc));
}

double h1_semi_error(const Mesh& mesh, const Eigen::Ref<const Eigen::VectorXd>& u_nodal,
                     const GradientField& grad_v, const TriQuadRule& rule) {
  if (u_nodal.size() != mesh.node_count()) {
    throw std::invalid_argument("h1_semi_error: nodal vector length mismatch");
  }
  double acc = 0.0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const TriangleGeometry g = triangle_geometry(mesh, t);
    Eigen::Vector2d grad_u = Eigen::Vector2d::Zero();
    for (int c = 0; c < 3; ++c) grad_u += u_nodal[g.nodes[c]] * g.grads[c];
    for (int q = 0; q < rule.point_count(); ++q) {
      Eigen::Vector2d x = Eigen::Vector2d::Zero();
      for (int c = 0; c < 3; ++c) x += rule.barycentric(q, c) * g.corners[c];
      const Eigen::Vector2d d = grad_v(x.x(), x.y()) - grad_u;
      acc += g.area * rule.weights[q] * d.squaredNorm();
    }
  }
  return std::sqrt(std::max(0.0, acc));
}

Eigen::VectorXd interpolate(const Mesh& mesh, const ScalarField& v) {
  Eigen::VectorXd nodal(mesh.node_count());
  for (int id = 0; id < mesh.node_count(); ++id) {
    nodal[id] = v(mesh.nodes(id, 0), mesh.nodes(id, 1));
  }
  return restrict_values(mesh, nodal);
}

}  // namespace sbbm

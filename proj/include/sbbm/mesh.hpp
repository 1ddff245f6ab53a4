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
#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <vector>

namespace sbbm {

enum class Bc { dirichlet, periodic };

/// Uniform right-triangle mesh of the unit square at resolution h = 2^-level.
///
/// Nodes live on the (2^level+1)^2 lattice in row-major order (x fastest).
/// Every cell is split along its lower-left to upper-right diagonal, so the
/// mesh at level L+1 is nested in the mesh at level L and all triangles are
/// congruent with signed area h^2/2.
///
/// `node_dof` maps lattice nodes to free degrees of freedom: under Dirichlet
/// conditions boundary nodes carry -1 (eliminated), under periodic conditions
/// wrapped nodes share the dof of their representative with indices mod 2^L.
struct Mesh {
  int level = 0;
  double h = 1.0;
  Bc bc = Bc::dirichlet;
  Eigen::MatrixX2d nodes;
  Eigen::MatrixX3i triangles;  // counterclockwise node triples
  std::vector<bool> boundary_mask;
  Eigen::VectorXi node_dof;
  int dof_count = 0;
  int cells_per_side = 1;  // 2^level

  int node_count() const { return static_cast<int>(nodes.rows()); }
  int triangle_count() const { return static_cast<int>(triangles.rows()); }
  int lattice_index(int i, int j) const { return j * (cells_per_side + 1) + i; }
};

Mesh build_uniform_mesh(int level, Bc bc);

/// Sparse node-by-dof map P with u_nodes = P * u_dofs. Column sums are the
/// class sizes, so P^T also accumulates nodal load vectors onto free dofs.
Eigen::SparseMatrix<double> constraint_matrix(const Mesh& mesh);

/// Scatter a dof vector to the full lattice (0 on eliminated Dirichlet nodes,
/// replicated values on periodic wrap nodes).
Eigen::VectorXd expand_to_nodes(const Mesh& mesh,
                                const Eigen::Ref<const Eigen::VectorXd>& dofs);

/// Read back dof values from a bc-consistent nodal vector (inverse of
/// expand_to_nodes on its range).
Eigen::VectorXd restrict_values(const Mesh& mesh,
                                const Eigen::Ref<const Eigen::VectorXd>& nodal);

/// Accumulate a nodal load functional onto free dofs (P^T b).
Eigen::VectorXd restrict_load(const Mesh& mesh,
                              const Eigen::Ref<const Eigen::VectorXd>& nodal);

/// Classification of the level-(L+1) lattice against the level-L lattice:
/// every fine node is either a copy of a coarse node or the midpoint of a
/// coarse edge. Because all cells split along the same diagonal, this makes
/// prolongation exact P1 interpolation between nested spaces.
struct ProlongationMap {
  int coarse_level = 0;
  int fine_level = 0;
  Bc bc = Bc::dirichlet;
  Eigen::VectorXi vertex_source;     // fine node -> coarse node, -1 if midpoint
  Eigen::MatrixX2i midpoint_source;  // fine node -> coarse edge ends, -1 if copy
};

ProlongationMap build_prolongation(const Mesh& coarse, const Mesh& fine);

/// Exact P1 interpolation of a coarse nodal vector onto the fine lattice.
Eigen::VectorXd prolong(const ProlongationMap& map,
                        const Eigen::Ref<const Eigen::VectorXd>& coarse_nodal);

}  // namespace sbbm

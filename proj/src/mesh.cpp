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
#include "sbbm/mesh.hpp"

#include <stdexcept>
#include <string>

namespace sbbm {

Mesh build_uniform_mesh(int level, Bc bc) {
  if (level < 0) {
    throw std::invalid_argument("build_uniform_mesh: level must be >= 0");
  }
  // (2^level+1)^2 must stay below the int index range.
  if (level > 14) {
    throw std::length_error(
        "build_uniform_mesh: node count would overflow 32-bit indexing at level " +
        std::to_string(level));
  }

  Mesh mesh;
  mesh.level = level;
  mesh.bc = bc;
  mesh.cells_per_side = 1 << level;
  const int n = mesh.cells_per_side;
  mesh.h = 1.0 / n;

  const int side = n + 1;
  const int node_count = side * side;
  mesh.nodes.resize(node_count, 2);
  mesh.boundary_mask.assign(node_count, false);
  for (int j = 0; j < side; ++j) {
    for (int i = 0; i < side; ++i) {
      const int id = mesh.lattice_index(i, j);
      mesh.nodes(id, 0) = static_cast<double>(i) * mesh.h;
      mesh.nodes(id, 1) = static_cast<double>(j) * mesh.h;
      mesh.boundary_mask[id] = (i == 0 || i == n || j == 0 || j == n);
    }
  }

  // Two triangles per cell, both using the lower-left to upper-right diagonal.
  mesh.triangles.resize(2 * n * n, 3);
  int t = 0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = mesh.lattice_index(i, j);
      const int b = mesh.lattice_index(i + 1, j);
      const int c = mesh.lattice_index(i + 1, j + 1);
      const int d = mesh.lattice_index(i, j + 1);
      mesh.triangles.row(t++) << a, b, c;
      mesh.triangles.row(t++) << a, c, d;
    }
  }

  mesh.node_dof = Eigen::VectorXi::Constant(node_count, -1);
  int next_dof = 0;
  if (bc == Bc::dirichlet) {
    for (int id = 0; id < node_count; ++id) {
      if (!mesh.boundary_mask[id]) mesh.node_dof[id] = next_dof++;
    }
  } else {
    // Representatives are the nodes with both indices < n; wrap the rest.
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        mesh.node_dof[mesh.lattice_index(i, j)] = next_dof++;
      }
    }
    for (int j = 0; j < side; ++j) {
      for (int i = 0; i < side; ++i) {
        const int id = mesh.lattice_index(i, j);
        if (mesh.node_dof[id] < 0) {
          mesh.node_dof[id] = mesh.node_dof[mesh.lattice_index(i % n, j % n)];
        }
      }
    }
  }
  mesh.dof_count = next_dof;
  return mesh;
}

Eigen::SparseMatrix<double> constraint_matrix(const Mesh& mesh) {
  Eigen::SparseMatrix<double> P(mesh.node_count(), mesh.dof_count);
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(mesh.node_count());
  for (int id = 0; id < mesh.node_count(); ++id) {
    if (mesh.node_dof[id] >= 0) entries.emplace_back(id, mesh.node_dof[id], 1.0);
  }
  P.setFromTriplets(entries.begin(), entries.end());
  return P;
}

Eigen::VectorXd expand_to_nodes(const Mesh& mesh,
                                const Eigen::Ref<const Eigen::VectorXd>& dofs) {
  if (dofs.size() != mesh.dof_count) {
    throw std::invalid_argument("expand_to_nodes: dof vector length mismatch");
  }
  Eigen::VectorXd nodal = Eigen::VectorXd::Zero(mesh.node_count());
  for (int id = 0; id < mesh.node_count(); ++id) {
    if (mesh.node_dof[id] >= 0) nodal[id] = dofs[mesh.node_dof[id]];
  }
  return nodal;
}

Eigen::VectorXd restrict_values(const Mesh& mesh,
                                const Eigen::Ref<const Eigen::VectorXd>& nodal) {
  if (nodal.size() != mesh.node_count()) {
    throw std::invalid_argument("restrict_values: nodal vector length mismatch");
  }
  Eigen::VectorXd dofs(mesh.dof_count);
  const int n = mesh.cells_per_side;
  if (mesh.bc == Bc::dirichlet) {
    for (int id = 0; id < mesh.node_count(); ++id) {
      if (mesh.node_dof[id] >= 0) dofs[mesh.node_dof[id]] = nodal[id];
    }
  } else {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const int id = mesh.lattice_index(i, j);
        dofs[mesh.node_dof[id]] = nodal[id];
      }
    }
  }
  return dofs;
}

Eigen::VectorXd restrict_load(const Mesh& mesh,
                              const Eigen::Ref<const Eigen::VectorXd>& nodal) {
  if (nodal.size() != mesh.node_count()) {
    throw std::invalid_argument("restrict_load: nodal vector length mismatch");
  }
  Eigen::VectorXd dofs = Eigen::VectorXd::Zero(mesh.dof_count);
  for (int id = 0; id < mesh.node_count(); ++id) {
    if (mesh.node_dof[id] >= 0) dofs[mesh.node_dof[id]] += nodal[id];
  }
  return dofs;
}

ProlongationMap build_prolongation(const Mesh& coarse, const Mesh& fine) {
  if (fine.level != coarse.level + 1) {
    throw std::invalid_argument("build_prolongation: fine.level must equal coarse.level + 1");
  }
  if (fine.bc != coarse.bc) {
    throw std::invalid_argument("build_prolongation: boundary conditions must match");
  }

  ProlongationMap map;
  map.coarse_level = coarse.level;
  map.fine_level = fine.level;
  map.bc = coarse.bc;
  const int fine_side = fine.cells_per_side + 1;
  map.vertex_source = Eigen::VectorXi::Constant(fine.node_count(), -1);
  map.midpoint_source = Eigen::MatrixX2i::Constant(fine.node_count(), 2, -1);

  for (int j = 0; j < fine_side; ++j) {
    for (int i = 0; i < fine_side; ++i) {
      const int id = fine.lattice_index(i, j);
      if (i % 2 == 0 && j % 2 == 0) {
        map.vertex_source[id] = coarse.lattice_index(i / 2, j / 2);
      } else if (j % 2 == 0) {  // midpoint of a horizontal coarse edge
        map.midpoint_source(id, 0) = coarse.lattice_index((i - 1) / 2, j / 2);
        map.midpoint_source(id, 1) = coarse.lattice_index((i + 1) / 2, j / 2);
      } else if (i % 2 == 0) {  // midpoint of a vertical coarse edge
        map.midpoint_source(id, 0) = coarse.lattice_index(i / 2, (j - 1) / 2);
        map.midpoint_source(id, 1) = coarse.lattice_index(i / 2, (j + 1) / 2);
      } else {  // cell center: lies on the shared diagonal edge
        map.midpoint_source(id, 0) = coarse.lattice_index((i - 1) / 2, (j - 1) / 2);
        map.midpoint_source(id, 1) = coarse.lattice_index((i + 1) / 2, (j + 1) / 2);
      }
    }
  }
  return map;
}

Eigen::VectorXd prolong(const ProlongationMap& map,
                        const Eigen::Ref<const Eigen::VectorXd>& coarse_nodal) {
  const int coarse_side = (1 << map.coarse_level) + 1;
  if (coarse_nodal.size() != coarse_side * coarse_side) {
    throw std::invalid_argument("prolong: coarse vector length mismatch");
  }
  const auto fine_count = map.vertex_source.size();
  Eigen::VectorXd fine(fine_count);
  for (int id = 0; id < fine_count; ++id) {
    if (map.vertex_source[id] >= 0) {
      fine[id] = coarse_nodal[map.vertex_source[id]];
    } else {
      fine[id] = 0.5 * (coarse_nodal[map.midpoint_source(id, 0)] +
                        coarse_nodal[map.midpoint_source(id, 1)]);
    }
  }
  return fine;
}

}  // namespace sbbm

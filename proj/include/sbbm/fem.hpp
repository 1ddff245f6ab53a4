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
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <functional>
#include <memory>

#include "sbbm/mesh.hpp"
#include "sbbm/quadrature.hpp"

namespace sbbm {

using SpMat = Eigen::SparseMatrix<double>;
using ScalarField = std::function<double(double, double)>;
using GradientField = std::function<Eigen::Vector2d(double, double)>;

/// P1 mass matrix on the free dofs (Dirichlet rows/columns eliminated,
/// periodic classes merged). Symmetric positive definite.
SpMat assemble_mass(const Mesh& mesh);

/// P1 stiffness matrix on the free dofs. Symmetric positive semidefinite.
SpMat assemble_stiffness(const Mesh& mesh);

/// Unconstrained assemblies on the full lattice basis. The mass matrix total
/// sum equals |D| = 1 and every stiffness row sums to zero.
SpMat assemble_mass_full(const Mesh& mesh);
SpMat assemble_stiffness_full(const Mesh& mesh);

/// Nonlinear convection load b_i = int (u + u^2/2)(dx phi_i + dy phi_i) on the
/// full lattice basis. `u_nodal` must contain values at every node (zero on
/// the Dirichlet boundary). Uses the degree-3 rule so that b(u).u vanishes to
/// roundoff for bc-consistent u.
Eigen::VectorXd assemble_convection(const Mesh& mesh,
                                    const Eigen::Ref<const Eigen::VectorXd>& u_nodal);

/// Assembled operators for one (mesh, nu, k) configuration. The implicit
/// system matrix S = (1+nu*k) M + A is constant along a trajectory, so its
/// factorization is computed once and shared read-only; Eigen's simplicial
/// solves are reentrant, which the Monte Carlo workers rely on.
struct FemOperators {
  Mesh mesh;
  double nu = 1.0;
  double k = 1.0;
  SpMat M;       // constrained mass
  SpMat A;       // constrained stiffness
  SpMat MA;      // M + A, the discrete H1 Gram matrix
  SpMat S;       // (1+nu*k) M + A
  SpMat M_full;  // unconstrained mass, used by the noise load
  SpMat P;       // node-by-dof constraint map
  std::shared_ptr<const Eigen::SimplicialLLT<SpMat>> S_factorization;
  std::shared_ptr<const Eigen::SimplicialLLT<SpMat>> MA_factorization;
};

FemOperators make_operators(Mesh mesh, double nu, double k);

/// x with S x = b.
Eigen::VectorXd solve_implicit(const FemOperators& ops,
                               const Eigen::Ref<const Eigen::VectorXd>& b);

/// x with (M + A) x = b.
Eigen::VectorXd solve_h1_system(const FemOperators& ops,
                                const Eigen::Ref<const Eigen::VectorXd>& b);

/// Discrete H1 inner product u^T (M+A) v on dof vectors.
double h1_inner(const FemOperators& ops, const Eigen::Ref<const Eigen::VectorXd>& u,
                const Eigen::Ref<const Eigen::VectorXd>& v);

double h1_norm(const FemOperators& ops, const Eigen::Ref<const Eigen::VectorXd>& u);

/// Elliptic projection: solves (M+A) p = load_l2 + load_h1 where the loads
/// carry (v, phi_i) and (grad v, grad phi_i) for the projected function v.
Eigen::VectorXd elliptic_project(const FemOperators& ops,
                                 const Eigen::Ref<const Eigen::VectorXd>& load_l2,
                                 const Eigen::Ref<const Eigen::VectorXd>& load_h1);

/// Quadrature loads of closed-form fields against the dof basis.
Eigen::VectorXd l2_load(const Mesh& mesh, const ScalarField& v, const TriQuadRule& rule);
Eigen::VectorXd gradient_load(const Mesh& mesh, const GradientField& grad_v,
                              const TriQuadRule& rule);

/// Norms of (v - u_h) for a nodal u_h against a closed-form v.
double l2_error(const Mesh& mesh, const Eigen::Ref<const Eigen::VectorXd>& u_nodal,
                const ScalarField& v, const TriQuadRule& rule);
double h1_semi_error(const Mesh& mesh, const Eigen::Ref<const Eigen::VectorXd>& u_nodal,
                     const GradientField& grad_v, const TriQuadRule& rule);

/// Nodal interpolant of a closed-form field, as a dof vector.
Eigen::VectorXd interpolate(const Mesh& mesh, const ScalarField& v);

}  // namespace sbbm

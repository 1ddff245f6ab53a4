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

namespace sbbm {

/// Symmetric quadrature rule on a triangle in barycentric coordinates.
/// Weights sum to 1; multiply by the triangle area when integrating.
struct TriQuadRule {
  Eigen::Matrix<double, Eigen::Dynamic, 3> barycentric;
  Eigen::VectorXd weights;

  int point_count() const { return static_cast<int>(weights.size()); }
};

/// 4-point rule, exact for cubics. The nonlinear convection assembly depends
/// on this exactness: it is what makes the discrete drift cancellation
/// (F(u_h), grad u_h) = 0 hold at machine precision.
inline const TriQuadRule& quad_degree3() {
  static const TriQuadRule rule = [] {
    TriQuadRule r;
    r.barycentric.resize(4, 3);
    r.weights.resize(4);
    r.barycentric << 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0,  //
        0.6, 0.2, 0.2,                                 //
        0.2, 0.6, 0.2,                                 //
        0.2, 0.2, 0.6;
    r.weights << -27.0 / 48.0, 25.0 / 48.0, 25.0 / 48.0, 25.0 / 48.0;
    return r;
  }();
  return rule;
}

/// 7-point Radon rule, exact for quintics. Used for loads and error norms of
/// closed-form fields, not by the scheme itself.
inline const TriQuadRule& quad_degree5() {
  static const TriQuadRule rule = [] {
    const double a1 = 0.059715871789769820;
    const double b1 = 0.470142064105115090;
    const double w1 = 0.132394152788506180;
    const double a2 = 0.797426985353087320;
    const double b2 = 0.101286507323456340;
    const double w2 = 0.125939180544827150;
    TriQuadRule r;
    r.barycentric.resize(7, 3);
    r.weights.resize(7);
    r.barycentric << 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0,  //
        a1, b1, b1,                                    //
        b1, a1, b1,                                    //
        b1, b1, a1,                                    //
        a2, b2, b2,                                    //
        b2, a2, b2,                                    //
        b2, b2, a2;
    r.weights << 9.0 / 40.0, w1, w1, w1, w2, w2, w2;
    return r;
  }();
  return rule;
}

}  // namespace sbbm

// risee - spectral/energy efficiency tradeoff simulator for RIS-aided MIMO downlinks
// Copyright (C) 2026 the risee authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "risee/types.hpp"

#include <cstdint>
#include <stdexcept>

namespace risee {

/// Scattering matrix plus the architecture whose feasibility semantics it carries.
struct ScatteringMatrix {
    Matrix phi;
    Architecture arch = Architecture::LnpD;
};

/// Weight of the globally nearly-passive constraint: D = G C G^H and its trace,
/// the incident-power proxy. The constraint reads Tr(Phi D Phi^H) <= Tr(D).
struct GnpWeight {
    Matrix d;
    double budget = 0.0;
};

GnpWeight gnp_weight(const Matrix &g, const BeamformerSet &bf);

/// Largest spectral value sigma_max(Phi), SVD route.
double spectral_norm(const Matrix &phi);

/// Minimum eigenvalue of [[I, Phi], [Phi^H, I]]; the matrix is PSD iff
/// sigma_max(Phi) <= 1. Kept as an independent algebraic route to the
/// spectral-norm test.
double lmi_min_eigenvalue(const Matrix &phi);

struct ContainsResult {
    bool ok = false;
    double violation = 0.0; ///< largest constraint violation (<= 0 when inside)
};

/// Membership test for the architecture's feasibility set, within `tol`.
/// GNP variants require `weight`; baselines map to NoRis: Phi == 0,
/// RandD: the LnpD rules. Throws std::invalid_argument when the weight is
/// missing for a GNP variant.
ContainsResult contains(Architecture arch, const Matrix &phi,
                        const GnpWeight *weight = nullptr, double tol = 1e-8);

/// Thrown when an alternating projection fails to reach joint feasibility
/// within the iteration cap; carries the residual reached.
class ProjectionError : public std::runtime_error {
  public:
    ProjectionError(const std::string &what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

  private:
    double residual_;
};

/// Euclidean (Frobenius) projection of `phi0` onto the architecture set.
///   LnpD  - zero off-diagonals, radial clip of each diagonal entry;
///   LnpBd - Dykstra between the transpose-symmetric subspace and the
///           spectral-norm ball (SVD clip);
///   GnpD  - zero off-diagonals, then shrink the diagonal onto the ellipsoid
///           sum_m d_mm (|phi_m|^2 - 1) <= 0 via a bisected multiplier;
///   GnpBd - Dykstra between the symmetric subspace and the ellipsoid
///           {Tr(Phi D Phi^H) <= Tr(D)} with projection Phi0 (I + mu D)^{-1}.
Matrix project(Architecture arch, const Matrix &phi0,
               const GnpWeight *weight = nullptr, double tol = 1e-9);

/// Random member of the architecture set: a unit-modulus diagonal with i.i.d.
/// uniform phases, which lies in all four sets (Phi^H Phi = I makes the
/// globally-passive constraint an equality).
ScatteringMatrix random_feasible(Architecture arch, const SystemConfig &cfg,
                                 std::uint64_t seed);

} // namespace risee

#pragma once

#include <optional>
#include <vector>

#include "lagflow/curve.hpp"
#include "lagflow/geometry.hpp"

namespace lagflow {

struct NearOriginRatio {
    std::size_t center = 0;          // node of minimal r
    std::vector<long> offsets;       // node offsets relative to center
    std::vector<double> ratio;       // <z, nu>/|z|^2 at those nodes
    double limit = 0.0;              // extrapolated value at the center
};

/// Samples <z, nu>/|z|^2 on +-window nodes around argmin r and extrapolates
/// the symmetric averages polynomially in s^2 to the minimizing point.
/// Nodes closer than 1e-6 * max r to the origin are skipped.
NearOriginRatio near_origin_ratio(const DiscreteCurve &curve, const GeometryField &field,
                                  int window);

struct IdentityResiduals {
    double res_10a = 0.0;  // 1 - |grad r|^2 - <nu,e_r>^2
    double res_10b = 0.0;  // Laplace r - <nu,e_r>(<nu,e_r>/r - k)
    double res_10c = 0.0;  // grad <nu,e_r> - (k - <nu,e_r>/r) grad r
    std::optional<double> res_polar;  // f sqrt(g) - omega0 (n - beta'), starshaped only
};

IdentityResiduals identity_residuals(const DiscreteCurve &curve, const GeometryField &field);

// Throws NotStarshaped when beta is undefined.
double polar_identity_residual(const GeometryField &field);

}  // namespace lagflow

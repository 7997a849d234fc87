#pragma once

namespace stablemc {

// Grid rounding of a strictly positive mixing value: returns delta when
// 0 < u <= delta, otherwise j*delta for the integer j >= 1 with
// j*delta < u <= (j+1)*delta. The output is strictly positive, lies on the
// grid {delta, 2 delta, ...} and satisfies u - delta <= result <= max(delta, u).
// Throws DomainError if u <= 0 or delta is outside (0,1].
double quantize_mixing(double u, double delta);

}  // namespace stablemc

#include "stablemc/quantize.hpp"

#include <cmath>

#include "stablemc/errors.hpp"

namespace stablemc {

double quantize_mixing(double u, double delta) {
    if (!(u > 0.0) || !std::isfinite(u)) {
        throw DomainError("quantize_mixing: u must be strictly positive");
    }
    if (!(delta > 0.0 && delta <= 1.0)) {
        throw DomainError("quantize_mixing: delta must lie in (0,1]");
    }
    if (u <= delta) return delta;
    // j*delta < u <= (j+1)*delta, adjusted on the computed products so the
    // defining inequalities hold in floating point exactly.
    double j = std::ceil(u / delta) - 1.0;
    while (j >= 1.0 && j * delta >= u) j -= 1.0;
    while ((j + 1.0) * delta < u) j += 1.0;
    if (j < 1.0) j = 1.0;
    return j * delta;
}

}  // namespace stablemc

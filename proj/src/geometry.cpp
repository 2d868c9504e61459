#include "rmot/geometry.hpp"

#include <cmath>

#include "rmot/errors.hpp"

namespace rmot {

void validate_finite(const Point& p) {
    for (double c : p.coords) {
        if (!std::isfinite(c)) {
            throw validation_error("point has a non-finite coordinate");
        }
    }
}

double distance(const Point& a, const Point& b) {
    if (a.dim() != b.dim()) {
        throw validation_error("distance: dimension mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double d = a.coords[i] - b.coords[i];
        s += d * d;
    }
    return std::sqrt(s);
}

} // namespace rmot

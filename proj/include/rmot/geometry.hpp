#pragma once

#include <cstddef>
#include <vector>

namespace rmot {

/// A point of R^d with finite coordinates.
struct Point {
    std::vector<double> coords;

    Point() = default;
    explicit Point(std::vector<double> c) : coords(std::move(c)) {}
    Point(std::initializer_list<double> c) : coords(c) {}

    std::size_t dim() const { return coords.size(); }
    double operator[](std::size_t i) const { return coords[i]; }
    double& operator[](std::size_t i) { return coords[i]; }

    bool operator==(const Point& other) const { return coords == other.coords; }
};

/// Throws validation_error if any coordinate is NaN or infinite.
void validate_finite(const Point& p);

/// Euclidean distance.  Throws validation_error on dimension mismatch.
double distance(const Point& a, const Point& b);

} // namespace rmot

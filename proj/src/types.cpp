#include "saddle/types.hpp"

#include <algorithm>

namespace saddle {

double Domain::volume() const {
    double v = 1.0;
    for (const auto& b : bounds) v *= b.hi - b.lo;
    return v;
}

bool Domain::contains(std::span<const double> x, double slack) const {
    if (static_cast<int>(x.size()) != dim()) return false;
    for (int j = 0; j < dim(); ++j) {
        if (x[j] < bounds[j].lo - slack || x[j] > bounds[j].hi + slack) return false;
    }
    return true;
}

int Expansion::available_terms() const {
    if (points.empty()) return 0;
    std::size_t n = points.front().coefficients.size();
    for (const auto& p : points) n = std::min(n, p.coefficients.size());
    return static_cast<int>(n);
}

}  // namespace saddle

#include "alim/types.hpp"

#include <cmath>

namespace alim {

bool is_probability_vector(const Vec& p, double tol) {
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0) || !std::isfinite(v)) return false;
        sum += v;
    }
    return std::abs(sum - 1.0) <= tol;
}

bool is_valid_candidates(const Mask& s) {
    bool any = false;
    for (auto v : s) {
        if (v != 0 && v != 1) return false;
        if (v == 1) any = true;
    }
    return any;
}

}  // namespace alim

#pragma once

#include <algorithm>

#include "psdsketch/model.hpp"

namespace psdsketch {

/// Incompressibility witness: per measurement y the column maxima
/// c*_z = max_x D[x; y,z] sum to a lower bound l_y on the model dimension;
/// each y yields a valid bound, so the report keeps the largest.
struct LowerBoundReport {
    int X = 0, Y = 0, Z = 0;
    RealMatrix cstar;   // Y x Z column maxima
    RealVector l_y;     // per-y sums
    double l = 0.0;     // max_y l_y
    int argmax_y = 0;

    double noisy_raw(double eps_noise) const { return l - static_cast<double>(Z) * eps_noise; }
    double noisy(double eps_noise) const { return std::max(0.0, noisy_raw(eps_noise)); }
};

inline LowerBoundReport lower_bound(const DataTable& t) {
    LowerBoundReport r;
    r.X = t.X();
    r.Y = t.Y();
    r.Z = t.Z();
    r.cstar = RealMatrix::Zero(r.Y, r.Z);
    r.l_y = RealVector::Zero(r.Y);
    for (int y = 0; y < r.Y; ++y) {
        double sum = 0.0;
        for (int z = 0; z < r.Z; ++z) {
            double m = 0.0;
            for (int x = 0; x < r.X; ++x) m = std::max(m, t.at(x, y, z));
            r.cstar(y, z) = m;
            sum += m;
        }
        r.l_y(y) = sum;
        if (sum > r.l) {
            r.l = sum;
            r.argmax_y = y;
        }
    }
    return r;
}

/// Noise-robust bound max_y (l_y - Z eps), floored at zero since dimensions
/// are positive.
inline double noisy_lower_bound(const DataTable& t, double eps_noise) {
    if (eps_noise < 0.0) throw PreconditionError("noisy_lower_bound: eps_noise must be >= 0");
    return lower_bound(t).noisy(eps_noise);
}

}  // namespace psdsketch

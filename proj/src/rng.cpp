#include "ctk/rng.hpp"

namespace ctk::detmath {

namespace {
constexpr double kInvE = 0.36787944117144233; // nearest double to 1/e
}

double exp_neg(double x) {
    if (x <= 0.0) return 1.0;
    if (x > 745.0) return 0.0;
    const int n = static_cast<int>(x);
    const double f = x - n;
    // e^{-f} by fixed-order Horner series, f in [0, 1)
    double series = 1.0;
    for (int k = 20; k >= 1; --k) series = 1.0 - series * f / k;
    double pow = 1.0;
    for (int i = 0; i < n; ++i) pow *= kInvE;
    return pow * series;
}

double sin_small(double x) {
    const double x2 = x * x;
    // sum_{k=0..8} (-1)^k x^(2k+1)/(2k+1)!
    double s = 1.0;
    for (int k = 8; k >= 1; --k) s = 1.0 - s * x2 / ((2.0 * k) * (2.0 * k + 1.0));
    return x * s;
}

double cos_small(double x) {
    const double x2 = x * x;
    double s = 1.0;
    for (int k = 8; k >= 1; --k) s = 1.0 - s * x2 / ((2.0 * k - 1.0) * (2.0 * k));
    return s;
}

} // namespace ctk::detmath

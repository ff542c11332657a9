#include "ewg/clebsch_gordan.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <string>

#include "ewg/errors.hpp"

namespace ewg {
namespace {

constexpr int max_factorial = 170;

const std::array<long double, max_factorial + 1>& factorials() {
    static const auto table = [] {
        std::array<long double, max_factorial + 1> t{};
        t[0] = 1.0L;
        for (int i = 1; i <= max_factorial; ++i) t[i] = t[i - 1] * i;
        return t;
    }();
    return table;
}

long double fact(int n) { return factorials().at(static_cast<std::size_t>(n)); }

int to_doubled(double value, const char* name) {
    const double twice = 2.0 * value;
    const double rounded = std::round(twice);
    require(std::isfinite(value) && std::abs(twice - rounded) < 1e-9, ErrorKind::InvalidParameter,
            std::string(name) + " must be an integer or half-integer");
    return static_cast<int>(rounded);
}

void check_pair(int two_j, int two_m) {
    require(two_j >= 0, ErrorKind::InvalidParameter, "angular momentum must be non-negative");
    require(std::abs(two_m) <= two_j, ErrorKind::InvalidParameter, "|m| exceeds j");
    require((two_j + two_m) % 2 == 0, ErrorKind::InvalidParameter, "j and m must differ by an integer");
}

}  // namespace

double clebsch_gordan_doubled(int two_j1, int two_m1, int two_j2, int two_m2, int two_J, int two_M) {
    check_pair(two_j1, two_m1);
    check_pair(two_j2, two_m2);
    check_pair(two_J, two_M);
    if (two_M != two_m1 + two_m2) return 0.0;
    if (two_J > two_j1 + two_j2 || two_J < std::abs(two_j1 - two_j2)) return 0.0;
    if ((two_j1 + two_j2 + two_J) % 2 != 0) return 0.0;
    require((two_j1 + two_j2 + two_J) / 2 + 1 <= max_factorial, ErrorKind::InvalidParameter,
            "angular momenta too large");

    // Integer combinations used by the Racah formula.
    const int a = (two_j1 + two_j2 - two_J) / 2;
    const int b = (two_j1 - two_m1) / 2;
    const int c = (two_j2 + two_m2) / 2;
    const int d = (two_J - two_j2 + two_m1) / 2;
    const int e = (two_J - two_j1 - two_m2) / 2;

    const long double norm =
        (two_J + 1) * fact((two_J + two_j1 - two_j2) / 2) * fact((two_J - two_j1 + two_j2) / 2) * fact(a) /
        fact((two_j1 + two_j2 + two_J) / 2 + 1);
    const long double weights = fact((two_J + two_M) / 2) * fact((two_J - two_M) / 2) * fact(b) *
                                fact((two_j1 + two_m1) / 2) * fact((two_j2 - two_m2) / 2) * fact(c);

    long double sum = 0.0L;
    const int k_min = std::max({0, -d, -e});
    const int k_max = std::min({a, b, c});
    for (int k = k_min; k <= k_max; ++k) {
        const long double denom = fact(k) * fact(a - k) * fact(b - k) * fact(c - k) * fact(d + k) * fact(e + k);
        sum += ((k % 2 == 0) ? 1.0L : -1.0L) / denom;
    }
    return static_cast<double>(std::sqrt(norm * weights) * sum);
}

double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M) {
    return clebsch_gordan_doubled(to_doubled(j1, "j1"), to_doubled(m1, "m1"), to_doubled(j2, "j2"),
                                  to_doubled(m2, "m2"), to_doubled(J, "J"), to_doubled(M, "M"));
}

}  // namespace ewg

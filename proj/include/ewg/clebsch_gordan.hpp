#pragma once

namespace ewg {

// <j1 m1; j2 m2 | J M> in the Condon-Shortley phase convention.  Arguments are
// integers or half-integers; anything else (or |m| > j) is rejected.
double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M);

// Same, with every argument passed as twice its value.
double clebsch_gordan_doubled(int two_j1, int two_m1, int two_j2, int two_m2, int two_J, int two_M);

}  // namespace ewg

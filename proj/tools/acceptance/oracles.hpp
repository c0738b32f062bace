#pragma once

#include <cstdint>
#include <functional>

namespace viscowave::oracle {

/**
 * Best ratio ||u||_{p+1} / ||u'||_2 over fields on n interior nodes of [0, L]
 * with zero ends, by projected gradient ascent in the H1 metric from
 * `restarts` random starts. Uses its own tridiagonal solve and norms.
 */
double sobolev_ratio_ascent(int n, double L, double p, int restarts, std::uint64_t seed);

/// Composite Simpson rule with `nodes` (odd) points on [a, b].
double simpson(const std::function<double(double)>& f, double a, double b, int nodes);

}  // namespace viscowave::oracle

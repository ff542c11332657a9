#include "ewg/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ewg/errors.hpp"

namespace ewg {
namespace {

struct Eigensystem {
    Eigen::VectorXd values;
    Matrix vectors;
};

struct TrackState {
    Matrix vectors;          // column t follows track t
    Eigen::VectorXd values;  // energy of track t
};

Matrix landscape_matrix(const CouplingMatrixField& field, double z, bool include_kinetic) {
    return include_kinetic ? field.evaluate_with_kinetic(z) : field.evaluate(z);
}

Eigensystem diagonalize(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    require(solver.info() == Eigen::Success, ErrorKind::NumericalFailure, "eigen-decomposition failed");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

// Within clusters of (numerically) degenerate eigenvalues the eigenvectors are
// arbitrary; rotate them towards the previous track vectors.
void align_degenerate(Eigensystem& eig, const Matrix& previous) {
    const Eigen::Index n = eig.values.size();
    const double scale = std::max(1.0, eig.values.cwiseAbs().maxCoeff());
    Eigen::Index start = 0;
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && eig.values[end] - eig.values[end - 1] <= 1e-10 * scale) ++end;
        const Eigen::Index m = end - start;
        if (m > 1) {
            const Matrix basis = eig.vectors.middleCols(start, m);
            const Matrix projections = basis.adjoint() * previous;  // m x n
            std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
                return projections.col(a).squaredNorm() > projections.col(b).squaredNorm();
            });
            Matrix aligned(n, m);
            Eigen::Index filled = 0;
            for (Eigen::Index t : order) {
                if (filled == m) break;
                Vector v = basis * projections.col(t);
                for (Eigen::Index k = 0; k < filled; ++k) v -= aligned.col(k) * aligned.col(k).dot(v);
                const double norm = v.norm();
                if (norm < 1e-8) continue;
                aligned.col(filled++) = v / norm;
            }
            if (filled == m) eig.vectors.middleCols(start, m) = aligned;
        }
        start = end;
    }
}

bool match(const TrackState& state, const Eigensystem& eig, std::vector<Eigen::Index>& assignment) {
    const Eigen::Index n = eig.values.size();
    const Eigen::MatrixXd overlap = (state.vectors.adjoint() * eig.vectors).cwiseAbs2();
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    assignment.assign(static_cast<std::size_t>(n), -1);
    for (Eigen::Index t = 0; t < n; ++t) {
        Eigen::Index best = 0;
        const double value = overlap.row(t).maxCoeff(&best);
        if (value < 0.5 || used[static_cast<std::size_t>(best)]) return false;
        used[static_cast<std::size_t>(best)] = true;
        assignment[static_cast<std::size_t>(t)] = best;
    }
    return true;
}

class Tracker {
public:
    Tracker(const CouplingMatrixField& field, bool include_kinetic) : field_(field), kinetic_(include_kinetic) {}

    // Moves the state from z_from to z_to, recording any bisection points.
    void advance(TrackState& state, double z_from, double z_to, int depth,
                 std::vector<std::pair<double, Eigen::VectorXd>>& inserted) const {
        Eigensystem eig = diagonalize(landscape_matrix(field_, z_to, kinetic_));
        align_degenerate(eig, state.vectors);
        std::vector<Eigen::Index> assignment;
        if (match(state, eig, assignment)) {
            for (std::size_t t = 0; t < assignment.size(); ++t) {
                const auto ti = static_cast<Eigen::Index>(t);
                state.vectors.col(ti) = eig.vectors.col(assignment[t]);
                state.values[ti] = eig.values[assignment[t]];
            }
            return;
        }
        if (depth >= 40) {
            std::ostringstream msg;
            msg << "eigenvalue tracks unresolvable in [" << std::min(z_from, z_to) << ", " << std::max(z_from, z_to)
                << "]";
            fail(ErrorKind::RefinementNeeded, msg.str());
        }
        const double mid = 0.5 * (z_from + z_to);
        advance(state, z_from, mid, depth + 1, inserted);
        inserted.emplace_back(mid, state.values);
        advance(state, mid, z_to, depth + 1, inserted);
    }

private:
    const CouplingMatrixField& field_;
    bool kinetic_;
};

// Gap between the two eigenvalues that bracket the diabatic mean energy of the pair.
double bracketing_gap(const AdiabaticLandscape& land, std::size_t a, std::size_t b, double z) {
    const Matrix m = landscape_matrix(land.field, z, land.include_kinetic);
    const auto ia = static_cast<Eigen::Index>(a);
    const auto ib = static_cast<Eigen::Index>(b);
    const double mid = 0.5 * (std::real(m(ia, ia)) + std::real(m(ib, ib)));
    const Eigensystem eig = diagonalize(m);
    const Eigen::VectorXd& v = eig.values;
    const Eigen::Index n = v.size();
    Eigen::Index j = 0;
    while (j + 1 < n && v[j + 1] <= mid) ++j;
    if (j + 1 >= n) return v[n - 1] - v[std::max<Eigen::Index>(0, n - 2)];
    if (v[j] > mid) return v[1] - v[0];
    return v[j + 1] - v[j];
}

std::pair<double, double> minimise_gap(const AdiabaticLandscape& land, std::size_t a, std::size_t b, double lo,
                                       double hi) {
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = bracketing_gap(land, a, b, x1);
    double f2 = bracketing_gap(land, a, b, x2);
    for (int it = 0; it < 80 && hi - lo > 1e-13 * std::max(1.0, std::abs(hi)); ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = bracketing_gap(land, a, b, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = bracketing_gap(land, a, b, x2);
        }
    }
    return f1 < f2 ? std::pair{x1, f1} : std::pair{x2, f2};
}

}  // namespace

std::size_t AdiabaticLandscape::track_of_channel(std::size_t channel) const {
    const auto it = std::find(labels.begin(), labels.end(), channel);
    require(it != labels.end(), ErrorKind::InvalidParameter, "no track for requested channel");
    return static_cast<std::size_t>(it - labels.begin());
}

std::vector<double> uniform_grid(double z_min, double z_max, std::size_t points) {
    require(points >= 2 && z_max > z_min, ErrorKind::InvalidParameter, "grid needs z_max > z_min and 2+ points");
    std::vector<double> grid(points);
    for (std::size_t i = 0; i < points; ++i)
        grid[i] = z_min + (z_max - z_min) * static_cast<double>(i) / static_cast<double>(points - 1);
    return grid;
}

AdiabaticLandscape adiabatic_landscape(const CouplingMatrixField& field, std::vector<double> z_grid,
                                       bool include_kinetic) {
    require(z_grid.size() >= 2, ErrorKind::InvalidParameter, "landscape grid needs at least two points");
    require(std::is_sorted(z_grid.begin(), z_grid.end()) &&
                std::adjacent_find(z_grid.begin(), z_grid.end()) == z_grid.end(),
            ErrorKind::InvalidParameter, "landscape grid must be strictly increasing");

    const Eigen::Index n = field.size();
    const auto nn = static_cast<std::size_t>(n);

    // Tracks are indexed by the channel they reach at the outer end of the grid.
    Eigensystem outer = diagonalize(landscape_matrix(field, z_grid.back(), include_kinetic));
    align_degenerate(outer, Matrix::Identity(n, n));
    TrackState state{Matrix(n, n), Eigen::VectorXd(n)};
    std::vector<bool> taken(nn, false);
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index channel = 0;
        const double weight = outer.vectors.col(k).cwiseAbs2().maxCoeff(&channel);
        const auto c = static_cast<std::size_t>(channel);
        if (weight < 0.5 || taken[c])
            fail(ErrorKind::RefinementNeeded, "channels still mixed at the outer end of the grid; extend z_max");
        taken[c] = true;
        state.vectors.col(channel) = outer.vectors.col(k);
        state.values[channel] = outer.values[k];
    }

    std::vector<std::pair<double, Eigen::VectorXd>> points;
    points.emplace_back(z_grid.back(), state.values);
    const Tracker tracker(field, include_kinetic);
    for (std::size_t i = z_grid.size() - 1; i-- > 0;) {
        tracker.advance(state, z_grid[i + 1], z_grid[i], 0, points);
        points.emplace_back(z_grid[i], state.values);
    }
    std::reverse(points.begin(), points.end());

    AdiabaticLandscape land{{}, std::vector<std::vector<double>>(nn), {}, include_kinetic, field};
    land.labels.resize(nn);
    std::iota(land.labels.begin(), land.labels.end(), std::size_t{0});
    land.z_grid.reserve(points.size());
    for (auto& s : land.surfaces) s.reserve(points.size());
    for (const auto& [z, values] : points) {
        land.z_grid.push_back(z);
        for (std::size_t t = 0; t < nn; ++t) land.surfaces[t].push_back(values[static_cast<Eigen::Index>(t)]);
    }
    return land;
}

std::vector<AvoidedCrossing> find_avoided_crossings(const AdiabaticLandscape& land, double gap_threshold) {
    std::vector<AvoidedCrossing> found;
    const std::size_t tracks = land.surfaces.size();
    const std::size_t points = land.z_grid.size();
    if (points < 3) return found;

    for (std::size_t a = 0; a < tracks; ++a) {
        for (std::size_t b = a + 1; b < tracks; ++b) {
            const auto& sa = land.surfaces[a];
            const auto& sb = land.surfaces[b];
            std::vector<std::pair<std::size_t, std::size_t>> brackets;
            for (std::size_t i = 0; i + 1 < points; ++i) {
                const double d0 = sa[i] - sb[i];
                const double d1 = sa[i + 1] - sb[i + 1];
                if (d0 * d1 < 0.0) {
                    brackets.emplace_back(i, i + 1);
                } else if (i > 0) {
                    // Local minimum of the gap that is not rounding noise on parallel surfaces.
                    const double dm = std::abs(sa[i - 1] - sb[i - 1]);
                    const double noise = 1e-9 * std::max({1.0, std::abs(sa[i]), std::abs(sb[i])});
                    const double g = std::abs(d0);
                    if (g < gap_threshold && g <= dm && g < std::abs(d1) && std::max(dm, std::abs(d1)) - g > noise)
                        brackets.emplace_back(i - 1, i + 1);
                }
            }
            const std::size_t ca = land.labels[a];
            const std::size_t cb = land.labels[b];
            for (const auto& [lo, hi] : brackets) {
                const auto [z_c, gap] = minimise_gap(land, ca, cb, land.z_grid[lo], land.z_grid[hi]);
                if (!(gap < gap_threshold)) continue;
                const Matrix slope = land.field.derivative(z_c);
                const auto ia = static_cast<Eigen::Index>(ca);
                const auto ib = static_cast<Eigen::Index>(cb);
                AvoidedCrossing crossing{z_c, {ca, cb}, std::max(0.0, gap),
                                         std::abs(std::real(slope(ia, ia)) - std::real(slope(ib, ib)))};
                const bool duplicate = std::any_of(found.begin(), found.end(), [&](const AvoidedCrossing& c) {
                    return c.surface_pair == crossing.surface_pair &&
                           std::abs(c.z_c - z_c) <= 2.0 * (land.z_grid[hi] - land.z_grid[lo]);
                });
                if (!duplicate) found.push_back(crossing);
            }
        }
    }
    std::sort(found.begin(), found.end(), [](const AvoidedCrossing& x, const AvoidedCrossing& y) {
        return x.z_c != y.z_c ? x.z_c < y.z_c : x.surface_pair < y.surface_pair;
    });
    return found;
}

}  // namespace ewg

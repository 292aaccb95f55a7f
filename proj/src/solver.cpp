#include "linejigsaw/solver.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <string>
#include <thread>

#include "linejigsaw/rng.hpp"

namespace linejigsaw {

int StrategyGrid::strategy_of(const Pose& pose) const {
    const double fu = (pose.position.x - origin.x) / step;
    const double fv = (pose.position.y - origin.y) / step;
    const int u = static_cast<int>(std::lround(fu));
    const int v = static_cast<int>(std::lround(fv));
    if (std::fabs(fu - u) > 1e-6 || std::fabs(fv - v) > 1e-6) return -1;
    const int pos = position_index(u, v);
    if (pos < 0) return -1;
    if (pose.rotation_index < 0 || pose.rotation_index >= rotation_count) return -1;
    return strategy_index(pos, pose.rotation_index);
}

StrategyGrid StrategyGrid::covering(int rows, int cols, double step, int rotation_count) {
    StrategyGrid grid;
    grid.step = step;
    grid.rotation_count = rotation_count;
    grid.width = 2 * cols - 1;
    grid.height = 2 * rows - 1;
    grid.origin = {-(cols - 1) * step, -(rows - 1) * step};
    return grid;
}

namespace {

/// Grid displacement of a relative strategy as seen from a piece rotated by
/// r_h: the local cell offset turned into the global frame. Returns false
/// when the turned offset leaves the lattice (non-right-angle rotation set).
bool turned_offset(const PayoffEntry& e, double theta, int& du, int& dv) {
    const Rotation2 rot = Rotation2::from_angle(theta);
    const Point2 d = rot.apply({static_cast<double>(e.dx), static_cast<double>(e.dy)});
    du = static_cast<int>(std::lround(d.x));
    dv = static_cast<int>(std::lround(d.y));
    return std::fabs(d.x - du) < 1e-6 && std::fabs(d.y - dv) < 1e-6;
}

}  // namespace

double global_payoff(int i, int h, int j, int k, const PartialPayoffTable& table,
                     const StrategyGrid& grid, double payoff_shift) {
    const double base = payoff_shift / table.piece_count();
    if (i == j) return -1.0 + base;
    const Pose pose_i = grid.pose_of(h);
    const Pose pose_j = grid.pose_of(k);
    const RelativeStrategy rel =
        relative_between(pose_i, pose_j, grid.rotation_count, grid.step);
    if (std::abs(rel.dx) > table.radius_cells() || std::abs(rel.dy) > table.radius_cells()) {
        return base;
    }
    return table.value(i, j, rel) + base;
}

namespace {

void accumulate_row(double* out, int i, const MixedStrategyProfile& profile,
                    const PartialPayoffTable& table, const StrategyGrid& grid, double base) {
    const int n = profile.piece_count;
    const int c = profile.strategy_count;
    const int R = grid.rotation_count;
    const int W = grid.width;
    const int H = grid.height;
    std::fill(out, out + c, (n - 1) * base);
    for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const double* xj = profile.row(j);
        for (const PayoffEntry& e : table.entries(i, j)) {
            for (int rh = 0; rh < R; ++rh) {
                int du, dv;
                if (!turned_offset(e, rotation_angle(rh, R), du, dv)) continue;
                const int rk = (rh + e.d_rotation) % R;
                const int v0 = std::max(0, -dv);
                const int v1 = std::min(H, H - dv);
                const int u0 = std::max(0, -du);
                const int u1 = std::min(W, W - du);
                for (int v = v0; v < v1; ++v) {
                    const int row_h = v * W;
                    const int row_k = (v + dv) * W + du;
                    for (int u = u0; u < u1; ++u) {
                        out[(row_h + u) * R + rh] += e.value * xj[(row_k + u) * R + rk];
                    }
                }
            }
        }
    }
}

int resolve_threads(int requested, int jobs) {
    int t = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
    return std::clamp(t, 1, std::max(1, jobs));
}

}  // namespace

PayoffMatrix expected_payoffs(const MixedStrategyProfile& profile, const PartialPayoffTable& table,
                              const StrategyGrid& grid, double payoff_shift, int thread_count) {
    const int n = profile.piece_count;
    const int c = profile.strategy_count;
    PayoffMatrix payoffs(static_cast<size_t>(n) * c, 0.0);
    const double base = payoff_shift / n;
    const int workers = resolve_threads(thread_count, n);
    if (workers > 1) {
        std::vector<std::future<void>> futures;
        futures.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            futures.push_back(std::async(std::launch::async, [&, w]() {
                for (int i = w; i < n; i += workers) {
                    accumulate_row(payoffs.data() + static_cast<size_t>(i) * c, i, profile, table,
                                   grid, base);
                }
            }));
        }
        for (auto& f : futures) f.get();
    } else {
        for (int i = 0; i < n; ++i) {
            accumulate_row(payoffs.data() + static_cast<size_t>(i) * c, i, profile, table, grid,
                           base);
        }
    }
    return payoffs;
}

MixedStrategyProfile replicator_step(const MixedStrategyProfile& profile,
                                     const PayoffMatrix& payoffs) {
    const int n = profile.piece_count;
    const int c = profile.strategy_count;
    MixedStrategyProfile next = profile;
    for (int i = 0; i < n; ++i) {
        if (profile.anchor && profile.anchor->first == i) continue;
        const double* xi = profile.row(i);
        const double* pi = payoffs.data() + static_cast<size_t>(i) * c;
        double mean = 0.0;
        for (int h = 0; h < c; ++h) mean += xi[h] * pi[h];
        if (!(mean > 0)) {
            throw std::runtime_error("replicator_step: piece " + std::to_string(i) +
                                     " has non-positive average payoff; increase payoff_shift");
        }
        double* out = next.row(i);
        double sum = 0.0;
        for (int h = 0; h < c; ++h) {
            out[h] = xi[h] * pi[h] / mean;
            sum += out[h];
        }
        for (int h = 0; h < c; ++h) out[h] /= sum;
    }
    return next;
}

MixedStrategyProfile initialize_profile(int piece_count, const StrategyGrid& grid,
                                        std::optional<std::pair<int, int>> anchor,
                                        const SolverConfig& cfg) {
    const int c = grid.strategy_count();
    MixedStrategyProfile profile;
    profile.piece_count = piece_count;
    profile.strategy_count = c;
    profile.anchor = anchor;
    profile.x.assign(static_cast<size_t>(piece_count) * c, 0.0);
    Rng rng(cfg.seed);
    for (int i = 0; i < piece_count; ++i) {
        double* row = profile.row(i);
        if (anchor && anchor->first == i) {
            row[anchor->second] = 1.0;
            continue;
        }
        double sum = 0.0;
        for (int h = 0; h < c; ++h) {
            row[h] = 1.0 + cfg.init_noise * (2.0 * rng.uniform() - 1.0);
            sum += row[h];
        }
        for (int h = 0; h < c; ++h) row[h] /= sum;
    }
    return profile;
}

double nash_residual(const MixedStrategyProfile& profile, const PayoffMatrix& payoffs) {
    const int n = profile.piece_count;
    const int c = profile.strategy_count;
    double residual = 0.0;
    for (int i = 0; i < n; ++i) {
        if (profile.anchor && profile.anchor->first == i) continue;
        const double* xi = profile.row(i);
        const double* pi = payoffs.data() + static_cast<size_t>(i) * c;
        double own = 0.0;
        double best = pi[0];
        for (int h = 0; h < c; ++h) {
            own += xi[h] * pi[h];
            best = std::max(best, pi[h]);
        }
        residual = std::max(residual, best - own);
    }
    return residual;
}

SolveReport solve(const PartialPayoffTable& table, const StrategyGrid& grid,
                  std::optional<std::pair<int, int>> anchor, const SolverConfig& cfg) {
    const int n = table.piece_count();
    double shift = cfg.payoff_shift;
    if (shift <= 0) {
        shift = n;
    } else if (shift < n) {
        throw std::invalid_argument("solve: payoff_shift below piece count allows negative payoffs");
    }
    if (anchor) {
        if (anchor->first < 0 || anchor->first >= n || anchor->second < 0 ||
            anchor->second >= grid.strategy_count()) {
            throw std::invalid_argument("solve: anchor out of range");
        }
    }

    SolveReport report;
    MixedStrategyProfile profile = initialize_profile(n, grid, anchor, cfg);
    PayoffMatrix payoffs;
    bool change_converged = false;
    int t = 0;
    while (t < cfg.max_iterations) {
        ++t;
        payoffs = expected_payoffs(profile, table, grid, shift, cfg.thread_count);
        MixedStrategyProfile next = replicator_step(profile, payoffs);

        double max_change = 0.0;
        for (size_t idx = 0; idx < profile.x.size(); ++idx) {
            const double value = next.x[idx];
            if (!std::isfinite(value)) {
                throw std::runtime_error("solve: non-finite profile entry at iteration " +
                                         std::to_string(t));
            }
            max_change = std::max(max_change, std::fabs(value - profile.x[idx]));
        }
        if (cfg.record_trajectory) {
            double mean_payoff = 0.0;
            for (int i = 0; i < n; ++i) {
                const double* xi = profile.row(i);
                const double* pi = payoffs.data() + static_cast<size_t>(i) * profile.strategy_count;
                double own = 0.0;
                for (int h = 0; h < profile.strategy_count; ++h) own += xi[h] * pi[h];
                mean_payoff += own;
            }
            report.payoff_trajectory.push_back(mean_payoff / n);
            report.change_trajectory.push_back(max_change);
        }
        profile = std::move(next);
        if (max_change < cfg.convergence_epsilon) {
            change_converged = true;
            break;
        }
    }

    payoffs = expected_payoffs(profile, table, grid, shift, cfg.thread_count);
    report.nash_residual = nash_residual(profile, payoffs);
    report.converged = change_converged && report.nash_residual < cfg.nash_epsilon;
    report.iterations_run = t;
    report.final_profile = std::move(profile);
    return report;
}

}  // namespace linejigsaw

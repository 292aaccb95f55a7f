#include "linejigsaw/compatibility.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>
#include <thread>

namespace linejigsaw {

LineMatchConfig LineMatchConfig::for_puzzle(const Puzzle& p) {
    LineMatchConfig cfg;
    cfg.cost_max = p.canvas_diagonal();
    cfg.penalty_k = 0.5 * cfg.cost_max;
    cfg.coherence_band = p.proximity().contact_band();
    return cfg;
}

double line_cost(const LineSegment& a, const LineSegment& b, const LineMatchConfig& cfg) {
    if (a.category != b.category) return cfg.cost_max;
    if (orientation_difference(a.angle, b.angle) >= cfg.epsilon_angle) return cfg.cost_max;
    double best = distance(a.a, b.a);
    best = std::min(best, distance(a.a, b.b));
    best = std::min(best, distance(a.b, b.a));
    best = std::min(best, distance(a.b, b.b));
    return best;
}

std::vector<int> coherent_line_indices(const Piece& piece, const PieceShape& other,
                                       const RelativeStrategy& gamma, const LineMatchConfig& cfg,
                                       const ProximityConfig& prox) {
    std::vector<int> indices;
    if (piece.lines.empty()) return indices;
    const std::vector<Point2> zone =
        contact_zone(piece.shape, Pose{}, other, gamma.to_pose(), prox);
    if (zone.empty()) return indices;
    const double band =
        cfg.coherence_band + quantization_slack(piece.shape) + quantization_slack(other);
    auto near_zone = [&](Point2 p) {
        for (const Point2& z : zone) {
            if (distance(p, z) <= band) return true;
        }
        return false;
    };
    for (int idx = 0; idx < static_cast<int>(piece.lines.size()); ++idx) {
        const LineSegment& l = piece.lines[idx];
        if (near_zone(l.a) || near_zone(l.b)) indices.push_back(idx);
    }
    return indices;
}

std::vector<LineSegment> coherent_lines(const Piece& piece, const PieceShape& other,
                                        const RelativeStrategy& gamma, const LineMatchConfig& cfg,
                                        const ProximityConfig& prox) {
    std::vector<LineSegment> lines;
    for (int idx : coherent_line_indices(piece, other, gamma, cfg, prox)) {
        lines.push_back(piece.lines[idx]);
    }
    return lines;
}

PairCost pair_cost(const Piece& piece_i, const Piece& piece_j, const RelativeStrategy& gamma,
                   const LineMatchConfig& cfg, const ProximityConfig& prox) {
    PairCost pc;
    const std::vector<int> idx_i = coherent_line_indices(piece_i, piece_j.shape, gamma, cfg, prox);
    const std::vector<int> idx_j = coherent_line_indices(
        piece_j, piece_i.shape, inverse_strategy(gamma, prox.rotation_count), cfg, prox);
    if (idx_i.empty() && idx_j.empty()) {
        pc.empty_contact = true;
        return pc;
    }

    std::vector<LineSegment> side_j;
    side_j.reserve(idx_j.size());
    for (int idx : idx_j) side_j.push_back(piece_j.lines[idx]);
    side_j = transform_lines(side_j, gamma.to_pose(), prox.rotation_count);

    std::vector<std::vector<double>> matrix(idx_i.size(), std::vector<double>(side_j.size()));
    for (size_t r = 0; r < idx_i.size(); ++r) {
        for (size_t c = 0; c < side_j.size(); ++c) {
            matrix[r][c] = line_cost(piece_i.lines[idx_i[r]], side_j[c], cfg);
        }
    }
    const LapResult lap = lap_assign(matrix);
    pc.lap_cost = lap.cost;
    for (auto [r, c] : lap.matches) pc.matches.emplace_back(idx_i[r], idx_j[c]);
    pc.unmatched_count =
        static_cast<int>(std::max(idx_i.size(), idx_j.size()) - lap.matches.size());
    pc.penalty = cfg.penalty_k * pc.unmatched_count;
    pc.total = pc.lap_cost + pc.penalty;
    return pc;
}

double compatibility_score(double c_tot, double tau) {
    if (!(tau > 0)) throw std::invalid_argument("compatibility_score: tau must be positive");
    return 1.0 - std::min(c_tot, tau) / tau;
}

double calibrate_tau(std::vector<double> pair_best_costs, double multiplier, double floor) {
    if (pair_best_costs.empty()) return floor;
    std::sort(pair_best_costs.begin(), pair_best_costs.end());
    const size_t n = pair_best_costs.size();
    const double median = (n % 2 == 1)
                              ? pair_best_costs[n / 2]
                              : 0.5 * (pair_best_costs[n / 2 - 1] + pair_best_costs[n / 2]);
    return std::max(multiplier * median, floor);
}

// ---------------------------------------------------------------------------
// PartialPayoffTable
// ---------------------------------------------------------------------------

PartialPayoffTable::PartialPayoffTable(int piece_count, int rotation_count, double grid_step,
                                       int radius_cells)
    : piece_count_(piece_count),
      rotation_count_(rotation_count),
      grid_step_(grid_step),
      radius_cells_(radius_cells),
      pairs_(static_cast<size_t>(piece_count) * piece_count) {}

namespace {

bool entry_key_less(const PayoffEntry& a, const PayoffEntry& b) {
    if (a.dx != b.dx) return a.dx < b.dx;
    if (a.dy != b.dy) return a.dy < b.dy;
    return a.d_rotation < b.d_rotation;
}

}  // namespace

const std::vector<PayoffEntry>& PartialPayoffTable::entries(int i, int j) const {
    return pairs_[static_cast<size_t>(i) * piece_count_ + j];
}

double PartialPayoffTable::value(int i, int j, int dx, int dy, int d_rotation) const {
    if (i == j) return -1.0;
    const auto& slot = entries(i, j);
    PayoffEntry key{dx, dy, d_rotation, 0.0};
    auto it = std::lower_bound(slot.begin(), slot.end(), key, entry_key_less);
    if (it != slot.end() && it->dx == dx && it->dy == dy && it->d_rotation == d_rotation) {
        return it->value;
    }
    return 0.0;
}

void PartialPayoffTable::add(int i, int j, const PayoffEntry& entry) {
    pairs_[static_cast<size_t>(i) * piece_count_ + j].push_back(entry);
}

void PartialPayoffTable::finalize() {
    for (auto& slot : pairs_) std::sort(slot.begin(), slot.end(), entry_key_less);
}

std::size_t PartialPayoffTable::stored_entries() const {
    std::size_t n = 0;
    for (const auto& slot : pairs_) n += slot.size();
    return n;
}

std::vector<PartialPayoffTable::DumpRecord> PartialPayoffTable::dump() const {
    std::vector<DumpRecord> records;
    records.reserve(stored_entries());
    for (int i = 0; i < piece_count_; ++i) {
        for (int j = 0; j < piece_count_; ++j) {
            for (const PayoffEntry& e : entries(i, j)) {
                records.push_back({i, j, e.dx, e.dy, e.d_rotation, e.value});
            }
        }
    }
    return records;
}

// ---------------------------------------------------------------------------
// Table construction
// ---------------------------------------------------------------------------

namespace {

struct RawEntry {
    RelativeStrategy gamma;
    double cost = 0.0;
    bool overlap = false;
    bool empty = false;
};

struct PairScan {
    int i = 0;
    int j = 0;
    std::vector<RawEntry> raw;
    double best_cost = std::numeric_limits<double>::infinity();
};

void scan_pair(PairScan& scan, const std::vector<Piece>& pieces, const ProximityConfig& prox,
               const LineMatchConfig& cfg) {
    const Piece& pi = pieces[scan.i];
    const Piece& pj = pieces[scan.j];
    for (int dx = -prox.radius_cells; dx <= prox.radius_cells; ++dx) {
        for (int dy = -prox.radius_cells; dy <= prox.radius_cells; ++dy) {
            for (int dr = 0; dr < prox.rotation_count; ++dr) {
                const RelativeStrategy gamma{dx, dy, dr, prox.grid_step};
                const RegionLabel region = classify_region(pi.shape, pj.shape, gamma, prox);
                if (region == RegionLabel::Neutral) continue;
                RawEntry raw;
                raw.gamma = gamma;
                if (region == RegionLabel::Overlapping) {
                    raw.overlap = true;
                } else {
                    const PairCost pc = pair_cost(pi, pj, gamma, cfg, prox);
                    raw.cost = pc.total;
                    raw.empty = pc.empty_contact;
                    if (!pc.empty_contact) scan.best_cost = std::min(scan.best_cost, pc.total);
                }
                scan.raw.push_back(raw);
            }
        }
    }
}

}  // namespace

PartialPayoffTable build_payoff_table(const std::vector<Piece>& pieces,
                                      const ProximityConfig& prox, const LineMatchConfig& cfg,
                                      int thread_count) {
    const int n = static_cast<int>(pieces.size());
    if (n < 2) throw std::invalid_argument("build_payoff_table: need at least 2 pieces");

    std::vector<PairScan> scans;
    scans.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) scans.push_back({i, j});
    }

    int workers = thread_count > 0 ? thread_count
                                   : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, static_cast<int>(scans.size()));
    if (workers > 1) {
        std::vector<std::future<void>> futures;
        futures.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            futures.push_back(std::async(std::launch::async, [&, w]() {
                for (size_t k = w; k < scans.size(); k += workers) {
                    scan_pair(scans[k], pieces, prox, cfg);
                }
            }));
        }
        for (auto& f : futures) f.get();
    } else {
        for (PairScan& scan : scans) scan_pair(scan, pieces, prox, cfg);
    }

    double tau;
    if (cfg.tau) {
        tau = *cfg.tau;
    } else {
        std::vector<double> bests;
        for (const PairScan& scan : scans) {
            if (std::isfinite(scan.best_cost)) bests.push_back(scan.best_cost);
        }
        tau = calibrate_tau(std::move(bests), cfg.tau_multiplier, cfg.tau_floor);
    }

    PartialPayoffTable table(n, prox.rotation_count, prox.grid_step, prox.radius_cells);
    table.set_tau(tau);
    for (const PairScan& scan : scans) {
        for (const RawEntry& raw : scan.raw) {
            double value;
            if (raw.overlap) {
                value = -1.0;
            } else if (raw.empty) {
                continue;
            } else {
                value = compatibility_score(raw.cost, tau);
                if (value <= 0.0) continue;
            }
            const RelativeStrategy inv = inverse_strategy(raw.gamma, prox.rotation_count);
            table.add(scan.i, scan.j,
                      {raw.gamma.dx, raw.gamma.dy, raw.gamma.d_rotation, value});
            table.add(scan.j, scan.i, {inv.dx, inv.dy, inv.d_rotation, value});
        }
    }
    table.finalize();
    return table;
}

}  // namespace linejigsaw

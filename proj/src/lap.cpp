#include <cmath>
#include <limits>
#include <stdexcept>

#include "linejigsaw/compatibility.hpp"

namespace linejigsaw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Kuhn-Munkres with potentials over a rows x cols matrix, rows <= cols.
/// Fills col_of_row with the optimal column per row.
void solve_rows(const std::vector<std::vector<double>>& a, int rows, int cols,
                std::vector<int>& col_of_row) {
    std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
    std::vector<int> p(cols + 1, 0), way(cols + 1, 0);
    for (int i = 1; i <= rows; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(cols + 1, kInf);
        std::vector<char> used(cols + 1, 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            int j1 = 0;
            double delta = kInf;
            for (int j = 1; j <= cols; ++j) {
                if (used[j]) continue;
                const double cur = a[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= cols; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    col_of_row.assign(rows, -1);
    for (int j = 1; j <= cols; ++j) {
        if (p[j]) col_of_row[p[j] - 1] = j - 1;
    }
}

}  // namespace

LapResult lap_assign(const std::vector<std::vector<double>>& cost_matrix) {
    LapResult result;
    const int rows = static_cast<int>(cost_matrix.size());
    const int cols = rows ? static_cast<int>(cost_matrix[0].size()) : 0;
    if (rows == 0 || cols == 0) return result;
    for (const auto& row : cost_matrix) {
        if (static_cast<int>(row.size()) != cols) {
            throw std::invalid_argument("lap_assign: ragged cost matrix");
        }
        for (double c : row) {
            if (!std::isfinite(c)) throw std::invalid_argument("lap_assign: non-finite cost");
        }
    }

    std::vector<int> col_of_row;
    if (rows <= cols) {
        solve_rows(cost_matrix, rows, cols, col_of_row);
        for (int r = 0; r < rows; ++r) result.matches.emplace_back(r, col_of_row[r]);
    } else {
        std::vector<std::vector<double>> t(cols, std::vector<double>(rows));
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < cols; ++c) t[c][r] = cost_matrix[r][c];
        }
        solve_rows(t, cols, rows, col_of_row);
        for (int c = 0; c < cols; ++c) result.matches.emplace_back(col_of_row[c], c);
    }
    for (auto [r, c] : result.matches) result.cost += cost_matrix[r][c];
    return result;
}

}  // namespace linejigsaw

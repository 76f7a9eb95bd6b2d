#include "mqms/matching.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace mqms {

WeightMatrix::WeightMatrix(int rows, int cols, Count fill) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("weight matrix dimensions must be non-negative");
  w_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
  if (fill < 0) throw std::invalid_argument("weights must be non-negative");
}

WeightMatrix::WeightMatrix(int rows, int cols, std::vector<Count> row_major)
    : rows_(rows), cols_(cols), w_(std::move(row_major)) {
  if (rows < 0 || cols < 0 || w_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
    throw std::invalid_argument("weight matrix size does not match its dimensions");
  if (std::any_of(w_.begin(), w_.end(), [](Count v) { return v < 0; }))
    throw std::invalid_argument("weights must be non-negative");
}

WeightMatrix WeightMatrix::from_state(const QueueVector& x_prev, const ConnectivityMatrix& c) {
  if (static_cast<int>(x_prev.size()) != c.rows())
    throw std::invalid_argument("dimension mismatch between queue vector and connectivity");
  WeightMatrix w(c.rows(), c.cols());
  for (int n = 0; n < c.rows(); ++n) {
    if (x_prev[n] < 0) throw std::invalid_argument("queue lengths must be non-negative");
    for (int k = 0; k < c.cols(); ++k) w.set(n, k, c.at(n, k) ? x_prev[n] : 0);
  }
  return w;
}

WeightMatrix WeightMatrix::unit(const ConnectivityMatrix& c) {
  WeightMatrix w(c.rows(), c.cols());
  for (int n = 0; n < c.rows(); ++n)
    for (int k = 0; k < c.cols(); ++k) w.set(n, k, c.at(n, k) ? 1 : 0);
  return w;
}

void WeightMatrix::set(int row, int col, Count value) {
  if (value < 0) throw std::invalid_argument("weights must be non-negative");
  w_[static_cast<std::size_t>(row) * cols_ + col] = value;
}

Count matching_weight(const WeightMatrix& w, const Matching& m) {
  if (w.rows() != m.rows() || w.cols() != m.cols())
    throw std::invalid_argument("dimension mismatch between weights and matching");
  if (!m.is_valid()) throw std::invalid_argument("invalid matching: a row or column sum exceeds 1");
  Count total = 0;
  for (int n = 0; n < m.rows(); ++n)
    for (int k = 0; k < m.cols(); ++k)
      if (m.at(n, k)) total += w.at(n, k);
  return total;
}

Count mw_index(const QueueVector& x_prev, const ConnectivityMatrix& c, const Matching& m) {
  if (c.rows() != m.rows() || c.cols() != m.cols())
    throw std::invalid_argument("dimension mismatch between connectivity and matching");
  return matching_weight(WeightMatrix::from_state(x_prev, c), m);
}

namespace {

// Kuhn-Munkres with row/column potentials on an S x S cost matrix (minimization).
// Rows are inserted in ascending order and columns scanned in ascending order, which
// fixes the tie-break among optimal assignments. Returns the column of each row.
template <class CostFn>
std::vector<int> solve_min_cost_assignment(int size, const CostFn& cost) {
  constexpr Count kInf = std::numeric_limits<Count>::max() / 4;
  std::vector<Count> u(size + 1, 0), v(size + 1, 0), min_slack(size + 1);
  std::vector<int> row_of_col(size + 1, 0), way(size + 1, 0);
  std::vector<char> used(size + 1);

  for (int row = 1; row <= size; ++row) {
    row_of_col[0] = row;
    int col0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const int row0 = row_of_col[col0];
      Count delta = kInf;
      int col1 = 0;
      for (int col = 1; col <= size; ++col) {
        if (used[col]) continue;
        const Count slack = cost(row0 - 1, col - 1) - u[row0] - v[col];
        if (slack < min_slack[col]) {
          min_slack[col] = slack;
          way[col] = col0;
        }
        if (min_slack[col] < delta) {
          delta = min_slack[col];
          col1 = col;
        }
      }
      for (int col = 0; col <= size; ++col) {
        if (used[col]) {
          u[row_of_col[col]] += delta;
          v[col] -= delta;
        } else {
          min_slack[col] -= delta;
        }
      }
      col0 = col1;
    } while (row_of_col[col0] != 0);
    do {
      const int col1 = way[col0];
      row_of_col[col0] = row_of_col[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  std::vector<int> col_of_row(size, -1);
  for (int col = 1; col <= size; ++col)
    if (row_of_col[col] != 0) col_of_row[row_of_col[col] - 1] = col - 1;
  return col_of_row;
}

}  // namespace

Matching max_weight_matching(const WeightMatrix& w) {
  Matching result(w.rows(), w.cols());
  // Rows and columns without a positive weight cannot contribute; solve on the rest.
  std::vector<int> rows, cols;
  rows.reserve(static_cast<std::size_t>(w.rows()));
  cols.reserve(static_cast<std::size_t>(w.cols()));
  for (int n = 0; n < w.rows(); ++n)
    for (int k = 0; k < w.cols(); ++k)
      if (w.at(n, k) > 0) {
        rows.push_back(n);
        break;
      }
  for (int k = 0; k < w.cols(); ++k)
    for (const int n : rows)
      if (w.at(n, k) > 0) {
        cols.push_back(k);
        break;
      }
  const int size = static_cast<int>(std::max(rows.size(), cols.size()));
  if (size == 0) return result;
  std::vector<Count> cost(static_cast<std::size_t>(size) * size, 0);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) cost[r * size + c] = -w.at(rows[r], cols[c]);
  const auto assignment =
      solve_min_cost_assignment(size, [&cost, size](int r, int c) { return cost[static_cast<std::size_t>(r) * size + c]; });
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int c = assignment[r];
    if (c < 0 || c >= static_cast<int>(cols.size())) continue;
    if (w.at(rows[r], cols[c]) > 0) result.set(rows[r], cols[c], true);
  }
  return result;
}

Matching max_cardinality_matching(const ConnectivityMatrix& c) {
  return max_weight_matching(WeightMatrix::unit(c));
}

std::uint64_t count_matchings(int n, int k) {
  if (n < 0 || k < 0) throw std::invalid_argument("matching dimensions must be non-negative");
  // sum_i C(n,i) C(k,i) i!, accumulated in long double and saturated.
  long double total = 0.0L;
  long double term = 1.0L;
  for (int i = 0; i <= std::min(n, k); ++i) {
    if (i > 0) term = term * (n - i + 1) * (k - i + 1) / i;
    total += term;
  }
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  if (total >= static_cast<long double>(kMax)) return kMax;
  return static_cast<std::uint64_t>(total + 0.5L);
}

namespace {

void check_guard(int n, int k) {
  const std::uint64_t count = count_matchings(n, k);
  if (count > kEnumerationGuard)
    throw EnumerationGuardExceeded("enumerating " + std::to_string(n) + "x" + std::to_string(k) +
                                   " matchings exceeds the guard of " + std::to_string(kEnumerationGuard));
}

void enumerate_rows(int row, Matching& current, std::vector<char>& col_used,
                    const std::function<void(const Matching&)>& visit) {
  if (row == current.rows()) {
    visit(current);
    return;
  }
  enumerate_rows(row + 1, current, col_used, visit);
  for (int k = 0; k < current.cols(); ++k) {
    if (col_used[k]) continue;
    col_used[k] = 1;
    current.set(row, k, true);
    enumerate_rows(row + 1, current, col_used, visit);
    current.set(row, k, false);
    col_used[k] = 0;
  }
}

}  // namespace

void for_each_matching(int n, int k, const std::function<void(const Matching&)>& visit) {
  check_guard(n, k);
  Matching current(n, k);
  std::vector<char> col_used(static_cast<std::size_t>(k), 0);
  enumerate_rows(0, current, col_used, visit);
}

std::vector<Matching> enumerate_matchings(int n, int k) {
  std::vector<Matching> all;
  check_guard(n, k);
  all.reserve(count_matchings(n, k));
  for_each_matching(n, k, [&all](const Matching& m) { all.push_back(m); });
  return all;
}

std::vector<Matching> all_max_weight_matchings(const WeightMatrix& w) {
  std::vector<Matching> best;
  Count best_weight = -1;
  for_each_matching(w.rows(), w.cols(), [&](const Matching& m) {
    const Count weight = matching_weight(w, m);
    if (weight > best_weight) {
      best_weight = weight;
      best.clear();
    }
    if (weight == best_weight) best.push_back(m);
  });
  return best;
}

Count brute_force_max_weight(const WeightMatrix& w) {
  Count best = 0;
  for_each_matching(w.rows(), w.cols(), [&](const Matching& m) { best = std::max(best, matching_weight(w, m)); });
  return best;
}

}  // namespace mqms

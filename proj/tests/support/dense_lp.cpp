#include "support/dense_lp.hpp"

#include <cmath>
#include <limits>

namespace scdr::testing {

using scdr::milp::MilpInstance;
using scdr::milp::Sense;
using scdr::milp::Status;

namespace {

using Real = long double;
constexpr Real kEps = 1e-11L;

struct Tableau {
  int rows = 0;
  int cols = 0;  // excluding rhs
  std::vector<std::vector<Real>> t;  // rows x (cols + 1)
  std::vector<int> basis;

  void pivot(int r, int k) {
    Real p = t[r][k];
    for (auto& v : t[r]) v /= p;
    for (int i = 0; i < rows; ++i) {
      if (i == r || t[i][k] == 0) continue;
      Real f = t[i][k];
      for (int j = 0; j <= cols; ++j) t[i][j] -= f * t[r][j];
    }
    basis[r] = k;
  }

  // Minimizes cost over the tableau with Bland's rule. Columns at or beyond
  // `barred` never enter. Returns false when unbounded.
  bool minimize(const std::vector<Real>& cost, int barred) {
    for (int guard = 0; guard < 200000; ++guard) {
      int enter = -1;
      for (int k = 0; k < barred; ++k) {
        Real d = cost[k];
        for (int r = 0; r < rows; ++r) d -= cost[basis[r]] * t[r][k];
        if (d < -kEps) {
          enter = k;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      Real best = 0;
      for (int r = 0; r < rows; ++r) {
        if (t[r][enter] <= kEps) continue;
        Real ratio = t[r][cols] / t[r][enter];
        if (leave < 0 || ratio < best - kEps ||
            (ratio <= best + kEps && basis[r] < basis[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }
};

}  // namespace

DenseResult dense_lp(const MilpInstance& inst) {
  const Real inf = std::numeric_limits<Real>::infinity();
  const int n = inst.column_count();
  DenseResult out;

  // x_j = shift_j + sum of (+/-) nonnegative u variables.
  std::vector<Real> shift(n, 0);
  std::vector<std::vector<std::pair<int, Real>>> map(n);
  struct BoundRow {
    int u;
    Real limit;
  };
  std::vector<BoundRow> bound_rows;
  int u_count = 0;
  for (int j = 0; j < n; ++j) {
    Real lo = inst.columns[j].lower, up = inst.columns[j].upper;
    if (lo > up) {
      out.status = Status::Infeasible;
      return out;
    }
    if (lo > -inf) {
      shift[j] = lo;
      map[j].push_back({u_count, 1});
      if (up < inf) bound_rows.push_back({u_count, up - lo});
      ++u_count;
    } else if (up < inf) {
      shift[j] = up;
      map[j].push_back({u_count++, -1});
    } else {
      map[j].push_back({u_count++, 1});
      map[j].push_back({u_count++, -1});
    }
  }

  struct DenseRow {
    std::vector<Real> a;
    Sense sense;
    Real rhs;
  };
  std::vector<DenseRow> rows;
  for (const auto& r : inst.rows) {
    DenseRow d{std::vector<Real>(u_count, 0), r.sense, static_cast<Real>(r.rhs)};
    for (const auto& [j, a] : r.entries) {
      d.rhs -= a * shift[j];
      for (const auto& [u, s] : map[j]) d.a[u] += a * s;
    }
    rows.push_back(std::move(d));
  }
  for (const auto& b : bound_rows) {
    DenseRow d{std::vector<Real>(u_count, 0), Sense::LessEqual, b.limit};
    d.a[b.u] = 1;
    rows.push_back(std::move(d));
  }

  const int m = static_cast<int>(rows.size());
  int slack_count = 0;
  for (const auto& r : rows)
    if (r.sense != Sense::Equal) ++slack_count;
  const int structural = u_count + slack_count;
  Tableau tab;
  tab.rows = m;
  tab.cols = structural + m;
  tab.t.assign(m, std::vector<Real>(tab.cols + 1, 0));
  tab.basis.resize(m);
  int slack = u_count;
  for (int i = 0; i < m; ++i) {
    auto& row = tab.t[i];
    for (int u = 0; u < u_count; ++u) row[u] = rows[i].a[u];
    if (rows[i].sense == Sense::LessEqual) row[slack++] = 1;
    else if (rows[i].sense == Sense::GreaterEqual) row[slack++] = -1;
    row[tab.cols] = rows[i].rhs;
    if (row[tab.cols] < 0)
      for (auto& v : row) v = -v;
    row[structural + i] = 1;
    tab.basis[i] = structural + i;
  }

  std::vector<Real> phase1(tab.cols, 0);
  for (int i = 0; i < m; ++i) phase1[structural + i] = 1;
  tab.minimize(phase1, tab.cols);
  Real infeas = 0;
  for (int i = 0; i < m; ++i)
    if (tab.basis[i] >= structural) infeas += tab.t[i][tab.cols];
  if (infeas > 1e-9L) {
    out.status = Status::Infeasible;
    return out;
  }
  for (int i = 0; i < m; ++i) {
    if (tab.basis[i] < structural) continue;
    for (int k = 0; k < structural; ++k) {
      if (std::abs(tab.t[i][k]) > 1e-9L) {
        tab.pivot(i, k);
        break;
      }
    }
  }

  std::vector<Real> cost(tab.cols, 0);
  for (int j = 0; j < n; ++j) {
    Real c = inst.columns[j].objective;
    for (const auto& [u, s] : map[j]) cost[u] -= c * s;
  }
  if (!tab.minimize(cost, structural)) {
    out.status = Status::Unbounded;
    return out;
  }
  std::vector<Real> u(tab.cols, 0);
  for (int i = 0; i < m; ++i) u[tab.basis[i]] = tab.t[i][tab.cols];
  out.values.resize(n);
  Real obj = 0;
  for (int j = 0; j < n; ++j) {
    Real x = shift[j];
    for (const auto& [k, s] : map[j]) x += s * u[k];
    out.values[j] = static_cast<double>(x);
    obj += static_cast<Real>(inst.columns[j].objective) * x;
  }
  out.objective = static_cast<double>(obj);
  out.status = Status::Optimal;
  return out;
}

DenseResult dense_milp(const MilpInstance& inst) {
  std::vector<int> free;
  for (int j = 0; j < inst.column_count(); ++j) {
    const auto& c = inst.columns[j];
    if (c.binary && std::ceil(c.lower) < std::floor(c.upper)) free.push_back(j);
  }
  DenseResult best;
  best.status = Status::Infeasible;
  for (long k = 0; k < (1L << free.size()); ++k) {
    MilpInstance fixed = inst;
    for (size_t b = 0; b < free.size(); ++b) {
      double v = (k >> b) & 1L ? 1.0 : 0.0;
      fixed.columns[free[b]].lower = fixed.columns[free[b]].upper = v;
    }
    DenseResult r = dense_lp(fixed);
    if (r.status == Status::Unbounded) return r;
    if (r.status == Status::Optimal &&
        (best.status != Status::Optimal || r.objective > best.objective))
      best = r;
  }
  return best;
}

}  // namespace scdr::testing

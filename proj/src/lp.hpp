#pragma once

// Dense two-phase simplex with Bland's rule, generic over the number type.
// Exact with Rational (eps = 0); with double, eps is the pivot tolerance.

#include <cstddef>
#include <vector>

namespace resolvex::lp {

enum class Sense { Le, Eq, Ge };
enum class Status { Optimal, Infeasible, Unbounded };

template <class T>
struct Row {
  std::vector<T> coef;
  Sense sense;
  T rhs;
};

template <class T>
struct Result {
  Status status = Status::Infeasible;
  T value{};
  std::vector<T> x;
};

// maximize c.x subject to rows, x >= 0
template <class T>
Result<T> maximize(const std::vector<T>& c, std::vector<Row<T>> rows, const T& eps) {
  const size_t n = c.size();
  const size_t m = rows.size();
  for (auto& r : rows) {
    r.coef.resize(n);
    if (r.rhs < 0) {
      for (auto& v : r.coef) v = -v;
      r.rhs = -r.rhs;
      if (r.sense == Sense::Le) r.sense = Sense::Ge;
      else if (r.sense == Sense::Ge) r.sense = Sense::Le;
    }
  }
  size_t slack = 0, art = 0;
  for (const auto& r : rows) {
    if (r.sense != Sense::Eq) ++slack;
    if (r.sense != Sense::Le) ++art;
  }
  const size_t art0 = n + slack;
  const size_t cols = art0 + art;
  std::vector<std::vector<T>> t(m + 1, std::vector<T>(cols + 1, T(0)));
  std::vector<size_t> basis(m);
  size_t s = n, a = art0;
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) t[i][j] = rows[i].coef[j];
    t[i][cols] = rows[i].rhs;
    if (rows[i].sense == Sense::Le) {
      t[i][s] = 1;
      basis[i] = s++;
    } else {
      if (rows[i].sense == Sense::Ge) t[i][s++] = -1;
      t[i][a] = 1;
      basis[i] = a++;
    }
  }

  auto pivot = [&](size_t r, size_t col) {
    T p = t[r][col];
    for (auto& v : t[r]) v /= p;
    for (size_t i = 0; i <= m; ++i) {
      if (i == r || t[i][col] == 0) continue;
      T f = t[i][col];
      for (size_t j = 0; j <= cols; ++j)
        if (t[r][j] != 0) t[i][j] -= f * t[r][j];
    }
    basis[r] = col;
  };
  // returns false when unbounded
  auto run = [&](size_t limit) {
    for (;;) {
      size_t enter = limit;
      for (size_t j = 0; j < limit; ++j)
        if (t[m][j] < -eps) {
          enter = j;
          break;
        }
      if (enter == limit) return true;
      size_t leave = m;
      T best{};
      for (size_t i = 0; i < m; ++i) {
        if (!(t[i][enter] > eps)) continue;
        T ratio = t[i][cols] / t[i][enter];
        if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m) return false;
      pivot(leave, enter);
    }
  };

  Result<T> res;
  if (art > 0) {
    for (size_t j = art0; j < cols; ++j) t[m][j] = 1;
    for (size_t i = 0; i < m; ++i)
      if (basis[i] >= art0)
        for (size_t j = 0; j <= cols; ++j) t[m][j] -= t[i][j];
    run(cols);
    if (t[m][cols] < -eps) return res;
    for (size_t i = 0; i < m; ++i) {
      if (basis[i] < art0) continue;
      for (size_t j = 0; j < art0; ++j)
        if (t[i][j] > eps || t[i][j] < -eps) {
          pivot(i, j);
          break;
        }
    }
  }
  for (auto& v : t[m]) v = 0;
  for (size_t j = 0; j < n; ++j) t[m][j] = -c[j];
  for (size_t i = 0; i < m; ++i) {
    if (t[m][basis[i]] == 0) continue;
    T f = t[m][basis[i]];
    for (size_t j = 0; j <= cols; ++j) t[m][j] -= f * t[i][j];
  }
  if (!run(art0)) {
    res.status = Status::Unbounded;
    return res;
  }
  res.status = Status::Optimal;
  res.value = t[m][cols];
  res.x.assign(n, T(0));
  for (size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = t[i][cols];
  return res;
}

}  // namespace resolvex::lp

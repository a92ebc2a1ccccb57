// Dip statistic following Hartigan & Hartigan's algorithm as maintained in
// the R `diptest` package: alternate greatest convex minorant and least
// concave majorant fits over a shrinking modal interval.
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>

#include "avtrack/clocksync/stats.hpp"

namespace avtrack::clocksync {

double dip_statistic(std::vector<double> xs) {
  const int n = static_cast<int>(xs.size());
  if (n < 2) return 0.5;  // degenerate: 1 / (2n) with n = 1
  std::sort(xs.begin(), xs.end());
  // 1-based views to stay close to the reference formulation.
  std::vector<double> x(static_cast<std::size_t>(n) + 1);
  std::copy(xs.begin(), xs.end(), x.begin() + 1);
  if (x[static_cast<std::size_t>(n)] == x[1]) return 1.0 / (2.0 * n);

  std::vector<int> mn(static_cast<std::size_t>(n) + 1), mj(static_cast<std::size_t>(n) + 1);
  std::vector<int> gcm(static_cast<std::size_t>(n) + 2), lcm(static_cast<std::size_t>(n) + 2);
  auto X = [&](int i) { return x[static_cast<std::size_t>(i)]; };
  auto MN = [&](int i) -> int& { return mn[static_cast<std::size_t>(i)]; };
  auto MJ = [&](int i) -> int& { return mj[static_cast<std::size_t>(i)]; };
  auto G = [&](int i) -> int& { return gcm[static_cast<std::size_t>(i)]; };
  auto L = [&](int i) -> int& { return lcm[static_cast<std::size_t>(i)]; };

  // Convex minorant index chain.
  MN(1) = 1;
  for (int j = 2; j <= n; ++j) {
    MN(j) = j - 1;
    for (;;) {
      const int a = MN(j);
      const int b = MN(a);
      if (a == 1 || (X(j) - X(a)) * (a - b) < (X(a) - X(b)) * (j - a)) break;
      MN(j) = b;
    }
  }
  // Concave majorant index chain.
  MJ(n) = n;
  for (int k = n - 1; k >= 1; --k) {
    MJ(k) = k + 1;
    for (;;) {
      const int a = MJ(k);
      const int b = MJ(a);
      if (a == n || (X(k) - X(a)) * (a - b) < (X(a) - X(b)) * (k - a)) break;
      MJ(k) = b;
    }
  }

  int low = 1, high = n;
  double dip = 1.0;  // in units of 1 / (2n)
  for (;;) {
    int i = 1;
    G(1) = high;
    while (G(i) > low) {
      G(i + 1) = MN(G(i));
      ++i;
    }
    const int l_gcm = i;
    int ig = l_gcm;
    int ix = ig - 1;

    i = 1;
    L(1) = low;
    while (L(i) < high) {
      L(i + 1) = MJ(L(i));
      ++i;
    }
    const int l_lcm = i;
    int ih = l_lcm;
    int iv = 2;

    double d = 0.0;
    if (l_gcm != 2 || l_lcm != 2) {
      do {
        const int gx = G(ix);
        const int lv = L(iv);
        if (gx > lv) {
          const int g1 = G(ix + 1);
          const double dx = (lv - g1 + 1) - (X(lv) - X(g1)) * (gx - g1) / (X(gx) - X(g1));
          ++iv;
          if (dx >= d) {
            d = dx;
            ig = ix + 1;
            ih = iv - 1;
          }
        } else {
          const int l1 = L(iv - 1);
          const double dx = (X(gx) - X(l1)) * (lv - l1) / (X(lv) - X(l1)) - (gx - l1 - 1);
          --ix;
          if (dx >= d) {
            d = dx;
            ig = ix + 1;
            ih = iv;
          }
        }
        if (ix < 1) ix = 1;
        if (iv > l_lcm) iv = l_lcm;
      } while (G(ix) != L(iv));
    } else {
      d = 1.0;
    }
    if (d < dip) break;

    double dip_l = 0.0;
    for (int j = ig; j < l_gcm; ++j) {
      double max_t = 1.0;
      const int jb = G(j + 1), je = G(j);
      if (je - jb > 1 && X(je) != X(jb)) {
        const double C = (je - jb) / (X(je) - X(jb));
        for (int jj = jb; jj <= je; ++jj) max_t = std::max(max_t, (jj - jb + 1) - (X(jj) - X(jb)) * C);
      }
      dip_l = std::max(dip_l, max_t);
    }
    double dip_u = 0.0;
    for (int j = ih; j < l_lcm; ++j) {
      double max_t = 1.0;
      const int jb = L(j), je = L(j + 1);
      if (je - jb > 1 && X(je) != X(jb)) {
        const double C = (je - jb) / (X(je) - X(jb));
        for (int jj = jb; jj <= je; ++jj) max_t = std::max(max_t, (X(jj) - X(jb)) * C - (jj - jb - 1));
      }
      dip_u = std::max(dip_u, max_t);
    }
    dip = std::max(dip, std::max(dip_l, dip_u));

    // Without this check the cycle can repeat forever.
    if (low == G(ig) && high == L(ih)) break;
    low = G(ig);
    high = L(ih);
  }
  return dip / (2.0 * n);
}

double dip_critical_value(std::size_t n, double alpha) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, double>, double> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find({n, alpha}); it != cache.end()) return it->second;
  }
  constexpr int kReps = 400;
  std::mt19937_64 rng(0x5eed0d1bULL + n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> dips(kReps), sample(n);
  for (int r = 0; r < kReps; ++r) {
    for (auto& v : sample) v = u(rng);
    dips[static_cast<std::size_t>(r)] = dip_statistic(sample);
  }
  std::sort(dips.begin(), dips.end());
  const auto k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * kReps)) - 1;
  const double crit = dips[std::min(k, dips.size() - 1)];
  std::lock_guard lock(mu);
  cache[{n, alpha}] = crit;
  return crit;
}

}  // namespace avtrack::clocksync

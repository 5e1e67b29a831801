#pragma once

// Seeded random maps for property tests.

#include "plqi/plqi.hpp"

#include <random>
#include <vector>

namespace plqi::gen {

using Rng = std::mt19937_64;

inline Rat pick(Rng &rng, const std::vector<Rat> &pool)
{
  std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
  return pool[d(rng)];
}

inline long uniform(Rng &rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

/// Rational in [lo, hi] on a grid of step 1/den.
inline Rat grid_rat(Rng &rng, const Rat &lo, const Rat &hi, long den = 12)
{
  Rat steps = (hi - lo) * den;
  long k = uniform(rng, 0, static_cast<long>(floor(steps.get_d())));
  return lo + rat(k, den);
}

inline std::vector<Rat> ratios() { return {Rat(2), Rat(3), Rat(4), rat(3, 2), rat(5, 2)}; }

/// Strictly increasing interior points of (lo, hi).
inline std::vector<Rat> interior(Rng &rng, const Rat &lo, const Rat &hi, long count)
{
  std::vector<Rat> xs;
  for (long i = 0; i < count; ++i)
    xs.push_back(lo + (hi - lo) * rat(uniform(rng, 1, 47), 48));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

inline FinitePL random_head(Rng &rng, const Rat &s, Rat value_at_zero = 0)
{
  FinitePL head{{{Rat(0), grid_rat(rng, rat(1, 3), Rat(3))}}, value_at_zero};
  for (auto &x : interior(rng, Rat(0), s, uniform(rng, 0, 2)))
    head.pieces.push_back({x, grid_rat(rng, rat(1, 3), Rat(3))});
  return head;
}

/// A valid block-rule map: random head, 1 to 3 tail pieces, some slopes of
/// the form c0 + c1 q^n and some break points with an additive offset.
inline PLQMap random_exact_map(Rng &rng, std::optional<Rat> ratio = std::nullopt)
{
  Rat rho = ratio ? *ratio : pick(rng, ratios());
  Rat s = pick(rng, {Rat(1), Rat(2), rat(1, 2)});
  FinitePL head = random_head(rng, s, uniform(rng, 0, 3) == 0 ? Rat(uniform(rng, 1, 3)) : Rat(0));
  TailBlockRule tail{rho, s, {}};
  std::vector<Rat> starts{s};
  for (auto &x : interior(rng, s, s * rho, uniform(rng, 0, 2)))
    starts.push_back(x);
  for (std::size_t i = 0; i < starts.size(); ++i) {
    BreakExpr pos{starts[i], Rat(0)};
    if (i > 0 && uniform(rng, 0, 3) == 0) {
      // geo' r^n + c with c kept inside the block for every n >= 0.
      Rat next = i + 1 < starts.size() ? starts[i + 1] : s * rho;
      Rat room = rmin(Rat(next - starts[i]), Rat(starts[i] - starts[i - 1]));
      pos = {starts[i] - room / 2, room / 2};
    }
    Rat c0 = grid_rat(rng, rat(1, 2), Rat(3));
    SlopeExpr slope{c0};
    if (uniform(rng, 0, 2) == 0)
      slope = SlopeExpr::canonical({c0, grid_rat(rng, -c0 / 2, c0 / 2), pick(rng, {rat(1, 2), rat(1, 3), rat(2, 3)})});
    tail.pieces.push_back({pos, slope});
  }
  return PLQMap::from_parts(std::move(head), std::move(tail));
}

/// Identity on [0, 1]; on each block [r^n, r^(n+1)] constant slopes whose
/// total rise is r^n (r - 1), so every anchor r^n is fixed.
inline PLQMap random_anchored_map(Rng &rng, const Rat &rho, long pieces, Rat A0 = 1)
{
  auto pts = interior(rng, Rat(1), rho, pieces - 1);
  std::vector<Rat> starts{Rat(1)};
  starts.insert(starts.end(), pts.begin(), pts.end());
  std::vector<Rat> slopes;
  Rat rise = 0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    Rat end = i + 1 < starts.size() ? starts[i + 1] : rho;
    slopes.push_back(grid_rat(rng, rat(1, 2), Rat(3)));
    rise += slopes.back() * (end - starts[i]);
  }
  Rat k = A0 * (rho - 1) / rise;
  TailBlockRule tail{rho, Rat(1), {}};
  for (std::size_t i = 0; i < starts.size(); ++i)
    tail.pieces.push_back({{starts[i], Rat(0)}, {slopes[i] * k}});
  FinitePL head{{{Rat(0), A0}}, Rat(0)};
  return PLQMap::from_parts(std::move(head), std::move(tail));
}

/// An element of H: slopes 1 + c q^n and 1 - c q^n on the two halves of each
/// block, so anchors are fixed and psi is identically 1.
inline PLQMap random_h(Rng &rng, const Rat &rho)
{
  Rat c = grid_rat(rng, rat(-1, 2), rat(1, 2));
  if (c == 0)
    c = rat(1, 4);
  Rat q = pick(rng, {rat(1, 2), rat(1, 3), rat(3, 4)});
  Rat mid = (1 + rho) / 2;
  TailBlockRule tail{rho, Rat(1), {{{Rat(1), Rat(0)}, {Rat(1), c, q}}, {{mid, Rat(0)}, {Rat(1), -c, q}}}};
  FinitePL head{{{Rat(0), Rat(1)}}, Rat(0)};
  return PLQMap::from_parts(std::move(head), std::move(tail));
}

/// A general element of H: random head, c0 = 1 everywhere.
inline PLQMap random_h_general(Rng &rng, const Rat &rho)
{
  FinitePL head = random_head(rng, Rat(1));
  TailBlockRule tail{rho, Rat(1), {}};
  std::vector<Rat> starts{Rat(1)};
  for (auto &x : interior(rng, Rat(1), rho, uniform(rng, 0, 2)))
    starts.push_back(x);
  for (auto &x : starts)
    tail.pieces.push_back({{x, Rat(0)}, SlopeExpr::canonical({Rat(1), grid_rat(rng, rat(-1, 2), rat(1, 2)),
                                                              pick(rng, {rat(1, 2), rat(1, 3)})})});
  return PLQMap::from_parts(std::move(head), std::move(tail));
}

/// Two anchored maps on one geometric 4-piece partition with the same
/// limit set whose slopes differ by at least 1/4 on the middle pieces.
struct SeparatedPair {
  PLQMap f, g;
  Rat K1;  // min ratio of consecutive partition points
  Rat gap; // lim max_i |slope difference|
};

inline SeparatedPair random_separated_pair(Rng &rng)
{
  const std::vector<Rat> steps{rat(6, 5), rat(5, 4), rat(4, 3), rat(3, 2)};
  for (;;) {
    std::vector<Rat> p{Rat(1)};
    for (int i = 0; i < 4; ++i)
      p.push_back(p.back() * pick(rng, steps));
    const Rat rho = p.back();
    std::vector<Rat> psi{Rat(1)};
    for (int i = 1; i < 4; ++i)
      psi.push_back(grid_rat(rng, rat(1, 2), rat(3, 2)));
    psi.push_back(Rat(1));
    Rat alt = grid_rat(rng, rat(1, 2), rat(3, 2));
    auto values = [&](const Rat &mid) {
      std::vector<Rat> v;
      for (int i = 0; i <= 4; ++i)
        v.push_back((i == 2 ? mid : psi[i]) * p[i]);
      return v;
    };
    auto vf = values(psi[2]), vg = values(alt);
    auto increasing = [](const std::vector<Rat> &v) {
      for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] <= v[i - 1])
          return false;
      return true;
    };
    if (!increasing(vf) || !increasing(vg))
      continue;
    Rat lo = rmin(rmin(psi[0], psi[1]), psi[3]), hi = rmax(rmax(psi[0], psi[1]), psi[3]);
    if (!(lo < psi[2] && psi[2] < hi && lo < alt && alt < hi))
      continue;
    Rat d = rmax(rabs(Rat(vf[2] - vg[2])) / (p[2] - p[1]), rabs(Rat(vf[2] - vg[2])) / (p[3] - p[2]));
    if (d < rat(1, 4))
      continue;
    auto build = [&](const std::vector<Rat> &v) {
      TailBlockRule tail{rho, Rat(1), {}};
      for (int i = 0; i < 4; ++i)
        tail.pieces.push_back({{p[i], Rat(0)}, {(v[i + 1] - v[i]) / (p[i + 1] - p[i])}});
      return PLQMap::from_parts({{{Rat(0), Rat(1)}}, Rat(0)}, std::move(tail));
    };
    Rat K1 = rho;
    for (int i = 1; i <= 4; ++i)
      K1 = rmin(K1, Rat(p[i] / p[i - 1]));
    return {build(vf), build(vg), K1, d};
  }
}

/// Self-similar map: anchor 1, constant slopes, f(r x) = r f(x) for x >= 1.
inline PLQMap random_self_similar(Rng &rng, const Rat &rho)
{
  Rat A0 = pick(rng, {rat(1, 2), rat(2, 3), Rat(1), rat(3, 2), Rat(2)});
  return random_anchored_map(rng, rho, uniform(rng, 1, 3), A0);
}

/// Random rational in [0, hi] with small denominators.
inline Rat random_point(Rng &rng, const Rat &hi)
{
  long den = uniform(rng, 1, 9);
  Rat r = hi * rat(uniform(rng, 0, 1000), 1000);
  return rat(static_cast<long>(std::floor(Rat(r * den).get_d())), den);
}

} // namespace plqi::gen

#pragma once

// Explicit maps: scalings, interval representatives, the counterexample
// pair, g_lambda, embedded profiles and two-slope maps with fixed anchors.

#include "plqi/plmap.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace plqi {

struct BadLambda : MapError {
  using MapError::MapError;
};

struct DegenerateInterval : MapError {
  DegenerateInterval() : MapError("interval must satisfy 0 < a <= b") {}
};

struct NonpositiveScale : MapError {
  NonpositiveScale() : MapError("scale must be positive") {}
};

struct BadProfile : MapError {
  using MapError::MapError;
};

/// x -> c x.
inline PLQMap scaling_map(const Rat &c)
{
  if (c <= 0)
    throw NonpositiveScale();
  return linear_map(c);
}

/// Smallest admissible block ratio for the interval [a, b]; any larger
/// value works.
inline Rat interval_lambda_bound(const Rat &a, const Rat &b)
{
  return rmax(Rat(1), rmax(Rat(a / (2 * b - a)), Rat(2 * b / a - 1)));
}

/// Slopes on the two halves of each block of the [a, b] representative.
inline std::pair<Rat, Rat> interval_slopes(const Rat &a, const Rat &b, const Rat &lambda)
{
  Rat first = ((lambda + 1) * a - 2 * b) / (lambda - 1);
  Rat second = (2 * lambda * b - (lambda + 1) * a) / (lambda - 1);
  return {first, second};
}

/// Identity on [0, 1]; on [l^n, l^(n+1)] two pieces split at the midpoint,
/// so that f(x)/x tends to b at block starts and to a at midpoints.
inline PLQMap interval_representative(const Rat &a, const Rat &b, std::optional<Rat> lambda = std::nullopt)
{
  if (a <= 0 || a > b)
    throw DegenerateInterval();
  Rat bound = interval_lambda_bound(a, b);
  Rat l = lambda ? *lambda : bound + 1;
  if (l <= bound)
    throw BadLambda("lambda must exceed " + to_string(bound));
  auto [s1, s2] = interval_slopes(a, b, l);
  FinitePL head{{{Rat(0), Rat(1)}}, Rat(0)};
  TailBlockRule tail{l, Rat(1), {{{Rat(1), Rat(0)}, {s1}}, {{(1 + l) / 2, Rat(0)}, {s2}}}};
  return PLQMap::from_parts(std::move(head), std::move(tail),
                            "rep(" + to_string(a) + "," + to_string(b) + "," + to_string(l) + ")");
}

struct MapPair {
  PLQMap f;
  PLQMap g;
};

/// f = id and the map g that is x/2 on [0, 1], slope 1/2 on [2^n, 2^n + 1]
/// and slope 1 - (1/4)(1/2)^n on [2^n + 1, 2^(n+1)].
inline MapPair counterexample_pair()
{
  FinitePL head{{{Rat(0), rat(1, 2)}}, Rat(0)};
  TailBlockRule tail{Rat(2), Rat(1),
                     {{{Rat(1), Rat(0)}, {rat(1, 2)}}, {{Rat(1), Rat(1)}, {Rat(1), rat(-1, 4), rat(1, 2)}}}};
  return {identity_map(), PLQMap::from_parts(std::move(head), std::move(tail), "ex36_g")};
}

/// e_n = 1 - g(2^n)/2^n for the counterexample map, by the recurrence
/// e_(n+1) = e_n/2 + 1/2^(n+3) - 1/2^(2n+3) + 1/2^(n+2), e_1 = 1/2.
inline Rat epsilon_recurrence(long n)
{
  if (n < 1)
    throw std::invalid_argument("index must be at least 1");
  Rat e = rat(1, 2);
  for (long k = 1; k < n; ++k) {
    Rat p = rpow(rat(1, 2), k);
    e = e / 2 + p / 8 - p * p / 8 + p / 4;
  }
  return e;
}

/// (5/2) x on [0, 1]; slope 1 then 2 on the halves of [l^n, l^(n+1)].
/// For l < 1 this is g_{1/l}.
inline PLQMap g_lambda(const Rat &lambda)
{
  if (lambda <= 0 || lambda == 1)
    throw BadLambda("lambda must be positive and different from 1");
  if (lambda < 1)
    return g_lambda(1 / lambda);
  FinitePL head{{{Rat(0), rat(5, 2)}}, Rat(0)};
  TailBlockRule tail{lambda, Rat(1), {{{Rat(1), Rat(0)}, {Rat(1)}}, {{(1 + lambda) / 2, Rat(0)}, {Rat(2)}}}};
  return PLQMap::from_parts(std::move(head), std::move(tail), "g_lambda(" + to_string(lambda) + ")");
}

/// A strictly increasing PL function on [0, 1] from 1 to M.
struct ProfileFn {
  std::vector<HeadPiece> pieces; // first start is 0, starts below 1
  Rat M;

  Rat operator()(const Rat &z) const
  {
    Rat v = 1;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      Rat end = i + 1 < pieces.size() ? pieces[i + 1].start : Rat(1);
      if (z <= end)
        return v + pieces[i].slope * (z - pieces[i].start);
      v += pieces[i].slope * (end - pieces[i].start);
    }
    return v;
  }

  static ProfileFn affine(const Rat &M) { return {{{Rat(0), M - 1}}, M}; }
};

inline void check_profile(const ProfileFn &p)
{
  if (p.pieces.empty() || p.pieces.front().start != 0)
    throw BadProfile("profile must start at 0");
  for (std::size_t i = 0; i < p.pieces.size(); ++i) {
    if (p.pieces[i].slope <= 0)
      throw BadProfile("profile must be strictly increasing");
    if (p.pieces[i].start >= 1 || (i > 0 && p.pieces[i].start <= p.pieces[i - 1].start))
      throw BadProfile("profile break points must increase inside [0, 1)");
  }
  if (p.M <= 1)
    throw BadProfile("profile must end above 1");
  if (p(1) != p.M)
    throw BadProfile("profile must end at M");
}

/// h1(z) = (1 + z) f(z) + (f(z) - 2M)/(2M - 1) on [0, 1].
inline Rat embed_h1(const ProfileFn &p, const Rat &z)
{
  Rat fz = p(z);
  return (1 + z) * fz + (fz - 2 * p.M) / (2 * p.M - 1);
}

/// h2(1), the value where the linear piece on [1, 2M] starts.
inline Rat embed_h2_start(const Rat &M) { return (4 * M * M - 3 * M) / (2 * M - 1); }

/// Nodes of the sampled h1: each profile piece split into `refinement`
/// equal parts.
inline std::vector<Rat> embed_nodes(const ProfileFn &p, long refinement)
{
  std::vector<Rat> zs;
  for (std::size_t i = 0; i < p.pieces.size(); ++i) {
    Rat a = p.pieces[i].start;
    Rat b = i + 1 < p.pieces.size() ? p.pieces[i + 1].start : Rat(1);
    for (long k = 0; k < refinement; ++k)
      zs.push_back(a + (b - a) * Rat(k) / Rat(refinement));
  }
  zs.push_back(1);
  return zs;
}

/// g_f for a PL profile f. h1 is sampled into a PL map; the block rule has
/// ratio 2M, so that g_f(x_n)/x_n -> f(z) along
/// x_n = ((2M)^n - (2M)^(n-1)) z + (2M)^n at the sample nodes.
inline PLQMap embed_profile(const ProfileFn &p, long refinement)
{
  check_profile(p);
  if (refinement < 1)
    throw BadProfile("refinement must be positive");
  const Rat M = p.M;
  const Rat twoM = 2 * M;
  auto zs = embed_nodes(p, refinement);
  // h on [0, 2M] as (start, slope) pieces.
  std::vector<HeadPiece> h;
  for (std::size_t i = 0; i + 1 < zs.size(); ++i) {
    Rat slope = (embed_h1(p, zs[i + 1]) - embed_h1(p, zs[i])) / (zs[i + 1] - zs[i]);
    h.push_back({zs[i], slope});
  }
  h.push_back({Rat(1), (twoM - embed_h2_start(M)) / (twoM - 1)});

  FinitePL head{h, Rat(0)};
  TailBlockRule tail{twoM, twoM, {}};
  for (auto &piece : h)
    tail.pieces.push_back({{twoM + (twoM - 1) * piece.start, Rat(0)}, {piece.slope}});
  return PLQMap::from_parts(std::move(head), std::move(tail), "g_f(M=" + to_string(M) + ")");
}

/// Point of the profile block with coordinate z: the limit of g_f(x)/x
/// along x_n(z) equals psi at this point.
inline Rat embed_coordinate(const Rat &M, const Rat &z) { return 2 * M + (2 * M - 1) * z; }

/// Fixes the anchors rho^n; slope lambda on [rho^n, c rho^n] and the
/// complementary slope on [c rho^n, rho^(n+1)]. Identity on [0, 1].
inline PLQMap anchored_two_slope(const Rat &rho, const Rat &c, const Rat &lambda)
{
  if (!(1 < c && c < rho))
    throw MapError("break coefficient must lie inside the block");
  Rat mu = (rho - 1 - lambda * (c - 1)) / (rho - c);
  if (lambda <= 0 || mu <= 0)
    throw BadLambda("slopes of an anchored two-slope map must be positive");
  FinitePL head{{{Rat(0), Rat(1)}}, Rat(0)};
  TailBlockRule tail{rho, Rat(1), {{{Rat(1), Rat(0)}, {lambda}}, {{c, Rat(0)}, {mu}}}};
  return PLQMap::from_parts(std::move(head), std::move(tail), "two_slope(" + to_string(lambda) + ")");
}

} // namespace plqi

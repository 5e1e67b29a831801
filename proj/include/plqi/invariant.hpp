#pragma once

// The limit set S_[f] = { lim f(x_n)/x_n : x_n -> inf } and the subgroups
// H, H_c, H_I it defines.

#include "plqi/error_bound.hpp"
#include "plqi/plmap.hpp"

#include <optional>
#include <string>
#include <vector>

namespace plqi {

struct NotInHbar : MapError {
  NotInHbar() : MapError("limit set of the left factor is not a single point") {}
};

struct NotExact : MapError {
  NotExact() : MapError("limit set is only known numerically") {}
};

/// psi(t) = lim f(s r^n t) / (s r^n t) for t in [1, P], where P is the
/// period of the scale limit (the tail ratio for block rules).
struct LimitProfile {
  Rat anchor;
  ScaleProfile scale;

  const Rat &period() const { return scale.period(); }

  Rat psi(const Rat &t) const
  {
    Rat x = anchor * t;
    return scale(x) / x;
  }

  /// Grid nodes in [1, P], both ends included.
  std::vector<Rat> grid() const
  {
    std::vector<Rat> ts{Rat(1), period()};
    for (auto &n : scale.nodes())
      ts.push_back(ScaleProfile::normalize(n.x / anchor, period()));
    detail::sort_unique(ts);
    return ts;
  }
};

inline LimitProfile limit_profile(const PLQMap &map)
{
  const auto &p = map.profile();
  if (!p)
    throw NoClosedForm();
  return {map.anchor(), *p};
}

enum class LimitMode { Exact, Certified };

struct CertifiedWindow {
  long N;
  Rat lo;
  Rat hi;
};

struct LimitInterval {
  Rat lo;
  Rat hi;
  LimitMode mode = LimitMode::Exact;
  // Certified mode: S lies in [lo - err, hi + err].
  Rat err = 0;
  std::vector<CertifiedWindow> windows;
  // Certified mode: running intersection of the window enclosures.
  Rat enclosure_lo = 0;
  Rat enclosure_hi = 0;

  bool singleton() const { return mode == LimitMode::Exact && lo == hi; }
  friend bool operator==(const LimitInterval &a, const LimitInterval &b)
  {
    return a.mode == b.mode && a.lo == b.lo && a.hi == b.hi && a.err == b.err;
  }
};

inline const std::vector<long> &default_windows()
{
  static const std::vector<long> w{10, 20, 40};
  return w;
}

/// Exact extremes of f(x)/x over [a, b]. On an affine piece f(x)/x is
/// monotone, so break points and window ends suffice.
inline std::pair<Rat, Rat> ratio_extremes(const PLQMap &map, const Rat &a, const Rat &b)
{
  std::vector<Rat> xs = map.break_candidates(a, b);
  xs.push_back(a);
  xs.push_back(b);
  Rat lo = map(a) / a;
  Rat hi = lo;
  for (auto &x : xs) {
    Rat r = map(x) / x;
    lo = rmin(lo, r);
    hi = rmax(hi, r);
  }
  return {lo, hi};
}

/// Window extremes of f(x)/x over one period. When the map carries a
/// profile the error of window N is the tail bound at its left end, and the
/// enclosures are intersected across the schedule. Without a profile only
/// the drift between the last two windows is available, so the estimate
/// comes from the last window alone.
inline LimitInterval certified_limit_set(const PLQMap &map, const std::vector<long> &schedule = default_windows())
{
  const auto &profile = map.profile();
  const Rat s = map.anchor();
  const Rat period = profile ? profile->period() : map.ratio();
  LimitInterval out{Rat(0), Rat(0), LimitMode::Certified, Rat(0), {}};
  std::optional<Rat> enc_lo, enc_hi;
  for (long N : schedule) {
    Rat a = s * rpow(period, N);
    auto [lo, hi] = ratio_extremes(map, a, a * period);
    Rat l, h;
    if (profile) {
      Rat err = relative_error_bound(*map.node(), a);
      l = lo - err;
      h = hi + err;
    } else {
      Rat err = qi_certificate(map).additive / a;
      if (!out.windows.empty()) {
        const auto &prev = out.windows.back();
        err += rmax(rabs(Rat(lo - prev.lo)), rabs(Rat(hi - prev.hi)));
      }
      l = lo - err;
      h = hi + err;
      enc_lo.reset();
      enc_hi.reset();
    }
    out.windows.push_back({N, lo, hi});
    enc_lo = enc_lo ? rmax(*enc_lo, l) : l;
    enc_hi = enc_hi ? rmin(*enc_hi, h) : h;
    out.lo = lo;
    out.hi = hi;
  }
  // Report the window values clipped to the enclosure and an error that
  // covers it.
  out.lo = rmax(out.lo, *enc_lo);
  out.hi = rmin(out.hi, *enc_hi);
  if (out.lo > out.hi)
    out.lo = out.hi = (*enc_lo + *enc_hi) / 2;
  out.err = rmax(Rat(out.lo - *enc_lo), Rat(*enc_hi - out.hi));
  out.enclosure_lo = *enc_lo;
  out.enclosure_hi = *enc_hi;
  return out;
}

inline LimitInterval limit_set(const PLQMap &map)
{
  if (const auto &p = map.profile())
    return {p->min_psi(), p->max_psi(), LimitMode::Exact, Rat(0), {}, p->min_psi(), p->max_psi()};
  return certified_limit_set(map);
}

enum class Answer { Yes, No };

struct Verdict {
  Answer answer;
  bool certified = false;
  Rat err = 0;
  explicit operator bool() const { return answer == Answer::Yes; }
};

/// S is exactly [lo, hi] (certified: within the residual).
inline Verdict limit_set_is(const PLQMap &map, const Rat &lo, const Rat &hi)
{
  auto S = limit_set(map);
  if (S.mode == LimitMode::Exact)
    return {S.lo == lo && S.hi == hi ? Answer::Yes : Answer::No};
  bool close = rabs(Rat(S.lo - lo)) <= S.err && rabs(Rat(S.hi - hi)) <= S.err;
  return {close ? Answer::Yes : Answer::No, true, S.err};
}

inline Verdict in_H(const PLQMap &map) { return limit_set_is(map, 1, 1); }
inline Verdict in_H_c(const PLQMap &map, const Rat &c) { return limit_set_is(map, c, c); }
inline Verdict in_H_interval(const PLQMap &map, const Rat &lo, const Rat &hi) { return limit_set_is(map, lo, hi); }

/// Union of the H_c: the limit set is a single point.
inline Verdict in_H_bar(const PLQMap &map)
{
  auto S = limit_set(map);
  if (S.mode == LimitMode::Exact)
    return {S.lo == S.hi ? Answer::Yes : Answer::No};
  return {S.hi - S.lo <= 2 * S.err ? Answer::Yes : Answer::No, true, S.err};
}

struct ScalingReport {
  Rat c;
  LimitInterval composite; // S of f ∘ g
  LimitInterval scaled;    // c S_g
  bool holds;
};

/// For f in H_c: S_{f∘g} = c S_g.
inline ScalingReport scaling_action_check(const PLQMap &f, const PLQMap &g)
{
  auto Sf = limit_set(f);
  if (!Sf.singleton())
    throw NotInHbar();
  const Rat c = Sf.lo;
  auto Sg = limit_set(g);
  LimitInterval scaled{c * Sg.lo, c * Sg.hi, Sg.mode, c * Sg.err, {}, c * Sg.enclosure_lo, c * Sg.enclosure_hi};
  auto Sfg = limit_set(compose(f, g));
  bool holds;
  if (Sfg.mode == LimitMode::Exact && scaled.mode == LimitMode::Exact)
    holds = Sfg.lo == scaled.lo && Sfg.hi == scaled.hi;
  else {
    Rat tol = Sfg.err + scaled.err;
    holds = rabs(Rat(Sfg.lo - scaled.lo)) <= tol && rabs(Rat(Sfg.hi - scaled.hi)) <= tol;
  }
  return {c, Sfg, scaled, holds};
}

struct Normalized {
  PLQMap map;
  Rat c;
};

/// f_{1/a} ∘ map, whose limit set is [1, b/a].
inline Normalized normalize_to_unit(const PLQMap &map)
{
  auto S = limit_set(map);
  if (S.mode != LimitMode::Exact)
    throw NotExact();
  if (S.lo == 1)
    return {map, Rat(1)};
  return {compose(linear_map(1 / S.lo), map), S.lo};
}

} // namespace plqi

#pragma once

// Equality modulo H. Two maps agree modulo H exactly when
// |f(x)/x - g(x)/x| -> 0, i.e. when their scale limits coincide. The
// decision follows the slope-tuple criteria first and falls back on the
// exact ratio gap.

#include "plqi/error_bound.hpp"
#include "plqi/invariant.hpp"
#include "plqi/plmap.hpp"
#include "plqi/profile.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace plqi {

struct AnchorsNotCommon : MapError {
  AnchorsNotCommon() : MapError("f(a_n)/a_n and g(a_n)/a_n do not both tend to 1") {}
};

struct IncompatibleRatios : MapError {
  IncompatibleRatios() : MapError("tail ratios are incommensurable") {}
};

/// a_n = t P^n.
struct AnchorSequence {
  Rat t;
  Rat period;
  Rat psi_f; // lim f(a_n)/a_n
  Rat psi_g;

  Rat at(long n) const { return t * rpow(period, n); }
};

/// Smallest X = s P^k (k <= limit) with the sum of both bounds below eps.
inline std::optional<Rat> closeness_threshold(const PLQMap &f, const PLQMap &g, const Rat &eps, long limit = 4000)
{
  Rat X = rmax(f.anchor(), g.anchor());
  const Rat step = 2;
  for (long k = 0; k <= limit; ++k, X *= step)
    if (relative_error_bound(*f.node(), X) + relative_error_bound(*g.node(), X) < eps)
      return X;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Ratio gap

struct GapReport {
  LimitMode mode = LimitMode::Exact;
  Rat value;       // exact limsup, or the last window value
  Rat err = 0;     // certified: limsup in [value - err, value + err]
  Rat witness = 1; // exact: limsup attained along witness * period^k
  Rat period = 1;
  std::vector<CertifiedWindow> windows; // certified: per-window sup in lo == hi
};

/// Exact sup over [a, b] of |f(x) - g(x)| / x.
inline Rat window_gap(const PLQMap &f, const PLQMap &g, const Rat &a, const Rat &b)
{
  auto xs = f.break_candidates(a, b);
  auto ys = g.break_candidates(a, b);
  xs.insert(xs.end(), ys.begin(), ys.end());
  xs.push_back(a);
  xs.push_back(b);
  Rat best = 0;
  for (auto &x : xs)
    best = rmax(best, Rat(rabs(Rat(f(x) - g(x))) / x));
  return best;
}

inline GapReport certified_ratio_gap(const PLQMap &f, const PLQMap &g,
                                     const std::vector<long> &schedule = default_windows())
{
  GapReport r;
  r.mode = LimitMode::Certified;
  const Rat s = f.anchor();
  const Rat rho = f.ratio();
  Rat add = qi_certificate(f).additive + qi_certificate(g).additive;
  Rat prev;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    Rat a = s * rpow(rho, schedule[i]);
    Rat v = window_gap(f, g, a, a * rho);
    r.windows.push_back({schedule[i], v, v});
    r.value = v;
    r.err = add / a + (i > 0 ? rabs(Rat(v - prev)) : Rat(0));
    prev = v;
  }
  return r;
}

/// limsup |f(x)/x - g(x)/x|.
inline GapReport ratio_gap_sup(const PLQMap &f, const PLQMap &g)
{
  if (f.profile() && g.profile()) {
    if (auto gap = ratio_gap(*f.profile(), *g.profile())) {
      GapReport r;
      r.value = gap->value;
      r.witness = gap->witness;
      r.period = *ScaleProfile::shared_period(*f.profile(), *g.profile());
      return r;
    }
  }
  return certified_ratio_gap(f, g);
}

// ---------------------------------------------------------------------------
// Slope tuples

struct SlopeTuples {
  AnchorSequence anchors;
  long n0; // expressions are valid for n >= n0
  // x_{n,0} < ... < x_{n,r} as coef P^n + const
  std::vector<BreakExpr> partition;
  // slopes of f and g on each piece, as functions of n
  std::vector<SlopeExpr> A;
  std::vector<SlopeExpr> B;

  std::size_t pieces() const { return A.size(); }

  /// lim d_n, with d_n = max_i |A_{n,i} - B_{n,i}|.
  Rat d_limit() const
  {
    Rat d = 0;
    for (std::size_t i = 0; i < A.size(); ++i)
      d = rmax(d, rabs(Rat(A[i].c0 - B[i].c0)));
    return d;
  }

  struct Block {
    long n;
    std::vector<Rat> x;
    std::vector<Rat> a;
    std::vector<Rat> b;
    Rat d;
  };

  /// Values for block n, with pieces of zero length dropped.
  Block at(long n) const
  {
    if (n < n0)
      throw std::invalid_argument("tuple index below its validity range");
    Rat pn = rpow(anchors.period, n);
    Block blk{n, {partition.front().at_power(pn)}, {}, {}, Rat(0)};
    for (std::size_t i = 0; i < A.size(); ++i) {
      Rat x1 = partition[i + 1].at_power(pn);
      if (x1 == blk.x.back())
        continue;
      blk.x.push_back(x1);
      blk.a.push_back(A[i].at(n));
      blk.b.push_back(B[i].at(n));
      blk.d = rmax(blk.d, rabs(Rat(blk.a.back() - blk.b.back())));
    }
    return blk;
  }
};

namespace detail {

struct Mark {
  BreakExpr pos;
  SlopeExpr slope;
};

struct WindowMarks {
  std::vector<Mark> marks; // sorted by eventual order
  long min_n = 0;
};

/// Break marks of a map around the window [t P^n, t P^(n+1)], expressed in
/// the window index n.
inline std::optional<WindowMarks> window_marks(const PLQMap &m, const Rat &t, const Rat &P)
{
  WindowMarks w;
  if (auto c = m.linear_factor()) {
    w.marks.push_back({{t, Rat(0)}, {*c}});
    return w;
  }
  if (!m.has_exact_tail())
    return std::nullopt;
  const auto &tail = m.tail();
  const Rat &rho = tail.ratio;
  const Rat &s = tail.anchor;
  long p = 0;
  for (Rat pw = 1; pw < P; pw *= rho)
    ++p;
  if (rpow(rho, p) != P)
    return std::nullopt;
  long rmin = floor_log(t / s, rho);
  long rmax = floor_log(t * P / s, rho);
  for (long r = rmin; r <= rmax; ++r) {
    Rat rr = rpow(rho, r);
    for (auto &piece : tail.pieces) {
      SlopeExpr se;
      long need = -r; // block index p n + r must be >= 0
      if (piece.slope.c1 == 0)
        se = {piece.slope.c0};
      else if (piece.slope.q == 0) {
        se = {piece.slope.c0};
        need = 1 - r;
      } else
        se = SlopeExpr::canonical({piece.slope.c0, piece.slope.c1 * rpow(piece.slope.q, r), rpow(piece.slope.q, p)});
      long nmin = need <= 0 ? 0 : (need + p - 1) / p;
      w.min_n = std::max(w.min_n, nmin);
      w.marks.push_back({{piece.pos.geo * rr, piece.pos.cst}, se});
    }
  }
  std::stable_sort(w.marks.begin(), w.marks.end(),
                   [](const Mark &a, const Mark &b) { return compare_eventual(a.pos, b.pos) < 0; });
  return w;
}

inline const SlopeExpr &active_slope(const WindowMarks &w, const BreakExpr &y)
{
  const SlopeExpr *s = &w.marks.front().slope;
  for (auto &m : w.marks)
    if (compare_eventual(m.pos, y) <= 0)
      s = &m.slope;
  return *s;
}

} // namespace detail

/// Period on which both tails live, if any.
inline std::optional<Rat> tuple_period(const PLQMap &f, const PLQMap &g)
{
  bool lf = f.linear_factor().has_value();
  bool lg = g.linear_factor().has_value();
  if (lf && lg)
    return Rat(2);
  if (lf)
    return g.has_exact_tail() ? std::optional<Rat>(g.ratio()) : std::nullopt;
  if (lg)
    return f.has_exact_tail() ? std::optional<Rat>(f.ratio()) : std::nullopt;
  if (!f.has_exact_tail() || !g.has_exact_tail())
    return std::nullopt;
  return common_period(f.ratio(), g.ratio());
}

/// Common-refinement slope tuples along the anchors, symbolically in n.
/// Returns nothing when one of the maps has no block rule on the period.
inline std::optional<SlopeTuples> build_slope_tuples(const PLQMap &f, const PLQMap &g, const AnchorSequence &anchors)
{
  const Rat &t = anchors.t;
  const Rat &P = anchors.period;
  auto wf = detail::window_marks(f, t, P);
  auto wg = detail::window_marks(g, t, P);
  if (!wf || !wg)
    return std::nullopt;
  const BreakExpr start{t, Rat(0)};
  const BreakExpr end{t * P, Rat(0)};

  std::vector<BreakExpr> all{start, end};
  for (auto &m : wf->marks)
    all.push_back(m.pos);
  for (auto &m : wg->marks)
    all.push_back(m.pos);
  auto lex = [](const BreakExpr &a, const BreakExpr &b) { return compare_eventual(a, b) < 0; };
  std::sort(all.begin(), all.end(), lex);
  all.erase(std::unique(all.begin(), all.end()), all.end());

  long n0 = std::max(wf->min_n, wg->min_n);
  for (int sweep = 0; sweep < 2; ++sweep)
    for (std::size_t i = 0; i + 1 < all.size(); ++i)
      n0 = std::max(n0, detail::settle_index(all[i], all[i + 1], P, n0));

  SlopeTuples st{anchors, n0, {}, {}, {}};
  for (auto &y : all)
    if (compare_eventual(start, y) <= 0 && compare_eventual(y, end) <= 0)
      st.partition.push_back(y);
  for (std::size_t i = 0; i + 1 < st.partition.size(); ++i) {
    st.A.push_back(detail::active_slope(*wf, st.partition[i]));
    st.B.push_back(detail::active_slope(*wg, st.partition[i]));
  }
  return st;
}

/// Checks f(a_n)/a_n -> 1 and g(a_n)/a_n -> 1 and builds the tuples.
inline SlopeTuples slope_tuple_seq(const PLQMap &f, const PLQMap &g, const AnchorSequence &anchors)
{
  if (!f.profile() || !g.profile())
    throw NoClosedForm();
  if (f.profile()->psi(anchors.t) != 1 || g.profile()->psi(anchors.t) != 1)
    throw AnchorsNotCommon();
  auto st = build_slope_tuples(f, g, anchors);
  if (!st)
    throw IncompatibleRatios();
  st->anchors.psi_f = 1;
  st->anchors.psi_g = 1;
  return *st;
}

struct SpacingReport {
  std::optional<Rat> K1;
  long from_n = 0; // ratios are >= K1 for every n >= from_n
  // Fails: the pair whose ratio tends to 1.
  std::optional<std::pair<BreakExpr, BreakExpr>> offending;
};

/// Largest K1 with x_{n,i} >= K1 x_{n,i-1}. Each ratio is a Möbius function
/// of P^n, hence monotone, so its infimum is at the first index or in the
/// limit.
inline SpacingReport spacing_check(const SlopeTuples &st)
{
  SpacingReport rep;
  const auto &x = st.partition;
  for (std::size_t i = 1; i < x.size(); ++i)
    if (x[i].geo == x[i - 1].geo) {
      rep.offending = std::make_pair(x[i - 1], x[i]);
      return rep;
    }
  const Rat &P = st.anchors.period;
  long n = st.n0;
  for (;; ++n) {
    Rat pn = rpow(P, n);
    bool ok = true;
    for (std::size_t i = 1; i < x.size() && ok; ++i)
      ok = x[i].at_power(pn) > x[i - 1].at_power(pn);
    if (ok)
      break;
  }
  Rat pn = rpow(P, n);
  std::optional<Rat> K;
  for (std::size_t i = 1; i < x.size(); ++i) {
    Rat first = x[i].at_power(pn) / x[i - 1].at_power(pn);
    Rat limit = x[i].geo / x[i - 1].geo;
    Rat k = rmin(first, limit);
    K = K ? rmin(*K, k) : k;
  }
  rep.K1 = K;
  rep.from_n = n;
  return rep;
}

/// t with F(t) = t and G(t) = t, preferring t = 1, then profile nodes.
inline std::optional<Rat> find_common_anchor(const ScaleProfile &F, const ScaleProfile &G, const Rat &P)
{
  ScaleProfile f = F.with_period(P);
  ScaleProfile g = G.with_period(P);
  auto fixed = [&](const Rat &x) { return f(x) == x && g(x) == x; };
  if (fixed(Rat(1)))
    return Rat(1);
  auto grid = ScaleProfile::union_grid(f, g);
  for (auto &x : grid)
    if (fixed(x))
      return x;
  grid.push_back(P);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const Rat &a = grid[i];
    const Rat &b = grid[i + 1];
    Rat pa = f(a) - a;
    Rat pb = f(b) - b;
    if (sign(pa) * sign(pb) < 0) {
      Rat root = a + pa * (b - a) / (pa - pb);
      if (fixed(root))
        return root;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Decision

enum class EquivKind { Equal, NotEqual, Inconclusive };

enum class EquivMethod {
  LimitSetsDiffer,
  NoCommonAnchor,
  TupleConvergence,
  TupleSpacing,
  RatioGap,
  CertifiedGap,
};

inline const char *to_string(EquivKind k)
{
  switch (k) {
  case EquivKind::Equal:
    return "Equal";
  case EquivKind::NotEqual:
    return "NotEqual";
  case EquivKind::Inconclusive:
    return "Inconclusive";
  }
  return "?";
}

inline const char *to_string(EquivMethod m)
{
  switch (m) {
  case EquivMethod::LimitSetsDiffer:
    return "limit sets differ";
  case EquivMethod::NoCommonAnchor:
    return "no common anchor sequence";
  case EquivMethod::TupleConvergence:
    return "slope tuples converge";
  case EquivMethod::TupleSpacing:
    return "slope tuples separated with spacing";
  case EquivMethod::RatioGap:
    return "exact ratio gap";
  case EquivMethod::CertifiedGap:
    return "certified ratio gap";
  }
  return "?";
}

struct Threshold {
  Rat eps;
  Rat X; // |f(x)/x - g(x)/x| < eps for every x > X
};

struct GapSample {
  Rat x;
  Rat gap;
};

struct EquivVerdict {
  EquivKind kind;
  EquivMethod method;
  bool certified = false;
  LimitInterval Sf;
  LimitInterval Sg;
  Rat scale = 1; // both maps were normalized by f_{1/scale}
  std::optional<AnchorSequence> anchors;
  std::optional<SlopeTuples> tuples;
  std::optional<SpacingReport> spacing;
  GapReport gap;
  // NotEqual: |f(x_k)/x_k - g(x_k)/x_k| -> delta along x_k = witness P^k.
  Rat delta = 0;
  std::optional<Rat> delta_bound; // tuple gap (1 - 1/K1) / M_combined
  std::vector<GapSample> samples;
  // Equal: thresholds for a fixed schedule of eps.
  std::vector<Threshold> thresholds;
};

inline const std::vector<Rat> &threshold_schedule()
{
  static const std::vector<Rat> eps{rat(1, 10), rat(1, 100), rat(1, 1000)};
  return eps;
}

namespace detail {

inline void attach_witness(EquivVerdict &v, const PLQMap &f, const PLQMap &g)
{
  v.delta = v.gap.value;
  for (long k : {5L, 10L, 20L}) {
    Rat x = v.gap.witness * rpow(v.gap.period, k);
    v.samples.push_back({x, rabs(Rat(f(x) - g(x))) / x});
  }
}

inline void attach_thresholds(EquivVerdict &v, const PLQMap &f, const PLQMap &g)
{
  for (auto &eps : threshold_schedule())
    if (auto X = closeness_threshold(f, g, eps))
      v.thresholds.push_back({eps, *X});
}

} // namespace detail

inline EquivVerdict decide_equiv_mod_H(const PLQMap &f, const PLQMap &g)
{
  EquivVerdict v{EquivKind::Inconclusive, EquivMethod::CertifiedGap};
  v.Sf = limit_set(f);
  v.Sg = limit_set(g);
  v.gap = ratio_gap_sup(f, g);

  if (v.gap.mode == LimitMode::Certified) {
    v.certified = true;
    v.method = EquivMethod::CertifiedGap;
    bool all_zero = std::all_of(v.gap.windows.begin(), v.gap.windows.end(),
                                [](const CertifiedWindow &w) { return w.lo == 0; });
    if (all_zero)
      v.kind = EquivKind::Equal;
    else if (v.gap.value > v.gap.err)
      v.kind = EquivKind::NotEqual;
    else
      v.kind = EquivKind::Inconclusive;
    v.delta = v.gap.value;
    return v;
  }

  // (1) different limit sets
  if (v.Sf.lo != v.Sg.lo || v.Sf.hi != v.Sg.hi) {
    v.kind = EquivKind::NotEqual;
    v.method = EquivMethod::LimitSetsDiffer;
    detail::attach_witness(v, f, g);
    return v;
  }

  // (2) normalize so that S = [1, M]
  v.scale = v.Sf.lo;
  PLQMap fn = v.scale == 1 ? f : compose(linear_map(1 / v.scale), f);
  PLQMap gn = v.scale == 1 ? g : compose(linear_map(1 / v.scale), g);

  // (3) common anchors with both ratios tending to 1
  Rat P = v.gap.period;
  if (auto tp = tuple_period(fn, gn))
    P = *tp;
  auto t = find_common_anchor(*fn.profile(), *gn.profile(), P);
  if (!t) {
    v.kind = EquivKind::NotEqual;
    v.method = EquivMethod::NoCommonAnchor;
    detail::attach_witness(v, f, g);
    return v;
  }
  v.anchors = AnchorSequence{*t, P, Rat(1), Rat(1)};

  // (4), (5) slope tuples
  if (auto st = build_slope_tuples(fn, gn, *v.anchors)) {
    v.tuples = st;
    Rat dlim = st->d_limit();
    if (dlim == 0) {
      v.kind = EquivKind::Equal;
      v.method = EquivMethod::TupleConvergence;
      detail::attach_thresholds(v, f, g);
      return v;
    }
    v.spacing = spacing_check(*st);
    if (v.spacing->K1 && *v.spacing->K1 > 1) {
      if (v.gap.value == 0)
        throw std::logic_error("separated slope tuples with zero ratio gap");
      v.kind = EquivKind::NotEqual;
      v.method = EquivMethod::TupleSpacing;
      Rat K1 = *v.spacing->K1;
      Rat Mc = qi_certificate(f).M + qi_certificate(g).M;
      v.delta_bound = v.scale * dlim * (1 - 1 / K1) / Mc;
      detail::attach_witness(v, f, g);
      return v;
    }
  }

  // (6) exact ratio gap
  v.method = EquivMethod::RatioGap;
  if (v.gap.value == 0) {
    v.kind = EquivKind::Equal;
    detail::attach_thresholds(v, f, g);
  } else {
    v.kind = EquivKind::NotEqual;
    detail::attach_witness(v, f, g);
  }
  return v;
}

} // namespace plqi

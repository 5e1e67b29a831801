#pragma once

// Sign assignment for finitely many elements of QI(R+)/H, word positivity
// probes, torsion probes, commutation analysis for two anchored maps and
// the bounded-window check of the commutation condition (A).

#include "plqi/equivalence.hpp"
#include "plqi/invariant.hpp"

#include <algorithm>
#include <cstddef>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace plqi {

struct TrivialElement : MapError {
  explicit TrivialElement(std::size_t index)
  : MapError("element " + std::to_string(index) + " lies in H"), index(index)
  {
  }
  std::size_t index;
};

struct NoCommonRatio : MapError {
  NoCommonRatio() : MapError("elements have no common tail period") {}
};

struct NotAnchored : MapError {
  using MapError::MapError;
};

struct MultipleBreaks : MapError {
  using MapError::MapError;
};

struct HypothesisFails : MapError {
  using MapError::MapError;
};

struct BadInterval : MapError {
  BadInterval() : MapError("need lambda > delta > 0") {}
};

/// One stage: the witness x_k = t P^k and what it decided.
struct Stage {
  Rat t;
  Rat period;
  std::vector<std::size_t> signed_here;
  std::vector<std::size_t> survivors; // limit exactly 1 along every witness so far
  std::vector<std::size_t> undecided; // certified staging could not separate from 1
  bool certified = false;

  std::string witness() const { return "x_k = " + to_string(t) + " * (" + to_string(period) + ")^k"; }
};

struct SignAssignment {
  std::vector<PLQMap> elements;
  std::vector<int> signs;     // +1, -1, or 0 when undecided
  std::vector<long> stage_of; // index into stages, -1 when undecided
  std::vector<Stage> stages;
  bool certified = false;

  bool complete() const
  {
    return std::none_of(signs.begin(), signs.end(), [](int s) { return s == 0; });
  }
};

namespace detail {

/// Common period of all profiles, when every element has one.
inline std::optional<Rat> common_profile_period(const std::vector<PLQMap> &elements)
{
  std::optional<Rat> P;
  std::optional<ScaleProfile> acc;
  for (auto &e : elements) {
    const auto &p = e.profile();
    if (!p)
      return std::nullopt;
    if (p->is_linear())
      continue;
    if (!P) {
      P = p->period();
      continue;
    }
    auto q = common_period(*P, p->period());
    if (!q)
      return std::nullopt;
    P = *q;
  }
  return P ? P : std::optional<Rat>(Rat(2));
}

/// First profile node where psi differs from 1.
inline Rat witness_node(const ScaleProfile &F)
{
  for (auto &n : F.nodes())
    if (n.value != n.x)
      return n.x;
  throw std::logic_error("profile of a nontrivial element is the identity");
}

inline SignAssignment certified_staging(const std::vector<PLQMap> &elements)
{
  SignAssignment out{elements, std::vector<int>(elements.size(), 0), std::vector<long>(elements.size(), -1), {}, true};
  std::vector<std::size_t> alive(elements.size());
  for (std::size_t i = 0; i < alive.size(); ++i)
    alive[i] = i;
  while (!alive.empty()) {
    const PLQMap &lead = elements[alive.front()];
    // Witness: the window point of the lead element farthest from ratio 1.
    const Rat s = lead.anchor();
    const Rat rho = lead.ratio();
    const long N = default_windows().back();
    Rat a = s * rpow(rho, N);
    std::vector<Rat> xs = lead.break_candidates(a, a * rho);
    xs.push_back(a);
    Rat best = a, dev = -1;
    for (auto &x : xs) {
      Rat d = rabs(Rat(lead(x) / x - 1));
      if (d > dev) {
        dev = d;
        best = x;
      }
    }
    Stage st{best / rpow(rho, N), rho, {}, {}, {}, true};
    std::vector<std::size_t> next;
    for (std::size_t i : alive) {
      const PLQMap &m = elements[i];
      Rat err = qi_certificate(m).additive;
      std::vector<Rat> vals;
      Rat tol = 0;
      for (long k : default_windows()) {
        Rat x = st.t * rpow(rho, k);
        vals.push_back(m(x) / x);
        tol = rmax(tol, Rat(err / x));
      }
      for (std::size_t j = 1; j < vals.size(); ++j)
        tol += rabs(Rat(vals[j] - vals[j - 1]));
      const Rat &v = vals.back();
      if (v - 1 > tol || 1 - v > tol) {
        out.signs[i] = v > 1 ? 1 : -1;
        out.stage_of[i] = static_cast<long>(out.stages.size());
        st.signed_here.push_back(i);
      } else if (i == alive.front()) {
        st.undecided.push_back(i);
      } else {
        next.push_back(i);
      }
    }
    st.survivors = next;
    out.stages.push_back(std::move(st));
    alive = std::move(next);
  }
  return out;
}

} // namespace detail

/// Stagewise signs: stage j picks a coordinate where some survivor has
/// psi != 1 and signs everything with psi != 1 there.
inline SignAssignment sign_assignment(const std::vector<PLQMap> &elements)
{
  for (std::size_t i = 0; i < elements.size(); ++i) {
    auto v = in_H(elements[i]);
    if (v.answer == Answer::Yes)
      throw TrivialElement(i);
  }
  auto P = detail::common_profile_period(elements);
  if (!P)
    return detail::certified_staging(elements);

  std::vector<ScaleProfile> F;
  for (auto &e : elements)
    F.push_back(e.profile()->with_period(*P));

  SignAssignment out{elements, std::vector<int>(elements.size(), 0), std::vector<long>(elements.size(), -1), {}, false};
  std::vector<std::size_t> alive(elements.size());
  for (std::size_t i = 0; i < alive.size(); ++i)
    alive[i] = i;
  while (!alive.empty()) {
    Stage st{detail::witness_node(F[alive.front()]), *P, {}, {}, {}, false};
    std::vector<std::size_t> next;
    for (std::size_t i : alive) {
      Rat psi = F[i].psi(st.t);
      if (psi == 1) {
        next.push_back(i);
        continue;
      }
      out.signs[i] = psi > 1 ? 1 : -1;
      out.stage_of[i] = static_cast<long>(out.stages.size());
      st.signed_here.push_back(i);
    }
    st.survivors = next;
    out.stages.push_back(std::move(st));
    alive = std::move(next);
  }
  return out;
}

struct Letter {
  std::size_t index;
  int exponent; // +1 or -1
  friend bool operator==(const Letter &a, const Letter &b) { return a.index == b.index && a.exponent == b.exponent; }
};

/// w = l_1 l_2 ... l_m, applied right to left.
struct Word {
  std::vector<Letter> letters;
};

inline Word freely_reduce(const Word &w)
{
  Word out;
  for (auto &l : w.letters) {
    if (!out.letters.empty() && out.letters.back().index == l.index && out.letters.back().exponent == -l.exponent)
      out.letters.pop_back();
    else
      out.letters.push_back(l);
  }
  return out;
}

/// The word in the given element indices, each letter raised to its sign.
inline Word positive_word(const SignAssignment &a, const std::vector<std::size_t> &indices)
{
  Word w;
  for (auto i : indices)
    w.letters.push_back({i, a.signs.at(i)});
  return w;
}

struct WordProbe {
  Word word;
  bool positive = true;    // every letter used with its assigned sign
  long stage = -1;         // stage whose witness is used
  std::optional<Rat> limit; // exact lim w(x_k)/x_k when profiles are available
  Rat margin;              // min over the tail window of w(x_k)/x_k - 1
  std::vector<Rat> ratios; // w(x_k)/x_k for k = 0..K
  bool counterexample = false;
};

struct ProbeReport {
  std::vector<WordProbe> words;
  std::vector<Rat> k_prime; // per stage: min over its signed letters of f^e(x_k)/x_k on the tail window
  long depth = 0;
  bool all_positive = true;
};

namespace detail {

inline long tail_start(long K) { return K / 2; }

struct LetterMaps {
  std::vector<PLQMap> forward;
  std::vector<PLQMap> backward;
  const PLQMap &get(const Letter &l) const { return l.exponent > 0 ? forward[l.index] : backward[l.index]; }
};

inline Rat apply_word(const LetterMaps &maps, const Word &w, Rat x)
{
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
    x = maps.get(*it)(x);
  return x;
}

inline std::optional<ScaleProfile> word_profile(const LetterMaps &maps, const Word &w)
{
  std::optional<ScaleProfile> acc;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    const auto &p = maps.get(*it).profile();
    if (!p)
      return std::nullopt;
    if (!acc)
      acc = *p;
    else if (auto c = compose(*p, *acc))
      acc = *c;
    else
      return std::nullopt;
  }
  return acc;
}

inline WordProbe probe_one(const SignAssignment &a, const LetterMaps &maps, const Word &raw, long K)
{
  WordProbe r{freely_reduce(raw)};
  if (r.word.letters.empty())
    throw std::invalid_argument("word reduces to the identity");
  for (auto &l : r.word.letters) {
    if (a.signs.at(l.index) == 0 || l.exponent != a.signs[l.index])
      r.positive = false;
    r.stage = r.stage < 0 ? a.stage_of[l.index] : std::min(r.stage, a.stage_of[l.index]);
  }
  if (r.stage < 0)
    r.stage = 0;
  const Stage &st = a.stages.at(static_cast<std::size_t>(r.stage));
  if (!a.certified)
    if (auto W = word_profile(maps, r.word))
      r.limit = W->psi(st.t) - 1;
  std::optional<Rat> m;
  for (long k = 0; k <= K; ++k) {
    Rat x = st.t * rpow(st.period, k);
    Rat v = apply_word(maps, r.word, x) / x;
    r.ratios.push_back(v);
    if (k >= tail_start(K))
      m = m ? rmin(*m, Rat(v - 1)) : Rat(v - 1);
  }
  r.margin = *m;
  r.counterexample = r.positive && (r.margin <= 0 || (r.limit && *r.limit <= 0));
  return r;
}

} // namespace detail

/// Evaluates each word along the witness of the earliest stage among its
/// letters. A positive word with nonpositive margin is a counterexample
/// to the assignment.
inline ProbeReport positivity_probe(const SignAssignment &a, const std::vector<Word> &words, long K)
{
  detail::LetterMaps maps;
  for (auto &e : a.elements) {
    maps.forward.push_back(e);
    maps.backward.push_back(inverse(e));
  }
  ProbeReport out;
  out.depth = K;
  out.words.resize(words.size());

  std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), 8));
  workers = std::min(workers, std::max<std::size_t>(1, words.size()));
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w)
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < words.size(); i += workers)
        out.words[i] = detail::probe_one(a, maps, words[i], K);
    }));
  for (auto &j : jobs)
    j.get();

  for (auto &st : a.stages) {
    std::optional<Rat> kp;
    for (auto i : st.signed_here)
      for (long k = detail::tail_start(K); k <= K; ++k) {
        Rat x = st.t * rpow(st.period, k);
        Rat v = maps.get({i, a.signs[i]})(x) / x;
        kp = kp ? rmin(*kp, v) : v;
      }
    out.k_prime.push_back(kp ? *kp : Rat(1));
  }
  out.all_positive = std::none_of(out.words.begin(), out.words.end(),
                                  [](const WordProbe &p) { return p.counterexample; });
  return out;
}

struct TorsionStep {
  long m;
  LimitInterval S;
  bool via_scaling = false;
  bool nontrivial = false;
};

struct TorsionReport {
  std::vector<TorsionStep> steps;
  bool passed = true;
};

/// f^m stays outside H for m <= max_power.
inline TorsionReport torsion_probe(const PLQMap &element, long max_power)
{
  TorsionReport out;
  auto S1 = limit_set(element);
  if (S1.singleton()) {
    for (long m = 1; m <= max_power; ++m) {
      Rat c = rpow(S1.lo, m);
      TorsionStep st{m, {c, c, LimitMode::Exact, Rat(0), {}, c, c}, true, c != 1};
      out.passed = out.passed && st.nontrivial;
      out.steps.push_back(std::move(st));
    }
    return out;
  }
  PLQMap power = element;
  for (long m = 1; m <= max_power; ++m) {
    if (m > 1)
      power = compose(element, power);
    TorsionStep st{m, limit_set(power)};
    if (st.S.mode == LimitMode::Exact)
      st.nontrivial = !(st.S.lo == 1 && st.S.hi == 1);
    else
      st.nontrivial = st.S.enclosure_lo > 1 || st.S.enclosure_hi < 1 || st.S.hi - st.S.lo > 2 * st.S.err;
    out.passed = out.passed && st.nontrivial;
    out.steps.push_back(std::move(st));
  }
  return out;
}

enum class CommuteCase { I, II, III };

inline const char *to_string(CommuteCase c)
{
  switch (c) {
  case CommuteCase::I:
    return "i";
  case CommuteCase::II:
    return "ii";
  case CommuteCase::III:
    return "iii";
  }
  return "?";
}

struct CaseReport {
  long n;
  Rat a, a_next, x;
  Rat f_inv_x, g_inv_x;
  Rat lambda, mu, lambda_p, mu_p; // slopes of f and g on [a, x] and [x, a_next]
  CommuteCase case_gf, case_fg;
  std::vector<Rat> slopes_gf; // slope list of g∘f in its own case
  std::vector<Rat> slopes_fg;
  std::vector<Rat> refinement; // a = r_0 < ... < r_m = a_next
  std::vector<Rat> gf_on_refinement;
  std::vector<Rat> fg_on_refinement;
  std::vector<Rat> differences;
};

namespace detail {

inline std::vector<Rat> interior_breaks(const PLQMap &m, const Rat &a, const Rat &b)
{
  std::vector<Rat> out;
  for (auto &bp : m.breakpoints_in(a, b))
    out.push_back(bp.position);
  return out;
}

inline CommuteCase classify(const Rat &x, const Rat &pre) { return x < pre ? CommuteCase::I : x == pre ? CommuteCase::II : CommuteCase::III; }

/// Slopes of outer∘inner on [a, a_next] in the order of its break points.
inline std::vector<Rat> case_slopes(CommuteCase c, const Rat &l_in, const Rat &m_in, const Rat &l_out, const Rat &m_out)
{
  switch (c) {
  case CommuteCase::I:
    return {l_in * l_out, l_out * m_in, m_out * m_in};
  case CommuteCase::II:
    return {l_in * l_out, m_out * m_in};
  case CommuteCase::III:
    return {l_in * l_out, m_out * l_in, m_out * m_in};
  }
  return {};
}

} // namespace detail

/// Slope structure of g∘f and f∘g on the block [a_n, a_(n+1)] of two maps
/// fixing the anchors a_n with one common interior break x_n.
inline CaseReport commute_slope_cases(const PLQMap &f, const PLQMap &g, long n)
{
  if (f.ratio() != g.ratio() || f.anchor() != g.anchor())
    throw NotAnchored("maps do not share their block anchors");
  CaseReport r{n};
  r.a = f.anchor() * rpow(f.ratio(), n);
  r.a_next = r.a * f.ratio();
  for (const Rat &p : {r.a, r.a_next})
    if (f(p) != p || g(p) != p)
      throw NotAnchored("anchor " + to_string(p) + " is not fixed by both maps");
  auto bf = detail::interior_breaks(f, r.a, r.a_next);
  auto bg = detail::interior_breaks(g, r.a, r.a_next);
  if (bf.size() != 1 || bg.size() != 1 || bf[0] != bg[0])
    throw MultipleBreaks("block " + std::to_string(n) + " needs a single common interior break");
  r.x = bf[0];
  r.f_inv_x = f.preimage(r.x);
  r.g_inv_x = g.preimage(r.x);
  r.lambda = f.slope_right(r.a);
  r.mu = f.slope_right(r.x);
  r.lambda_p = g.slope_right(r.a);
  r.mu_p = g.slope_right(r.x);
  r.case_gf = detail::classify(r.x, r.f_inv_x);
  r.case_fg = detail::classify(r.x, r.g_inv_x);
  r.slopes_gf = detail::case_slopes(r.case_gf, r.lambda, r.mu, r.lambda_p, r.mu_p);
  r.slopes_fg = detail::case_slopes(r.case_fg, r.lambda_p, r.mu_p, r.lambda, r.mu);

  r.refinement = {r.a, r.g_inv_x, r.x, r.f_inv_x, r.a_next};
  detail::sort_unique(r.refinement);
  for (std::size_t i = 0; i + 1 < r.refinement.size(); ++i) {
    Rat mid = (r.refinement[i] + r.refinement[i + 1]) / 2;
    Rat gf = g.slope_right(f(mid)) * f.slope_right(mid);
    Rat fg = f.slope_right(g(mid)) * g.slope_right(mid);
    r.gf_on_refinement.push_back(gf);
    r.fg_on_refinement.push_back(fg);
    r.differences.push_back(rabs(Rat(gf - fg)));
  }
  return r;
}

struct InequalityCheck {
  std::string name;
  Rat lo, hi; // range of the left-hand side over all blocks
  bool holds;
};

struct NoncommuteReport {
  std::vector<InequalityCheck> hypotheses;
  Rat M;
  Rat spacing_min;   // min over checked blocks of max(x, f^-1 x)/min(x, f^-1 x)
  Rat spacing_bound; // 1 + (eps/M)(1 - 1/K)
  bool spacing_ok;
  long blocks_checked;
  EquivVerdict verdict; // [g∘f] against [f∘g]
};

/// [g∘f] against [f∘g] modulo H.
inline EquivVerdict commutator_verdict(const PLQMap &f, const PLQMap &g)
{
  return decide_equiv_mod_H(compose(g, f), compose(f, g));
}

namespace detail {

/// Range of n -> e(n) over n >= 0, closure included; e is monotone.
inline std::pair<Rat, Rat> slope_closure(const SlopeExpr &e) { return {rmin(e.at(0), e.c0), rmax(e.at(0), e.c0)}; }

inline std::pair<Rat, Rat> map_range(std::pair<Rat, Rat> r, const Rat &shift)
{
  Rat a = rabs(Rat(r.first - shift)), b = rabs(Rat(r.second - shift));
  Rat lo = (r.first <= shift && shift <= r.second) ? Rat(0) : rmin(a, b);
  return {lo, rmax(a, b)};
}

} // namespace detail

inline NoncommuteReport noncommute_check(const PLQMap &f, const PLQMap &g, const Rat &eps, const Rat &K,
                                              const Rat &Kp, long blocks = 20)
{
  if (!f.has_exact_tail() || !g.has_exact_tail())
    throw HypothesisFails("maps need block rules");
  for (const PLQMap *m : {&f, &g}) {
    auto S = limit_set(*m);
    if (S.lo > 1 || S.hi < 1)
      throw HypothesisFails("limit set of " + (m->name().empty() ? std::string("a map") : m->name()) +
                            " does not contain 1");
  }
  // Anchors, single break and case structure on every checked block.
  for (long n = 0; n < blocks; ++n)
    commute_slope_cases(f, g, n);
  const auto &tf = f.tail();
  const auto &tg = g.tail();
  if (tf.pieces.size() != 2 || tg.pieces.size() != 2)
    throw MultipleBreaks("expected two pieces per block");

  NoncommuteReport r;
  auto add = [&](std::string name, std::pair<Rat, Rat> range, bool holds) {
    r.hypotheses.push_back({std::move(name), range.first, range.second, holds});
    if (!holds)
      throw HypothesisFails(r.hypotheses.back().name + " fails");
  };
  auto lf = detail::slope_closure(tf.pieces[0].slope);
  auto lg = detail::slope_closure(tg.pieces[0].slope);
  auto df = detail::map_range(lf, 1);
  add("|lambda_n - 1| > eps", df, df.first > eps);
  auto dg = detail::map_range(lg, 1);
  add("|lambda'_n - 1| > eps", dg, dg.first > eps);
  // lambda_n - lambda'_n = (c0 - c0') + c1 q^n - c1' q'^n; sampled plus limit.
  std::pair<Rat, Rat> dd{rabs(Rat(tf.pieces[0].slope.c0 - tg.pieces[0].slope.c0)),
                         rabs(Rat(tf.pieces[0].slope.c0 - tg.pieces[0].slope.c0))};
  for (long n = 0; n < blocks; ++n) {
    Rat d = rabs(Rat(tf.pieces[0].slope.at(n) - tg.pieces[0].slope.at(n)));
    dd = {rmin(dd.first, d), rmax(dd.second, d)};
  }
  add("|lambda_n - lambda'_n| > eps", dd, dd.first > eps);

  const Rat s = tf.anchor;
  const BreakExpr &x = tf.pieces[1].pos;
  // x_n / a_n = (geo + cst rho^-n) / s, monotone in n.
  Rat r0 = x.at_power(1) / s, rinf = x.geo / s;
  std::pair<Rat, Rat> xa{rmin(r0, rinf), rmax(r0, rinf)};
  add("K < x_n / a_n", xa, xa.first > K);
  Rat q0 = s * tf.ratio / x.at_power(1), qinf = s * tf.ratio / x.geo;
  std::pair<Rat, Rat> ax{rmin(q0, qinf), rmax(q0, qinf)};
  add("a_(n+1) / x_n < K'", ax, ax.second < Kp);

  r.M = rmax(Rat(1), rmax(f.slope_range().sup, Rat(1 / f.slope_range().inf)));
  r.spacing_bound = 1 + (eps / r.M) * (1 - 1 / K);
  r.blocks_checked = blocks;
  std::optional<Rat> smin;
  for (long n = 0; n < blocks; ++n) {
    Rat xn = x.at_power(rpow(tf.ratio, n));
    Rat pre = f.preimage(xn);
    Rat sp = rmax(xn, pre) / rmin(xn, pre);
    smin = smin ? rmin(*smin, sp) : sp;
  }
  r.spacing_min = *smin;
  r.spacing_ok = r.spacing_min >= r.spacing_bound;
  r.verdict = commutator_verdict(f, g);
  return r;
}

struct CommutatorSample {
  Rat s;
  Rat sup;
  Rat argmax;
};

struct ConditionAReport {
  std::vector<CommutatorSample> samples;
  Rat sup;
  Rat sup_s, sup_x;
  std::vector<std::pair<Rat, Rat>> growth; // (W, sup over x <= W)
  bool bounded;
  LimitInterval S;
  bool singleton;
};

/// sup |s f(x) - f(s x)| over a grid of s in (lambda - delta, lambda + delta)
/// and all x in [0, window]. The sup over x is exact: the difference is
/// affine between break points of f and of f(s .).
inline ConditionAReport condition_A_check(const PLQMap &f, const Rat &lambda, const Rat &delta, long density_samples,
                                          const Rat &window, const Rat &M_bound)
{
  if (!(lambda > delta && delta > 0))
    throw BadInterval();
  if (density_samples < 1 || window <= 0)
    throw std::invalid_argument("need a positive sample count and window");
  ConditionAReport out;
  out.sup = -1;
  std::vector<Rat> windows;
  for (Rat W = 1; W < window; W *= 2)
    windows.push_back(W);
  windows.push_back(window);
  std::vector<Rat> growth(windows.size(), Rat(0));

  for (long i = 1; i <= density_samples; ++i) {
    Rat s = lambda - delta + 2 * delta * Rat(i) / Rat(density_samples + 1);
    std::vector<Rat> xs{Rat(0), window};
    for (auto &b : f.break_candidates(Rat(0), window))
      xs.push_back(b);
    for (auto &b : f.break_candidates(Rat(0), s * window))
      xs.push_back(b / s);
    detail::sort_unique(xs);
    CommutatorSample cs{s, Rat(-1), Rat(0)};
    std::size_t w = 0;
    for (auto &x : xs) {
      if (x > window)
        break;
      Rat d = rabs(Rat(s * f(x) - f(s * x)));
      if (d > cs.sup) {
        cs.sup = d;
        cs.argmax = x;
      }
      while (w < windows.size() && windows[w] < x)
        ++w;
      for (std::size_t j = w; j < windows.size(); ++j)
        growth[j] = rmax(growth[j], d);
    }
    if (cs.sup > out.sup) {
      out.sup = cs.sup;
      out.sup_s = s;
      out.sup_x = cs.argmax;
    }
    out.samples.push_back(std::move(cs));
  }
  for (std::size_t j = 0; j < windows.size(); ++j)
    out.growth.emplace_back(windows[j], growth[j]);
  out.bounded = out.sup < M_bound;
  out.S = limit_set(f);
  out.singleton = out.S.mode == LimitMode::Exact ? out.S.lo == out.S.hi : out.S.hi - out.S.lo <= 2 * out.S.err;
  return out;
}

} // namespace plqi

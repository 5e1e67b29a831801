#pragma once

// Bounds on |f(x) - F(x)| / x, where F is the scale limit.

#include "plqi/plmap.hpp"

namespace plqi {

namespace detail {

/// Constants of the bound |f(x) - F(x)| <= B0 + B1 n + B2 theta^n on block n.
struct TailErrorConstants {
  Rat B0, B1, B2, theta;
  long monotone_from; // U(n) = bound / (s r^n) is non-increasing from here
};

inline TailErrorConstants tail_error_constants(const ExactNode &node)
{
  const auto &t = node.tail();
  const Rat &rho = t.ratio;
  const Rat &s = t.anchor;
  Rat qbar = 0;
  Rat C = 0, E0 = 0, E1 = 0, shifts = 0;
  for (std::size_t i = 0; i < t.pieces.size(); ++i) {
    const auto &p = t.pieces[i];
    BreakExpr next = i + 1 < t.pieces.size() ? t.pieces[i + 1].pos : BreakExpr{s * rho, Rat(0)};
    BreakExpr gap = next - p.pos;
    C += p.slope.c0 * gap.cst;
    E0 += rabs(p.slope.c1) * rabs(gap.cst);
    E1 += rabs(p.slope.c1) * gap.geo;
    shifts += rabs(p.pos.cst);
    if (p.slope.c1 != 0)
      qbar = rmax(qbar, p.slope.q);
  }
  Rat theta = rho * qbar;
  Rat Mp = node.slope_range().sup;
  Rat D0 = rabs(Rat(node.anchor_value(0) - node.limit_value(s)));
  TailErrorConstants k;
  k.theta = theta;
  k.B0 = D0 + E0 + 2 * Mp * shifts;
  k.B1 = rabs(C) + E0;
  k.B2 = E1;
  if (theta > 1)
    k.B2 += E1 / (theta - 1);
  else
    k.B1 += E1;
  // n / r^n decreases once n >= 1/(r - 1).
  Rat inv = 1 / (rho - 1);
  Int ceil_inv = (inv.get_num() + inv.get_den() - 1) / inv.get_den();
  k.monotone_from = ceil_inv.get_si();
  return k;
}

inline Rat tail_error_at(const TailErrorConstants &k, const Rat &s, const Rat &rho, long n)
{
  Rat th = k.theta > 1 ? rpow(k.theta, n) : Rat(1);
  return (k.B0 + k.B1 * n + k.B2 * th) / (s * rpow(rho, n));
}

} // namespace detail

/// Upper bound on sup_{x >= X} |f(x) - F(x)| / x, where F is the scale
/// limit. Non-increasing in X.
inline Rat relative_error_bound(const detail::Node &node, const Rat &X)
{
  using detail::NodeKind;
  if (!node.profile())
    throw NoClosedForm();
  switch (node.kind()) {
  case NodeKind::Exact: {
    const auto &e = static_cast<const detail::ExactNode &>(node);
    const Rat &s = e.tail().anchor;
    const Rat &rho = e.tail().ratio;
    auto k = detail::tail_error_constants(e);
    long n = X > s ? e.block_of(X) : 0;
    Rat best = detail::tail_error_at(k, s, rho, n);
    for (long m = n + 1; m <= k.monotone_from; ++m)
      best = rmax(best, detail::tail_error_at(k, s, rho, m));
    return best;
  }
  case NodeKind::Composite: {
    const auto &c = static_cast<const detail::CompositeNode &>(node);
    auto wi = detail::qi_bounds(*c.inner());
    Rat lip = c.outer()->profile()->max_slope();
    Rat gX = c.inner()->eval(X);
    return relative_error_bound(*c.outer(), gX) * (wi.M + wi.additive / X) + lip * relative_error_bound(*c.inner(), X);
  }
  case NodeKind::Inverse: {
    const auto &v = static_cast<const detail::InverseNode &>(node);
    auto wb = detail::qi_bounds(*v.base());
    Rat inv_lip = 1 / v.base()->profile()->min_slope();
    Rat x = v.base()->invert(X);
    return inv_lip * relative_error_bound(*v.base(), x) * wb.M * (1 + wb.additive / X);
  }
  }
  throw std::logic_error("unknown node kind");
}

} // namespace plqi

#pragma once

// Scale limits of block-rule maps.
//
// For a map f with a geometric block tail of ratio r, the limit
// F(x) = lim f(r^n x) / r^n exists, is piecewise linear, increasing and
// homogeneous: F(r x) = r F(x). F determines everything about f modulo the
// normal subgroup H: the limit set of f(x)/x is the range of F(x)/x, and
// two maps agree modulo H exactly when their scale limits coincide.
//
// A ScaleProfile stores one period of F: nodes x_0 = 1 < x_1 < ... < x_k
// inside [1, P) together with the values F(x_j). F is affine between
// consecutive nodes and F(P) = P F(1).

#include "plqi/rational.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace plqi {

struct ProfileNode {
  Rat x;
  Rat value;
};

/// Smallest p >= 1 with a^p == b^q for some q in [1, max_exponent].
/// Returns the common period a^p.
inline std::optional<Rat> common_period(const Rat &a, const Rat &b, int max_exponent = 12)
{
  if (a == b)
    return a;
  Rat ap = 1;
  for (int p = 1; p <= max_exponent; ++p) {
    ap *= a;
    Rat bq = 1;
    for (int q = 1; q <= max_exponent; ++q) {
      bq *= b;
      if (bq == ap)
        return ap;
      if (bq > ap)
        break;
    }
  }
  return std::nullopt;
}

class ScaleProfile {
public:
  /// `nodes` must start at x = 1, be strictly increasing in x and value,
  /// and stay inside [1, period).
  ScaleProfile(Rat period, std::vector<ProfileNode> nodes)
  : period_(std::move(period)), nodes_(std::move(nodes))
  {
    if (period_ <= 1)
      throw std::invalid_argument("profile period must exceed 1");
    if (nodes_.empty() || nodes_.front().x != 1)
      throw std::invalid_argument("profile must have a node at x = 1");
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].value <= 0)
        throw std::invalid_argument("profile values must be positive");
      if (nodes_[i].x >= period_)
        throw std::invalid_argument("profile node outside its period");
      if (i > 0 && (nodes_[i].x <= nodes_[i - 1].x || nodes_[i].value <= nodes_[i - 1].value))
        throw std::invalid_argument("profile must be strictly increasing");
    }
    if (period_ * nodes_.front().value <= nodes_.back().value)
      throw std::invalid_argument("profile must be strictly increasing across its period");
  }

  static ScaleProfile linear(const Rat &c, const Rat &period = 2)
  {
    return ScaleProfile(period, {{Rat(1), c}});
  }

  /// Sample `fn` (assumed homogeneous with this period and affine between
  /// the candidate points) and build the profile.
  template <class Fn>
  static ScaleProfile from_points(const Rat &period, std::vector<Rat> candidates, Fn &&fn)
  {
    std::vector<Rat> xs;
    xs.reserve(candidates.size() + 1);
    xs.emplace_back(1);
    for (auto &c : candidates) {
      if (c <= 0)
        continue;
      xs.push_back(normalize(c, period));
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<ProfileNode> nodes;
    nodes.reserve(xs.size());
    for (auto &x : xs)
      nodes.push_back({x, fn(x)});
    return ScaleProfile(period, simplify(period, std::move(nodes)));
  }

  /// Bring x > 0 into [1, period) by a power of the period.
  static Rat normalize(const Rat &x, const Rat &period)
  {
    long k = floor_log(x, period);
    return x / rpow(period, k);
  }

  const Rat &period() const { return period_; }
  const std::vector<ProfileNode> &nodes() const { return nodes_; }

  /// ψ is constant, i.e. F(x) = c x.
  bool is_linear() const
  {
    const Rat c = nodes_.front().value;
    return std::all_of(nodes_.begin(), nodes_.end(), [&](const ProfileNode &n) { return n.value == c * n.x; });
  }

  Rat operator()(const Rat &x) const
  {
    if (x < 0)
      throw std::domain_error("scale profile evaluated at a negative point");
    if (x == 0)
      return 0;
    long k = floor_log(x, period_);
    Rat scale = rpow(period_, k);
    Rat y = x / scale;
    return eval_window(y) * scale;
  }

  Rat inverse_at(const Rat &y) const
  {
    if (y < 0)
      throw std::domain_error("scale profile inverted at a negative point");
    if (y == 0)
      return 0;
    // F(P^k) = P^k F(1), so locate the window through F(1).
    const Rat &f1 = nodes_.front().value;
    long k = floor_log(y / f1, period_);
    Rat scale = rpow(period_, k);
    Rat z = y / scale; // in [F(1), P F(1))
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const Rat &x0 = nodes_[i].x;
      const Rat &v0 = nodes_[i].value;
      Rat x1 = i + 1 < nodes_.size() ? nodes_[i + 1].x : period_;
      Rat v1 = i + 1 < nodes_.size() ? nodes_[i + 1].value : Rat(period_ * f1);
      if (z < v1 || i + 1 == nodes_.size())
        return (x0 + (z - v0) * (x1 - x0) / (v1 - v0)) * scale;
    }
    throw std::logic_error("unreachable");
  }

  /// F(x) / x, the limit of f(x_k)/x_k along x_k = x P^k.
  Rat psi(const Rat &x) const { return (*this)(x) / x; }

  Rat min_psi() const
  {
    Rat m = nodes_.front().value / nodes_.front().x;
    for (auto &n : nodes_)
      m = rmin(m, Rat(n.value / n.x));
    return m;
  }

  Rat max_psi() const
  {
    Rat m = nodes_.front().value / nodes_.front().x;
    for (auto &n : nodes_)
      m = rmax(m, Rat(n.value / n.x));
    return m;
  }

  /// Slope of F on [nodes[i].x, next node).
  Rat slope(std::size_t i) const
  {
    Rat x1 = i + 1 < nodes_.size() ? nodes_[i + 1].x : period_;
    Rat v1 = i + 1 < nodes_.size() ? nodes_[i + 1].value : Rat(period_ * nodes_.front().value);
    return (v1 - nodes_[i].value) / (x1 - nodes_[i].x);
  }

  Rat min_slope() const
  {
    Rat m = slope(0);
    for (std::size_t i = 1; i < nodes_.size(); ++i)
      m = rmin(m, slope(i));
    return m;
  }

  Rat max_slope() const
  {
    Rat m = slope(0);
    for (std::size_t i = 1; i < nodes_.size(); ++i)
      m = rmax(m, slope(i));
    return m;
  }

  /// Same function described over a longer period P = period^m.
  ScaleProfile with_period(const Rat &P) const
  {
    if (P == period_)
      return *this;
    if (is_linear())
      return ScaleProfile(P, {{Rat(1), nodes_.front().value}});
    std::vector<Rat> xs;
    for (Rat scale = 1; scale < P; scale *= period_)
      for (auto &n : nodes_)
        xs.push_back(n.x * scale);
    if (normalize(P, period_) != 1)
      throw std::invalid_argument("period is not a power of the profile period");
    return from_points(P, xs, *this);
  }

  ScaleProfile inverse() const
  {
    std::vector<Rat> ys;
    ys.reserve(nodes_.size());
    for (auto &n : nodes_)
      ys.push_back(n.value);
    return from_points(period_, ys, [this](const Rat &y) { return inverse_at(y); });
  }

  /// Union of the node grids of two profiles over a shared period.
  static std::vector<Rat> union_grid(const ScaleProfile &a, const ScaleProfile &b)
  {
    std::vector<Rat> xs;
    for (auto &n : a.nodes_)
      xs.push_back(n.x);
    for (auto &n : b.nodes_)
      xs.push_back(n.x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
  }

  friend bool operator==(const ScaleProfile &a, const ScaleProfile &b)
  {
    auto P = shared_period(a, b);
    if (!P)
      return false;
    auto pa = a.with_period(*P);
    auto pb = b.with_period(*P);
    for (auto &x : union_grid(pa, pb))
      if (pa(x) != pb(x))
        return false;
    return true;
  }

  /// Period over which both profiles are periodic, if one exists.
  static std::optional<Rat> shared_period(const ScaleProfile &a, const ScaleProfile &b)
  {
    if (a.is_linear())
      return b.period_;
    if (b.is_linear())
      return a.period_;
    return common_period(a.period_, b.period_);
  }

private:
  Rat eval_window(const Rat &y) const
  {
    // y in [1, period)
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), y,
                               [](const Rat &v, const ProfileNode &n) { return v < n.x; });
    std::size_t i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    return nodes_[i].value + slope(i) * (y - nodes_[i].x);
  }

  /// Drop nodes where F does not bend.
  static std::vector<ProfileNode> simplify(const Rat &period, std::vector<ProfileNode> nodes)
  {
    if (nodes.size() <= 1)
      return nodes;
    std::vector<ProfileNode> out;
    out.push_back(nodes.front());
    const Rat end_value = period * nodes.front().value;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
      const ProfileNode &prev = out.back();
      Rat x1 = i + 1 < nodes.size() ? nodes[i + 1].x : period;
      Rat v1 = i + 1 < nodes.size() ? nodes[i + 1].value : end_value;
      Rat left = (nodes[i].value - prev.value) / (nodes[i].x - prev.x);
      Rat right = (v1 - nodes[i].value) / (x1 - nodes[i].x);
      if (left != right)
        out.push_back(nodes[i]);
    }
    return out;
  }

  Rat period_;
  std::vector<ProfileNode> nodes_;
};

/// Scale limit of outer ∘ inner, when the two periods are commensurable.
inline std::optional<ScaleProfile> compose(const ScaleProfile &outer, const ScaleProfile &inner)
{
  auto P = ScaleProfile::shared_period(outer, inner);
  if (!P)
    return std::nullopt;
  ScaleProfile o = outer.with_period(*P);
  ScaleProfile i = inner.with_period(*P);
  std::vector<Rat> xs;
  for (auto &n : i.nodes())
    xs.push_back(n.x);
  // Outer nodes inside the image window [G(1), P G(1)).
  const Rat lo = i.nodes().front().value;
  const Rat hi = lo * *P;
  for (auto &n : o.nodes()) {
    Rat y = n.x;
    while (y < lo)
      y *= *P;
    while (y >= hi)
      y /= *P;
    xs.push_back(i.inverse_at(y));
  }
  return ScaleProfile::from_points(*P, xs, [&](const Rat &x) { return o(i(x)); });
}

/// sup over x > 0 of |F(x) - G(x)| / x together with a point attaining it.
struct ProfileGap {
  Rat value;
  Rat witness;
};

inline std::optional<ProfileGap> ratio_gap(const ScaleProfile &a, const ScaleProfile &b)
{
  auto P = ScaleProfile::shared_period(a, b);
  if (!P)
    return std::nullopt;
  auto pa = a.with_period(*P);
  auto pb = b.with_period(*P);
  ProfileGap best{Rat(0), Rat(1)};
  for (auto &x : ScaleProfile::union_grid(pa, pb)) {
    Rat d = rabs(Rat(pa(x) - pb(x))) / x;
    if (d > best.value)
      best = {d, x};
  }
  return best;
}

} // namespace plqi

#pragma once

// Piecewise-linear homeomorphisms of [0, inf) with bounded slopes.
//
// A map is a finite head on [0, s] followed by a block rule on the blocks
// [s r^n, s r^(n+1)]: inside block n the break points sit at geo r^n + const
// and the slopes are c0 + c1 q^n. Compositions and inverses that leave this
// language are kept as evaluation trees; they stay exact pointwise.

#include "plqi/profile.hpp"
#include "plqi/rational.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace plqi {

struct MapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DiscontinuityAt : MapError {
  Rat point;
  explicit DiscontinuityAt(Rat p)
  : MapError("discontinuity at " + to_string(p)), point(std::move(p)) {}
};

struct NonmonotoneSlope : MapError {
  std::size_t index;
  NonmonotoneSlope(std::size_t i, const std::string &where)
  : MapError("nonpositive slope in " + where + " piece " + std::to_string(i)), index(i) {}
};

struct UnboundedSlope : MapError {
  UnboundedSlope() : MapError("slopes are not bounded away from zero") {}
};

struct NegativeInput : MapError {
  NegativeInput() : MapError("input must be nonnegative") {}
};

struct EmptyWindow : MapError {
  EmptyWindow() : MapError("window is empty") {}
};

struct NoClosedForm : MapError {
  NoClosedForm() : MapError("map has no closed-form scale limit") {}
};

/// Position geo * r^n + cst inside block n.
struct BreakExpr {
  Rat geo;
  Rat cst;

  Rat at_power(const Rat &rn) const { return geo * rn + cst; }

  friend BreakExpr operator+(const BreakExpr &a, const BreakExpr &b) { return {a.geo + b.geo, a.cst + b.cst}; }
  friend BreakExpr operator-(const BreakExpr &a, const BreakExpr &b) { return {a.geo - b.geo, a.cst - b.cst}; }
  friend BreakExpr operator*(const Rat &k, const BreakExpr &a) { return {k * a.geo, k * a.cst}; }
  friend bool operator==(const BreakExpr &a, const BreakExpr &b) { return a.geo == b.geo && a.cst == b.cst; }

  /// Order for large n: by geo, then const.
  friend int compare_eventual(const BreakExpr &a, const BreakExpr &b)
  {
    if (a.geo != b.geo)
      return a.geo < b.geo ? -1 : 1;
    if (a.cst != b.cst)
      return a.cst < b.cst ? -1 : 1;
    return 0;
  }
};

/// Slope c0 + c1 q^n with 0 <= q < 1 and 0^0 = 1.
struct SlopeExpr {
  Rat c0;
  Rat c1 = 0;
  Rat q = 0;

  Rat at(long n) const { return c1 == 0 ? c0 : Rat(c0 + c1 * rpow(q, n)); }
  bool constant() const { return c1 == 0; }

  Rat inf() const { return c1 < 0 ? Rat(c0 + c1) : c0; }
  Rat sup() const { return c1 > 0 ? Rat(c0 + c1) : c0; }

  /// Positive for every n >= 0.
  bool positive() const
  {
    if (c0 + c1 <= 0)
      return false;
    return c0 > 0 || (c0 == 0 && c1 > 0 && q > 0);
  }

  SlopeExpr scaled(const Rat &k) const { return canonical({k * c0, k * c1, q}); }

  /// Same slopes seen from block n + shift.
  SlopeExpr shifted(long shift) const { return canonical({c0, c1 * rpow(q, shift), q}); }

  static SlopeExpr canonical(SlopeExpr s)
  {
    if (s.c1 == 0)
      s.q = 0;
    return s;
  }

  friend bool operator==(const SlopeExpr &a, const SlopeExpr &b)
  {
    return a.c0 == b.c0 && a.c1 == b.c1 && a.q == b.q;
  }
};

struct HeadPiece {
  Rat start;
  Rat slope;
};

struct FinitePL {
  std::vector<HeadPiece> pieces; // first start is 0
  Rat value_at_zero;
};

struct TailPiece {
  BreakExpr pos;
  SlopeExpr slope;
};

struct TailBlockRule {
  Rat ratio;
  Rat anchor;
  std::vector<TailPiece> pieces;
};

struct BreakPoint {
  Rat position;
  Rat left_slope;
  Rat right_slope;
};

struct SlopeRange {
  Rat inf;
  Rat sup;
};

struct QIWitness {
  Rat M;
  Rat additive;
};

struct ValidationReport {
  SlopeRange slopes;
  bool exact_tail;
};

namespace detail {

enum class NodeKind { Exact, Composite, Inverse };

class Node {
public:
  virtual ~Node() = default;
  virtual NodeKind kind() const = 0;
  virtual Rat eval(const Rat &x) const = 0;
  /// Preimage of y; values below f(0) are clamped to 0.
  virtual Rat invert(const Rat &y) const = 0;
  virtual Rat at_zero() const = 0;
  virtual Rat slope_at(const Rat &x, bool right) const = 0;
  /// Superset of the break points in the open window (lo, hi).
  virtual std::vector<Rat> candidates(const Rat &lo, const Rat &hi) const = 0;
  virtual SlopeRange slope_range() const = 0;
  virtual const std::optional<ScaleProfile> &profile() const = 0;
  /// Block grid used for anchor values.
  virtual Rat anchor() const = 0;
  virtual Rat ratio() const = 0;
  virtual Rat anchor_value(long n) const { return eval(anchor() * rpow(ratio(), n)); }
};

using NodePtr = std::shared_ptr<const Node>;

inline void sort_unique(std::vector<Rat> &v)
{
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

class ExactNode final : public Node {
public:
  ExactNode(FinitePL head, TailBlockRule tail) : head_(std::move(head)), tail_(std::move(tail))
  {
    if (head_.pieces.empty() || head_.pieces.front().start != 0)
      throw MapError("head must start at 0");
    if (tail_.ratio <= 1)
      throw MapError("tail ratio must exceed 1");
    if (tail_.anchor <= 0)
      throw MapError("tail anchor must be positive");
    if (tail_.pieces.empty())
      throw MapError("tail needs at least one piece");
    for (std::size_t i = 1; i < head_.pieces.size(); ++i)
      if (head_.pieces[i].start <= head_.pieces[i - 1].start)
        throw MapError("head break points must increase");
    if (head_.pieces.back().start >= tail_.anchor)
      throw DiscontinuityAt(tail_.anchor);
    for (auto &p : tail_.pieces)
      p.slope = SlopeExpr::canonical(p.slope);
    head_values_.reserve(head_.pieces.size() + 1);
    head_values_.push_back(head_.value_at_zero);
    for (std::size_t i = 0; i < head_.pieces.size(); ++i) {
      Rat end = i + 1 < head_.pieces.size() ? head_.pieces[i + 1].start : tail_.anchor;
      head_values_.push_back(head_values_.back() + head_.pieces[i].slope * (end - head_.pieces[i].start));
    }
    anchors_.push_back(head_values_.back());
    try {
      profile_ = build_profile();
    } catch (const std::invalid_argument &) {
      profile_.reset();
    }
  }

  NodeKind kind() const override { return NodeKind::Exact; }
  const FinitePL &head() const { return head_; }
  const TailBlockRule &tail() const { return tail_; }
  Rat anchor() const override { return tail_.anchor; }
  Rat ratio() const override { return tail_.ratio; }
  Rat at_zero() const override { return head_.value_at_zero; }
  const std::optional<ScaleProfile> &profile() const override { return profile_; }

  long block_of(const Rat &x) const { return floor_log(x / tail_.anchor, tail_.ratio); }

  /// Break positions of block n followed by the block end.
  std::vector<Rat> positions(long n) const
  {
    Rat rn = rpow(tail_.ratio, n);
    std::vector<Rat> p;
    p.reserve(tail_.pieces.size() + 1);
    for (auto &piece : tail_.pieces)
      p.push_back(piece.pos.at_power(rn));
    p.push_back(tail_.anchor * tail_.ratio * rn);
    return p;
  }

  Rat anchor_value(long n) const override
  {
    if (n < 0)
      throw std::invalid_argument("anchor index must be nonnegative");
    std::lock_guard<std::mutex> lock(mu_);
    while (static_cast<long>(anchors_.size()) <= n) {
      long m = static_cast<long>(anchors_.size()) - 1;
      anchors_.push_back(anchors_.back() + rise(m));
    }
    return anchors_[static_cast<std::size_t>(n)];
  }

  Rat rise(long n) const
  {
    auto p = positions(n);
    Rat total = 0;
    for (std::size_t i = 0; i < tail_.pieces.size(); ++i)
      total += tail_.pieces[i].slope.at(n) * (p[i + 1] - p[i]);
    return total;
  }

  Rat eval(const Rat &x) const override
  {
    if (x < 0)
      throw NegativeInput();
    if (x < tail_.anchor)
      return head_eval(x);
    long n = block_of(x);
    auto p = positions(n);
    Rat v = anchor_value(n);
    for (std::size_t i = 0; i < tail_.pieces.size(); ++i) {
      Rat k = tail_.pieces[i].slope.at(n);
      if (x < p[i + 1])
        return v + k * (x - p[i]);
      v += k * (p[i + 1] - p[i]);
    }
    return v;
  }

  Rat invert(const Rat &y) const override
  {
    if (y <= head_.value_at_zero)
      return 0;
    if (y < head_values_.back()) {
      std::size_t i = 0;
      while (i + 1 < head_.pieces.size() && head_values_[i + 1] <= y)
        ++i;
      return head_.pieces[i].start + (y - head_values_[i]) / head_.pieces[i].slope;
    }
    long n = 0;
    while (anchor_value(n + 1) <= y)
      ++n;
    auto p = positions(n);
    Rat v = anchor_value(n);
    for (std::size_t i = 0; i < tail_.pieces.size(); ++i) {
      Rat k = tail_.pieces[i].slope.at(n);
      Rat next = v + k * (p[i + 1] - p[i]);
      if (y < next)
        return p[i] + (y - v) / k;
      v = next;
    }
    return p.back();
  }

  Rat slope_at(const Rat &x, bool right) const override
  {
    if (x < 0)
      throw NegativeInput();
    if (x == 0)
      right = true;
    if (x < tail_.anchor || (!right && x == tail_.anchor)) {
      std::size_t i = 0;
      while (i + 1 < head_.pieces.size() &&
             (right ? head_.pieces[i + 1].start <= x : head_.pieces[i + 1].start < x))
        ++i;
      return head_.pieces[i].slope;
    }
    long n = block_of(x);
    if (!right && x == tail_.anchor * rpow(tail_.ratio, n))
      --n;
    auto p = positions(n);
    for (std::size_t i = 0; i < tail_.pieces.size(); ++i) {
      bool inside = right ? (p[i] <= x && x < p[i + 1]) : (p[i] < x && x <= p[i + 1]);
      if (inside)
        return tail_.pieces[i].slope.at(n);
    }
    throw std::logic_error("point not located in its block");
  }

  std::vector<Rat> candidates(const Rat &lo, const Rat &hi) const override
  {
    std::vector<Rat> out;
    for (std::size_t i = 1; i < head_.pieces.size(); ++i)
      if (lo < head_.pieces[i].start && head_.pieces[i].start < hi)
        out.push_back(head_.pieces[i].start);
    if (hi > tail_.anchor) {
      long first = lo > tail_.anchor ? block_of(lo) : 0;
      long last = block_of(hi);
      for (long n = first; n <= last; ++n) {
        auto p = positions(n);
        p.pop_back();
        for (auto &x : p)
          if (lo < x && x < hi)
            out.push_back(x);
      }
    }
    sort_unique(out);
    return out;
  }

  SlopeRange slope_range() const override
  {
    SlopeRange r{head_.pieces.front().slope, head_.pieces.front().slope};
    for (auto &p : head_.pieces) {
      r.inf = rmin(r.inf, p.slope);
      r.sup = rmax(r.sup, p.slope);
    }
    for (auto &p : tail_.pieces) {
      r.inf = rmin(r.inf, p.slope.inf());
      r.sup = rmax(r.sup, p.slope.sup());
    }
    return r;
  }

  /// F on [s, s r] built from the limit slopes.
  Rat limit_value(const Rat &x) const
  {
    const Rat &rho = tail_.ratio;
    const Rat &s = tail_.anchor;
    long k = floor_log(x / s, rho);
    Rat scale = rpow(rho, k);
    Rat y = x / scale;
    const auto &pcs = tail_.pieces;
    Rat total = 0;
    for (std::size_t i = 0; i < pcs.size(); ++i) {
      Rat end = i + 1 < pcs.size() ? pcs[i + 1].pos.geo : Rat(s * rho);
      total += pcs[i].slope.c0 * (end - pcs[i].pos.geo);
    }
    Rat v = total / (rho - 1);
    for (std::size_t i = 0; i < pcs.size(); ++i) {
      Rat end = i + 1 < pcs.size() ? pcs[i + 1].pos.geo : Rat(s * rho);
      if (y < end || i + 1 == pcs.size())
        return (v + pcs[i].slope.c0 * (y - pcs[i].pos.geo)) * scale;
      v += pcs[i].slope.c0 * (end - pcs[i].pos.geo);
    }
    throw std::logic_error("unreachable");
  }

private:
  Rat head_eval(const Rat &x) const
  {
    std::size_t i = 0;
    while (i + 1 < head_.pieces.size() && head_.pieces[i + 1].start <= x)
      ++i;
    return head_values_[i] + head_.pieces[i].slope * (x - head_.pieces[i].start);
  }

  std::optional<ScaleProfile> build_profile() const
  {
    for (auto &p : tail_.pieces)
      if (p.slope.c0 <= 0)
        return std::nullopt;
    std::vector<Rat> xs;
    for (auto &p : tail_.pieces)
      xs.push_back(p.pos.geo);
    return ScaleProfile::from_points(tail_.ratio, xs, [this](const Rat &x) { return limit_value(x); });
  }

  FinitePL head_;
  TailBlockRule tail_;
  std::vector<Rat> head_values_;
  std::optional<ScaleProfile> profile_;
  mutable std::mutex mu_;
  mutable std::vector<Rat> anchors_;
};

class CompositeNode final : public Node {
public:
  CompositeNode(NodePtr outer, NodePtr inner) : outer_(std::move(outer)), inner_(std::move(inner))
  {
    if (outer_->profile() && inner_->profile())
      profile_ = compose(*outer_->profile(), *inner_->profile());
  }

  NodeKind kind() const override { return NodeKind::Composite; }
  const NodePtr &outer() const { return outer_; }
  const NodePtr &inner() const { return inner_; }

  Rat eval(const Rat &x) const override { return outer_->eval(inner_->eval(x)); }
  Rat invert(const Rat &y) const override { return inner_->invert(outer_->invert(y)); }
  Rat at_zero() const override { return outer_->eval(inner_->at_zero()); }
  Rat anchor() const override { return inner_->anchor(); }
  Rat ratio() const override { return inner_->ratio(); }
  const std::optional<ScaleProfile> &profile() const override { return profile_; }

  Rat slope_at(const Rat &x, bool right) const override
  {
    if (x == 0)
      right = true;
    return outer_->slope_at(inner_->eval(x), right) * inner_->slope_at(x, right);
  }

  std::vector<Rat> candidates(const Rat &lo, const Rat &hi) const override
  {
    auto out = inner_->candidates(lo, hi);
    for (auto &y : outer_->candidates(inner_->eval(lo), inner_->eval(hi)))
      out.push_back(inner_->invert(y));
    sort_unique(out);
    return out;
  }

  SlopeRange slope_range() const override
  {
    auto o = outer_->slope_range();
    auto i = inner_->slope_range();
    return {o.inf * i.inf, o.sup * i.sup};
  }

private:
  NodePtr outer_;
  NodePtr inner_;
  std::optional<ScaleProfile> profile_;
};

class InverseNode final : public Node {
public:
  explicit InverseNode(NodePtr base) : base_(std::move(base))
  {
    if (base_->profile())
      profile_ = base_->profile()->inverse();
  }

  NodeKind kind() const override { return NodeKind::Inverse; }
  const NodePtr &base() const { return base_; }

  Rat eval(const Rat &y) const override
  {
    if (y < 0)
      throw NegativeInput();
    return base_->invert(y);
  }
  Rat invert(const Rat &x) const override { return base_->eval(x); }
  Rat at_zero() const override { return 0; }
  Rat anchor() const override { return base_->eval(base_->anchor()); }
  Rat ratio() const override { return base_->ratio(); }
  const std::optional<ScaleProfile> &profile() const override { return profile_; }

  Rat slope_at(const Rat &y, bool right) const override
  {
    if (y < 0)
      throw NegativeInput();
    Rat f0 = base_->at_zero();
    if (y < f0 || (y == f0 && !right))
      return 0;
    return 1 / base_->slope_at(base_->invert(y), right);
  }

  std::vector<Rat> candidates(const Rat &lo, const Rat &hi) const override
  {
    std::vector<Rat> out;
    Rat f0 = base_->at_zero();
    if (f0 > 0 && lo < f0 && f0 < hi)
      out.push_back(f0);
    for (auto &x : base_->candidates(base_->invert(lo), base_->invert(hi)))
      out.push_back(base_->eval(x));
    sort_unique(out);
    return out;
  }

  SlopeRange slope_range() const override
  {
    auto r = base_->slope_range();
    return {1 / r.sup, 1 / r.inf};
  }

private:
  NodePtr base_;
  std::optional<ScaleProfile> profile_;
};

} // namespace detail

class PLQMap {
public:
  /// Assemble a map from a head and a block rule. Structural checks only;
  /// run validate() for the slope and continuity conditions.
  static PLQMap from_parts(FinitePL head, TailBlockRule tail, std::string name = {})
  {
    return PLQMap(std::make_shared<detail::ExactNode>(std::move(head), std::move(tail)), std::move(name));
  }

  explicit PLQMap(detail::NodePtr node, std::string name = {}) : node_(std::move(node)), name_(std::move(name)) {}

  const std::string &name() const { return name_; }
  PLQMap named(std::string name) const { return PLQMap(node_, std::move(name)); }

  Rat operator()(const Rat &x) const { return node_->eval(x); }
  Rat evaluate(const Rat &x) const { return node_->eval(x); }
  /// Exact preimage for y >= f(0); smaller values map to 0.
  Rat preimage(const Rat &y) const { return node_->invert(y); }
  Rat value_at_zero() const { return node_->at_zero(); }

  Rat anchor() const { return node_->anchor(); }
  Rat ratio() const { return node_->ratio(); }
  Rat anchor_value(long n) const
  {
    if (n < 0)
      throw std::invalid_argument("anchor index must be nonnegative");
    return node_->anchor_value(n);
  }

  Rat slope_left(const Rat &x) const { return node_->slope_at(x, false); }
  Rat slope_right(const Rat &x) const { return node_->slope_at(x, true); }

  /// Break points in the open window (lo, hi).
  std::vector<BreakPoint> breakpoints_in(const Rat &lo, const Rat &hi) const
  {
    if (lo < 0)
      throw NegativeInput();
    if (lo >= hi)
      throw EmptyWindow();
    std::vector<BreakPoint> out;
    for (auto &x : node_->candidates(lo, hi)) {
      Rat l = slope_left(x);
      Rat r = slope_right(x);
      if (l != r)
        out.push_back({x, l, r});
    }
    return out;
  }

  std::vector<Rat> break_candidates(const Rat &lo, const Rat &hi) const { return node_->candidates(lo, hi); }

  const std::optional<ScaleProfile> &profile() const { return node_->profile(); }
  SlopeRange slope_range() const { return node_->slope_range(); }

  bool has_exact_tail() const { return node_->kind() == detail::NodeKind::Exact; }
  const FinitePL &head() const { return exact().head(); }
  const TailBlockRule &tail() const { return exact().tail(); }

  /// c when the map is x -> c x.
  std::optional<Rat> linear_factor() const
  {
    if (!has_exact_tail())
      return std::nullopt;
    const auto &h = head();
    const auto &t = tail();
    if (h.value_at_zero != 0)
      return std::nullopt;
    Rat c = h.pieces.front().slope;
    for (auto &p : h.pieces)
      if (p.slope != c)
        return std::nullopt;
    for (auto &p : t.pieces)
      if (p.slope.c0 != c || p.slope.c1 != 0)
        return std::nullopt;
    return c;
  }

  const detail::NodePtr &node() const { return node_; }

private:
  const detail::ExactNode &exact() const
  {
    if (!has_exact_tail())
      throw NoClosedForm();
    return static_cast<const detail::ExactNode &>(*node_);
  }

  detail::NodePtr node_;
  std::string name_;
};

/// x -> c x.
inline PLQMap linear_map(const Rat &c)
{
  if (c <= 0)
    throw std::invalid_argument("scale must be positive");
  return PLQMap::from_parts({{{Rat(0), c}}, Rat(0)}, {Rat(2), Rat(1), {{{Rat(1), Rat(0)}, {c}}}},
                            c == 1 ? "id" : "f_" + to_string(c));
}

inline PLQMap identity_map() { return linear_map(1); }

/// Checks continuity of the block structure and positivity and boundedness
/// of the slopes; reports the exact range of the slopes.
inline ValidationReport validate(const PLQMap &map)
{
  if (!map.has_exact_tail()) {
    auto r = map.slope_range();
    if (r.inf <= 0)
      throw UnboundedSlope();
    return {r, false};
  }
  const auto &head = map.head();
  const auto &tail = map.tail();
  if (head.value_at_zero < 0)
    throw MapError("value at zero must be nonnegative");
  for (std::size_t i = 0; i < head.pieces.size(); ++i)
    if (head.pieces[i].slope <= 0)
      throw NonmonotoneSlope(i, "head");
  const Rat &s = tail.anchor;
  const Rat &rho = tail.ratio;
  const auto &pcs = tail.pieces;
  if (!(pcs.front().pos == BreakExpr{s, Rat(0)}))
    throw DiscontinuityAt(s);
  // Each gap geo r^n + c between consecutive positions must be >= 0 for all
  // n >= 0, which holds iff geo >= 0 and geo + c >= 0.
  for (std::size_t i = 0; i < pcs.size(); ++i) {
    BreakExpr next = i + 1 < pcs.size() ? pcs[i + 1].pos : BreakExpr{s * rho, Rat(0)};
    BreakExpr gap = next - pcs[i].pos;
    if (gap.geo < 0)
      throw DiscontinuityAt(pcs[i].pos.at_power(1));
    if (gap.geo + gap.cst < 0)
      throw DiscontinuityAt(pcs[i].pos.at_power(1));
  }
  for (std::size_t i = 0; i < pcs.size(); ++i) {
    const auto &sl = pcs[i].slope;
    if (sl.q < 0 || sl.q >= 1)
      throw MapError("slope decay rate must lie in [0, 1)");
    if (!sl.positive())
      throw NonmonotoneSlope(i, "tail");
  }
  for (auto &p : pcs)
    if (p.slope.c0 <= 0)
      throw UnboundedSlope();
  return {map.slope_range(), true};
}

namespace detail {

inline QIWitness qi_bounds(const Node &node)
{
  switch (node.kind()) {
  case NodeKind::Exact: {
    auto r = node.slope_range();
    return {rmax(Rat(1), rmax(r.sup, Rat(1 / r.inf))), node.at_zero()};
  }
  case NodeKind::Composite: {
    const auto &c = static_cast<const CompositeNode &>(node);
    auto o = qi_bounds(*c.outer());
    auto i = qi_bounds(*c.inner());
    return {o.M * i.M, o.M * i.additive + o.additive};
  }
  case NodeKind::Inverse: {
    const auto &v = static_cast<const InverseNode &>(node);
    auto b = qi_bounds(*v.base());
    return {b.M, b.M * b.additive + v.base()->at_zero()};
  }
  }
  throw std::logic_error("unknown node kind");
}

} // namespace detail

/// M and an additive constant with
/// |x - y| / M - additive <= |f(x) - f(y)| <= M |x - y| + additive.
inline QIWitness qi_certificate(const PLQMap &map)
{
  validate(map);
  return detail::qi_bounds(*map.node());
}

namespace detail {

/// Head on [0, S) read off from any node.
inline FinitePL materialize_head(const Node &node, const Rat &S)
{
  FinitePL head{{{Rat(0), node.slope_at(0, true)}}, node.at_zero()};
  for (auto &x : node.candidates(0, S)) {
    Rat k = node.slope_at(x, true);
    if (k != head.pieces.back().slope)
      head.pieces.push_back({x, k});
  }
  return head;
}

/// Drop pieces of zero length and merge neighbours with equal slopes.
inline std::vector<TailPiece> simplify_tail(const std::vector<TailPiece> &pieces, const BreakExpr &end)
{
  std::vector<TailPiece> out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const BreakExpr &next = i + 1 < pieces.size() ? pieces[i + 1].pos : end;
    if (next == pieces[i].pos)
      continue;
    if (!out.empty() && out.back().slope == pieces[i].slope)
      continue;
    out.push_back(pieces[i]);
  }
  if (out.empty())
    out.push_back(pieces.front());
  out.front().pos = pieces.front().pos;
  return out;
}

/// Smallest n >= from with b(n) >= a(n) from then on, given a <= b eventually.
inline long settle_index(const BreakExpr &a, const BreakExpr &b, const Rat &rho, long from)
{
  BreakExpr d = b - a;
  long n = from;
  Rat p = rpow(rho, from);
  while (d.geo * p + d.cst < 0) {
    p *= rho;
    ++n;
  }
  return n;
}

/// Integer k with A(n) = base r^(n+k) for every n, when the tail has
/// constant slopes and geometric anchors.
inline std::optional<long> geometric_anchor_shift(const ExactNode &m, const Rat &base)
{
  const auto &t = m.tail();
  const Rat &rho = t.ratio;
  Rat R = 0, C = 0;
  for (std::size_t i = 0; i < t.pieces.size(); ++i) {
    if (!t.pieces[i].slope.constant())
      return std::nullopt;
    BreakExpr next = i + 1 < t.pieces.size() ? t.pieces[i + 1].pos : BreakExpr{t.anchor * rho, Rat(0)};
    BreakExpr gap = next - t.pieces[i].pos;
    R += t.pieces[i].slope.c0 * gap.geo;
    C += t.pieces[i].slope.c0 * gap.cst;
  }
  Rat A0 = m.anchor_value(0);
  if (C != 0 || R != A0 * (rho - 1))
    return std::nullopt;
  Rat ratio = A0 / base;
  long k = floor_log(ratio, rho);
  if (rpow(rho, k) != ratio)
    return std::nullopt;
  return k;
}

inline bool agrees(const Node &candidate, const Node &reference, const Rat &anchor, const Rat &rho)
{
  std::vector<Rat> probes;
  for (long n = 0; n < 4; ++n) {
    Rat a = anchor * rpow(rho, n);
    for (auto &x : candidate.candidates(a, a * rho))
      probes.push_back(x);
    probes.push_back(a);
    probes.push_back(a + (a * rho - a) / 3);
  }
  probes.push_back(anchor / 2);
  for (auto &x : probes)
    if (candidate.eval(x) != reference.eval(x))
      return false;
  return true;
}

/// Exact block rule for outer ∘ inner when inner has constant tail slopes
/// and maps its block n onto the outer block n + k.
inline std::optional<PLQMap> compose_aligned(const ExactNode &outer, const ExactNode &inner, const NodePtr &fallback)
{
  const Rat &rho = inner.tail().ratio;
  if (outer.tail().ratio != rho)
    return std::nullopt;
  auto k = geometric_anchor_shift(inner, outer.tail().anchor);
  if (!k)
    return std::nullopt;
  const auto &it = inner.tail();
  const auto &ot = outer.tail();
  const Rat rk = rpow(rho, *k);

  // Inner positions P_i and values V_i in block n, as expressions in r^n.
  std::vector<BreakExpr> P, V;
  std::vector<Rat> slope_in;
  BreakExpr value{ot.anchor * rk, Rat(0)};
  for (std::size_t i = 0; i < it.pieces.size(); ++i) {
    P.push_back(it.pieces[i].pos);
    V.push_back(value);
    BreakExpr next = i + 1 < it.pieces.size() ? it.pieces[i + 1].pos : BreakExpr{it.anchor * rho, Rat(0)};
    value = value + it.pieces[i].slope.c0 * (next - it.pieces[i].pos);
    slope_in.push_back(it.pieces[i].slope.c0);
  }
  const BreakExpr image_end{ot.anchor * rk * rho, Rat(0)};
  if (!(value == image_end))
    return std::nullopt;

  // Outer positions in block n + k.
  std::vector<BreakExpr> Q;
  for (auto &p : ot.pieces)
    Q.push_back({p.pos.geo * rk, p.pos.cst});

  std::vector<BreakExpr> ys = V;
  ys.insert(ys.end(), Q.begin(), Q.end());
  std::sort(ys.begin(), ys.end(), [](const BreakExpr &a, const BreakExpr &b) { return compare_eventual(a, b) < 0; });
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  ys.push_back(image_end);

  long n0 = std::max<long>(0, -*k);
  for (std::size_t m = 0; m + 1 < ys.size(); ++m)
    n0 = std::max(n0, settle_index(ys[m], ys[m + 1], rho, n0));
  // A later pair may have pushed n0 past an earlier settle point; settle
  // indices are monotone so one more sweep is enough.
  for (std::size_t m = 0; m + 1 < ys.size(); ++m)
    n0 = std::max(n0, settle_index(ys[m], ys[m + 1], rho, n0));

  auto last_le = [](const std::vector<BreakExpr> &list, const BreakExpr &y) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < list.size(); ++i)
      if (compare_eventual(list[i], y) <= 0)
        idx = i;
    return idx;
  };

  const Rat shift = rpow(rho, n0);
  std::vector<TailPiece> pieces;
  for (std::size_t m = 0; m + 1 < ys.size(); ++m) {
    std::size_t i = last_le(V, ys[m]);
    std::size_t j = last_le(Q, ys[m]);
    BreakExpr x = P[i] + (1 / slope_in[i]) * (ys[m] - V[i]);
    TailPiece piece;
    piece.pos = {x.geo * shift, x.cst};
    piece.slope = ot.pieces[j].slope.shifted(n0 + *k).scaled(slope_in[i]);
    pieces.push_back(piece);
  }
  TailBlockRule tail{rho, it.anchor * shift, {}};
  tail.pieces = simplify_tail(pieces, {tail.anchor * rho, Rat(0)});
  FinitePL head = materialize_head(*fallback, tail.anchor);
  auto node = std::make_shared<ExactNode>(std::move(head), std::move(tail));
  if (!agrees(*node, *fallback, node->tail().anchor, rho))
    return std::nullopt;
  return PLQMap(node);
}

} // namespace detail

/// outer ∘ inner. Linear factors and block-aligned constant-slope inner
/// maps give a block rule; anything else is kept as an evaluation tree.
inline PLQMap compose(const PLQMap &outer, const PLQMap &inner)
{
  auto co = outer.linear_factor();
  auto ci = inner.linear_factor();
  if (co && ci)
    return linear_map(*co * *ci);
  if (co && *co == 1)
    return inner;
  if (ci && *ci == 1)
    return outer;
  if (co && inner.has_exact_tail()) {
    FinitePL head = inner.head();
    TailBlockRule tail = inner.tail();
    head.value_at_zero *= *co;
    for (auto &p : head.pieces)
      p.slope *= *co;
    for (auto &p : tail.pieces)
      p.slope = p.slope.scaled(*co);
    return PLQMap::from_parts(std::move(head), std::move(tail));
  }
  if (ci && outer.has_exact_tail()) {
    FinitePL head = outer.head();
    TailBlockRule tail = outer.tail();
    for (auto &p : head.pieces) {
      p.start /= *ci;
      p.slope *= *ci;
    }
    tail.anchor /= *ci;
    for (auto &p : tail.pieces) {
      p.pos = (1 / *ci) * p.pos;
      p.slope = p.slope.scaled(*ci);
    }
    return PLQMap::from_parts(std::move(head), std::move(tail));
  }
  auto tree = std::make_shared<detail::CompositeNode>(outer.node(), inner.node());
  if (outer.has_exact_tail() && inner.has_exact_tail()) {
    const auto &o = static_cast<const detail::ExactNode &>(*outer.node());
    const auto &i = static_cast<const detail::ExactNode &>(*inner.node());
    if (auto exact = detail::compose_aligned(o, i, tree))
      return *exact;
  }
  return PLQMap(tree);
}

/// The exact inverse. Block rules with constant slopes and geometric
/// anchors invert to block rules on the image blocks.
inline PLQMap inverse(const PLQMap &map)
{
  if (auto c = map.linear_factor())
    return linear_map(1 / *c);
  const auto &node = map.node();
  if (node->kind() == detail::NodeKind::Inverse)
    return PLQMap(static_cast<const detail::InverseNode &>(*node).base());
  if (node->kind() == detail::NodeKind::Composite) {
    const auto &c = static_cast<const detail::CompositeNode &>(*node);
    return compose(inverse(PLQMap(c.inner())), inverse(PLQMap(c.outer())));
  }
  const auto &e = static_cast<const detail::ExactNode &>(*node);
  const auto &head = e.head();
  const auto &tail = e.tail();
  if (head.value_at_zero == 0) {
    Rat A0 = e.anchor_value(0);
    if (auto k = detail::geometric_anchor_shift(e, A0); k && *k == 0) {
      FinitePL ihead{{}, Rat(0)};
      for (auto &p : head.pieces)
        ihead.pieces.push_back({map(p.start), 1 / p.slope});
      TailBlockRule itail{tail.ratio, A0, {}};
      BreakExpr value{A0, Rat(0)};
      std::vector<TailPiece> pieces;
      for (std::size_t i = 0; i < tail.pieces.size(); ++i) {
        pieces.push_back({value, {1 / tail.pieces[i].slope.c0}});
        BreakExpr next =
            i + 1 < tail.pieces.size() ? tail.pieces[i + 1].pos : BreakExpr{tail.anchor * tail.ratio, Rat(0)};
        value = value + tail.pieces[i].slope.c0 * (next - tail.pieces[i].pos);
      }
      itail.pieces = detail::simplify_tail(pieces, {A0 * tail.ratio, Rat(0)});
      return PLQMap::from_parts(std::move(ihead), std::move(itail));
    }
  }
  return PLQMap(std::make_shared<detail::InverseNode>(node));
}

} // namespace plqi

#pragma once

// PSL(2,R) acting on the projective line, lifts to R that commute with
// t -> t + 1, and the (2,3,7) triangle group generated by lifts.
//
// A line through the origin at angle pi t is parametrized by t in [0, 1).
// A lift F of a projective map is increasing, F(t + 1) = F(t) + 1, and is
// normalized by F(0) in [0, 1).
//
// Any homomorphism phi from <x, y, z | x^2 = y^3 = z^7 = xyz> to (R, +)
// satisfies 2a = 3b = 7c = a + b + c for a = phi(x), b = phi(y),
// c = phi(z); then a + b + c = 2a forces b + c = a, so 3b = 2b + 2c and
// b = 2c, 7c = 3b = 6c, c = 0 and hence a = b = c = 0.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace plqi::mobius {

inline constexpr double pi = 3.14159265358979323846;

struct NonmonotoneTracking : std::runtime_error {
  explicit NonmonotoneTracking(double t)
  : std::runtime_error("lift is not monotone near t = " + std::to_string(t)), t(t)
  {
  }
  double t;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct Mat2 {
  double a = 1, b = 0, c = 0, d = 1;

  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }

  /// Representative with determinant 1.
  Mat2 normalized() const
  {
    double D = det();
    if (!(D > 0))
      throw std::domain_error("matrix must have positive determinant");
    double k = 1 / std::sqrt(D);
    return {a * k, b * k, c * k, d * k};
  }

  Mat2 inverse() const
  {
    double D = det();
    return {d / D, -b / D, -c / D, a / D};
  }

  friend Mat2 operator*(const Mat2 &m, const Mat2 &n)
  {
    return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
  }

  static Mat2 identity() { return {}; }
};

/// a^s = [[1, -s], [0, 1]].
inline Mat2 a_pow(double s) { return {1, -s, 0, 1}; }
/// b^s = [[1, 0], [s, 1]].
inline Mat2 b_pow(double s) { return {1, 0, s, 1}; }
/// d = aba = [[0, -1], [1, 0]].
inline Mat2 d_mat() { return {0, -1, 1, 0}; }

inline Mat2 power(Mat2 m, int e)
{
  Mat2 r;
  for (int i = 0; i < e; ++i)
    r = r * m;
  return r;
}

/// Image of the line at angle pi t, as a parameter in [0, 1).
inline double proj_angle_action(const Mat2 &m, double t)
{
  double th = pi * t;
  double u = std::cos(th), v = std::sin(th);
  double x = m.a * u + m.b * v;
  double y = m.c * u + m.d * v;
  double r = std::atan2(y, x) / pi;
  r -= std::floor(r);
  if (r >= 1)
    r = 0;
  return r;
}

/// A single normalized lift of one matrix.
class Lift {
public:
  explicit Lift(const Mat2 &m, int grid = 4096) : m_(m.normalized()), f0_(proj_angle_action(m_, 0))
  {
    // F(u) for u in [0, 1) is p(u) or p(u) + 1; check the branch choice
    // gives an increasing function.
    double prev = f0_;
    for (int i = 1; i <= grid; ++i) {
      double u = static_cast<double>(i) / grid;
      double v = eval_unit(u);
      if (v < prev - 1e-12)
        throw NonmonotoneTracking(u);
      prev = v;
    }
  }

  const Mat2 &matrix() const { return m_; }

  double operator()(double t) const
  {
    double k = std::floor(t);
    return k + eval_unit(t - k);
  }

  /// The increasing inverse.
  double inverse(double y) const
  {
    // F(t) - t is periodic, so F^-1(y) = k + F^-1(y - k) with y - k in [F(0), F(0) + 1).
    double k = std::floor(y - f0_);
    double z = y - k; // in [f0, f0 + 1)
    double p = z - std::floor(z);
    double u = proj_angle_action(m_.inverse(), p);
    // u is t mod 1 with F(t) = z; pick the representative in [0, 1).
    double v = eval_unit(u);
    if (v > z + 0.5)
      u -= 1;
    else if (v < z - 0.5)
      u += 1;
    return k + u;
  }

private:
  double eval_unit(double u) const
  {
    if (u == 1)
      return f0_ + 1;
    double p = proj_angle_action(m_, u);
    return p >= f0_ ? p : p + 1;
  }

  Mat2 m_;
  double f0_;
};

/// Composition L_1 ∘ L_2 ∘ ... ∘ L_m of lifts or their inverses, applied
/// right to left, plus an integer offset (which commutes with every lift).
class LiftedMap {
public:
  struct Factor {
    Lift lift;
    bool inverted = false;
  };

  LiftedMap() = default;
  explicit LiftedMap(const Mat2 &m) { factors_.push_back({Lift(m)}); }

  static LiftedMap shift(double k)
  {
    LiftedMap s;
    s.offset_ = k;
    return s;
  }

  double operator()(double t) const
  {
    double x = t;
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it)
      x = it->inverted ? it->lift.inverse(x) : it->lift(x);
    return x + offset_;
  }

  /// Projective matrix covered by this lift.
  Mat2 matrix() const
  {
    Mat2 m;
    for (auto &f : factors_)
      m = m * (f.inverted ? f.lift.matrix().inverse() : f.lift.matrix());
    return m.normalized();
  }

  friend LiftedMap operator*(const LiftedMap &outer, const LiftedMap &inner)
  {
    LiftedMap r = outer;
    r.offset_ += inner.offset_;
    r.factors_.insert(r.factors_.end(), inner.factors_.begin(), inner.factors_.end());
    return r;
  }

  LiftedMap inverse() const
  {
    LiftedMap r;
    r.offset_ = -offset_;
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it)
      r.factors_.push_back({it->lift, !it->inverted});
    return r;
  }

  LiftedMap pow(int e) const
  {
    LiftedMap base = e >= 0 ? *this : inverse();
    LiftedMap r;
    for (int i = 0; i < std::abs(e); ++i)
      r = r * base;
    return r;
  }

private:
  std::vector<Factor> factors_;
  double offset_ = 0;
};

/// Lift of m with value at 0 in [0, 1).
inline LiftedMap lift(const Mat2 &m) { return LiftedMap(m); }

/// Larger and smaller roots of r^2 - r + (2 - 2 cos(pi/7)) = 0.
inline std::pair<double, double> r_roots()
{
  double c = 2 - 2 * std::cos(pi / 7);
  double disc = std::sqrt(1 - 4 * c);
  return {(1 + disc) / 2, (1 - disc) / 2};
}

struct TriangleGenerators {
  LiftedMap x, y, z;
  double r;
  Mat2 zbar; // (a^r b a^(1-r))^-1 aba
};

/// x = ABA, y = A^r B A^(1-r), z = y^-1 x; by default r is the smaller root.
inline TriangleGenerators triangle_generators(bool smaller_root = true)
{
  auto [big, small] = r_roots();
  double r = smaller_root ? small : big;
  LiftedMap A = lift(a_pow(1)), B = lift(b_pow(1));
  LiftedMap Ar = lift(a_pow(r)), A1r = lift(a_pow(1 - r));
  TriangleGenerators g;
  g.r = r;
  g.x = A * B * A;
  g.y = Ar * B * A1r;
  g.z = g.y.inverse() * g.x;
  g.zbar = ((a_pow(r) * b_pow(1) * a_pow(1 - r)).inverse() * (a_pow(1) * b_pow(1) * a_pow(1))).normalized();
  return g;
}

/// [[2cos(pi/7) - 1, -r], [1 - r, 1]].
inline Mat2 zbar_closed_form(double r) { return {2 * std::cos(pi / 7) - 1, -r, 1 - r, 1}; }

inline std::vector<double> sample_grid(int n, double lo = 0, double hi = 1)
{
  std::vector<double> ts;
  ts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    ts.push_back(lo + (hi - lo) * i / n);
  return ts;
}

struct RelationReport {
  double r;
  double x2_shift;     // sup |x^2(t) - t - 1|
  double y3_x2;        // sup |y^3(t) - x^2(t)|
  double z7_at_0;      // z^7(0)
  double z7_shift;     // sup |z^7(t) - t - 1|
  double xyz_x2;       // sup |xyz(t) - t - 1|
  double z_step_min;   // min z(t) - t
  double z_step_max;   // max z(t) - t
  double zbar7_err;    // max entry of |zbar^7 + I|
  double zbar_formula; // max entry of |zbar - closed form|
  double zbar_trace;
  double zbar_det;
  std::vector<std::array<double, 4>> residuals; // t, x^2, y^3 - x^2, z^7 - x^2
};

inline RelationReport relation_check(const TriangleGenerators &g, int grid = 1000)
{
  RelationReport rep{};
  rep.r = g.r;
  LiftedMap x2 = g.x.pow(2), y3 = g.y.pow(3), z7 = g.z.pow(7), xyz = g.x * g.y * g.z;
  rep.z_step_min = 1e300;
  rep.z_step_max = -1e300;
  for (double t : sample_grid(grid, -2, 2)) {
    double a = x2(t), b = y3(t), c = z7(t), d = xyz(t);
    rep.x2_shift = std::max(rep.x2_shift, std::abs(a - t - 1));
    rep.y3_x2 = std::max(rep.y3_x2, std::abs(b - a));
    rep.z7_shift = std::max(rep.z7_shift, std::abs(c - t - 1));
    rep.xyz_x2 = std::max(rep.xyz_x2, std::abs(d - t - 1));
    double step = g.z(t) - t;
    rep.z_step_min = std::min(rep.z_step_min, step);
    rep.z_step_max = std::max(rep.z_step_max, step);
    rep.residuals.push_back({t, a - t - 1, b - a, c - a});
  }
  rep.z7_at_0 = z7(0);
  Mat2 z7m = power(g.zbar, 7);
  rep.zbar7_err = std::max({std::abs(z7m.a + 1), std::abs(z7m.b), std::abs(z7m.c), std::abs(z7m.d + 1)});
  Mat2 cf = zbar_closed_form(g.r);
  rep.zbar_formula = std::max({std::abs(g.zbar.a - cf.a), std::abs(g.zbar.b - cf.b), std::abs(g.zbar.c - cf.c),
                               std::abs(g.zbar.d - cf.d)});
  rep.zbar_trace = g.zbar.trace();
  rep.zbar_det = g.zbar.det();
  return rep;
}

/// (F^n(0)) / n.
inline double translation_number(const LiftedMap &f, int n = 1 << 14)
{
  double x = 0;
  for (int i = 0; i < n; ++i)
    x = f(x);
  return x / n;
}

/// h(x) = e^x for x >= 1 and e x on [0, 1].
inline double exp_h(double x)
{
  if (x < 0)
    throw DomainError("h is defined on [0, inf)");
  return x >= 1 ? std::exp(x) : std::exp(1.0) * x;
}

inline double exp_h_inverse(double t)
{
  if (t < 0)
    throw DomainError("h^-1 is defined on [0, inf)");
  return t >= std::exp(1.0) ? std::log(t) : t / std::exp(1.0);
}

struct ConjugationSample {
  double t;
  double ratio; // h f h^-1 (t) / t
};

struct ConjugationReport {
  std::vector<ConjugationSample> samples;
  double ratio_min;
  double ratio_max;
  double translation; // estimate of the translation number of f
  double expected;    // e^translation
};

/// h f h^-1 on samples of (e, hi]; for t > e this is exp(f(log t)) / t.
inline ConjugationReport exp_conjugation_check(const LiftedMap &f, const std::vector<double> &ts)
{
  ConjugationReport rep{};
  rep.ratio_min = 1e300;
  rep.ratio_max = -1e300;
  for (double t : ts) {
    if (!(t > std::exp(1.0)))
      throw DomainError("samples must exceed e");
    double u = f(exp_h_inverse(t));
    // exp(u) / t computed as exp(u - log t) to keep precision for large t.
    double ratio = u >= 1 ? std::exp(u - std::log(t)) : exp_h(u) / t;
    rep.samples.push_back({t, ratio});
    rep.ratio_min = std::min(rep.ratio_min, ratio);
    rep.ratio_max = std::max(rep.ratio_max, ratio);
  }
  rep.translation = translation_number(f);
  rep.expected = std::exp(rep.translation);
  return rep;
}

/// Geometric samples of (e, hi].
inline std::vector<double> conjugation_samples(int n = 200, double hi = 1e6)
{
  std::vector<double> ts;
  double lo = std::log(std::exp(1.0)) + 1e-6;
  for (int i = 1; i <= n; ++i)
    ts.push_back(std::exp(lo + (std::log(hi) - lo) * i / n));
  return ts;
}

} // namespace plqi::mobius

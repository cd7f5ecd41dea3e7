#include "kperec/descent.hpp"

#include <cstdio>
#include <deque>
#include <memory>
#include <mutex>

#include "kperec/parallel.hpp"

namespace kperec {

std::vector<std::vector<std::int64_t>> hermite_transform(std::vector<std::vector<std::int64_t>> A) {
  const std::size_t rows = A.size(), cols = rows ? A[0].size() : 0;
  std::vector<std::vector<std::int64_t>> U(rows, std::vector<std::int64_t>(rows, 0));
  for (std::size_t i = 0; i < rows; ++i) U[i][i] = 1;
  auto sub = [&](std::size_t dst, std::size_t src, std::int64_t q) {
    for (std::size_t j = 0; j < cols; ++j) A[dst][j] -= q * A[src][j];
    for (std::size_t j = 0; j < rows; ++j) U[dst][j] -= q * U[src][j];
  };
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < rows; ++col) {
    for (;;) {
      // smallest nonzero entry in the column becomes the pivot
      std::size_t pivot = rows;
      for (std::size_t i = row; i < rows; ++i)
        if (A[i][col] != 0 && (pivot == rows || std::abs(A[i][col]) < std::abs(A[pivot][col]))) pivot = i;
      if (pivot == rows) break;
      std::swap(A[row], A[pivot]);
      std::swap(U[row], U[pivot]);
      bool done = true;
      for (std::size_t i = row + 1; i < rows; ++i) {
        if (A[i][col] == 0) continue;
        sub(i, row, A[i][col] / A[row][col]);
        if (A[i][col] != 0) done = false;
      }
      if (done) {
        ++row;
        break;
      }
    }
  }
  return U;
}

namespace {

std::vector<Poly> polys_up_to(std::uint32_t p, std::int64_t d, bool monic) {
  std::vector<Poly> out;
  if (!monic) out.push_back(Poly(p));
  for (std::int64_t deg = 0; deg <= d; ++deg) {
    std::uint64_t count = 1;
    for (std::int64_t i = 0; i < deg + (monic ? 0 : 1); ++i) count *= p;
    for (std::uint64_t k = 0; k < count; ++k) {
      std::vector<Coeff> c(static_cast<std::size_t>(deg) + 1, 0);
      std::uint64_t v = k;
      for (std::int64_t i = 0; i < deg + (monic ? 0 : 1); ++i, v /= p) c[static_cast<std::size_t>(i)] = static_cast<Coeff>(v % p);
      if (monic) c.back() = 1;
      if (!monic && c.back() == 0) continue;
      out.push_back(Poly(p, std::move(c)));
    }
  }
  return out;
}

bool height_order(const TowerPoint& a, const TowerPoint& b) {
  if (a.is_infinity() != b.is_infinity()) return a.is_infinity();
  const Rational ha = naive_height(a), hb = naive_height(b);
  if (ha != hb) return ha < hb;
  return a.to_string() < b.to_string();
}

}  // namespace

std::vector<TowerPoint> bounded_height_points(const WeierstrassCurve& E, std::uint32_t level, const Rational& D,
                                              const EnumerationOptions& opts) {
  if (D < 0) throw std::invalid_argument("height bound must be nonnegative");
  const std::uint32_t p = E.prime();
  Rational scaled = D;
  for (std::uint32_t i = 0; i < level; ++i) scaled *= p;
  const BigInt d_big = numerator(scaled) / denominator(scaled);
  if (d_big > 64) throw BudgetExceededError("degree bound too large for enumeration");
  const auto d = static_cast<std::int64_t>(d_big);

  auto base = std::make_shared<const WeierstrassCurve>(E);
  const WeierstrassCurve twist = frobenius_twist(E, level);
  // on an integral model a non-integral x has a square denominator
  const bool integral = std::all_of(twist.coefficients().begin(), twist.coefficients().end(),
                                    [](const RatFunc& a) { return a.is_polynomial(); });
  double nums_count = 1, dens_count = 0, power = 1;
  for (std::int64_t i = 0; i <= d; ++i) nums_count *= p;
  for (std::int64_t i = 0; i <= (integral ? d / 2 : d); ++i, power *= p) dens_count += power;
  if (nums_count * dens_count > static_cast<double>(opts.budget))
  {
    char needed[32];
    std::snprintf(needed, sizeof needed, "%.3g", nums_count * dens_count);
    throw BudgetExceededError(std::string("enumeration needs about ") + needed + " x-candidates, over the budget of " +
                              std::to_string(opts.budget));
  }

  const auto nums = polys_up_to(p, d, false);
  std::vector<Poly> roots = polys_up_to(p, integral ? d / 2 : d, true);
  std::vector<Poly> dens = roots;
  if (integral)
    for (auto& s : dens) s = s * s;

  // With x = u/s^2 on an integral model and p odd, y s^3 is a polynomial, so
  // (a1 u s + a3 s^3)^2 + 4(u^3 + a2 u^2 s^2 + a4 u s^4 + a6 s^6) is a square and
  // in particular a square at every t = c in F_p.
  const PrimeField F(p);
  const bool sieve = integral && p != 2;
  auto values = [&](const Poly& f) {
    std::vector<Coeff> v(p);
    for (Coeff c = 0; c < p; ++c) v[c] = f.eval(c);
    return v;
  };
  std::vector<std::vector<Coeff>> coeff_values, num_values, root_values;
  if (sieve) {
    for (const auto& a : twist.coefficients()) coeff_values.push_back(values(a.num()));
    for (const auto& u : nums) num_values.push_back(values(u));
    for (const auto& r : roots) root_values.push_back(values(r));
  }
  auto passes_sieve = [&](std::size_t iu, std::size_t is) {
    for (Coeff c = 0; c < p; ++c) {
      const Coeff u = num_values[iu][c], r = root_values[is][c];
      const Coeff r2 = F.mul(r, r), r3 = F.mul(r2, r);
      const auto& a = coeff_values;
      const Coeff b = F.add(F.mul(F.mul(a[0][c], u), r), F.mul(a[2][c], r3));
      Coeff rhs = F.mul(F.mul(u, u), u);
      rhs = F.add(rhs, F.mul(a[1][c], F.mul(F.mul(u, u), r2)));
      rhs = F.add(rhs, F.mul(a[3][c], F.mul(u, F.mul(r2, r2))));
      rhs = F.add(rhs, F.mul(a[4][c], F.mul(r3, r3)));
      if (!F.is_square(F.add(F.mul(b, b), F.mul(4 % p, rhs)))) return false;
    }
    return true;
  };

  std::vector<std::vector<Point>> found(dens.size());
  parallel_for(dens.size(), [&](std::size_t i) {
    const Poly& w = dens[i];
    for (std::size_t k = 0; k < nums.size(); ++k) {
      const Poly& u = nums[k];
      if (sieve && !passes_sieve(k, i)) continue;
      if (u.is_zero() ? !w.is_one() : gcd(u, w).deg() > 0) continue;
      for (auto& Q : points_with_x(twist, RatFunc(u, w))) found[i].push_back(std::move(Q));
    }
  });
  std::vector<TowerPoint> out = {TowerPoint::infinity(E)};
  for (const auto& part : found)
    for (const auto& Q : part) out.emplace_back(base, level, Q);
  std::sort(out.begin(), out.end(), height_order);
  return out;
}

// ---------------------------------------------------------------------------

EllipticModule::EllipticModule(const WeierstrassCurve& E, std::uint32_t level, const Rational& eps,
                               const EnumerationOptions& opts)
    : base_(std::make_shared<const WeierstrassCurve>(E)),
      level_(level),
      eps_(eps),
      opts_(opts),
      torsion_(torsion_perfect_closure(E, level).group.elements) {
  for (std::uint32_t n = 0; n <= level; ++n) twist_data_.emplace_back(frobenius_twist(E, n));
  Rational scale = 1;
  for (std::uint32_t i = 0; i < level; ++i) scale *= E.prime();
  floor_ = gs_floor(twist_data_.back().curve()) / scale;
}

Rational EllipticModule::height(const TowerPoint& P) const {
  if (P.is_infinity()) return 0;
  const std::string k = key(P);
  if (auto it = heights_.find(k); it != heights_.end()) return it->second;
  if (P.level() > level_) throw std::invalid_argument("point above the module level: " + k);
  auto h = canonical_height(twist_data_[P.level()], P.rep(), P.level(), eps_);
  Rational v = h.torsion ? Rational(0) : h.value;
  heights_.emplace(k, v);
  return v;
}

std::vector<TowerPoint> EllipticModule::enumerate(const Rational& D) const {
  Rational scale = 1;
  for (std::uint32_t i = 0; i < level_; ++i) scale *= base_->prime();
  const Rational naive = 2 * D + Rational(twist_data_.back().constant()) / (3 * scale);
  std::vector<TowerPoint> out;
  for (auto& P : bounded_height_points(*base_, level_, naive, opts_))
    if (height(P) <= D) out.push_back(std::move(P));
  return out;
}

// ---------------------------------------------------------------------------

namespace {
// group-law additions are costly at higher levels: keep the lookup table small,
// rely on size reduction for large coordinates, and search relations n x with
// n up to max(p, 4), which covers p-divisibility along the tower
constexpr std::size_t kTableLimit = 500;
}  // namespace

PerfectClosureReport perfect_closure_generators(const WeierstrassCurve& E, std::uint32_t max_level,
                                                const Rational& search_bound, const ClosureOptions& opts) {
  if (search_bound <= 0) throw std::invalid_argument("search bound must be positive");
  const std::int64_t p = E.prime();
  PerfectClosureReport report;
  std::deque<EllipticModule> modules;
  std::vector<Span<EllipticModule>> spans;
  std::int64_t pn = 1;
  for (std::uint32_t n = 0; n <= max_level; ++n, pn *= p) {
    const EllipticModule& M = modules.emplace_back(E, n, opts.eps, opts.enumeration);
    auto points = bounded_height_points(E, n, search_bound, opts.enumeration);
    LevelReport level;
    level.level = n;
    level.points_found = points.size();
    for (const auto& P : opts.extra_points)
      if (P.level() <= n) points.push_back(P);
    std::stable_sort(points.begin(), points.end(), [&](const TowerPoint& a, const TowerPoint& b) {
      const Rational ha = M.height(a), hb = M.height(b);
      if (ha != hb) return ha < hb;
      return a.to_string() < b.to_string();
    });
    Span<EllipticModule> span(M, std::max<std::int64_t>(p, 4), kTableLimit);
    for (const auto& P : points) span.insert(P);
    span.reduce();

    auto& res = level.result;
    res.torsion = span.torsion();
    res.torsion_generators = torsion_generators(M, res.torsion);
    res.free_generators = span.basis();
    res.rank = span.rank();
    res.search_bound = search_bound;
    res.properties.floor = M.floor();
    // one enumerated point per class of G_n / p G_n that the ball reaches
    std::set<std::vector<std::int64_t>> classes;
    for (const auto& P : points) {
      auto c = span.coordinates(P);
      if (!c) continue;
      for (auto& v : *c) v = ((v % p) + p) % p;
      if (classes.insert(*c).second) res.reps.push_back(P);
    }

    std::vector<TowerPoint> gens = res.free_generators;
    gens.insert(gens.end(), res.torsion_generators.begin(), res.torsion_generators.end());
    if (n > 0) {
      const auto& prev = spans.back();
      res.stabilized = std::all_of(gens.begin(), gens.end(), [&](const TowerPoint& g) { return g.level() < n && prev.contains(g); });
      Span<EllipticModule> hull = spans.front();
      for (const auto& g : gens) {
        TowerPoint q = scalar_mul(pn, g);
        level.tower_containment = level.tower_containment && q.level() == 0;
        hull.insert(q);
      }
      level.rank_bound = hull.rank();
    } else {
      level.rank_bound = res.rank;
    }
    if (level.rank_bound < res.rank)
      throw std::logic_error("rank at level " + std::to_string(n) + " exceeds the rank of its image in E(K)");
    report.ranks.push_back(res.rank);
    if (res.stabilized && !report.stabilized_at) report.stabilized_at = n;
    spans.push_back(std::move(span));
    report.levels.push_back(std::move(level));
  }
  return report;
}

}  // namespace kperec

#pragma once

// Descent over modules with a height (the engine is generic), bounded-height
// point enumeration on E(K^{1/p^n}), and generators up to a level cap.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "kperec/heights.hpp"
#include "kperec/torsion.hpp"

namespace kperec {

class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The declared coset representatives miss an enumerated element.
class CoveringError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A module with a height h and a fixed scalar a acting on it.
template <class M>
concept HeightModule = requires(const M& m, const typename M::Element& x, const Rational& D) {
  { m.zero() } -> std::convertible_to<typename M::Element>;
  { m.add(x, x) } -> std::convertible_to<typename M::Element>;
  { m.negate(x) } -> std::convertible_to<typename M::Element>;
  { m.act(x) } -> std::convertible_to<typename M::Element>;  // a * x
  { m.height(x) } -> std::convertible_to<Rational>;
  { m.enumerate(D) } -> std::convertible_to<std::vector<typename M::Element>>;
  { m.torsion() } -> std::convertible_to<std::vector<typename M::Element>>;
  { m.floor() } -> std::convertible_to<Rational>;  // h(x) > floor off torsion
  { m.key(x) } -> std::convertible_to<std::string>;
};

template <HeightModule M>
typename M::Element multiple(const M& m, std::int64_t n, const typename M::Element& x) {
  typename M::Element acc = m.zero(), base = n < 0 ? m.negate(x) : x;
  for (std::uint64_t k = static_cast<std::uint64_t>(n < 0 ? -n : n); k; k >>= 1) {
    if (k & 1) acc = m.add(acc, base);
    base = m.add(base, base);
  }
  return acc;
}

/// Which of the height axioms held on a sample.
struct PropertyReport {
  /// h(x +- y) <= h(x) + h(y)
  bool triangle = true;
  /// h(x +- y) <= 2h(x) + 2h(y), enough for the descent to close
  bool quasi_triangle = true;
  bool torsion_vanishes = true;
  /// h(a x) >= 4 h(x)
  bool scaling = true;
  Rational floor;
  std::size_t checked = 0;
};

template <HeightModule M>
PropertyReport check_properties(const M& m, const std::vector<typename M::Element>& sample,
                                std::size_t max_pairs_from = 60) {
  PropertyReport r;
  r.floor = m.floor();
  for (const auto& t : m.torsion()) r.torsion_vanishes = r.torsion_vanishes && m.height(t) == 0;
  const std::size_t n = std::min(sample.size(), max_pairs_from);
  for (const auto& x : sample) r.scaling = r.scaling && m.height(m.act(x)) >= 4 * m.height(x);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const Rational hx = m.height(sample[i]), hy = m.height(sample[j]);
      for (const auto& s : {m.add(sample[i], sample[j]), m.add(sample[i], m.negate(sample[j]))}) {
        const Rational hs = m.height(s);
        r.triangle = r.triangle && hs <= hx + hy;
        r.quasi_triangle = r.quasi_triangle && hs <= 2 * hx + 2 * hy;
        ++r.checked;
      }
    }
  return r;
}

/// Rows of a unimodular U with U * A in row echelon form, zero rows last.
std::vector<std::vector<std::int64_t>> hermite_transform(std::vector<std::vector<std::int64_t>> A);

/// The subgroup spanned by inserted elements together with the module's torsion,
/// held as torsion plus a basis of the free part. Membership and relations are
/// searched with coordinates in [-box, box].
template <HeightModule M>
class Span {
 public:
  using Element = typename M::Element;

  explicit Span(const M& m, std::int64_t box = 12, std::size_t max_table = 200000)
      : m_(&m), box_(box), max_table_(max_table), torsion_(m.torsion()) {
    if (std::none_of(torsion_.begin(), torsion_.end(), [&](const Element& t) { return m.key(t) == m.key(m.zero()); }))
      torsion_.insert(torsion_.begin(), m.zero());
    for (const auto& t : torsion_) torsion_keys_.insert(m.key(t));
    rebuild();
  }

  const std::vector<Element>& basis() const { return basis_; }
  std::size_t rank() const { return basis_.size(); }
  const std::vector<Element>& torsion() const { return torsion_; }

  /// Coordinates of x modulo torsion, if x lies in the span within the box.
  std::optional<std::vector<std::int64_t>> coordinates(const Element& x) const {
    std::vector<std::int64_t> shift(basis_.size(), 0);
    const Element rest = size_reduced(x, &shift);
    auto it = table_.find(m_->key(rest));
    if (it == table_.end()) return std::nullopt;
    for (std::size_t i = 0; i < shift.size(); ++i) shift[i] += it->second[i];
    return shift;
  }
  bool contains(const Element& x) const { return coordinates(x).has_value(); }

  void insert(const Element& input) {
    const Element x = size_reduced(input);
    if (torsion_keys_.count(m_->key(x))) return;
    Element y = x;
    for (std::int64_t n = 1; n <= box_; ++n, y = m_->add(y, x)) {
      auto c = coordinates(y);
      if (!c) continue;
      if (n == 1) return;
      if (std::all_of(c->begin(), c->end(), [](std::int64_t v) { return v == 0; }))
        throw std::logic_error("element of finite order missing from the torsion list: " + m_->key(x));
      refine(x, n, *c);
      return;
    }
    basis_.push_back(x);
    rebuild();
  }

  /// Shortens the basis by pairwise reduction, fixes signs, and orders it by
  /// height and then by key.
  void reduce() {
    for (int pass = 0; pass < 64; ++pass) {
      bool changed = false;
      for (std::size_t i = 0; i < basis_.size(); ++i)
        for (std::size_t j = 0; j < basis_.size(); ++j) {
          if (i == j) continue;
          for (const auto& cand : {m_->add(basis_[i], basis_[j]), m_->add(basis_[i], m_->negate(basis_[j]))})
            if (m_->height(cand) < m_->height(basis_[i])) {
              basis_[i] = cand;
              changed = true;
            }
        }
      if (!changed) break;
    }
    for (auto& g : basis_) {
      Element neg = m_->negate(g);
      if (m_->key(neg) > m_->key(g)) g = neg;
    }
    std::sort(basis_.begin(), basis_.end(), [&](const Element& a, const Element& b) {
      const Rational ha = m_->height(a), hb = m_->height(b);
      if (ha != hb) return ha < hb;
      return m_->key(a) < m_->key(b);
    });
    rebuild();
  }

 private:
  // Adds or subtracts basis elements while the height drops; x = result + sum shift_i g_i.
  Element size_reduced(Element x, std::vector<std::int64_t>* shift = nullptr) const {
    Rational hx = m_->height(x);
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t i = 0; i < basis_.size(); ++i)
        for (const std::int64_t sign : {1, -1}) {
          Element cand = m_->add(x, sign > 0 ? m_->negate(basis_[i]) : basis_[i]);
          Rational hc = m_->height(cand);
          if (hc < hx) {
            x = std::move(cand);
            hx = std::move(hc);
            if (shift) (*shift)[i] += sign;
            changed = true;
          }
        }
    }
    return x;
  }

  std::int64_t effective_box() const {
    std::int64_t k = box_;
    const std::size_t r = basis_.size(), t = std::max<std::size_t>(1, torsion_.size());
    auto size = [&](std::int64_t kk) {
      double s = static_cast<double>(t);
      for (std::size_t i = 0; i < r; ++i) s *= static_cast<double>(2 * kk + 1);
      return s;
    };
    while (k > 1 && size(k) > static_cast<double>(max_table_)) --k;
    return k;
  }

  void rebuild() {
    table_.clear();
    const std::int64_t k = effective_box();
    std::vector<std::int64_t> coeffs(basis_.size(), 0);
    for (const auto& t : torsion_) fill(0, t, coeffs, k);
  }

  void fill(std::size_t i, const Element& acc, std::vector<std::int64_t>& coeffs, std::int64_t k) {
    if (i == basis_.size()) {
      table_.emplace(m_->key(acc), coeffs);
      return;
    }
    const Element& g = basis_[i];
    Element up = acc, down = acc;
    coeffs[i] = 0;
    fill(i + 1, acc, coeffs, k);
    for (std::int64_t c = 1; c <= k; ++c) {
      up = m_->add(up, g);
      down = m_->add(down, m_->negate(g));
      coeffs[i] = c;
      fill(i + 1, up, coeffs, k);
      coeffs[i] = -c;
      fill(i + 1, down, coeffs, k);
    }
    coeffs[i] = 0;
  }

  // n x = sum c_i g_i modulo torsion: replace the basis by one of span(g, x).
  void refine(const Element& x, std::int64_t n, const std::vector<std::int64_t>& c) {
    const std::size_t r = basis_.size();
    std::vector<std::vector<std::int64_t>> A(r + 1, std::vector<std::int64_t>(r, 0));
    for (std::size_t i = 0; i < r; ++i) A[i][i] = n;
    A[r] = c;
    auto U = hermite_transform(A);
    std::vector<Element> old = basis_;
    old.push_back(x);
    std::vector<Element> next;
    for (std::size_t j = 0; j < r; ++j) {
      Element e = m_->zero();
      for (std::size_t k = 0; k <= r; ++k)
        if (U[j][k] != 0) e = m_->add(e, multiple(*m_, U[j][k], old[k]));
      next.push_back(e);
    }
    basis_ = std::move(next);
    rebuild();
  }

  const M* m_;
  std::int64_t box_;
  std::size_t max_table_;
  std::vector<Element> torsion_;
  std::set<std::string> torsion_keys_;
  std::vector<Element> basis_;
  std::map<std::string, std::vector<std::int64_t>> table_;
};

/// A generating set of a finite group given as its element list.
template <HeightModule M>
std::vector<typename M::Element> torsion_generators(const M& m, const std::vector<typename M::Element>& torsion) {
  using Element = typename M::Element;
  auto order = [&](const Element& x) {
    std::int64_t k = 1;
    for (Element y = x; m.key(y) != m.key(m.zero()); y = m.add(y, x)) ++k;
    return k;
  };
  std::vector<std::pair<std::int64_t, Element>> by_order;
  for (const auto& t : torsion) by_order.emplace_back(order(t), t);
  std::stable_sort(by_order.begin(), by_order.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return m.key(a.second) < m.key(b.second);
  });
  std::vector<Element> gens;
  std::map<std::string, Element> closure{{m.key(m.zero()), m.zero()}};
  for (const auto& [ord, t] : by_order) {
    if (closure.count(m.key(t))) continue;
    gens.push_back(t);
    // closure under adding multiples of t
    std::vector<Element> current;
    for (const auto& kv : closure) current.push_back(kv.second);
    Element step = t;
    for (std::int64_t k = 1; k < ord; ++k, step = m.add(step, t))
      for (const auto& c : current) {
        Element s = m.add(c, step);
        closure.emplace(m.key(s), s);
      }
  }
  return gens;
}

template <class Element>
struct DescentResult {
  std::vector<Element> torsion;
  std::vector<Element> torsion_generators;
  std::vector<Element> free_generators;
  std::size_t rank = 0;
  /// B = max h over the coset representatives.
  Rational search_bound;
  std::vector<Element> reps;
  /// Every element of height <= 2B lies in the returned span.
  bool stabilized = false;
  PropertyReport properties;
};

struct DescentOptions {
  std::int64_t coefficient_box = 12;
};

/// Height descent: B = max h(reps), Z = {h <= B}, and the span of Z.
/// Throws CoveringError when an element of Z lies in no declared coset.
template <HeightModule M>
DescentResult<typename M::Element> descend(const M& m, const std::vector<typename M::Element>& reps,
                                           const DescentOptions& opts = {}) {
  using Element = typename M::Element;
  if (reps.empty()) throw std::invalid_argument("descend needs at least one coset representative");
  DescentResult<Element> out;
  out.reps = reps;
  out.search_bound = 0;
  for (const auto& y : reps) out.search_bound = std::max(out.search_bound, m.height(y));
  std::vector<Element> Z = m.enumerate(out.search_bound);
  out.properties = check_properties(m, Z);

  // every z in Z differs from some representative by a * w with h(w) <= B, so w is in Z
  std::set<std::string> aZ;
  for (const auto& w : Z) aZ.insert(m.key(m.act(w)));
  for (const auto& z : Z) {
    bool covered = std::any_of(reps.begin(), reps.end(),
                               [&](const Element& y) { return aZ.count(m.key(m.add(z, m.negate(y)))) > 0; });
    if (!covered) throw CoveringError("no coset representative covers " + m.key(z));
  }

  std::sort(Z.begin(), Z.end(), [&](const Element& a, const Element& b) {
    const Rational ha = m.height(a), hb = m.height(b);
    if (ha != hb) return ha < hb;
    return m.key(a) < m.key(b);
  });
  Span<M> span(m, opts.coefficient_box);
  for (const auto& z : Z) span.insert(z);
  span.reduce();

  out.torsion = span.torsion();
  out.torsion_generators = torsion_generators(m, out.torsion);
  out.free_generators = span.basis();
  out.rank = span.rank();
  for (const auto& g : out.free_generators)
    if (m.height(g) <= out.properties.floor)
      throw std::logic_error("free generator at or below the height floor: " + m.key(g));
  const auto reach = m.enumerate(2 * out.search_bound);
  out.stabilized = std::all_of(reach.begin(), reach.end(), [&](const Element& x) { return span.contains(x); });
  return out;
}

// ---------------------------------------------------------------------------
// the elliptic instantiation

struct EnumerationOptions {
  /// Cap on the number of x-candidates examined.
  std::uint64_t budget = 5000000;
};

/// Every P in E(K^{1/p^level}) with naive_height(P) <= D, Infinity included,
/// ordered by naive height and then by serialization.
std::vector<TowerPoint> bounded_height_points(const WeierstrassCurve& E, std::uint32_t level, const Rational& D,
                                              const EnumerationOptions& opts = {});

/// E(K^{1/p^level}) with the canonical height and a = p.
class EllipticModule {
 public:
  using Element = TowerPoint;

  EllipticModule(const WeierstrassCurve& E, std::uint32_t level, const Rational& eps = Rational(1, 1000000),
                 const EnumerationOptions& opts = {});

  TowerPoint zero() const { return TowerPoint::infinity(*base_); }
  TowerPoint add(const TowerPoint& a, const TowerPoint& b) const { return kperec::add(a, b); }
  TowerPoint negate(const TowerPoint& a) const { return kperec::negate(a); }
  TowerPoint act(const TowerPoint& a) const { return scalar_mul(base_->prime(), a); }
  /// The canonical height approximation (zero on torsion), computed once per point.
  Rational height(const TowerPoint& P) const;
  /// Points with canonical height at most D, found through h <= 2D + C_E / 3.
  std::vector<TowerPoint> enumerate(const Rational& D) const;
  std::vector<TowerPoint> torsion() const { return torsion_; }
  Rational floor() const { return floor_; }
  std::string key(const TowerPoint& P) const { return P.to_string(); }

  std::uint32_t level() const { return level_; }

 private:
  std::shared_ptr<const WeierstrassCurve> base_;
  std::uint32_t level_;
  Rational eps_;
  EnumerationOptions opts_;
  /// Duplication data of the twists at levels 0..level.
  std::vector<DuplicationData> twist_data_;
  std::vector<TowerPoint> torsion_;
  Rational floor_;
  mutable std::map<std::string, Rational> heights_;
};

struct LevelReport {
  std::uint32_t level = 0;
  DescentResult<TowerPoint> result;
  std::size_t points_found = 0;
  /// p^level times each generator lands at level 0.
  bool tower_containment = true;
  /// Rank of the level-0 group spanned by G_0 and p^level G_level.
  std::size_t rank_bound = 0;
};

struct PerfectClosureReport {
  std::vector<LevelReport> levels;
  std::vector<std::size_t> ranks;
  /// First level n >= 1 with G_n = G_{n-1}.
  std::optional<std::uint32_t> stabilized_at;
};

struct ClosureOptions {
  EnumerationOptions enumeration;
  Rational eps = Rational(1, 1000000);
  /// Extra points folded into G_n once n reaches their level.
  std::vector<TowerPoint> extra_points;
};

PerfectClosureReport perfect_closure_generators(const WeierstrassCurve& E, std::uint32_t max_level,
                                                const Rational& search_bound, const ClosureOptions& opts = {});

}  // namespace kperec

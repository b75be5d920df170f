#pragma once

#include <compare>
#include <cstddef>
#include <vector>

namespace fellkit {

/// An arrow (x, y) of a pair groupoid: range x, domain y. Points are 0-indexed
/// in code and 1-indexed in every serialized form.
struct Arrow {
  int x = 0;
  int y = 0;

  int range() const noexcept { return x; }
  int domain() const noexcept { return y; }
  Arrow inverse() const noexcept { return {y, x}; }
  bool isUnit() const noexcept { return x == y; }

  friend auto operator<=>(const Arrow&, const Arrow&) = default;
};

bool composable(const Arrow& g, const Arrow& h) noexcept;

/// (x, y) . (y, z) = (x, z). Throws CompositionError when d(g) != r(h).
Arrow compose(const Arrow& g, const Arrow& h);

/// The pair groupoid X x X over n points.
class PairGroupoid {
 public:
  explicit PairGroupoid(int points);

  int points() const noexcept { return n_; }
  std::size_t arrowCount() const noexcept { return static_cast<std::size_t>(n_) * n_; }
  std::vector<Arrow> arrows() const;
  std::vector<Arrow> units() const;
  Arrow unit(int x) const { return {x, x}; }

  /// Flat index of an arrow: x * n + y.
  std::size_t index(const Arrow& g) const noexcept { return static_cast<std::size_t>(g.x) * n_ + g.y; }

 private:
  int n_;
};

/// A global bisection of X x X, i.e. a permutation g of X. As a set of arrows
/// it is the graph {(x, g(x))}. The group law is the groupoid set product, so
/// (s * t)(x) = t(s(x)): the graph of s * t is {(x, s(x)) . (s(x), t(s(x)))}.
class Bisection {
 public:
  /// 0-indexed one-line form; throws InvalidDescriptorError if not a bijection.
  explicit Bisection(std::vector<int> perm);

  static Bisection identity(int n);
  /// The n-cycle x -> x + 1 (mod n).
  static Bisection shift(int n);
  /// From a 1-indexed one-line form such as {2, 3, 4, 1}.
  static Bisection fromOneIndexed(const std::vector<int>& oneLine);

  int size() const noexcept { return static_cast<int>(perm_.size()); }
  int operator()(int x) const { return perm_.at(x); }
  const std::vector<int>& perm() const noexcept { return perm_; }
  std::vector<int> oneIndexed() const;

  Bisection inverse() const;
  Bisection power(int k) const;
  std::vector<Arrow> graph() const;

  bool isIdentity() const noexcept;
  /// Self-adjoint as a set of arrows: g = g*, i.e. an involution.
  bool isSelfAdjoint() const noexcept;
  /// Order of g in the bisection group (lcm of cycle lengths).
  int order() const;
  std::vector<std::vector<int>> cycles() const;

  friend Bisection operator*(const Bisection& s, const Bisection& t);
  friend bool operator==(const Bisection&, const Bisection&) = default;

 private:
  std::vector<int> perm_;
};

inline constexpr int kBisectionEnumerationCap = 8;

/// All involutive bisections of the pair groupoid, in lexicographic order of
/// their one-line form. Throws EnumerationCapError above `cap` points.
std::vector<Bisection> selfAdjointBisections(const PairGroupoid& g, int cap = kBisectionEnumerationCap);

/// The discrete one-parameter group generated by g: [g, g^2, ..., g^k = id].
struct CyclicFlow {
  Bisection generator;
  std::vector<Bisection> elements;

  int order() const noexcept { return static_cast<int>(elements.size()); }
};

CyclicFlow cyclicFlow(const Bisection& g);

/// Minimal (equivalently, transitive) flow: g is a single n-cycle.
bool isMinimalFlow(const Bisection& g);

/// Arrows (i, g^m(i)) for 1 <= m <= order(g); all of X x X iff g is minimal.
std::vector<Arrow> flowOrbitArrows(const Bisection& g);

}  // namespace fellkit

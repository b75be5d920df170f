#include "fellkit/groupoid.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "fellkit/error.hpp"

namespace fellkit {

bool composable(const Arrow& g, const Arrow& h) noexcept { return g.domain() == h.range(); }

Arrow compose(const Arrow& g, const Arrow& h) {
  if (!composable(g, h))
    throw CompositionError("arrows (" + std::to_string(g.x + 1) + "," + std::to_string(g.y + 1) + ") and (" +
                           std::to_string(h.x + 1) + "," + std::to_string(h.y + 1) + ") are not composable");
  return {g.x, h.y};
}

PairGroupoid::PairGroupoid(int points) : n_(points) {
  if (points <= 0) throw InvalidDescriptorError("pair groupoid needs at least one point");
}

std::vector<Arrow> PairGroupoid::arrows() const {
  std::vector<Arrow> out;
  out.reserve(arrowCount());
  for (int x = 0; x < n_; ++x)
    for (int y = 0; y < n_; ++y) out.push_back({x, y});
  return out;
}

std::vector<Arrow> PairGroupoid::units() const {
  std::vector<Arrow> out;
  for (int x = 0; x < n_; ++x) out.push_back({x, x});
  return out;
}

Bisection::Bisection(std::vector<int> perm) : perm_(std::move(perm)) {
  std::vector<bool> seen(perm_.size(), false);
  for (int v : perm_) {
    if (v < 0 || v >= static_cast<int>(perm_.size()) || seen[v])
      throw InvalidDescriptorError("bisection must be a permutation of the points");
    seen[v] = true;
  }
}

Bisection Bisection::identity(int n) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  return Bisection(std::move(p));
}

Bisection Bisection::shift(int n) {
  std::vector<int> p(n);
  for (int x = 0; x < n; ++x) p[x] = (x + 1) % n;
  return Bisection(std::move(p));
}

Bisection Bisection::fromOneIndexed(const std::vector<int>& oneLine) {
  std::vector<int> p;
  p.reserve(oneLine.size());
  for (int v : oneLine) p.push_back(v - 1);
  return Bisection(std::move(p));
}

std::vector<int> Bisection::oneIndexed() const {
  std::vector<int> out;
  out.reserve(perm_.size());
  for (int v : perm_) out.push_back(v + 1);
  return out;
}

Bisection Bisection::inverse() const {
  std::vector<int> inv(perm_.size());
  for (std::size_t x = 0; x < perm_.size(); ++x) inv[perm_[x]] = static_cast<int>(x);
  return Bisection(std::move(inv));
}

Bisection Bisection::power(int k) const {
  if (k < 0) return inverse().power(-k);
  Bisection out = identity(size());
  for (int i = 0; i < k; ++i) out = out * *this;
  return out;
}

std::vector<Arrow> Bisection::graph() const {
  std::vector<Arrow> out;
  for (int x = 0; x < size(); ++x) out.push_back({x, perm_[x]});
  return out;
}

bool Bisection::isIdentity() const noexcept {
  for (int x = 0; x < size(); ++x)
    if (perm_[x] != x) return false;
  return true;
}

bool Bisection::isSelfAdjoint() const noexcept {
  for (int x = 0; x < size(); ++x)
    if (perm_[perm_[x]] != x) return false;
  return true;
}

std::vector<std::vector<int>> Bisection::cycles() const {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(perm_.size(), false);
  for (int start = 0; start < size(); ++start) {
    if (seen[start]) continue;
    std::vector<int> cycle;
    for (int x = start; !seen[x]; x = perm_[x]) {
      seen[x] = true;
      cycle.push_back(x);
    }
    out.push_back(std::move(cycle));
  }
  return out;
}

int Bisection::order() const {
  int ord = 1;
  for (const auto& c : cycles()) ord = std::lcm(ord, static_cast<int>(c.size()));
  return ord;
}

Bisection operator*(const Bisection& s, const Bisection& t) {
  if (s.size() != t.size()) throw CompositionError("bisections live on different point sets");
  std::vector<int> p(s.perm_.size());
  for (int x = 0; x < s.size(); ++x) p[x] = t.perm_[s.perm_[x]];
  return Bisection(std::move(p));
}

std::vector<Bisection> selfAdjointBisections(const PairGroupoid& g, int cap) {
  const int n = g.points();
  if (n > cap)
    throw EnumerationCapError("refusing to enumerate bisections on " + std::to_string(n) +
                              " points (cap " + std::to_string(cap) + "); use Bisection::isSelfAdjoint");
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<Bisection> out;
  do {
    Bisection b(p);
    if (b.isSelfAdjoint()) out.push_back(std::move(b));
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

CyclicFlow cyclicFlow(const Bisection& g) {
  CyclicFlow flow{g, {}};
  Bisection current = g;
  flow.elements.push_back(current);
  while (!current.isIdentity()) {
    current = current * g;
    flow.elements.push_back(current);
  }
  return flow;
}

bool isMinimalFlow(const Bisection& g) { return g.cycles().size() == 1; }

std::vector<Arrow> flowOrbitArrows(const Bisection& g) {
  std::set<Arrow> seen;
  for (const Bisection& element : cyclicFlow(g).elements)
    for (const Arrow& a : element.graph()) seen.insert(a);
  return {seen.begin(), seen.end()};
}

}  // namespace fellkit

#include "fellkit/fellbundle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fellkit/error.hpp"

namespace fellkit {

bool CStarBundle::locallyTrivial() const noexcept {
  return std::adjacent_find(fibreDims.begin(), fibreDims.end(), std::not_equal_to<>()) == fibreDims.end();
}

FibreElement operator+(const FibreElement& a, const FibreElement& b) {
  if (a.arrow != b.arrow) throw CompositionError("cannot add elements of different fibres");
  return {a.arrow, a.value + b.value};
}

FibreElement operator*(Complex s, const FibreElement& e) { return {e.arrow, s * e.value}; }

// ---------------------------------------------------------------------------
// FellBundleModel

FellBundleModel::FellBundleModel(std::vector<int> dims)
    : base_(static_cast<int>(dims.size())), dims_(std::move(dims)), zeroFibre_(dims_.size() * dims_.size(), false) {
  for (int d : dims_)
    if (d <= 0) throw InvalidDescriptorError("fibre dimensions must be positive");
}

int FellBundleModel::totalDim() const noexcept { return std::accumulate(dims_.begin(), dims_.end(), 0); }

int FellBundleModel::offset(int x) const {
  if (x < 0 || x >= points()) throw ShapeError("point outside the base space");
  return std::accumulate(dims_.begin(), dims_.begin() + x, 0);
}

int FellBundleModel::fibreDimension(const Arrow& g) const {
  if (zeroFibre_.at(base_.index(g))) return 0;
  return dims_.at(g.x) * dims_.at(g.y);
}

Complex FellBundleModel::twistValue(const Arrow& g, const Arrow& h) const {
  if (!twist_) return 1.0;
  return twist_->scalar({g.x, g.y, h.y});
}

FibreElement FellBundleModel::element(const Arrow& g, const Matrix& coefficient) const {
  if (frame_) {
    if (coefficient.rows() != dims_.at(g.x) || coefficient.cols() != dims_.at(g.x))
      throw ShapeError("semidirect coefficient must lie in the range fibre algebra");
    return {g, coefficient * (*frame_)[g]};
  }
  if (coefficient.rows() != dims_.at(g.x) || coefficient.cols() != dims_.at(g.y))
    throw ShapeError("fibre element has the wrong shape for its arrow");
  return {g, coefficient};
}

Matrix FellBundleModel::coefficient(const FibreElement& e) const {
  if (frame_) return e.value * (*frame_)[e.arrow].adjoint();
  return e.value;
}

FibreElement FellBundleModel::multiply(const FibreElement& a, const FibreElement& b) const {
  const Arrow gh = compose(a.arrow, b.arrow);
  return {gh, twistValue(a.arrow, b.arrow) * (a.value * b.value)};
}

FibreElement FellBundleModel::involution(const FibreElement& e) const {
  const Arrow gs = e.arrow.inverse();
  if (!frame_) return {gs, e.value.adjoint()};
  // (g, a)* = (g*, u_{g*} a* u_{g*}^*), image = coefficient * u_{g*}.
  const Matrix& ugs = (*frame_)[gs];
  const Matrix a = coefficient(e);
  const Matrix c = ugs * a.adjoint() * ugs.adjoint();
  return {gs, c * ugs};
}

double FellBundleModel::norm(const FibreElement& e) const { return operatorNorm(e.value); }

std::vector<FibreElement> FellBundleModel::fibreBasis(const Arrow& g) const {
  std::vector<FibreElement> out;
  if (zeroFibre_.at(base_.index(g))) return out;
  const int rows = dims_.at(g.x);
  const int cols = frame_ ? dims_.at(g.x) : dims_.at(g.y);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) out.push_back(element(g, matrixUnit(rows, cols, i, j)));
  return out;
}

FibreElement FellBundleModel::zero(const Arrow& g) const {
  return {g, Matrix::Zero(dims_.at(g.x), dims_.at(g.y))};
}

FibreElement FellBundleModel::randomElement(const Arrow& g, SplitMix64& rng) const {
  if (zeroFibre_.at(base_.index(g))) return zero(g);
  const int rows = dims_.at(g.x);
  const int cols = frame_ ? dims_.at(g.x) : dims_.at(g.y);
  Matrix c = randomMatrix(rows, cols, rng);
  const double nrm = operatorNorm(c);
  if (nrm > 0.0) c /= nrm;
  return element(g, c);
}

Matrix FellBundleModel::embed(const FibreElement& e) const {
  const int n = totalDim();
  Matrix out = Matrix::Zero(n, n);
  out.block(offset(e.arrow.x), offset(e.arrow.y), dims_.at(e.arrow.x), dims_.at(e.arrow.y)) = e.value;
  return out;
}

FellBundleModel FellBundleModel::withFrameEntryUnchecked(const Arrow& g, const Matrix& u) const {
  if (!frame_) throw FrameError("bundle has no frame to modify");
  FellBundleModel copy = *this;
  (*copy.frame_)[g] = u;
  return copy;
}

FellBundleModel FellBundleModel::withZeroFibre(const Arrow& g) const {
  FellBundleModel copy = *this;
  copy.zeroFibre_.at(base_.index(g)) = true;
  return copy;
}

// ---------------------------------------------------------------------------
// Construction

FellBundleModel buildImprimitivityBundle(const std::vector<int>& dims) {
  if (dims.empty()) throw InvalidDescriptorError("bundle needs at least one point");
  return FellBundleModel(dims);
}

UnitaryAssignment identityFrame(const CStarBundle& e0) {
  if (!e0.locallyTrivial()) throw LocalTrivialityError("identity frame needs constant fibre dimension");
  std::vector<Matrix> blocks;
  for (int x = 0; x < e0.points(); ++x)
    for (int y = 0; y < e0.points(); ++y) blocks.push_back(Matrix::Identity(e0.fibreDims[x], e0.fibreDims[y]));
  return UnitaryAssignment(e0.fibreDims, std::move(blocks));
}

FellBundleModel buildSemidirectBundle(const CStarBundle& e0, const UnitaryAssignment& frame,
                                      const std::optional<Cocycle2>& twist, Tolerance tol) {
  if (e0.fibreDims.empty()) throw InvalidDescriptorError("bundle needs at least one point");
  if (!e0.locallyTrivial())
    throw LocalTrivialityError("semidirect bundles need all fibres of the same dimension");
  if (frame.fibreDims() != e0.fibreDims) throw FrameError("frame does not match the C*-bundle");

  const int n = e0.points();
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const Matrix& u = frame[{x, y}];
      if (!isUnitary(u, tol))
        throw FrameError("frame entry (" + std::to_string(x + 1) + "," + std::to_string(y + 1) + ") is not unitary");
      if (x == y && operatorNorm(u - Matrix::Identity(u.rows(), u.cols())) > tol.eps())
        throw FrameError("frame must be the identity on units");
      if (operatorNorm(frame[{y, x}] - u.adjoint()) > tol.eps())
        throw FrameError("frame must satisfy u_(y,x) = u_(x,y)^*");
    }
  }

  FellBundleModel model(e0.fibreDims);
  model.frame_ = frame;
  if (twist) {
    if (twist->points != n) throw FrameError("twist is defined on a different groupoid");
    if (!twist->isScalar(tol))
      throw FrameError("bundle twists must be scalar; non-central values break associativity");
    for (const auto& [p, v] : twist->values)
      if (std::abs(std::abs(v(0, 0)) - 1.0) > tol.eps()) throw FrameError("twist values must have unit modulus");
    if (!isInvolutionCompatible(*twist, tol))
      throw FrameError("twist must satisfy tau(h*, g*) = conj(tau(g, h))");
    Cocycle2 stored;
    stored.points = n;
    for (const auto& [p, v] : twist->values) stored.values.emplace(p, Matrix::Constant(1, 1, v(0, 0)));
    model.twist_ = std::move(stored);
  }
  return model;
}

// ---------------------------------------------------------------------------
// Axioms

bool AxiomReport::allPass() const noexcept {
  return std::all_of(axioms.begin(), axioms.end(), [](const AxiomResult& a) { return a.pass; });
}

namespace {

constexpr std::array<const char*, 10> kAxiomNames = {
    "base compatibility p(e1 e2) = p(e1) p(e2)",
    "bilinearity of E_g x E_h -> E_gh",
    "associativity",
    "submultiplicative norm",
    "p(e*) = p(e)*",
    "conjugate linear involution",
    "e** = e",
    "(e1 e2)* = e2* e1*",
    "C*-identity |e* e| = |e|^2",
    "e* e >= 0",
};

class AxiomAccumulator {
 public:
  explicit AxiomAccumulator(Tolerance tol) : tol_(tol) {
    for (int i = 0; i < 10; ++i) {
      report_.axioms[i].number = i + 1;
      report_.axioms[i].name = kAxiomNames[i];
    }
  }

  void record(int number, double residual) {
    AxiomResult& a = report_.axioms[number - 1];
    if (!std::isfinite(residual)) residual = std::numeric_limits<double>::max();
    a.maxResidual = std::max(a.maxResidual, residual);
    a.evaluations++;
  }

  AxiomReport finish() {
    for (auto& a : report_.axioms) a.pass = a.maxResidual <= tol_.eps();
    return report_;
  }

 private:
  Tolerance tol_;
  AxiomReport report_;
};

double positivityResidual(const Matrix& m) {
  const double herm = operatorNorm(m - m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return std::max(herm, std::max(0.0, -es.eigenvalues().minCoeff()));
}

double arrowMismatch(const FibreElement& e, const Arrow& expected, const FellBundleModel& model) {
  const bool ok = e.arrow == expected && e.value.rows() == model.fibreDim(expected.x) &&
                  e.value.cols() == model.fibreDim(expected.y);
  return ok ? 0.0 : std::numeric_limits<double>::infinity();
}

std::vector<FibreElement> samplesFor(const FellBundleModel& e, const Arrow& g, int count, SplitMix64& rng,
                                     bool basis) {
  std::vector<FibreElement> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(e.randomElement(g, rng));
  if (basis) {
    auto b = e.fibreBasis(g);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

}  // namespace

AxiomReport checkFellAxioms(const FellBundleModel& e, int sampleCount, Tolerance tol, SplitMix64& rng,
                            bool basisExhaustive) {
  if (sampleCount < 1) throw InvalidDescriptorError("sampleCount must be at least 1");
  AxiomAccumulator acc(tol);
  const int n = e.points();

  // Single-fibre axioms 5, 6, 7, 9, 10.
  for (const Arrow& g : e.base().arrows()) {
    const auto samples = samplesFor(e, g, sampleCount, rng, basisExhaustive);
    for (const FibreElement& x : samples) {
      const FibreElement other = e.randomElement(g, rng);
      const Complex lambda = rng.complexNormal();
      const Complex mu = rng.complexNormal();
      const FibreElement xs = e.involution(x);

      acc.record(5, arrowMismatch(xs, g.inverse(), e));

      const FibreElement lhs = e.involution(lambda * x + mu * other);
      const FibreElement rhs = std::conj(lambda) * xs + std::conj(mu) * e.involution(other);
      acc.record(6, operatorNorm(lhs.value - rhs.value));

      acc.record(7, operatorNorm(e.involution(xs).value - x.value));

      const FibreElement xsx = e.multiply(xs, x);
      const double nx = e.norm(x);
      acc.record(9, std::abs(e.norm(xsx) - nx * nx));
      acc.record(10, positivityResidual(xsx.value));
    }
  }

  // Pair axioms 1, 2, 4, 8.
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const Arrow g{x, y};
        const Arrow h{y, z};
        const auto lefts = samplesFor(e, g, sampleCount, rng, basisExhaustive);
        for (std::size_t s = 0; s < lefts.size(); ++s) {
          const FibreElement& a = lefts[s];
          const FibreElement a2 = e.randomElement(g, rng);
          const FibreElement b = e.randomElement(h, rng);
          const FibreElement b2 = e.randomElement(h, rng);
          const Complex lambda = rng.complexNormal();
          const Complex mu = rng.complexNormal();

          const FibreElement ab = e.multiply(a, b);
          acc.record(1, arrowMismatch(ab, compose(g, h), e));

          const FibreElement leftLin = e.multiply(lambda * a + mu * a2, b);
          const FibreElement leftRef = lambda * ab + mu * e.multiply(a2, b);
          const FibreElement rightLin = e.multiply(a, lambda * b + mu * b2);
          const FibreElement rightRef = lambda * ab + mu * e.multiply(a, b2);
          acc.record(2, std::max(operatorNorm(leftLin.value - leftRef.value),
                                 operatorNorm(rightLin.value - rightRef.value)));

          acc.record(4, std::max(0.0, e.norm(ab) - e.norm(a) * e.norm(b)));

          const FibreElement lhs = e.involution(ab);
          const FibreElement rhs = e.multiply(e.involution(b), e.involution(a));
          acc.record(8, operatorNorm(lhs.value - rhs.value));
        }
      }

  // Associativity on composable triples.
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        for (int w = 0; w < n; ++w) {
          for (int s = 0; s < sampleCount; ++s) {
            const FibreElement a = e.randomElement({x, y}, rng);
            const FibreElement b = e.randomElement({y, z}, rng);
            const FibreElement c = e.randomElement({z, w}, rng);
            const FibreElement lhs = e.multiply(e.multiply(a, b), c);
            const FibreElement rhs = e.multiply(a, e.multiply(b, c));
            acc.record(3, operatorNorm(lhs.value - rhs.value));
          }
        }

  return acc.finish();
}

// ---------------------------------------------------------------------------
// Saturation, algebras, expectation

bool isSaturated(const FellBundleModel& e, Tolerance tol) {
  const int n = e.points();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) {
        const Arrow g{x, y};
        const Arrow h{y, z};
        std::vector<Matrix> products;
        for (const FibreElement& a : e.fibreBasis(g))
          for (const FibreElement& b : e.fibreBasis(h)) products.push_back(e.multiply(a, b).value);
        const int target = e.fibreDimension(compose(g, h));
        const std::size_t got = spanDimension(products, tol);
        if (static_cast<int>(got) != target) return false;
        // A zeroed target fibre cannot contain nonzero products.
        if (target == 0 && !products.empty()) {
          for (const Matrix& p : products)
            if (p.norm() > tol.eps()) return false;
        }
      }
  return true;
}

FiniteCStarAlgebra envelopingAlgebra(const FellBundleModel& e) { return fullMatrixAlgebra(e.totalDim()); }

FiniteCStarAlgebra diagonalAlgebra(const FellBundleModel& e) { return makeAlgebra(e.fibreDims()); }

std::vector<Matrix> normalizerProducts(const FellBundleModel& e) {
  const FiniteCStarAlgebra a = diagonalAlgebra(e);
  const std::vector<Matrix> basisA = a.basis();
  std::vector<Matrix> normalizers;
  for (const Arrow& g : e.base().arrows()) {
    if (e.frame()) {
      normalizers.push_back(e.frame()->embedded(g));
    } else {
      for (const FibreElement& f : e.fibreBasis(g)) normalizers.push_back(e.embed(f));
    }
  }
  std::vector<Matrix> out;
  out.reserve(basisA.size() * basisA.size() * normalizers.size());
  for (const Matrix& u : normalizers)
    for (const Matrix& left : basisA) {
      const Matrix lu = left * u;
      if (lu.isZero(0.0)) continue;
      for (const Matrix& right : basisA) {
        Matrix p = lu * right;
        if (!p.isZero(0.0)) out.push_back(std::move(p));
      }
    }
  return out;
}

ConditionalExpectation::ConditionalExpectation(FiniteCStarAlgebra domain, FiniteCStarAlgebra range)
    : domain_(std::move(domain)), range_(std::move(range)) {
  if (domain_.ambientDim() != range_.ambientDim())
    throw ShapeError("expectation range must act on the same space as its domain");
}

double ConditionalExpectation::faithfulnessConstant() const noexcept {
  const auto& mults = range_.multiplicities();
  const int maxMult = mults.empty() ? 1 : *std::max_element(mults.begin(), mults.end());
  return 1.0 / (static_cast<double>(range_.blockCount()) * maxMult * maxMult);
}

ConditionalExpectation restrictionExpectation(const FellBundleModel& e) {
  return ConditionalExpectation(envelopingAlgebra(e), diagonalAlgebra(e));
}

bool ExpectationReport::allPass() const noexcept {
  return fixesRange.pass && bimodule.pass && positive.pass && faithful.pass && idempotent.pass &&
         contractive.pass && landsInRange.pass;
}

Matrix randomElementOf(const FiniteCStarAlgebra& a, SplitMix64& rng) {
  Matrix out = Matrix::Zero(a.ambientDim(), a.ambientDim());
  for (int i = 0; i < a.blockCount(); ++i) {
    const int n = a.blockDims()[i];
    out += a.embed(i, randomMatrix(n, n, rng));
  }
  return out;
}

namespace {

void note(PropertyCheck& c, double residual) { c.maxResidual = std::max(c.maxResidual, residual); }

}  // namespace

ExpectationReport verifyExpectation(const ConditionalExpectation& p, int samples, Tolerance tol, SplitMix64& rng) {
  ExpectationReport r;
  const FiniteCStarAlgebra& a = p.range();
  const int dim = p.domain().ambientDim();
  const double c = p.faithfulnessConstant();
  double faithfulMargin = std::numeric_limits<double>::infinity();

  for (int s = 0; s < samples; ++s) {
    const Matrix alg = randomElementOf(a, rng);
    const Matrix a1 = randomElementOf(a, rng);
    const Matrix a2 = randomElementOf(a, rng);
    const Matrix b = randomMatrix(dim, dim, rng);
    const Matrix pb = p(b);

    note(r.fixesRange, operatorNorm(p(alg) - alg));
    note(r.bimodule, operatorNorm(p(a1 * b * a2) - a1 * pb * a2));
    note(r.idempotent, operatorNorm(p(pb) - pb));
    note(r.contractive, std::max(0.0, operatorNorm(pb) - operatorNorm(b)));
    note(r.landsInRange, containmentResidual(pb, a));

    const Matrix bsb = b.adjoint() * b;
    const Matrix pbsb = p(bsb);
    note(r.positive, isPositiveSemidefinite(pbsb, tol) ? 0.0 : 1.0);
    const double nb = operatorNorm(b);
    // |P(b*b)| >= c |b|^2; the margin is how far above the bound we are.
    const double lhs = operatorNorm(pbsb);
    faithfulMargin = std::min(faithfulMargin, lhs - c * nb * nb);
    note(r.faithful, std::max(0.0, c * nb * nb - lhs));
  }

  for (PropertyCheck* check : {&r.fixesRange, &r.bimodule, &r.positive, &r.faithful, &r.idempotent,
                               &r.contractive, &r.landsInRange})
    check->pass = check->maxResidual <= tol.eps();
  r.faithful.pass = r.faithful.pass && faithfulMargin > -tol.eps();
  return r;
}

std::vector<Matrix> kernelBasis(const ConditionalExpectation& p, Tolerance tol) {
  const FiniteCStarAlgebra& a = p.range();
  const int dim = a.ambientDim();
  std::vector<Matrix> out;
  if (a.multiplicityFree()) {
    std::vector<int> blockOf(dim);
    for (int i = 0; i < a.blockCount(); ++i)
      for (int k = 0; k < a.blockSize(i); ++k) blockOf[a.blockOffsets()[i] + k] = i;
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c)
        if (blockOf[r] != blockOf[c]) out.push_back(matrixUnit(dim, dim, r, c));
    return out;
  }
  // General case: (1 - P) applied to all matrix units, reduced to a basis.
  std::vector<Matrix> images;
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) {
      const Matrix e = matrixUnit(dim, dim, r, c);
      images.push_back(e - p(e));
    }
  return spanBasis(images, tol);
}

}  // namespace fellkit

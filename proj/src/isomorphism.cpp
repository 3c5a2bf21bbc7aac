#include "gqr/isomorphism.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <limits>
#include <random>
#include <thread>

#include "gqr/errors.hpp"

namespace gqr {

namespace {

using Pure = std::array<Int, 3>;

void require_enumerable(Int n, const SearchLimits& limits) {
  const auto un = static_cast<std::uint64_t>(n);
  if (un > (std::uint64_t{1} << 21) || un * un * un > limits.enumeration_cap)
    throw CapExceeded("instance too large: n^3 = " + std::to_string(n) + "^3 pure quaternions",
                      limits.enumeration_cap);
}

std::vector<Pure> pure_roots(const QuaternionRing& ring, Int t) {
  const Int n = ring.n();
  std::vector<Pure> out;
  for (Int x1 = 0; x1 < n; ++x1)
    for (Int x2 = 0; x2 < n; ++x2)
      for (Int x3 = 0; x3 < n; ++x3)
        if (ring.pure_square(x1, x2, x3) == t) out.push_back({x1, x2, x3});
  return out;
}

Vec4 embed(const Pure& v) { return Vec4(0, v[0], v[1], v[2]); }

// Polar form of the pure square: IJ + JI = 2 * polar(I, J).
Int polar(const RingParams& r, Int ab, const Pure& x, const Pure& y) {
  const Int n = r.n();
  Int acc = mul_mod(r.a(), mul_mod(x[0], y[0], n), n);
  acc = add_mod(acc, mul_mod(r.b(), mul_mod(x[1], y[1], n), n), n);
  return sub_mod(acc, mul_mod(ab, mul_mod(x[2], y[2], n), n), n);
}

Mat4 columns(const Vec4& c0, const Vec4& c1, const Vec4& c2, const Vec4& c3) {
  Mat4 m;
  m << c0, c1, c2, c3;
  return m;
}

WitnessCheck fail(WitnessDefect d, std::string detail) { return {d, std::move(detail)}; }

}  // namespace

std::vector<Quat> pure_sqrt_set(const RingParams& params, Int t, const SearchLimits& limits) {
  require_enumerable(params.n(), limits);
  const QuaternionRing ring(params);
  std::vector<Quat> out;
  for (const Pure& v : pure_roots(ring, reduce(t, params.n()))) out.emplace_back(ring, embed(v));
  return out;
}

IsoWitness witness_from_images(const RingParams& source, const RingParams& target,
                               const Vec4& img_i, const Vec4& img_j) {
  const QuaternionRing tr(target);
  const Quat I(tr, img_i), J(tr, img_j);
  const Quat K = I * J;
  return IsoWitness{source, target, I, J,
                    columns(Quat::scalar(tr, 1).coords(), I.coords(), J.coords(), K.coords())};
}

IsoWitness witness_from_matrix(const RingParams& source, const RingParams& target,
                               const Mat4& matrix) {
  if (source.n() != target.n()) throw RingMismatch("witness between different moduli");
  const QuaternionRing tr(target);
  const Mat4 m = reduce_mod(matrix, target.n());
  return IsoWitness{source, target, Quat(tr, m.col(1)), Quat(tr, m.col(2)), m};
}

std::optional<IsoWitness> find_isomorphism(const RingParams& source, const RingParams& target,
                                           const SearchLimits& limits) {
  if (source.n() != target.n())
    throw RingMismatch("isomorphism search needs a common modulus: " + to_string(source) +
                       " vs " + to_string(target));
  const Int n = source.n();
  if (n < 3 || n % 2 == 0)
    throw UnsupportedModulus("unsupported modulus: isomorphism search requires odd n >= 3");
  require_enumerable(n, limits);

  const QuaternionRing ring(target);
  const std::vector<Pure> cand_i = pure_roots(ring, source.a());
  if (cand_i.empty()) return std::nullopt;
  const std::vector<Pure> cand_j =
      source.b() == source.a() ? cand_i : pure_roots(ring, source.b());
  if (cand_j.empty()) return std::nullopt;
  const Int ab = mul_mod(target.a(), target.b(), n);

  // First J completing I to an invertible coordinate matrix, if any.
  auto complete = [&](const Pure& I) -> std::optional<Pure> {
    for (const Pure& J : cand_j) {
      if (polar(target, ab, I, J) != 0) continue;
      const Vec4 K = ring.multiply(embed(I), embed(J));
      Eigen::Matrix<Int, 3, 3> block;
      block << I[0], J[0], K(1), I[1], J[1], K(2), I[2], J[2], K(3);
      if (inv_mod(det_mod(block, n), n)) return J;
    }
    return std::nullopt;
  };

  const std::size_t total = cand_i.size();
  const unsigned workers = std::max(1U, std::min<unsigned>(limits.workers, total));
  std::atomic<std::size_t> best{total};
  std::vector<std::optional<std::pair<std::size_t, Pure>>> found(workers);

  // Workers take interleaved blocks of I candidates; `best` lets everyone stop
  // once a smaller index has succeeded, and the reducer keeps the least index.
  constexpr std::size_t block = 16;
  auto scan = [&](unsigned w) {
    for (std::size_t start = w * block; start < total; start += workers * block) {
      for (std::size_t idx = start; idx < std::min(start + block, total); ++idx) {
        if (idx >= best.load(std::memory_order_relaxed)) return;
        if (auto J = complete(cand_i[idx])) {
          found[w] = std::make_pair(idx, *J);
          std::size_t cur = best.load();
          while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
          }
          return;
        }
      }
    }
  };
  if (workers == 1) {
    scan(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(scan, w);
    for (auto& t : pool) t.join();
  }

  std::optional<std::pair<std::size_t, Pure>> winner;
  for (const auto& f : found)
    if (f && (!winner || f->first < winner->first)) winner = f;
  if (!winner) return std::nullopt;
  return witness_from_images(source, target, embed(cand_i[winner->first]), embed(winner->second));
}

std::string to_string(WitnessDefect d) {
  switch (d) {
    case WitnessDefect::None: return "ok";
    case WitnessDefect::ModulusMismatch: return "modulus-mismatch";
    case WitnessDefect::FirstColumn: return "first-column";
    case WitnessDefect::ImageColumns: return "image-columns";
    case WitnessDefect::SquareOfI: return "square-of-i";
    case WitnessDefect::SquareOfJ: return "square-of-j";
    case WitnessDefect::Anticommutation: return "anticommutation";
    case WitnessDefect::ProductColumn: return "product-column";
    case WitnessDefect::Singular: return "singular";
    case WitnessDefect::NotMultiplicative: return "not-multiplicative";
    case WitnessDefect::ConjugationNotPreserved: return "conjugation-not-preserved";
    case WitnessDefect::TraceNotPreserved: return "trace-not-preserved";
    case WitnessDefect::NormNotPreserved: return "norm-not-preserved";
  }
  return "unknown";
}

Quat apply(const IsoWitness& w, const Quat& q) {
  if (!(q.ring().params() == w.source))
    throw RingMismatch("element of " + to_string(q.ring().params()) + " applied to a map from " +
                       to_string(w.source));
  return Quat(w.img_i.ring(), mul_mod(w.matrix, q.coords(), w.target.n()));
}

WitnessCheck verify_witness(const IsoWitness& w) {
  const Int n = w.target.n();
  if (w.source.n() != n || !(w.img_i.ring().params() == w.target) ||
      !(w.img_j.ring().params() == w.target))
    return fail(WitnessDefect::ModulusMismatch, "source, target and images disagree");

  const QuaternionRing src(w.source), tgt(w.target);
  const Mat4 m = w.matrix;
  if (m.col(0) != Vec4(1 % n, 0, 0, 0))
    return fail(WitnessDefect::FirstColumn, "1 must map to 1");
  if (m.col(1) != w.img_i.coords() || m.col(2) != w.img_j.coords())
    return fail(WitnessDefect::ImageColumns, "columns 1, 2 differ from the images of i, j");
  const Quat& I = w.img_i;
  const Quat& J = w.img_j;
  if (!(I * I == Quat::scalar(tgt, w.source.a())))
    return fail(WitnessDefect::SquareOfI, "image of i squares to " + to_string(I * I));
  if (!(J * J == Quat::scalar(tgt, w.source.b())))
    return fail(WitnessDefect::SquareOfJ, "image of j squares to " + to_string(J * J));
  if (!(I * J == -(J * I)))
    return fail(WitnessDefect::Anticommutation, "images of i and j do not anticommute");
  if (m.col(3) != (I * J).coords())
    return fail(WitnessDefect::ProductColumn, "column 3 is not the product of the images");
  if (!inv_mod(det_mod(m, n), n))
    return fail(WitnessDefect::Singular, "determinant " + std::to_string(det_mod(m, n)) +
                                             " is not a unit mod " + std::to_string(n));

  for (int l = 0; l < 4; ++l) {
    const Quat el = Quat::basis(src, l);
    for (int r = 0; r < 4; ++r) {
      const Quat er = Quat::basis(src, r);
      if (!(apply(w, el * er) == apply(w, el) * apply(w, er)))
        return fail(WitnessDefect::NotMultiplicative,
                    "f(e" + std::to_string(l) + " e" + std::to_string(r) + ") differs");
    }
    const Quat image = apply(w, el);
    if (!(apply(w, conj(el)) == conj(image)))
      return fail(WitnessDefect::ConjugationNotPreserved, "on e" + std::to_string(l));
    if (!(trace(image) == trace(el)))
      return fail(WitnessDefect::TraceNotPreserved, "on e" + std::to_string(l));
    if (!(norm(image) == norm(el)))
      return fail(WitnessDefect::NormNotPreserved, "on e" + std::to_string(l));
  }
  return {};
}

IsoWitness compose(const IsoWitness& outer, const IsoWitness& inner) {
  if (!(inner.target == outer.source))
    throw RingMismatch("cannot compose: " + to_string(inner.target) + " vs " +
                       to_string(outer.source));
  return witness_from_matrix(inner.source, outer.target,
                             mul_mod(outer.matrix, inner.matrix, outer.target.n()));
}

IsoWitness inverse(const IsoWitness& w) {
  auto inv = inverse_mod<4>(w.matrix, w.target.n());
  if (!inv) throw PreconditionError("witness matrix is singular mod " + std::to_string(w.target.n()));
  return witness_from_matrix(w.target, w.source, *inv);
}

IsoWitness descend(const IsoWitness& w, Int m) {
  if (m < 2 || w.target.n() % m != 0)
    throw PreconditionError("descent modulus must divide n");
  const auto src = RingParams::arithmetic(m, w.source.a(), w.source.b());
  const auto tgt = RingParams::arithmetic(m, w.target.a(), w.target.b());
  return witness_from_matrix(src, tgt, reduce_mod(w.matrix, m));
}

WitnessCheck check_preservation(const IsoWitness& w, std::uint64_t samples, std::uint64_t seed,
                                std::uint64_t exhaustive_limit) {
  const QuaternionRing src(w.source);
  const Int n = w.source.n();
  auto check = [&](const Quat& q) -> WitnessCheck {
    const Quat image = apply(w, q);
    if (!(apply(w, conj(q)) == conj(image)))
      return fail(WitnessDefect::ConjugationNotPreserved, "on " + to_string(q));
    if (!(trace(image) == trace(q))) return fail(WitnessDefect::TraceNotPreserved, "on " + to_string(q));
    if (!(norm(image) == norm(q))) return fail(WitnessDefect::NormNotPreserved, "on " + to_string(q));
    return {};
  };
  const auto un = static_cast<std::uint64_t>(n);
  if (un <= 256 && un * un * un * un <= exhaustive_limit) {
    for (Int x0 = 0; x0 < n; ++x0)
      for (Int x1 = 0; x1 < n; ++x1)
        for (Int x2 = 0; x2 < n; ++x2)
          for (Int x3 = 0; x3 < n; ++x3)
            if (auto r = check(Quat(src, x0, x1, x2, x3)); !r) return r;
    return {};
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Int> coord(0, n - 1);
  for (std::uint64_t s = 0; s < samples; ++s)
    if (auto r = check(Quat(src, coord(rng), coord(rng), coord(rng), coord(rng))); !r) return r;
  return {};
}

// ---------------------------------------------------------------------------
// Closed-form witnesses

namespace {

void require_unit(Int x, const PrimePower& pp, const char* what) {
  if (reduce(x, pp.p()) == 0)
    throw PreconditionError(std::string(what) + " must be coprime to " + std::to_string(pp.p()));
}

void require_exponent(int e, const PrimePower& pp, const char* what) {
  if (e < 0 || e > pp.k())
    throw PreconditionError(std::string(what) + " must lie in [0, " + std::to_string(pp.k()) + "]");
}

template <typename T>
T must(std::optional<T> value) {
  if (!value) throw InternalContradiction("closed-form witness: required representation does not exist");
  return *value;
}

Int scaled(Int unit, int e, const PrimePower& pp) {
  return mul_mod(reduce(unit, pp.q()), pp.power(e) % pp.q(), pp.q());
}

IsoWitness build(const SwapFamily& f) {
  const auto src = RingParams::arithmetic(f.n, f.a, f.b);
  const auto tgt = RingParams::arithmetic(f.n, f.b, f.a);
  const Mat4 m = columns(Vec4(1, 0, 0, 0), Vec4(0, 0, 1, 0), Vec4(0, 1, 0, 0), Vec4(0, 0, 0, -1));
  return witness_from_matrix(src, tgt, m);
}

IsoWitness build(const NegatedProductFamily& f) {
  require_unit(f.a, f.pp, "a");
  require_exponent(f.s, f.pp, "s");
  const Int q = f.pp.q();
  const Int a = reduce(f.a, q);
  const Int c = scaled(f.b, f.s, f.pp);
  const auto left = RingParams::arithmetic(q, a, c);
  const auto right = RingParams::arithmetic(q, a, sub_mod(0, mul_mod(a, c, q), q));
  // Closed form runs right -> left: I -> i, J -> k, K -> a j.
  const Mat4 m = columns(Vec4(1, 0, 0, 0), Vec4(0, 1, 0, 0), Vec4(0, 0, 0, 1), Vec4(0, 0, a, 0));
  return inverse(witness_from_matrix(right, left, m));
}

IsoWitness build(const SquareClassFamily& f) {
  require_unit(f.t, f.pp, "t");
  require_unit(f.s, f.pp, "s");
  require_exponent(f.r, f.pp, "r");
  const Int q = f.pp.q();
  const Residue s{reduce(f.s, q), q}, t{reduce(f.t, q), q};
  if (qr_char(s * t, f.pp.p()) != QuadraticCharacter::QR)
    throw PreconditionError("s*t must be a quadratic residue mod " + std::to_string(f.pp.p()));
  const Int x = sqrt_mod_pk(t * s.inverse(), f.pp)->value;
  const auto src = RingParams::arithmetic(q, scaled(f.t, f.r, f.pp), f.m);
  const auto tgt = RingParams::arithmetic(q, scaled(f.s, f.r, f.pp), f.m);
  Mat4 m = Mat4::Identity();
  m(1, 1) = x;
  m(3, 3) = x;
  return witness_from_matrix(src, tgt, m);
}

IsoWitness build(const ScaledDiagonalFamily& f) {
  require_unit(f.s, f.pp, "s");
  require_exponent(f.r, f.pp, "r");
  const Int q = f.pp.q();
  const Residue s{reduce(f.s, q), q};
  const Residue s_inv = s.inverse();
  // Units x, y do not always exist (p = 3, 5); x^2 + y^2 = s^-1 alone keeps the
  // block [[x, -y], [y, x]] invertible.
  auto unit_pair = two_squares_unit(s, f.pp);
  const ResiduePair xy = unit_pair ? *unit_pair : must(represent_by_form(s_inv, Residue{1 % q, q}, f.pp));
  const Int x = xy.x.value, y = xy.y.value;
  const Int pr = f.pp.power(f.r) % q;
  const auto src = RingParams::arithmetic(q, pr, pr);
  const auto tgt = RingParams::arithmetic(q, scaled(f.s, f.r, f.pp), scaled(f.s, f.r, f.pp));
  const Mat4 m =
      columns(Vec4(1, 0, 0, 0), Vec4(0, x, y, 0), Vec4(0, -y, x, 0), Vec4(0, 0, 0, s_inv.value));
  return witness_from_matrix(src, tgt, m);
}

IsoWitness build(const UnitAbsorptionFamily& f) {
  require_unit(f.a, f.pp, "a");
  require_exponent(f.s, f.pp, "s");
  const Int q = f.pp.q();
  const Residue a_inv = Residue{reduce(f.a, q), q}.inverse();
  const auto left = RingParams::arithmetic(q, 1, scaled(f.a, f.s, f.pp));
  const auto right = RingParams::arithmetic(q, 1, f.pp.power(f.s) % q);
  // Closed form runs right -> left: J -> x j + y k, K -> y j + x k.
  Mat4 m;
  if (const auto xy = hyperbola_unit(a_inv, f.pp)) {
    const Int x = xy->x.value, y = xy->y.value;
    m = columns(Vec4(1, 0, 0, 0), Vec4(0, 1, 0, 0), Vec4(0, 0, x, y), Vec4(0, 0, y, x));
  } else {
    // p = 3 and a = 1 mod 3: a is a square, so J -> x j with x^2 = a^-1
    const Int x = must(sqrt_mod_pk(a_inv, f.pp)).value;
    m = columns(Vec4(1, 0, 0, 0), Vec4(0, 1, 0, 0), Vec4(0, 0, x, 0), Vec4(0, 0, 0, x));
  }
  return inverse(witness_from_matrix(right, left, m));
}

IsoWitness build(const NonresidueAbsorptionFamily& f) {
  require_unit(f.u, f.pp, "u");
  require_unit(f.b, f.pp, "b");
  require_exponent(f.s, f.pp, "s");
  if (qr_char(f.u, f.pp.p()) != QuadraticCharacter::QNR)
    throw PreconditionError("u must be a quadratic nonresidue mod " + std::to_string(f.pp.p()));
  const Int q = f.pp.q();
  const Int u = reduce(f.u, q);
  const Residue b_inv = Residue{reduce(f.b, q), q}.inverse();
  // J -> x j + y k needs b p^s (x^2 - u y^2) = p^s.
  const ResiduePair xy = must(represent_by_form(b_inv, Residue{q - u, q}, f.pp));
  const Int x = xy.x.value, y = xy.y.value;
  const auto src = RingParams::arithmetic(q, u, f.pp.power(f.s) % q);
  const auto tgt = RingParams::arithmetic(q, u, scaled(f.b, f.s, f.pp));
  const Mat4 m = columns(Vec4(1, 0, 0, 0), Vec4(0, 1, 0, 0), Vec4(0, 0, x, y),
                         Vec4(0, 0, mul_mod(u, y, q), x));
  return witness_from_matrix(src, tgt, m);
}

}  // namespace

std::string family_name(const LemmaFamily& family) {
  struct Namer {
    std::string operator()(const SwapFamily&) const { return "swap"; }
    std::string operator()(const NegatedProductFamily&) const { return "negated-product"; }
    std::string operator()(const SquareClassFamily&) const { return "square-class"; }
    std::string operator()(const ScaledDiagonalFamily&) const { return "scaled-diagonal"; }
    std::string operator()(const UnitAbsorptionFamily&) const { return "unit-absorption"; }
    std::string operator()(const NonresidueAbsorptionFamily&) const {
      return "nonresidue-absorption";
    }
  };
  return std::visit(Namer{}, family);
}

IsoWitness constructive_witness(const LemmaFamily& family) {
  return std::visit([](const auto& f) { return build(f); }, family);
}

// ---------------------------------------------------------------------------
// 2x2 matrix embedding

namespace {

Mat2 trace_zero(Int x, Int y, Int z, Int n) {
  Mat2 m;
  m << x, y, z, sub_mod(0, x, n);
  return m;
}

bool spans_m2(const Mat2& I, const Mat2& J, Int n) {
  const Mat2 K = mul_mod(I, J, n);
  Mat4 basis;
  basis << 1, I(0, 0), J(0, 0), K(0, 0),
           0, I(0, 1), J(0, 1), K(0, 1),
           0, I(1, 0), J(1, 0), K(1, 0),
           1, I(1, 1), J(1, 1), K(1, 1);
  return inv_mod(det_mod(basis, n), n).has_value();
}

}  // namespace

M2Witness m2_witness(Int n, Int a, Int b, const SearchLimits& limits) {
  if (n < 3 || n % 2 == 0) throw PreconditionError("m2_witness requires odd n >= 3");
  if (n > limits.m2_cap)
    throw CapExceeded("instance too large: m2 search over n = " + std::to_string(n),
                      static_cast<std::uint64_t>(limits.m2_cap));
  a = reduce(a, n);
  b = reduce(b, n);
  if (!inv_mod(a, n) || !inv_mod(b, n))
    throw PreconditionError("m2_witness requires a and b to be units mod n");

  // For trace-zero X = [[x, y], [z, -x]]: X^2 = (x^2 + yz) Id, and
  // XY + YX = (2 x x' + y z' + z y') Id.
  auto square = [n](Int x, Int y, Int z) { return add_mod(mul_mod(x, x, n), mul_mod(y, z, n), n); };
  for (Int x = 0; x < n; ++x)
    for (Int y = 0; y < n; ++y)
      for (Int z = 0; z < n; ++z) {
        if (square(x, y, z) != a) continue;
        const Mat2 I = trace_zero(x, y, z, n);
        for (Int x2 = 0; x2 < n; ++x2)
          for (Int y2 = 0; y2 < n; ++y2)
            for (Int z2 = 0; z2 < n; ++z2) {
              if (square(x2, y2, z2) != b) continue;
              const Int anti = add_mod(mul_mod(2 * x % n, x2, n),
                                       add_mod(mul_mod(y, z2, n), mul_mod(z, y2, n), n), n);
              if (anti != 0) continue;
              const Mat2 J = trace_zero(x2, y2, z2, n);
              if (spans_m2(I, J, n)) return M2Witness{n, a, b, I, J};
            }
      }
  throw InternalContradiction("no 2x2 matrix embedding found for (" + std::to_string(a) + "," +
                              std::to_string(b) + " / Z" + std::to_string(n) + ")");
}

bool verify_m2(const M2Witness& w) {
  const Int n = w.n;
  const Mat2 id = Mat2::Identity();
  const Mat2 I = reduce_mod(w.I, n), J = reduce_mod(w.J, n);
  if (mul_mod(I, I, n) != reduce_mod((w.a * id).eval(), n)) return false;
  if (mul_mod(J, J, n) != reduce_mod((w.b * id).eval(), n)) return false;
  if (mul_mod(I, J, n) != reduce_mod((-mul_mod(J, I, n)).eval(), n)) return false;
  return spans_m2(I, J, n);
}

// ---------------------------------------------------------------------------

bool block_shape_check(const IsoWitness& w, const SearchLimits& limits) {
  if (w.source.a() != w.target.a())
    throw PreconditionError("block shape check needs equal first parameters, got " +
                            to_string(w.source) + " -> " + to_string(w.target));
  const Int n = w.target.n();
  if (n % 2 == 0) throw PreconditionError("block shape check needs odd n");
  require_enumerable(n, limits);

  const QuaternionRing tgt(w.target);
  const Pure I{w.img_i[1], w.img_i[2], w.img_i[3]};
  const Int ab = mul_mod(w.target.a(), w.target.b(), n);
  for (const Pure& J : pure_roots(tgt, w.target.b())) {
    if (polar(w.target, ab, I, J) != 0) continue;
    const Vec4 K = tgt.multiply(embed(I), embed(J));
    const Mat4 basis = columns(Vec4(1, 0, 0, 0), embed(I), embed(J), K);
    const auto basis_inv = inverse_mod<4>(basis, n);
    if (!basis_inv) continue;
    const Mat4 rel = mul_mod(*basis_inv, w.matrix, n);
    Mat4 head = Mat4::Zero();
    head(0, 0) = 1;
    head(1, 1) = 1;
    const bool shape = rel.col(0) == head.col(0) && rel.col(1) == head.col(1) &&
                       rel(0, 2) == 0 && rel(0, 3) == 0;
    const Int a = w.target.a();
    return shape && mul_mod(rel(1, 2), a, n) == 0 && mul_mod(rel(1, 3), a, n) == 0;
  }
  return false;
}

}  // namespace gqr

#include "gqr/modular.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include "gqr/errors.hpp"

namespace gqr {

Int pow_mod(Int base, std::uint64_t exp, Int m) {
  Int result = 1 % m;
  base = reduce(base, m);
  while (exp > 0) {
    if (exp & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1U;
  }
  return result;
}

std::optional<Int> inv_mod(Int x, Int m) {
  Int old_r = reduce(x, m), r = m;
  Int old_s = 1, s = 0;
  while (r != 0) {
    const Int quo = old_r / r;
    old_r = std::exchange(r, old_r - quo * r);
    old_s = std::exchange(s, old_s - quo * s);
  }
  if (old_r != 1) return std::nullopt;
  return reduce(old_s, m);
}

namespace {

bool miller_rabin_witness(std::uint64_t n, std::uint64_t a, std::uint64_t d, int r) {
  const auto m = static_cast<Int>(n);
  Int x = pow_mod(static_cast<Int>(a % n), d, m);
  if (x == 1 || x == m - 1) return false;
  for (int i = 1; i < r; ++i) {
    x = mul_mod(x, x, m);
    if (x == m - 1) return false;
  }
  return true;
}

Int pollard_brent(Int n, std::mt19937_64& rng) {
  if (n % 2 == 0) return 2;
  std::uniform_int_distribution<Int> dist(1, n - 1);
  while (true) {
    Int y = dist(rng), c = dist(rng), g = 1, r = 1, q = 1, x = 0, ys = 0;
    const Int block = 128;
    auto f = [&](Int v) { return add_mod(mul_mod(v, v, n), c, n); };
    do {
      x = y;
      for (Int i = 0; i < r; ++i) y = f(y);
      Int k = 0;
      do {
        ys = y;
        for (Int i = 0; i < std::min(block, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += block;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void collect_prime_factors(Int n, std::vector<Int>& out, std::mt19937_64& rng) {
  if (n == 1) return;
  if (is_prime(static_cast<std::uint64_t>(n))) {
    out.push_back(n);
    return;
  }
  const Int d = pollard_brent(n, rng);
  collect_prime_factors(d, out, rng);
  collect_prime_factors(n / d, out, rng);
}

Int tonelli_shanks(Int t, Int p) {
  if (p % 4 == 3) return pow_mod(t, static_cast<std::uint64_t>((p + 1) / 4), p);
  Int q = p - 1;
  int s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  Int z = 2;
  while (pow_mod(z, static_cast<std::uint64_t>((p - 1) / 2), p) != p - 1) ++z;
  Int c = pow_mod(z, static_cast<std::uint64_t>(q), p);
  Int x = pow_mod(t, static_cast<std::uint64_t>((q + 1) / 2), p);
  Int b = pow_mod(t, static_cast<std::uint64_t>(q), p);
  int m = s;
  while (b != 1) {
    int i = 0;
    Int b2 = b;
    while (b2 != 1) {
      b2 = mul_mod(b2, b2, p);
      ++i;
    }
    Int w = c;
    for (int j = 0; j < m - i - 1; ++j) w = mul_mod(w, w, p);
    x = mul_mod(x, w, p);
    c = mul_mod(w, w, p);
    b = mul_mod(b, c, p);
    m = i;
  }
  return x;
}

void require_modulus(const Residue& x, const PrimePower& pp) {
  if (x.modulus != pp.q())
    throw RingMismatch("residue modulus " + std::to_string(x.modulus) +
                       " does not match p^k = " + std::to_string(pp.q()));
}

void require_unit_mod_p(const Residue& x, const PrimePower& pp, const char* what) {
  if (x.value % pp.p() == 0)
    throw PreconditionError(std::string(what) + " must be coprime to p = " +
                            std::to_string(pp.p()));
}

// Least (x, y) with y a unit (and x a unit when asked) and x^2 + d*y^2 = c.
std::optional<ResiduePair> least_form_solution(Int c, Int d, const PrimePower& pp,
                                               bool x_unit) {
  const Int q = pp.q();
  const Int p = pp.p();
  const Int d_inv = *inv_mod(d, q);
  for (Int x = 0; x < q; ++x) {
    if (x_unit && x % p == 0) continue;
    const Int rhs = mul_mod(sub_mod(c, mul_mod(x, x, q), q), d_inv, q);
    if (rhs % p == 0) continue;
    if (auto y = sqrt_mod_pk(Residue{rhs, q}, pp))
      return ResiduePair{Residue{x, q}, *y};
  }
  return std::nullopt;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++r;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (miller_rabin_witness(n, a, d, r)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Residue

Residue Residue::of(Int x, Int m) {
  if (m < 1) throw UnsupportedModulus("modulus must be positive, got " + std::to_string(m));
  return Residue{reduce(x, m), m};
}

bool Residue::is_unit() const { return std::gcd(value, modulus) == 1; }

Residue Residue::inverse() const {
  auto inv = inv_mod(value, modulus);
  if (!inv)
    throw PreconditionError(std::to_string(value) + " is not a unit mod " +
                            std::to_string(modulus));
  return Residue{*inv, modulus};
}

namespace {
void require_same(const Residue& x, const Residue& y) {
  if (x.modulus != y.modulus)
    throw RingMismatch("residues mod " + std::to_string(x.modulus) + " and mod " +
                       std::to_string(y.modulus));
}
}  // namespace

Residue Residue::operator+(const Residue& o) const {
  require_same(*this, o);
  return Residue{add_mod(value, o.value, modulus), modulus};
}

Residue Residue::operator-(const Residue& o) const {
  require_same(*this, o);
  return Residue{sub_mod(value, o.value, modulus), modulus};
}

Residue Residue::operator*(const Residue& o) const {
  require_same(*this, o);
  return Residue{mul_mod(value, o.value, modulus), modulus};
}

Residue Residue::operator-() const { return Residue{sub_mod(0, value, modulus), modulus}; }

// ---------------------------------------------------------------------------
// PrimePower / Factorization

PrimePower::PrimePower(Int p, int k) : p_(p), k_(k), q_(1) {
  if (p < 3 || p % 2 == 0 || !is_prime(static_cast<std::uint64_t>(p)))
    throw UnsupportedModulus("unsupported modulus: " + std::to_string(p) +
                             " is not an odd prime");
  if (k < 1) throw UnsupportedModulus("unsupported modulus: exponent must be >= 1");
  for (int i = 0; i < k; ++i) {
    if (q_ > std::numeric_limits<Int>::max() / p)
      throw UnsupportedModulus("unsupported modulus: " + std::to_string(p) + "^" +
                               std::to_string(k) + " overflows 63 bits");
    q_ *= p;
  }
}

Int PrimePower::power(int e) const {
  if (e < 0 || e > k_) throw PreconditionError("exponent out of range [0, k]");
  Int r = 1;
  for (int i = 0; i < e; ++i) r *= p_;
  return r;
}

Factorization::Factorization(Int n, std::vector<PrimePower> factors)
    : n_(n), factors_(std::move(factors)) {
  Int prod = 1;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i > 0 && factors_[i - 1].p() >= factors_[i].p())
      throw PreconditionError("factorization primes must be strictly increasing");
    prod *= factors_[i].q();
  }
  if (prod != n_) throw PreconditionError("factors do not multiply to n");
}

int Factorization::nu(Int p) const noexcept {
  for (const auto& f : factors_)
    if (f.p() == p) return f.k();
  return 0;
}

Factorization factorize(Int n) {
  if (n < 3 || n % 2 == 0)
    throw UnsupportedModulus("unsupported modulus: n must be odd and >= 3, got " +
                             std::to_string(n));
  std::vector<Int> primes;
  Int rest = n;
  for (Int d = 3; d < 1000 && d * d <= rest; d += 2) {
    while (rest % d == 0) {
      primes.push_back(d);
      rest /= d;
    }
  }
  std::mt19937_64 rng(0x5eed);
  collect_prime_factors(rest, primes, rng);
  std::sort(primes.begin(), primes.end());

  std::vector<PrimePower> factors;
  for (std::size_t i = 0; i < primes.size();) {
    std::size_t j = i;
    while (j < primes.size() && primes[j] == primes[i]) ++j;
    factors.emplace_back(primes[i], static_cast<int>(j - i));
    i = j;
  }
  return Factorization(n, std::move(factors));
}

// ---------------------------------------------------------------------------
// Number-theoretic helpers

Valuation valuation(Residue x, const PrimePower& pp) {
  require_modulus(x, pp);
  if (x.value == 0) return Valuation{pp.k(), std::nullopt};
  int s = 0;
  Int v = x.value;
  while (v % pp.p() == 0) {
    v /= pp.p();
    ++s;
  }
  return Valuation{s, Residue{v, pp.q()}};
}

QuadraticCharacter qr_char(Int u, Int p) {
  const Int r = reduce(u, p);
  if (r == 0) throw PreconditionError("quadratic character of a multiple of p");
  return pow_mod(r, static_cast<std::uint64_t>((p - 1) / 2), p) == 1 ? QuadraticCharacter::QR
                                                                     : QuadraticCharacter::QNR;
}

Residue smallest_qnr(Int p) {
  for (Int u = 2;; ++u)
    if (qr_char(u, p) == QuadraticCharacter::QNR) return Residue{u, p};
}

std::optional<Residue> sqrt_mod_pk(Residue t, const PrimePower& pp) {
  require_modulus(t, pp);
  require_unit_mod_p(t, pp, "radicand");
  const Int p = pp.p(), q = pp.q();
  if (qr_char(t.value, p) == QuadraticCharacter::QNR) return std::nullopt;

  Int x = tonelli_shanks(t.value % p, p);
  // Each Newton step doubles the p-adic precision.
  for (int step = 0; mul_mod(x, x, q) != t.value; ++step) {
    if (step > 64) throw InternalContradiction("Hensel lifting did not converge");
    const Int err = sub_mod(mul_mod(x, x, q), t.value, q);
    const Int inv2x = *inv_mod(add_mod(x, x, q), q);
    x = sub_mod(x, mul_mod(err, inv2x, q), q);
  }
  return Residue{std::min(x, q - x), q};
}

std::optional<ResiduePair> two_squares_unit(Residue s, const PrimePower& pp) {
  require_modulus(s, pp);
  require_unit_mod_p(s, pp, "s");
  return least_form_solution(s.inverse().value, 1, pp, /*x_unit=*/true);
}

std::optional<ResiduePair> represent_by_form(Residue c, Residue d, const PrimePower& pp) {
  require_modulus(c, pp);
  require_modulus(d, pp);
  require_unit_mod_p(c, pp, "c");
  require_unit_mod_p(d, pp, "d");
  return least_form_solution(c.value, d.value, pp, /*x_unit=*/false);
}

std::optional<ResiduePair> hyperbola_unit(Residue c, const PrimePower& pp) {
  require_modulus(c, pp);
  return represent_by_form(c, Residue{pp.q() - 1, pp.q()}, pp);
}

std::vector<Residue> crt_split(Residue x, const Factorization& f) {
  if (x.modulus != f.n())
    throw RingMismatch("crt_split: residue modulus " + std::to_string(x.modulus) +
                       " differs from n = " + std::to_string(f.n()));
  std::vector<Residue> parts;
  parts.reserve(f.factors().size());
  for (const auto& pp : f.factors()) parts.push_back(Residue{x.value % pp.q(), pp.q()});
  return parts;
}

Residue crt_combine(std::span<const Residue> parts, const Factorization& f) {
  if (parts.size() != f.factors().size())
    throw RingMismatch("crt_combine: expected one residue per prime power");
  const Int n = f.n();
  Int acc = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const Int qi = f.factors()[i].q();
    if (parts[i].modulus != qi)
      throw RingMismatch("crt_combine: component " + std::to_string(i) + " has modulus " +
                         std::to_string(parts[i].modulus) + ", expected " + std::to_string(qi));
    const Int cofactor = n / qi;
    const Int coeff = mul_mod(parts[i].value, *inv_mod(cofactor % qi, qi), qi);
    acc = add_mod(acc, mul_mod(coeff, cofactor, n), n);
  }
  return Residue{acc, n};
}

}  // namespace gqr

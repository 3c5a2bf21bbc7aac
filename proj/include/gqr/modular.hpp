#pragma once

// Exact arithmetic in Z/mZ for moduli below 2^63, plus the number-theoretic
// helpers the isomorphism constructions rely on.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace gqr {

using Int = std::int64_t;

/// Canonical representative of x in [0, m).
constexpr Int reduce(Int x, Int m) noexcept {
  const Int r = x % m;
  return r < 0 ? r + m : r;
}

/// (x * y) mod m through a 128-bit intermediate; x and y must be in [0, m).
constexpr Int mul_mod(Int x, Int y, Int m) noexcept {
  return static_cast<Int>((static_cast<__int128>(x) * y) % m);
}

constexpr Int add_mod(Int x, Int y, Int m) noexcept {
  const auto s = static_cast<std::uint64_t>(x) + static_cast<std::uint64_t>(y);
  return static_cast<Int>(s >= static_cast<std::uint64_t>(m) ? s - static_cast<std::uint64_t>(m) : s);
}

constexpr Int sub_mod(Int x, Int y, Int m) noexcept {
  return x >= y ? x - y : x - y + m;
}

Int pow_mod(Int base, std::uint64_t exp, Int m);

/// Inverse of x modulo m, or nullopt when gcd(x, m) != 1.
std::optional<Int> inv_mod(Int x, Int m);

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// An element of Z/mZ stored by its canonical representative.
struct Residue {
  Int value = 0;
  Int modulus = 1;

  static Residue of(Int x, Int m);

  bool is_unit() const;
  /// Throws PreconditionError when the value is not a unit.
  Residue inverse() const;

  Residue operator+(const Residue& o) const;
  Residue operator-(const Residue& o) const;
  Residue operator*(const Residue& o) const;
  Residue operator-() const;

  friend bool operator==(const Residue&, const Residue&) = default;
  friend auto operator<=>(const Residue&, const Residue&) = default;
};

/// p^k for an odd prime p and k >= 1.
class PrimePower {
 public:
  /// Throws UnsupportedModulus for even or composite p, k < 1, or overflow.
  PrimePower(Int p, int k);

  Int p() const noexcept { return p_; }
  int k() const noexcept { return k_; }
  Int q() const noexcept { return q_; }
  /// p^e for 0 <= e <= k.
  Int power(int e) const;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;

 private:
  Int p_;
  int k_;
  Int q_;
};

/// Prime factorization of an odd modulus n >= 3, primes strictly increasing.
class Factorization {
 public:
  Factorization(Int n, std::vector<PrimePower> factors);

  Int n() const noexcept { return n_; }
  const std::vector<PrimePower>& factors() const& noexcept { return factors_; }
  // by value on temporaries, so `for (auto& pp : factorize(n).factors())` is safe
  std::vector<PrimePower> factors() && { return std::move(factors_); }
  int omega() const noexcept { return static_cast<int>(factors_.size()); }
  /// Exponent of p in n, 0 when p does not divide n.
  int nu(Int p) const noexcept;

 private:
  Int n_;
  std::vector<PrimePower> factors_;
};

/// Throws UnsupportedModulus for even n or n < 3.
Factorization factorize(Int n);

struct Valuation {
  int s = 0;                    ///< largest e <= k with p^e | x; k for x = 0
  std::optional<Residue> unit;  ///< x / p^s (mod p^k); empty for x = 0
};

/// x = unit * p^s (mod p^k) with unit coprime to p.
Valuation valuation(Residue x, const PrimePower& pp);

enum class QuadraticCharacter { QR, QNR };

/// Euler criterion; throws PreconditionError when p | u.
QuadraticCharacter qr_char(Int u, Int p);
inline QuadraticCharacter qr_char(const Residue& u, Int p) { return qr_char(u.value, p); }

/// Least u >= 2 that is a quadratic nonresidue mod p.
Residue smallest_qnr(Int p);

/// Smaller square root of the unit t modulo p^k, or nullopt if t is a
/// nonresidue. Tonelli-Shanks mod p followed by Newton lifting.
/// Throws PreconditionError when p | t.
std::optional<Residue> sqrt_mod_pk(Residue t, const PrimePower& pp);

struct ResiduePair {
  Residue x;
  Residue y;
  friend bool operator==(const ResiduePair&, const ResiduePair&) = default;
};

/// Lexicographically least (x, y), both units, with x^2 + y^2 = s^-1 (mod p^k).
/// Empty when no such pair exists: for p = 3 only s = 2 (mod 3) admits one,
/// and for p = 5 the target s^-1 must be 2 or 3 (mod 5).
std::optional<ResiduePair> two_squares_unit(Residue s, const PrimePower& pp);

/// Lexicographically least (x, y) with y a unit and x^2 + d*y^2 = c (mod p^k).
/// c and d must be units. Empty only for p = 3 with -d a square and c = -d
/// (mod 3), where every solution has 3 | y.
std::optional<ResiduePair> represent_by_form(Residue c, Residue d, const PrimePower& pp);

/// Lexicographically least (x, y) with y a unit and x^2 - y^2 = c (mod p^k).
/// Empty exactly when p = 3 and c = 1 (mod 3).
std::optional<ResiduePair> hyperbola_unit(Residue c, const PrimePower& pp);

/// Component residues x mod p_i^k_i, in factor order.
std::vector<Residue> crt_split(Residue x, const Factorization& f);
/// Inverse of crt_split; throws RingMismatch if moduli differ from f.
Residue crt_combine(std::span<const Residue> parts, const Factorization& f);

}  // namespace gqr

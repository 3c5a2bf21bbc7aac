#pragma once

// Isomorphism classes of (a, b / Z/nZ) for odd n.
//
// Over Z/p^kZ write a = ua p^s, b = ub p^r with s <= r (valuations capped at
// k, zero having valuation k). The class is determined by (s, r) and the
// quadratic characters that survive:
//
//   s = r = 0          one class
//   s = 0 < r          character of ua
//   0 < s = r < k      character of ua*ub
//   0 < s < r < k      characters of ua and ub
//   0 < s < r = k      character of ua
//   s = r = k          one class
//
// giving 2k^2 + 2 classes. Over Z/nZ the ring splits along the CRT
// decomposition, so the count is multiplicative.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gqr/isomorphism.hpp"
#include "gqr/modular.hpp"
#include "gqr/quaternion.hpp"

namespace gqr {

enum class ClassTag { Unit, CharA, CharProduct, CharPair, Zero };

struct CanonicalClass {
  PrimePower pp;
  int s = 0;
  int r = 0;
  ClassTag tag = ClassTag::Unit;
  /// Character of the first parameter (CharA, CharPair) or of the product
  /// of unit parts (CharProduct).
  std::optional<QuadraticCharacter> chi;
  /// Character of the second parameter (CharPair only).
  std::optional<QuadraticCharacter> chi_b;
  Int rep_a = 0;
  Int rep_b = 0;

  friend bool operator==(const CanonicalClass& l, const CanonicalClass& r) {
    return l.pp == r.pp && l.s == r.s && l.r == r.r && l.tag == r.tag && l.chi == r.chi &&
           l.chi_b == r.chi_b && l.rep_a == r.rep_a && l.rep_b == r.rep_b;
  }
};

/// Token such as "3^2:s0r1:QR", "5:UNIT", "3:ZERO" or "3^3:s1r2:QR,QNR".
std::string to_token(const CanonicalClass& c);
/// Tokens of all components joined by '|'.
std::string to_token(const std::vector<CanonicalClass>& classes);

CanonicalClass canonical_form(Residue a, Residue b, const PrimePower& pp);

/// 2k^2 + 2.
std::uint64_t class_count_pp(const PrimePower& pp);
/// 2^omega(n) * prod (nu_p(n)^2 + 1); throws UnsupportedModulus for even n or n < 3.
std::uint64_t class_count(Int n);

/// One canonical class per prime power of n, in increasing prime order.
std::vector<CanonicalClass> classify_n(Int a, Int b, Int n);

/// Representative pair over Z/nZ obtained by CRT-combining the component
/// representatives.
std::pair<Int, Int> canonical_representative(Int a, Int b, Int n);

struct Fingerprint {
  /// histogram[t] = number of pure q with q^2 = t.
  std::vector<std::uint64_t> pure_square_histogram;
  /// (p, number of pure q with norm(q) = 0 and p*q != 0) for each p | n.
  std::vector<std::pair<Int, std::uint64_t>> isotropic_counts;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
  friend auto operator<=>(const Fingerprint&, const Fingerprint&) = default;
};

Fingerprint fingerprint(const RingParams& ring, const SearchLimits& limits = {});

/// Number of pure q with q^2 = 0 (equivalently norm(q) = 0) whose reduction
/// mod `divisor` is nonzero. With divisor = n / p this counts the pure
/// isotropic q with p*q != 0.
std::uint64_t isotropic_count(const RingParams& ring, Int divisor, const SearchLimits& limits = {});

/// Description of the first component where two fingerprints differ.
struct FingerprintDifference {
  std::string component;  ///< "pure_square_histogram" or "isotropic_count"
  Int key = 0;            ///< bin t, or the prime p
  std::uint64_t left = 0;
  std::uint64_t right = 0;
};
std::optional<FingerprintDifference> first_difference(const Fingerprint& l, const Fingerprint& r);

struct ClassEntry {
  RingParams rep;
  std::uint64_t size = 0;
  std::vector<std::pair<Int, Int>> members;
};

struct ClassReport {
  Int n = 0;
  std::vector<ClassEntry> classes;  ///< sorted by representative
  std::uint64_t total() const noexcept { return classes.size(); }
};

/// Partition of all n^2 pairs into isomorphism classes, decided by the
/// exhaustive search. With `prebucket`, pairs are first grouped by fingerprint
/// and only compared within a group. Representatives are the
/// lexicographically least pairs. Throws CapExceeded when n > max_n.
ClassReport brute_force_partition(Int n, Int max_n = 27, const SearchLimits& limits = {},
                                  bool prebucket = true);

enum class CongruenceStyle {
  /// u x1^2 + x2^2 - u p^s x3^2 = 0 (mod p^(k-s)), isotropy in (u p^s, p^s)
  NonresidueForm,
  /// x1^2 + x2^2 - p^s x3^2 = 0 (mod p^(k-s)), isotropy in (p^s, p^s)
  ResidueForm,
};

/// Number of nonzero triples mod p^(k-s) solving the congruence; 0 < s < k.
std::uint64_t congruence_count(CongruenceStyle style, Int u, int s, const PrimePower& pp);

}  // namespace gqr

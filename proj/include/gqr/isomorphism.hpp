#pragma once

// Deciding isomorphism between quaternion rings over the same odd Z/nZ.
//
// Over odd n every ring isomorphism fixes Z/nZ and maps pure quaternions to
// pure quaternions (it commutes with conjugation, and pure = trace zero when 2
// is invertible). An isomorphism is therefore determined by the images I, J
// of i, j, which must be pure with I^2 = a, J^2 = b and IJ = -JI; conversely
// any such pair whose coordinate matrix is invertible defines one. The
// exhaustive search enumerates exactly those pairs, so a negative answer is a
// proof of non-isomorphism.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gqr/matrix.hpp"
#include "gqr/modular.hpp"
#include "gqr/quaternion.hpp"

namespace gqr {

struct SearchLimits {
  /// Upper bound on n^3, the number of pure quaternions scanned.
  std::uint64_t enumeration_cap = std::uint64_t{1} << 27;
  /// Largest modulus accepted by the 2x2 matrix embedding search.
  Int m2_cap = 49;
  /// Threads used by find_isomorphism; the result does not depend on it.
  unsigned workers = 1;
};

/// Pure q with q^2 = t in lexicographic (x1, x2, x3) order.
/// Throws CapExceeded when n^3 exceeds the enumeration cap.
std::vector<Quat> pure_sqrt_set(const RingParams& ring, Int t, const SearchLimits& limits = {});

struct IsoWitness {
  RingParams source;
  RingParams target;
  Quat img_i;   ///< image of i, in the target ring
  Quat img_j;   ///< image of j, in the target ring
  Mat4 matrix;  ///< columns: coordinates of the images of 1, i, j, k
};

/// Witness whose images of i and j are the given target elements.
IsoWitness witness_from_images(const RingParams& source, const RingParams& target,
                               const Vec4& img_i, const Vec4& img_j);
/// Witness read off a coordinate matrix (columns 1 and 2 give img_i, img_j).
IsoWitness witness_from_matrix(const RingParams& source, const RingParams& target,
                               const Mat4& matrix);

/// Lexicographically first witness source -> target, or nullopt if the rings
/// are not isomorphic. Throws UnsupportedModulus for even n and RingMismatch
/// for different moduli.
std::optional<IsoWitness> find_isomorphism(const RingParams& source, const RingParams& target,
                                           const SearchLimits& limits = {});

enum class WitnessDefect {
  None,
  ModulusMismatch,
  FirstColumn,
  ImageColumns,
  SquareOfI,
  SquareOfJ,
  Anticommutation,
  ProductColumn,
  Singular,
  NotMultiplicative,
  ConjugationNotPreserved,
  TraceNotPreserved,
  NormNotPreserved,
};

std::string to_string(WitnessDefect d);

struct WitnessCheck {
  WitnessDefect defect = WitnessDefect::None;
  std::string detail;
  bool ok() const noexcept { return defect == WitnessDefect::None; }
  explicit operator bool() const noexcept { return ok(); }
};

/// Checks the structural invariants, multiplicativity on all basis pairs,
/// and preservation of conjugate, trace and norm on the basis.
WitnessCheck verify_witness(const IsoWitness& w);

/// Image of a source-ring element.
Quat apply(const IsoWitness& w, const Quat& q);
/// outer o inner; requires inner.target == outer.source.
IsoWitness compose(const IsoWitness& outer, const IsoWitness& inner);
/// Throws PreconditionError if the matrix is singular mod n.
IsoWitness inverse(const IsoWitness& w);
/// Same matrix over Z/mZ with parameters reduced mod m; m must divide n.
IsoWitness descend(const IsoWitness& w, Int m);

/// Whether w preserves conjugate, trace and norm on every element (when
/// n^4 <= exhaustive_limit) or on `samples` random elements otherwise.
WitnessCheck check_preservation(const IsoWitness& w, std::uint64_t samples, std::uint64_t seed,
                                std::uint64_t exhaustive_limit = 1 << 16);

// ---------------------------------------------------------------------------
// Explicit isomorphisms over Z/p^kZ. Each family builds its witness from a
// closed-form coordinate matrix; source is always the first ring listed.

/// (a, b) -> (b, a): i -> J, j -> I, k -> -K.
struct SwapFamily {
  Int n;
  Int a;
  Int b;
};

/// (a, b p^s) -> (a, -a b p^s) for a coprime to p.
struct NegatedProductFamily {
  PrimePower pp;
  Int a;
  Int b;
  int s;
};

/// (t p^r, m) -> (s p^r, m) for units s, t with st a square mod p.
struct SquareClassFamily {
  PrimePower pp;
  Int t;
  Int s;
  int r;
  Int m;
};

/// (p^r, p^r) -> (s p^r, s p^r) for a unit s.
struct ScaledDiagonalFamily {
  PrimePower pp;
  Int s;
  int r;
};

/// (1, a p^s) -> (1, p^s) for a unit a.
struct UnitAbsorptionFamily {
  PrimePower pp;
  Int a;
  int s;
};

/// (u, p^s) -> (u, b p^s) for a nonresidue u and a unit b.
struct NonresidueAbsorptionFamily {
  PrimePower pp;
  Int u;
  Int b;
  int s;
};

using LemmaFamily = std::variant<SwapFamily, NegatedProductFamily, SquareClassFamily,
                                 ScaledDiagonalFamily, UnitAbsorptionFamily,
                                 NonresidueAbsorptionFamily>;

/// Short stable identifier, e.g. "swap" or "square-class".
std::string family_name(const LemmaFamily& family);

/// Witness between the two rings of the family. Throws PreconditionError
/// when the hypotheses (units, residuosity, exponent range) fail.
IsoWitness constructive_witness(const LemmaFamily& family);

// ---------------------------------------------------------------------------

/// I, J in M_2(Z/nZ) with I^2 = a, J^2 = b, IJ = -JI and {1, I, J, IJ} a basis.
struct M2Witness {
  Int n;
  Int a;
  Int b;
  Mat2 I;
  Mat2 J;
};

/// Lexicographically first trace-zero pair. Throws PreconditionError for
/// non-unit a, b or even n, and CapExceeded above limits.m2_cap.
M2Witness m2_witness(Int n, Int a, Int b, const SearchLimits& limits = {});
bool verify_m2(const M2Witness& w);

/// For w : (a, b) -> (a, c), re-expresses w in a standard basis {1, I, J', IJ'}
/// of the target with I = w(i) and checks that the matrix becomes
///   1 0 0  0
///   0 1 a1 a2
///   0 0 b1 b2
///   0 0 c1 c2
/// with a1 * a = a2 * a = 0. Returns false if no such basis exists.
/// Throws PreconditionError when the first parameters differ.
bool block_shape_check(const IsoWitness& w, const SearchLimits& limits = {});

}  // namespace gqr

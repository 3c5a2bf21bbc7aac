#pragma once

// The generalized quaternion ring (a, b / Z/nZ): free Z/nZ-module on
// {1, i, j, k} with i^2 = a, j^2 = b, ij = -ji = k. The parameters need not
// be units.

#include <array>
#include <memory>
#include <string>
#include <string_view>

#include "gqr/matrix.hpp"
#include "gqr/modular.hpp"

namespace gqr {

class RingParams {
 public:
  /// Any modulus n >= 2; a and b are reduced mod n.
  static RingParams arithmetic(Int n, Int a, Int b);
  /// Additionally requires odd n >= 3 (throws UnsupportedModulus).
  static RingParams classification(Int n, Int a, Int b);

  Int n() const noexcept { return n_; }
  Int a() const noexcept { return a_; }
  Int b() const noexcept { return b_; }
  bool odd() const noexcept { return n_ % 2 == 1; }

  friend bool operator==(const RingParams&, const RingParams&) = default;
  friend auto operator<=>(const RingParams&, const RingParams&) = default;

 private:
  RingParams(Int n, Int a, Int b) : n_(n), a_(a), b_(b) {}
  Int n_;
  Int a_;
  Int b_;
};

std::string to_string(const RingParams& r);

/// Handle to a ring with its materialized structure constants. Cheap to copy;
/// copies share the table.
class QuaternionRing {
 public:
  explicit QuaternionRing(RingParams params);

  const RingParams& params() const noexcept { return table_->params; }
  Int n() const noexcept { return table_->params.n(); }

  /// Basis product e_l * e_r = coeff(l, r) * e_{index(l, r)}.
  int index(int l, int r) const noexcept { return table_->index[l][r]; }
  Int coeff(int l, int r) const noexcept { return table_->coeff(l, r); }

  /// Coordinate-level product of reduced vectors.
  Vec4 multiply(const Vec4& x, const Vec4& y) const;
  /// a*x1^2 + b*x2^2 - a*b*x3^2 for the pure element (0, x1, x2, x3).
  Int pure_square(Int x1, Int x2, Int x3) const;

  friend bool operator==(const QuaternionRing& l, const QuaternionRing& r) {
    return l.table_ == r.table_ || l.params() == r.params();
  }

 private:
  struct Table {
    RingParams params;
    std::array<std::array<int, 4>, 4> index;
    Mat4 coeff;
    Int ab;
    bool small;  // products of three reduced values fit without mul_mod
  };
  std::shared_ptr<const Table> table_;
};

/// x0 + x1 i + x2 j + x3 k with coordinates reduced mod n.
class Quat {
 public:
  Quat(QuaternionRing ring, const Vec4& coords);
  Quat(QuaternionRing ring, Int x0, Int x1, Int x2, Int x3);

  static Quat scalar(QuaternionRing ring, Int x);
  /// Basis element e_index: 0 = 1, 1 = i, 2 = j, 3 = k.
  static Quat basis(QuaternionRing ring, int index);

  const QuaternionRing& ring() const noexcept { return ring_; }
  const Vec4& coords() const noexcept { return coords_; }
  Int operator[](int idx) const { return coords_(idx); }
  bool is_pure() const noexcept { return coords_(0) == 0; }
  bool is_zero() const noexcept { return coords_.isZero(); }

  Quat operator+(const Quat& o) const;
  Quat operator-(const Quat& o) const;
  Quat operator-() const;
  Quat operator*(const Quat& o) const;
  /// Scalar multiple.
  Quat operator*(Int c) const;

  friend bool operator==(const Quat& l, const Quat& r) {
    return l.ring_ == r.ring_ && l.coords_ == r.coords_;
  }

 private:
  QuaternionRing ring_;
  Vec4 coords_;
};

/// Throws RingMismatch when the operands live in different rings.
Quat mul(const Quat& q1, const Quat& q2);
Quat conj(const Quat& q);
Residue trace(const Quat& q);
Residue norm(const Quat& q);
/// Scalar value of q^2 for a pure q; throws PreconditionError otherwise.
Residue pure_square(const Quat& q);

/// All 64 basis triples associate.
bool check_associativity(const RingParams& params);

/// "x0 + x1*i + x2*j + x3*k".
std::string to_string(const Quat& q);
std::array<Int, 4> to_array(const Quat& q);
/// Accepts the textual form above (any integer coefficients) or "[x0,x1,x2,x3]".
Quat parse_quat(const QuaternionRing& ring, std::string_view text);

}  // namespace gqr

#include "gqr/quaternion.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "gqr/errors.hpp"

namespace gqr {

RingParams RingParams::arithmetic(Int n, Int a, Int b) {
  if (n < 2) throw UnsupportedModulus("unsupported modulus: n must be >= 2, got " + std::to_string(n));
  return RingParams(n, reduce(a, n), reduce(b, n));
}

RingParams RingParams::classification(Int n, Int a, Int b) {
  if (n < 3 || n % 2 == 0)
    throw UnsupportedModulus("unsupported modulus: n must be odd and >= 3, got " +
                             std::to_string(n));
  return arithmetic(n, a, b);
}

std::string to_string(const RingParams& r) {
  return "(" + std::to_string(r.a()) + "," + std::to_string(r.b()) + " / Z" +
         std::to_string(r.n()) + ")";
}

// ---------------------------------------------------------------------------

QuaternionRing::QuaternionRing(RingParams params) {
  const Int n = params.n(), a = params.a(), b = params.b();
  const Int ab = mul_mod(a, b, n);
  auto neg = [n](Int x) { return sub_mod(0, x, n); };

  Table t{params, {}, Mat4::Zero(), ab, n < (Int{1} << 19)};
  auto set = [&t](int l, int r, int idx, Int c) {
    t.index[l][r] = idx;
    t.coeff(l, r) = c;
  };
  for (int e = 0; e < 4; ++e) {
    set(0, e, e, 1 % n);
    set(e, 0, e, 1 % n);
  }
  set(1, 1, 0, a);       // i i = a
  set(1, 2, 3, 1 % n);   // i j = k
  set(1, 3, 2, a);       // i k = a j
  set(2, 1, 3, neg(1));  // j i = -k
  set(2, 2, 0, b);       // j j = b
  set(2, 3, 1, neg(b));  // j k = -b i
  set(3, 1, 2, neg(a));  // k i = -a j
  set(3, 2, 1, b);       // k j = b i
  set(3, 3, 0, neg(ab)); // k k = -ab
  table_ = std::make_shared<const Table>(std::move(t));
}

Vec4 QuaternionRing::multiply(const Vec4& x, const Vec4& y) const {
  const Table& t = *table_;
  const Int n = t.params.n();
  Vec4 out = Vec4::Zero();
  if (t.small) {
    // each term < n^3 < 2^57, sixteen of them fit in 63 bits
    for (int l = 0; l < 4; ++l) {
      if (x(l) == 0) continue;
      for (int r = 0; r < 4; ++r) out(t.index[l][r]) += x(l) * y(r) * t.coeff(l, r);
    }
    for (int m = 0; m < 4; ++m) out(m) %= n;
    return out;
  }
  for (int l = 0; l < 4; ++l) {
    for (int r = 0; r < 4; ++r) {
      const Int term = mul_mod(mul_mod(x(l), y(r), n), t.coeff(l, r), n);
      out(t.index[l][r]) = add_mod(out(t.index[l][r]), term, n);
    }
  }
  return out;
}

Int QuaternionRing::pure_square(Int x1, Int x2, Int x3) const {
  const Table& t = *table_;
  const Int n = t.params.n();
  if (t.small) {
    const Int v = (t.params.a() * (x1 * x1 % n) + t.params.b() * (x2 * x2 % n) -
                   t.ab * (x3 * x3 % n)) % n;
    return v < 0 ? v + n : v;
  }
  const Int s1 = mul_mod(t.params.a(), mul_mod(x1, x1, n), n);
  const Int s2 = mul_mod(t.params.b(), mul_mod(x2, x2, n), n);
  const Int s3 = mul_mod(t.ab, mul_mod(x3, x3, n), n);
  return sub_mod(add_mod(s1, s2, n), s3, n);
}

// ---------------------------------------------------------------------------

Quat::Quat(QuaternionRing ring, const Vec4& coords)
    : ring_(std::move(ring)), coords_(reduce_mod(coords, ring_.n())) {}

Quat::Quat(QuaternionRing ring, Int x0, Int x1, Int x2, Int x3)
    : Quat(std::move(ring), Vec4(x0, x1, x2, x3)) {}

Quat Quat::scalar(QuaternionRing ring, Int x) { return Quat(std::move(ring), x, 0, 0, 0); }

Quat Quat::basis(QuaternionRing ring, int index) {
  Vec4 v = Vec4::Zero();
  v(index) = 1;
  return Quat(std::move(ring), v);
}

namespace {
void require_same_ring(const Quat& l, const Quat& r) {
  if (!(l.ring() == r.ring()))
    throw RingMismatch("quaternions from " + to_string(l.ring().params()) + " and " +
                       to_string(r.ring().params()));
}
}  // namespace

Quat Quat::operator+(const Quat& o) const {
  require_same_ring(*this, o);
  return Quat(ring_, coords_ + o.coords_);
}

Quat Quat::operator-(const Quat& o) const {
  require_same_ring(*this, o);
  return Quat(ring_, coords_ - o.coords_);
}

Quat Quat::operator-() const { return Quat(ring_, -coords_); }

Quat Quat::operator*(const Quat& o) const { return mul(*this, o); }

Quat Quat::operator*(Int c) const {
  const Int n = ring_.n();
  const Int cr = reduce(c, n);
  return Quat(ring_, coords_.unaryExpr([cr, n](Int x) { return mul_mod(x, cr, n); }).eval());
}

Quat mul(const Quat& q1, const Quat& q2) {
  require_same_ring(q1, q2);
  return Quat(q1.ring(), q1.ring().multiply(q1.coords(), q2.coords()));
}

Quat conj(const Quat& q) {
  return Quat(q.ring(), q[0], -q[1], -q[2], -q[3]);
}

Residue trace(const Quat& q) {
  const Int n = q.ring().n();
  return Residue{add_mod(q[0], q[0], n), n};
}

Residue norm(const Quat& q) {
  const Int n = q.ring().n();
  const Int x0sq = mul_mod(q[0], q[0], n);
  return Residue{sub_mod(x0sq, q.ring().pure_square(q[1], q[2], q[3]), n), n};
}

Residue pure_square(const Quat& q) {
  if (!q.is_pure()) throw PreconditionError("pure_square of a non-pure quaternion");
  return Residue{q.ring().pure_square(q[1], q[2], q[3]), q.ring().n()};
}

bool check_associativity(const RingParams& params) {
  const QuaternionRing ring(params);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      for (int z = 0; z < 4; ++z) {
        const Quat ex = Quat::basis(ring, x), ey = Quat::basis(ring, y), ez = Quat::basis(ring, z);
        if (!((ex * ey) * ez == ex * (ey * ez))) return false;
      }
  return true;
}

// ---------------------------------------------------------------------------

std::string to_string(const Quat& q) {
  std::ostringstream os;
  os << q[0] << " + " << q[1] << "*i + " << q[2] << "*j + " << q[3] << "*k";
  return os.str();
}

std::array<Int, 4> to_array(const Quat& q) { return {q[0], q[1], q[2], q[3]}; }

namespace {

Int parse_int(std::string_view s, std::string_view whole) {
  Int v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw PreconditionError("malformed quaternion: '" + std::string(whole) + "'");
  return v;
}

}  // namespace

Quat parse_quat(const QuaternionRing& ring, std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw PreconditionError("malformed quaternion: empty input");

  Vec4 v = Vec4::Zero();
  if (s.front() == '[') {
    if (s.back() != ']') throw PreconditionError("malformed quaternion: '" + s + "'");
    std::string_view body(s.data() + 1, s.size() - 2);
    for (int idx = 0; idx < 4; ++idx) {
      const auto comma = body.find(',');
      if ((idx < 3) != (comma != std::string_view::npos))
        throw PreconditionError("quaternion array needs exactly four entries: '" + s + "'");
      v(idx) = parse_int(body.substr(0, comma), s);
      if (comma != std::string_view::npos) body.remove_prefix(comma + 1);
    }
    return Quat(ring, v);
  }

  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t end = pos + 1;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    std::string_view term(s.data() + pos, end - pos);
    Int sign = 1;
    if (term.front() == '+' || term.front() == '-') {
      sign = term.front() == '-' ? -1 : 1;
      term.remove_prefix(1);
    }
    if (term.empty()) throw PreconditionError("malformed quaternion: '" + s + "'");
    int slot = 0;
    const char last = term.back();
    if (last == 'i' || last == 'j' || last == 'k') {
      slot = last == 'i' ? 1 : last == 'j' ? 2 : 3;
      term.remove_suffix(1);
      if (!term.empty() && term.back() == '*') term.remove_suffix(1);
    }
    const Int coeff = term.empty() ? 1 : parse_int(term, s);
    v(slot) = reduce(v(slot) + reduce(sign * reduce(coeff, ring.n()), ring.n()), ring.n());
    pos = end;
  }
  return Quat(ring, v);
}

}  // namespace gqr

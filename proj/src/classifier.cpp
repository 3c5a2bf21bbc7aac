#include "gqr/classifier.hpp"

#include <algorithm>
#include <map>

#include "gqr/errors.hpp"

namespace gqr {

namespace {

const char* chi_name(QuadraticCharacter c) { return c == QuadraticCharacter::QR ? "QR" : "QNR"; }

}  // namespace

std::string to_token(const CanonicalClass& c) {
  std::string out = std::to_string(c.pp.p());
  if (c.pp.k() > 1) out += "^" + std::to_string(c.pp.k());
  out += ":";
  const std::string sr = "s" + std::to_string(c.s) + "r" + std::to_string(c.r) + ":";
  switch (c.tag) {
    case ClassTag::Unit: return out + "UNIT";
    case ClassTag::Zero: return out + "ZERO";
    case ClassTag::CharA:
    case ClassTag::CharProduct: return out + sr + chi_name(*c.chi);
    case ClassTag::CharPair: return out + sr + chi_name(*c.chi) + "," + chi_name(*c.chi_b);
  }
  return out;
}

std::string to_token(const std::vector<CanonicalClass>& classes) {
  std::string out;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (i > 0) out += "|";
    out += to_token(classes[i]);
  }
  return out;
}

CanonicalClass canonical_form(Residue a, Residue b, const PrimePower& pp) {
  Valuation va = valuation(a, pp);
  Valuation vb = valuation(b, pp);
  if (va.s > vb.s) std::swap(va, vb);  // (a, b) ~ (b, a)

  const int k = pp.k();
  const int s = va.s, r = vb.s;
  const Int p = pp.p(), q = pp.q();
  const Int u = smallest_qnr(p).value;
  auto pick = [u](QuadraticCharacter c) { return c == QuadraticCharacter::QR ? Int{1} : u; };
  auto times_power = [&](Int unit, int e) { return mul_mod(unit % q, pp.power(e) % q, q); };

  CanonicalClass out{pp, s, r, ClassTag::Unit, std::nullopt, std::nullopt, 0, 0};
  if (s == 0 && r == 0) {
    out.tag = ClassTag::Unit;
    out.rep_a = 1 % q;
    out.rep_b = 1 % q;
  } else if (s == k) {
    out.tag = ClassTag::Zero;
  } else if (s == 0) {
    // the unit part of the second parameter is absorbed
    out.tag = ClassTag::CharA;
    out.chi = qr_char(*va.unit, p);
    out.rep_a = pick(*out.chi);
    out.rep_b = times_power(1, r);
  } else if (s == r) {
    out.tag = ClassTag::CharProduct;
    out.chi = qr_char(*va.unit * *vb.unit, p);
    out.rep_a = times_power(pick(*out.chi), r);
    out.rep_b = times_power(1, r);
  } else if (r < k) {
    out.tag = ClassTag::CharPair;
    out.chi = qr_char(*va.unit, p);
    out.chi_b = qr_char(*vb.unit, p);
    out.rep_a = times_power(pick(*out.chi), s);
    out.rep_b = times_power(pick(*out.chi_b), r);
  } else {
    out.tag = ClassTag::CharA;
    out.chi = qr_char(*va.unit, p);
    out.rep_a = times_power(pick(*out.chi), s);
    out.rep_b = 0;
  }
  return out;
}

std::uint64_t class_count_pp(const PrimePower& pp) {
  const auto k = static_cast<std::uint64_t>(pp.k());
  return 2 * k * k + 2;
}

std::uint64_t class_count(Int n) {
  const Factorization f = factorize(n);
  std::uint64_t count = 1;
  for (const auto& pp : f.factors()) {
    const auto nu = static_cast<std::uint64_t>(f.nu(pp.p()));
    count *= 2 * (nu * nu + 1);
  }
  return count;
}

std::vector<CanonicalClass> classify_n(Int a, Int b, Int n) {
  const Factorization f = factorize(n);
  const auto as = crt_split(Residue::of(a, n), f);
  const auto bs = crt_split(Residue::of(b, n), f);
  std::vector<CanonicalClass> out;
  out.reserve(f.factors().size());
  for (std::size_t i = 0; i < f.factors().size(); ++i)
    out.push_back(canonical_form(as[i], bs[i], f.factors()[i]));
  return out;
}

std::pair<Int, Int> canonical_representative(Int a, Int b, Int n) {
  const Factorization f = factorize(n);
  std::vector<Residue> ra, rb;
  for (const auto& c : classify_n(a, b, n)) {
    ra.push_back(Residue{c.rep_a, c.pp.q()});
    rb.push_back(Residue{c.rep_b, c.pp.q()});
  }
  return {crt_combine(ra, f).value, crt_combine(rb, f).value};
}

// ---------------------------------------------------------------------------

Fingerprint fingerprint(const RingParams& params, const SearchLimits& limits) {
  const Int n = params.n();
  if (n < 3 || n % 2 == 0) throw UnsupportedModulus("unsupported modulus: fingerprint needs odd n >= 3");
  const auto un = static_cast<std::uint64_t>(n);
  if (un > (std::uint64_t{1} << 21) || un * un * un > limits.enumeration_cap)
    throw CapExceeded("instance too large: fingerprint scans n^3 pure quaternions",
                      limits.enumeration_cap);

  const QuaternionRing ring(params);
  const Factorization f = factorize(n);
  Fingerprint fp;
  fp.pure_square_histogram.assign(static_cast<std::size_t>(n), 0);
  for (const auto& pp : f.factors()) fp.isotropic_counts.emplace_back(pp.p(), 0);

  for (Int x1 = 0; x1 < n; ++x1)
    for (Int x2 = 0; x2 < n; ++x2)
      for (Int x3 = 0; x3 < n; ++x3) {
        const Int sq = ring.pure_square(x1, x2, x3);
        ++fp.pure_square_histogram[static_cast<std::size_t>(sq)];
        if (sq != 0) continue;  // norm of a pure element is -q^2
        for (auto& [p, count] : fp.isotropic_counts)
          if ((p * x1) % n != 0 || (p * x2) % n != 0 || (p * x3) % n != 0) ++count;
      }
  return fp;
}

std::uint64_t isotropic_count(const RingParams& params, Int divisor, const SearchLimits& limits) {
  const Int n = params.n();
  const auto un = static_cast<std::uint64_t>(n);
  if (un > (std::uint64_t{1} << 21) || un * un * un > limits.enumeration_cap)
    throw CapExceeded("instance too large: isotropic count scans n^3 pure quaternions",
                      limits.enumeration_cap);
  const QuaternionRing ring(params);
  std::uint64_t count = 0;
  for (Int x1 = 0; x1 < n; ++x1)
    for (Int x2 = 0; x2 < n; ++x2)
      for (Int x3 = 0; x3 < n; ++x3)
        if (ring.pure_square(x1, x2, x3) == 0 &&
            (x1 % divisor != 0 || x2 % divisor != 0 || x3 % divisor != 0))
          ++count;
  return count;
}

std::optional<FingerprintDifference> first_difference(const Fingerprint& l, const Fingerprint& r) {
  const auto& hl = l.pure_square_histogram;
  const auto& hr = r.pure_square_histogram;
  for (std::size_t t = 0; t < std::min(hl.size(), hr.size()); ++t)
    if (hl[t] != hr[t])
      return FingerprintDifference{"pure_square_histogram", static_cast<Int>(t), hl[t], hr[t]};
  for (std::size_t i = 0; i < std::min(l.isotropic_counts.size(), r.isotropic_counts.size()); ++i)
    if (l.isotropic_counts[i] != r.isotropic_counts[i])
      return FingerprintDifference{"isotropic_count", l.isotropic_counts[i].first,
                                   l.isotropic_counts[i].second, r.isotropic_counts[i].second};
  return std::nullopt;
}

ClassReport brute_force_partition(Int n, Int max_n, const SearchLimits& limits, bool prebucket) {
  if (n < 3 || n % 2 == 0)
    throw UnsupportedModulus("unsupported modulus: partition needs odd n >= 3");
  if (n > max_n)
    throw CapExceeded("instance too large: brute-force partition of n = " + std::to_string(n),
                      static_cast<std::uint64_t>(max_n));

  ClassReport report{n, {}};
  std::map<Fingerprint, std::vector<std::size_t>> buckets;
  for (Int a = 0; a < n; ++a) {
    for (Int b = 0; b < n; ++b) {
      const auto ring = RingParams::classification(n, a, b);
      auto& bucket = prebucket ? buckets[fingerprint(ring, limits)] : buckets[Fingerprint{}];
      bool placed = false;
      for (std::size_t idx : bucket) {
        ClassEntry& entry = report.classes[idx];
        if (find_isomorphism(ring, entry.rep, limits)) {
          ++entry.size;
          entry.members.emplace_back(a, b);
          placed = true;
          break;
        }
      }
      if (!placed) {
        bucket.push_back(report.classes.size());
        report.classes.push_back(ClassEntry{ring, 1, {{a, b}}});
      }
    }
  }
  // pairs are visited in lexicographic order, so representatives are the
  // least members and the classes are already sorted by representative
  return report;
}

std::uint64_t congruence_count(CongruenceStyle style, Int u, int s, const PrimePower& pp) {
  if (s <= 0 || s >= pp.k())
    throw PreconditionError("congruence_count requires 0 < s < k");
  if (style == CongruenceStyle::NonresidueForm && reduce(u, pp.p()) == 0)
    throw PreconditionError("u must be coprime to p");
  const Int m = pp.power(pp.k() - s);
  const Int ps = pp.power(s) % m;
  const Int c1 = style == CongruenceStyle::NonresidueForm ? reduce(u, m) : 1 % m;
  const Int c3 = mul_mod(c1, ps, m);  // coefficient of x3^2, subtracted
  std::uint64_t count = 0;
  for (Int x1 = 0; x1 < m; ++x1)
    for (Int x2 = 0; x2 < m; ++x2)
      for (Int x3 = 0; x3 < m; ++x3) {
        if (x1 == 0 && x2 == 0 && x3 == 0) continue;
        const Int v = sub_mod(add_mod(mul_mod(c1, mul_mod(x1, x1, m), m), mul_mod(x2, x2, m), m),
                              mul_mod(c3, mul_mod(x3, x3, m), m), m);
        if (v == 0) ++count;
      }
  return count;
}

}  // namespace gqr

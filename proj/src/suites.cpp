#include "gqr/suites.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "gqr/classifier.hpp"
#include "gqr/errors.hpp"

namespace gqr {

bool VerificationLedger::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

std::vector<Int> units(const PrimePower& pp) {
  std::vector<Int> out;
  for (Int x = 1; x < pp.q(); ++x)
    if (x % pp.p() != 0) out.push_back(x);
  return out;
}

Int times_power(Int unit, int e, const PrimePower& pp) {
  return mul_mod(reduce(unit, pp.q()), pp.power(e) % pp.q(), pp.q());
}

// Records the first failure; later failures only bump the case count.
struct Tally {
  CheckResult result;
  explicit Tally(std::string name) { result.name = std::move(name); }
  void pass() { ++result.cases; }
  void fail(const std::string& why) {
    ++result.cases;
    if (result.passed) result.detail = why;
    result.passed = false;
  }
  void expect(bool ok, const std::string& why) { ok ? pass() : fail(why); }
  CheckResult done() {
    if (result.passed && result.detail.empty())
      result.detail = std::to_string(result.cases) + " cases";
    return result;
  }
};

}  // namespace

std::vector<LemmaFamily> admissible_families(const PrimePower& pp) {
  const Int q = pp.q(), p = pp.p();
  const int k = pp.k();
  const std::vector<Int> us = units(pp);
  std::vector<LemmaFamily> out;

  for (Int a = 0; a < q; ++a)
    for (Int b = 0; b < q; ++b) out.push_back(SwapFamily{q, a, b});
  for (Int a : us)
    for (Int b = 0; b < q; ++b)
      for (int s = 0; s <= k; ++s) out.push_back(NegatedProductFamily{pp, a, b, s});
  for (Int t : us)
    for (Int s : us) {
      if (qr_char(mul_mod(s, t, q), p) != QuadraticCharacter::QR) continue;
      for (int r = 0; r <= k; ++r)
        for (Int m = 0; m < q; ++m) out.push_back(SquareClassFamily{pp, t, s, r, m});
    }
  for (Int s : us)
    for (int r = 0; r <= k; ++r) out.push_back(ScaledDiagonalFamily{pp, s, r});
  for (Int a : us)
    for (int s = 0; s <= k; ++s) out.push_back(UnitAbsorptionFamily{pp, a, s});
  for (Int u : us) {
    if (qr_char(u, p) != QuadraticCharacter::QNR) continue;
    for (Int b : us)
      for (int s = 0; s <= k; ++s) out.push_back(NonresidueAbsorptionFamily{pp, u, b, s});
  }
  return out;
}

std::vector<PredictedDistinct> predicted_distinct_pairs(const PrimePower& pp, Int u) {
  const Int q = pp.q();
  const int k = pp.k();
  // one unit per square class: the statements depend on units only through
  // their characters
  const std::vector<Int> us{1, reduce(u, q)};
  std::vector<PredictedDistinct> out;
  std::set<std::pair<RingParams, RingParams>> seen;
  auto add = [&](const std::string& reason, Int a1, Int b1, Int a2, Int b2) {
    auto l = RingParams::classification(q, a1, b1);
    auto r = RingParams::classification(q, a2, b2);
    if (r < l) std::swap(l, r);
    if (seen.insert({l, r}).second) out.push_back({reason, l, r});
  };

  // Zero rings, rings with a zero parameter and rings without one.
  for (int s = 0; s < k; ++s)
    for (int r = s; r < k; ++r)
      for (Int a : us)
        for (Int b : us)
          for (Int c : us) {
            const Int r1a = times_power(a, s, pp), r1b = times_power(b, r, pp);
            const Int r2a = times_power(c, s, pp);
            add("zero-square", r1a, r1b, r2a, 0);
            add("zero-square", r1a, r1b, 0, 0);
            add("zero-square", r2a, 0, 0, 0);
          }

  // Different valuation patterns.
  for (int s1 = 0; s1 <= k; ++s1)
    for (int s2 = s1; s2 <= k; ++s2)
      for (int s3 = 0; s3 <= k; ++s3)
        for (int s4 = s3; s4 <= k; ++s4) {
          if (s1 == s3 && s2 == s4) continue;
          for (Int a : us)
            for (Int b : us)
              for (Int c : us)
                for (Int d : us)
                  add("valuation-pattern", times_power(a, s1, pp), times_power(b, s2, pp),
                      times_power(c, s3, pp), times_power(d, s4, pp));
        }

  // (1, p^s) has no pure square root of u once s > 0.
  for (int s = 1; s <= k; ++s)
    add("nonresidue-root", 1, pp.power(s) % q, u, pp.power(s) % q);

  // Isotropic counts and missing roots of u p^s.
  for (int s = 1; s < k; ++s) {
    const Int ps = pp.power(s);
    add("isotropic-count", mul_mod(u, ps, q), ps, ps, ps);
    add("isotropic-count", mul_mod(u, ps, q), 0, ps, 0);
  }

  // The four character classes with 0 < s < r < k.
  for (int s = 1; s < k; ++s)
    for (int r = s + 1; r < k; ++r) {
      const Int ps = pp.power(s), pr = pp.power(r);
      const std::pair<Int, Int> rings[4] = {{mul_mod(u, ps, q), mul_mod(u, pr, q)},
                                            {ps, mul_mod(u, pr, q)},
                                            {mul_mod(u, ps, q), pr},
                                            {ps, pr}};
      for (int x = 0; x < 4; ++x)
        for (int y = x + 1; y < 4; ++y)
          add("character-pair", rings[x].first, rings[x].second, rings[y].first, rings[y].second);
    }
  return out;
}

VerificationLedger run_lemma_suite(const PrimePower& pp, const SearchLimits& limits) {
  VerificationLedger ledger{"lemmas", pp.p(), pp.k(), {}};
  const Int q = pp.q(), p = pp.p();
  const int k = pp.k();
  const Int u = smallest_qnr(p).value;

  // Closed-form witnesses, grouped by family.
  std::map<std::string, Tally> by_family;
  std::vector<std::string> order;
  for (const LemmaFamily& fam : admissible_families(pp)) {
    const std::string name = family_name(fam);
    auto [it, fresh] = by_family.try_emplace(name, "witness:" + name);
    if (fresh) order.push_back(name);
    const IsoWitness w = constructive_witness(fam);
    WitnessCheck check = verify_witness(w);
    if (check) check = check_preservation(w, 1000, 7);
    it->second.expect(check.ok(), to_string(w.source) + " -> " + to_string(w.target) + ": " +
                                      to_string(check.defect) + " " + check.detail);
  }
  for (const auto& name : order) ledger.checks.push_back(by_family.at(name).done());

  // Predicted non-isomorphisms, decided by the exhaustive search.
  std::map<std::string, Tally> by_reason;
  std::vector<std::string> reasons;
  for (const auto& pair : predicted_distinct_pairs(pp, u)) {
    auto [it, fresh] = by_reason.try_emplace(pair.reason, "distinct:" + pair.reason);
    if (fresh) reasons.push_back(pair.reason);
    const bool none = !find_isomorphism(pair.left, pair.right, limits).has_value();
    it->second.expect(none, to_string(pair.left) + " and " + to_string(pair.right) +
                                " are isomorphic");
  }
  for (const auto& reason : reasons) ledger.checks.push_back(by_reason.at(reason).done());

  Tally unit_case("isomorphic:nonresidue-root-s0");
  unit_case.expect(find_isomorphism(RingParams::classification(q, 1, 1),
                                    RingParams::classification(q, u, 1), limits)
                       .has_value(),
                   "(1,1) and (u,1) not isomorphic");
  ledger.checks.push_back(unit_case.done());

  Tally dichotomy("congruence-dichotomy");
  for (int s = 1; s < k; ++s) {
    const std::uint64_t e1 = congruence_count(CongruenceStyle::NonresidueForm, u, s, pp);
    const std::uint64_t e2 = congruence_count(CongruenceStyle::ResidueForm, u, s, pp);
    const Int ps = pp.power(s);
    const Int lift = pp.power(k - s);
    const auto fiber = static_cast<std::uint64_t>(ps) * ps * ps;
    const std::uint64_t n1 =
        isotropic_count(RingParams::classification(q, mul_mod(u, ps, q), ps), lift, limits);
    const std::uint64_t n2 = isotropic_count(RingParams::classification(q, ps, ps), lift, limits);
    dichotomy.expect(e1 != e2, "s=" + std::to_string(s) + ": counts agree (" + std::to_string(e1) + ")");
    dichotomy.expect(n1 == e1 * fiber && n2 == e2 * fiber,
                     "s=" + std::to_string(s) + ": ring counts " + std::to_string(n1) + "," +
                         std::to_string(n2) + " vs congruence counts " + std::to_string(e1) +
                         "," + std::to_string(e2));
  }
  ledger.checks.push_back(dichotomy.done());
  return ledger;
}

VerificationLedger run_invariant_suite(const PrimePower& pp, Int max_n, const SearchLimits& limits) {
  VerificationLedger ledger{"invariants", pp.p(), pp.k(), {}};
  const Int q = pp.q();
  const int k = pp.k();
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<Int> coord(0, q - 1);

  Tally assoc("associativity");
  for (Int a = 0; a < q; ++a)
    for (Int b = 0; b < q; ++b)
      assoc.expect(check_associativity(RingParams::classification(q, a, b)),
                   "(" + std::to_string(a) + "," + std::to_string(b) + ")");
  ledger.checks.push_back(assoc.done());

  Tally norm_mult("norm-multiplicativity");
  Tally anti("conjugation-anti-automorphism");
  Tally trace_norm("trace-norm-from-conjugate");
  for (int sample = 0; sample < 10000; ++sample) {
    const QuaternionRing ring(RingParams::classification(q, coord(rng), coord(rng)));
    const Quat x(ring, coord(rng), coord(rng), coord(rng), coord(rng));
    const Quat y(ring, coord(rng), coord(rng), coord(rng), coord(rng));
    norm_mult.expect(norm(x * y) == norm(x) * norm(y), to_string(x) + " , " + to_string(y));
    anti.expect(conj(x * y) == conj(y) * conj(x), to_string(x) + " , " + to_string(y));
    const Quat xc = x * conj(x);
    trace_norm.expect(x + conj(x) == Quat::scalar(ring, trace(x).value) &&
                          xc == Quat::scalar(ring, norm(x).value),
                      to_string(x));
  }
  ledger.checks.push_back(norm_mult.done());
  ledger.checks.push_back(anti.done());
  ledger.checks.push_back(trace_norm.done());

  Tally canon("canonical-form-invariance");
  for (Int a = 0; a < q; ++a)
    for (Int b = 0; b < q; ++b) {
      const CanonicalClass base = canonical_form(Residue{a, q}, Residue{b, q}, pp);
      canon.expect(base == canonical_form(Residue{b, q}, Residue{a, q}, pp),
                   "swap of (" + std::to_string(a) + "," + std::to_string(b) + ")");
      for (Int x : units(pp)) {
        const Residue sq{mul_mod(x, x, q), q};
        canon.expect(base == canonical_form(Residue{a, q} * sq, Residue{b, q}, pp) &&
                         base == canonical_form(Residue{a, q}, Residue{b, q} * sq, pp),
                     "square scaling of (" + std::to_string(a) + "," + std::to_string(b) + ")");
      }
    }
  ledger.checks.push_back(canon.done());

  if (q > max_n) {
    CheckResult skipped{"brute-force-partition", 0, false,
                        "modulus " + std::to_string(q) + " exceeds the oracle cap " + std::to_string(max_n)};
    ledger.checks.push_back(skipped);
    return ledger;
  }

  const ClassReport report = brute_force_partition(q, max_n, limits);
  Tally count("class-count");
  count.expect(report.total() == class_count_pp(pp),
               "partition has " + std::to_string(report.total()) + " classes, expected " +
                   std::to_string(class_count_pp(pp)));
  ledger.checks.push_back(count.done());

  Tally agree("classifier-agreement");
  std::set<std::string> labels;
  for (const auto& entry : report.classes) {
    const std::string label = to_token(canonical_form(Residue{entry.rep.a(), q}, Residue{entry.rep.b(), q}, pp));
    agree.expect(labels.insert(label).second, "two classes share label " + label);
    for (const auto& [a, b] : entry.members)
      agree.expect(to_token(canonical_form(Residue{a, q}, Residue{b, q}, pp)) == label,
                   "(" + std::to_string(a) + "," + std::to_string(b) + ") labelled differently from " +
                       to_string(entry.rep));
  }
  ledger.checks.push_back(agree.done());

  Tally invariance("fingerprint-invariance");
  Tally symmetric("oracle-symmetry");
  Tally preserve("witness-preservation");
  Tally descent("descent");
  Tally transitive("oracle-transitivity");
  for (const auto& entry : report.classes) {
    const Fingerprint rep_fp = fingerprint(entry.rep, limits);
    std::optional<IsoWitness> first;
    for (const auto& [a, b] : entry.members) {
      const auto ring = RingParams::classification(q, a, b);
      const auto w = find_isomorphism(ring, entry.rep, limits);
      const auto back = find_isomorphism(entry.rep, ring, limits);
      symmetric.expect(w.has_value() && back.has_value(), to_string(ring) + " vs " + to_string(entry.rep));
      if (!w) continue;
      invariance.expect(fingerprint(ring, limits) == rep_fp, to_string(ring));
      const WitnessCheck pres = check_preservation(*w, 10000, 11);
      preserve.expect(pres.ok(), to_string(ring) + ": " + to_string(pres.defect));
      for (int s = 1; s < k; ++s) {
        const IsoWitness low = descend(*w, pp.power(s));
        const WitnessCheck c = verify_witness(low);
        descent.expect(c.ok(), to_string(low.source) + " -> " + to_string(low.target) + ": " +
                                   to_string(c.defect));
      }
      if (first) {
        const IsoWitness chain = compose(inverse(*first), *w);
        const WitnessCheck c = verify_witness(chain);
        transitive.expect(c.ok(), to_string(chain.source) + " -> " + to_string(chain.target));
      } else {
        first = w;
      }
    }
  }
  // distinct representatives must stay distinct in both directions
  for (std::size_t x = 0; x < report.classes.size(); ++x)
    for (std::size_t y = 0; y < report.classes.size(); ++y) {
      if (x == y) continue;
      symmetric.expect(!find_isomorphism(report.classes[x].rep, report.classes[y].rep, limits),
                       to_string(report.classes[x].rep) + " vs " + to_string(report.classes[y].rep));
    }
  ledger.checks.push_back(invariance.done());
  ledger.checks.push_back(symmetric.done());
  ledger.checks.push_back(preserve.done());
  ledger.checks.push_back(descent.done());
  ledger.checks.push_back(transitive.done());
  return ledger;
}

VerificationLedger run_m2_suite(const PrimePower& pp, const SearchLimits& limits) {
  VerificationLedger ledger{"m2", pp.p(), pp.k(), {}};
  Tally embed("m2-embedding");
  for (Int a : units(pp))
    for (Int b : units(pp)) {
      const M2Witness w = m2_witness(pp.q(), a, b, limits);
      embed.expect(verify_m2(w), "(" + std::to_string(a) + "," + std::to_string(b) + ")");
    }
  ledger.checks.push_back(embed.done());
  return ledger;
}

namespace io {

Json to_json(const VerificationLedger& ledger) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["suite"] = ledger.suite;
  j["p"] = ledger.p;
  j["k"] = ledger.k;
  Json checks = Json::array();
  for (const auto& c : ledger.checks) {
    Json entry;
    entry["name"] = c.name;
    entry["cases"] = c.cases;
    entry["passed"] = c.passed;
    entry["detail"] = c.detail;
    checks.push_back(std::move(entry));
  }
  j["checks"] = std::move(checks);
  j["passed"] = ledger.passed();
  return j;
}

}  // namespace io

}  // namespace gqr

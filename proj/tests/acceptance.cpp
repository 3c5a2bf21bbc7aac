// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gqr/classifier.hpp"
#include "gqr/errors.hpp"
#include "gqr/suites.hpp"

using namespace gqr;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail << "first failure: " << what << "; ";
    ok = ok && cond;
  }
};

// Witnesses produced by criteria 1-4, checked again by criterion 5.
std::vector<IsoWitness> found;

RingParams rp(Int n, Int a, Int b) { return RingParams::classification(n, a, b); }

void partition_counts(Outcome& o) {
  for (auto [p, k] : {std::pair{3, 1}, {5, 1}, {7, 1}, {3, 2}}) {
    const PrimePower pp(p, k);
    const auto start = std::chrono::steady_clock::now();
    const ClassReport report = brute_force_partition(pp.q());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(report.total() == class_count_pp(pp), "n = " + std::to_string(pp.q()));
    o.require(secs < (k == 1 ? 10.0 : 120.0), "runtime for n = " + std::to_string(pp.q()));
    o.detail << "n=" << pp.q() << ": " << report.total() << " classes; ";
    for (const auto& e : report.classes)
      for (const auto& [a, b] : e.members)
        if (const auto w = find_isomorphism(rp(pp.q(), a, b), e.rep)) found.push_back(*w);
        else o.require(false, "member not isomorphic to its representative");
  }
}

void composite_counts(Outcome& o) {
  o.require(class_count(15) == 16, "class_count(15)");
  o.require(class_count(45) == 40, "class_count(45)");
  o.require(class_count(105) == 32, "class_count(105)");
  std::set<std::string> labels;
  for (Int a = 0; a < 15; ++a)
    for (Int b = 0; b < 15; ++b) labels.insert(to_token(classify_n(a, b, 15)));
  o.require(labels.size() == 16, "label vectors over Z/15Z");

  std::mt19937_64 rng(15);
  std::uniform_int_distribution<Int> d(0, 14);
  int checks = 0;
  const Factorization f15 = factorize(15);
  for (const auto& pp : f15.factors()) {
    const Int q = pp.q();
    std::vector<CanonicalClass> reps;
    for (Int a = 0; a < q; ++a)
      for (Int b = 0; b < q; ++b) {
        const auto c = canonical_form(Residue::of(a, q), Residue::of(b, q), pp);
        if (c.rep_a == a && c.rep_b == b) reps.push_back(c);
      }
    for (int t = 0; t < 50; ++t) {
      const Int a = d(rng) % q, b = d(rng) % q;
      const auto c = canonical_form(Residue::of(a, q), Residue::of(b, q), pp);
      const auto own = find_isomorphism(rp(q, a, b), rp(q, c.rep_a, c.rep_b));
      o.require(own.has_value(), to_string(rp(q, a, b)) + " vs its representative");
      if (own) found.push_back(*own);
      const auto& other = reps[static_cast<std::size_t>(t) % reps.size()];
      const bool same = other == c;
      o.require(find_isomorphism(rp(q, a, b), rp(q, other.rep_a, other.rep_b)).has_value() == same,
                to_string(rp(q, a, b)) + " vs " + to_token(other));
      checks += 2;
    }
  }
  o.detail << "class_count 15/45/105 = " << class_count(15) << "/" << class_count(45) << "/"
           << class_count(105) << " (expected 16/40/32), " << labels.size() << " label vectors, " << checks
           << " oracle checks; ";
}

void constructive(Outcome& o) {
  std::size_t total = 0;
  for (auto [p, k] : {std::pair{3, 1}, {3, 2}, {5, 1}, {5, 2}}) {
    for (const auto& fam : admissible_families(PrimePower(p, k))) {
      const IsoWitness w = constructive_witness(fam);
      const WitnessCheck c = verify_witness(w);
      o.require(c.ok(), family_name(fam) + " " + to_string(w.source) + " -> " + to_string(w.target));
      found.push_back(w);
      ++total;
    }
  }
  o.detail << total << " closed-form witnesses verified; ";
}

void non_isomorphism(Outcome& o) {
  const PrimePower pp(3, 2);
  const auto pairs = predicted_distinct_pairs(pp, 2);
  std::map<std::string, int> per_reason;
  for (const auto& pr : pairs) {
    o.require(!find_isomorphism(pr.left, pr.right).has_value(),
              pr.reason + ": " + to_string(pr.left) + " vs " + to_string(pr.right));
    ++per_reason[pr.reason];
  }
  o.require(pairs.size() >= 20, "at least 20 predicted pairs");
  o.detail << pairs.size() << " distinct pairs (";
  for (const auto& [reason, n] : per_reason) o.detail << reason << " " << n << ", ";
  o.detail << "character-pair has no 0<s<r<k at k=2); ";
  // the character-pair statement first applies at k = 3
  int extra = 0;
  for (const auto& pr : predicted_distinct_pairs(PrimePower(3, 3), 2)) {
    if (pr.reason != "character-pair") continue;
    o.require(!find_isomorphism(pr.left, pr.right).has_value(),
              "character-pair: " + to_string(pr.left) + " vs " + to_string(pr.right));
    ++extra;
  }
  o.detail << "plus " << extra << " character-pair pairs over Z/27Z; ";
  if (const auto w = find_isomorphism(rp(9, 1, 1), rp(9, 2, 1))) found.push_back(*w);
}

void preservation(Outcome& o) {
  std::size_t n3 = 0, n9 = 0, other = 0;
  for (std::size_t idx = 0; idx < found.size(); ++idx) {
    const IsoWitness& w = found[idx];
    const Int n = w.source.n();
    // n = 3: all 81 elements; otherwise 10^4 random ones
    const WitnessCheck c = check_preservation(w, 10000, idx, /*exhaustive_limit=*/81);
    o.require(c.ok(), to_string(w.source) + " -> " + to_string(w.target) + ": " + to_string(c.defect));
    (n == 3 ? n3 : n == 9 ? n9 : other) += 1;
  }
  o.detail << n3 << " witnesses over Z/3Z exhaustively, " << n9 << " over Z/9Z and " << other
           << " others on 10^4 random elements; ";
}

void structure(Outcome& o) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 200; ++t) {
    const Int n = 3 + 2 * std::uniform_int_distribution<Int>(0, 48)(rng);
    std::uniform_int_distribution<Int> d(0, n - 1);
    const auto params = rp(n, d(rng), d(rng));
    o.require(check_associativity(params), "associativity of " + to_string(params));
  }
  const QuaternionRing r(rp(3, 1, 2));
  std::vector<Quat> all;
  for (Int x = 0; x < 81; ++x) all.emplace_back(r, x / 27, x / 9 % 3, x / 3 % 3, x % 3);
  for (const Quat& x : all)
    for (const Quat& y : all) o.require(norm(x * y) == norm(x) * norm(y), "norm over (1,2/Z3)");
  for (Int n : {9, 15}) {
    std::uniform_int_distribution<Int> d(0, n - 1);
    for (int t = 0; t < 10000; ++t) {
      const QuaternionRing ring(rp(n, d(rng), d(rng)));
      const Quat x(ring, d(rng), d(rng), d(rng), d(rng)), y(ring, d(rng), d(rng), d(rng), d(rng));
      o.require(norm(x * y) == norm(x) * norm(y), "norm over Z/" + std::to_string(n) + "Z");
    }
  }
  o.detail << "200 associativity checks, 6561 exhaustive and 2x10^4 random norm products; ";
}

void unit_case(Outcome& o) {
  int count = 0;
  for (Int n : {3, 5})
    for (Int a = 1; a < n; ++a)
      for (Int b = 1; b < n; ++b) {
        o.require(verify_m2(m2_witness(n, a, b)), "M2 embedding of (" + std::to_string(a) + "," +
                                                      std::to_string(b) + "/Z" + std::to_string(n) + ")");
        ++count;
      }
  o.detail << count << " unit pairs embedded in M2; ";
}

void congruences(Outcome& o) {
  for (Int p : {3, 5})
    for (int k = 2; k <= 3; ++k)
      for (int s = 1; s < k; ++s) {
        const PrimePower pp(p, k);
        const Int u = smallest_qnr(p).value;
        const auto e1 = congruence_count(CongruenceStyle::NonresidueForm, u, s, pp);
        const auto e2 = congruence_count(CongruenceStyle::ResidueForm, u, s, pp);
        o.require(e1 != e2, "dichotomy p=" + std::to_string(p) + " k=" + std::to_string(k) +
                                " s=" + std::to_string(s));
        o.detail << "p=" << p << ",k=" << k << ",s=" << s << ": " << e1 << "/" << e2 << "; ";
      }

  // N_i = {pure q : n(q) = 0, p q != 0} in (u p, p) and (p, p) over Z/9Z. The
  // congruences count the coordinate vectors of N_i mod p^(k-s) = 3.
  const Int p = 3, n = 9, s = 1, u = 2;
  for (auto [a, style] : {std::pair{u * p, CongruenceStyle::NonresidueForm}, {p, CongruenceStyle::ResidueForm}}) {
    const QuaternionRing r(rp(n, a, p));
    std::uint64_t card = 0;
    std::set<std::array<Int, 3>> coords;
    for (Int x1 = 0; x1 < n; ++x1)
      for (Int x2 = 0; x2 < n; ++x2)
        for (Int x3 = 0; x3 < n; ++x3) {
          const Quat q(r, 0, x1, x2, x3);
          if (norm(q).value != 0 || (q * p).is_zero()) continue;
          ++card;
          coords.insert({x1 % 3, x2 % 3, x3 % 3});
        }
    const auto count = congruence_count(style, u, static_cast<int>(s), PrimePower(3, 2));
    o.require(coords.size() == count, "N set coordinates mod 3 vs congruence count");
    o.require(card == 27 * count, "card(N) vs 3^3 * congruence count");
    o.detail << "N(" << a << "," << p << "/Z9): " << coords.size() << " classes mod 3, card " << card << "; ";
  }
}

}  // namespace

int main() {
  struct Criterion {
    const char* title;
    std::function<void(Outcome&)> body;
  };
  const std::vector<Criterion> criteria{
      {"class counts over prime powers", partition_counts},
      {"composite counting and CRT labels", composite_counts},
      {"closed-form isomorphism witnesses", constructive},
      {"predicted non-isomorphisms", non_isomorphism},
      {"conjugate, trace and norm preservation", preservation},
      {"associativity and norm multiplicativity", structure},
      {"unit pairs embed in M2", unit_case},
      {"congruence dichotomy", congruences},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].body(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %zu: %s [%.1fs] %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].title, secs,
                o.detail.str().c_str());
    std::fflush(stdout);
    all = all && o.ok;
  }
  return all ? 0 : 1;
}

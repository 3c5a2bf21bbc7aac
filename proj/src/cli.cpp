#include "gqr/cli.hpp"

#include <CLI11.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "gqr/classifier.hpp"
#include "gqr/errors.hpp"
#include "gqr/io.hpp"
#include "gqr/suites.hpp"

namespace gqr::cli {

namespace {

using io::Json;

struct Options {
  Int n = 0, a = 0, b = 0, a2 = 0, b2 = 0;
  Int p = 0;
  int k = 0;
  std::string suite;
  std::string format = "json";
  bool brute_force = false;
  Int max_n = 27;
  SearchLimits limits;
};

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

void require_odd(Int n) {
  if (n < 3 || n % 2 == 0)
    throw UnsupportedModulus("n must be odd and at least 3, got " + std::to_string(n));
}

void require_oracle_size(Int n, Int max_n) {
  if (n > max_n)
    throw CapExceeded("instance too large: oracle paths need n <= --max-n, got n = " + std::to_string(n),
                      static_cast<std::uint64_t>(max_n));
}

std::string pair_text(Int a, Int b) { return "(" + std::to_string(a) + "," + std::to_string(b) + ")"; }

int classify(const Options& o, std::ostream& out) {
  require_odd(o.n);
  const auto classes = classify_n(o.a, o.b, o.n);
  const auto [ra, rb] = canonical_representative(o.a, o.b, o.n);
  const Int a = reduce(o.a, o.n), b = reduce(o.b, o.n);
  if (o.format == "json") {
    Json j;
    j["schema_version"] = io::kSchemaVersion;
    j["n"] = o.n;
    j["params"] = {a, b};
    Json comps = Json::array();
    for (const auto& c : classes) comps.push_back(io::to_json(c));
    j["components"] = std::move(comps);
    j["token"] = to_token(classes);
    j["rep"] = {ra, rb};
    emit(out, j);
  } else if (o.format == "csv") {
    out << "n,a,b,rep_a,rep_b,canonical_tags\n"
        << o.n << ',' << a << ',' << b << ',' << ra << ',' << rb << ',' << to_token(classes) << '\n';
  } else {
    out << to_token(classes) << '\n' << "rep " << pair_text(ra, rb) << '\n';
    for (const auto& c : classes)
      out << "  " << c.pp.p() << '^' << c.pp.k() << ": " << io::tag_name(c.tag) << " s=" << c.s
          << " r=" << c.r << " rep " << pair_text(c.rep_a, c.rep_b) << '\n';
  }
  return kOk;
}

int count(const Options& o, std::ostream& out) {
  require_odd(o.n);
  const std::uint64_t formula = class_count(o.n);
  std::optional<std::uint64_t> brute;
  if (o.brute_force) brute = brute_force_partition(o.n, o.max_n, o.limits).total();
  const bool equal = !brute || *brute == formula;
  const char* verdict = equal ? "EQUAL" : "DIFFERENT";

  if (o.format == "json") {
    Json j;
    j["schema_version"] = io::kSchemaVersion;
    j["n"] = o.n;
    j["formula"] = formula;
    Json factors = Json::array();
    const Factorization f = factorize(o.n);
    for (const auto& pp : f.factors())
      factors.push_back({{"p", pp.p()}, {"k", pp.k()}, {"count", class_count_pp(pp)}});
    j["factors"] = std::move(factors);
    if (brute) {
      j["brute_force"] = *brute;
      j["verdict"] = verdict;
    }
    emit(out, j);
  } else if (o.format == "csv") {
    out << "n,formula,brute_force,verdict\n" << o.n << ',' << formula << ',';
    if (brute) out << *brute << ',' << verdict;
    else out << ',';
    out << '\n';
  } else {
    out << "formula " << formula << '\n';
    if (brute) out << "brute force " << *brute << '\n' << "verdict " << verdict << '\n';
  }
  return equal ? kOk : kVerificationFailed;
}

int iso(const Options& o, std::ostream& out) {
  require_odd(o.n);
  require_oracle_size(o.n, o.max_n);
  const auto left = RingParams::classification(o.n, o.a, o.b);
  const auto right = RingParams::classification(o.n, o.a2, o.b2);
  const auto w = find_isomorphism(left, right, o.limits);

  Json j;
  j["schema_version"] = io::kSchemaVersion;
  j["n"] = o.n;
  j["source"] = {left.a(), left.b()};
  j["target"] = {right.a(), right.b()};
  std::ostringstream text;
  if (w) {
    const WitnessCheck check = verify_witness(*w);
    if (!check) throw InternalContradiction("search returned a witness failing verification: " + check.detail);
    j["verdict"] = "isomorphic";
    j["witness"] = io::to_json(*w);
    text << "isomorphic\n";
    for (int r = 0; r < 4; ++r)
      text << "  " << w->matrix(r, 0) << ' ' << w->matrix(r, 1) << ' ' << w->matrix(r, 2) << ' '
           << w->matrix(r, 3) << '\n';
  } else {
    j["verdict"] = "non-isomorphic";
    const Fingerprint fl = fingerprint(left, o.limits), fr = fingerprint(right, o.limits);
    text << "non-isomorphic\n";
    if (const auto d = first_difference(fl, fr)) {
      j["distinguishing"] = {{"component", d->component}, {"key", d->key}, {"left", d->left}, {"right", d->right}};
      text << "distinguishing " << d->component << (d->component == "isotropic_count" ? " p=" : " t=")
           << d->key << " (" << d->left << " vs " << d->right << ")\n";
    } else {
      j["distinguishing"] = nullptr;
      text << "fingerprints agree; separated by exhaustive search\n";
    }
    Json bins = Json::array();
    for (std::size_t t = 0; t < fl.pure_square_histogram.size(); ++t)
      if (fl.pure_square_histogram[t] != fr.pure_square_histogram[t]) bins.push_back(t);
    if (!bins.empty()) {
      text << "differing bins";
      for (const auto& t : bins) text << ' ' << t.get<std::size_t>();
      text << '\n';
    }
    j["differing_bins"] = std::move(bins);
  }

  if (o.format == "json") {
    emit(out, j);
  } else if (o.format == "csv") {
    out << "n,a,b,a2,b2,verdict\n"
        << o.n << ',' << left.a() << ',' << left.b() << ',' << right.a() << ',' << right.b() << ','
        << j["verdict"].get<std::string>() << '\n';
  } else {
    out << text.str();
  }
  return kOk;
}

int enumerate(const Options& o, std::ostream& out) {
  require_odd(o.n);
  const ClassReport report = brute_force_partition(o.n, o.max_n, o.limits);
  if (o.format == "json") {
    emit(out, io::to_json(report));
  } else if (o.format == "csv") {
    out << io::to_csv(report);
  } else {
    out << report.total() << " classes over Z/" << o.n << "Z\n";
    for (const auto& e : report.classes)
      out << "  " << pair_text(e.rep.a(), e.rep.b()) << " size " << e.size << "  "
          << to_token(classify_n(e.rep.a(), e.rep.b(), o.n)) << '\n';
  }
  return kOk;
}

int verify(const Options& o, std::ostream& out) {
  const PrimePower pp(o.p, o.k);
  VerificationLedger ledger;
  if (o.suite == "m2") {
    ledger = run_m2_suite(pp, o.limits);
  } else {
    require_oracle_size(pp.q(), o.max_n);
    ledger = o.suite == "lemmas" ? run_lemma_suite(pp, o.limits) : run_invariant_suite(pp, o.max_n, o.limits);
  }
  if (o.format == "json") {
    emit(out, io::to_json(ledger));
  } else if (o.format == "csv") {
    out << "suite,p,k,check,cases,passed,detail\n";
    for (const auto& c : ledger.checks)
      out << ledger.suite << ',' << ledger.p << ',' << ledger.k << ',' << c.name << ',' << c.cases << ','
          << (c.passed ? "true" : "false") << ',' << (c.passed ? "" : "failed") << '\n';
  } else {
    for (const auto& c : ledger.checks)
      out << (c.passed ? "PASS " : "FAIL ") << c.name << "  " << c.detail << '\n';
    out << (ledger.passed() ? "all checks passed" : "some checks failed") << '\n';
  }
  return ledger.passed() ? kOk : kVerificationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized quaternion rings (a,b / Z/nZ) over odd n", "gqr"};
  app.require_subcommand(1);
  Options o;

  auto caps = [&o](CLI::App* sub) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--max-n", o.max_n, "Largest modulus for exhaustive oracle paths")->capture_default_str();
    sub->add_option("--enum-cap", o.limits.enumeration_cap, "Largest n^3 scanned by searches")
        ->capture_default_str();
    sub->add_option("--m2-cap", o.limits.m2_cap, "Largest modulus for the 2x2 matrix search")
        ->capture_default_str();
    sub->add_option("--workers", o.limits.workers, "Search threads")->check(CLI::PositiveNumber);
  };

  auto* classify_cmd = app.add_subcommand("classify", "Canonical class per prime power");
  classify_cmd->add_option("--n", o.n)->required();
  classify_cmd->add_option("--a", o.a)->required();
  classify_cmd->add_option("--b", o.b)->required();
  caps(classify_cmd);

  auto* count_cmd = app.add_subcommand("count", "Number of isomorphism classes");
  count_cmd->add_option("--n", o.n)->required();
  count_cmd->add_flag("--brute-force", o.brute_force, "Also partition all pairs exhaustively");
  caps(count_cmd);

  auto* iso_cmd = app.add_subcommand("iso", "Decide whether two rings are isomorphic");
  iso_cmd->add_option("--n", o.n)->required();
  iso_cmd->add_option("--a", o.a)->required();
  iso_cmd->add_option("--b", o.b)->required();
  iso_cmd->add_option("--a2", o.a2)->required();
  iso_cmd->add_option("--b2", o.b2)->required();
  caps(iso_cmd);

  auto* enum_cmd = app.add_subcommand("enumerate", "Partition all pairs into classes");
  enum_cmd->add_option("--n", o.n)->required();
  caps(enum_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "Run a self-checking suite over Z/p^kZ");
  verify_cmd->add_option("--suite", o.suite)->required()->check(CLI::IsMember({"lemmas", "invariants", "m2"}));
  verify_cmd->add_option("--p", o.p)->required();
  verify_cmd->add_option("--k", o.k)->required()->check(CLI::PositiveNumber);
  caps(verify_cmd);

  std::vector<const char*> argv{"gqr"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*classify_cmd) return classify(o, out);
    if (*count_cmd) return count(o, out);
    if (*iso_cmd) return iso(o, out);
    if (*enum_cmd) return enumerate(o, out);
    return verify(o, out);
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const UnsupportedModulus& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InternalContradiction& e) {
    err << "verification failure: " << e.what() << '\n';
    return kVerificationFailed;
  }
}

}  // namespace gqr::cli

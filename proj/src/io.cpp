#include "gqr/io.hpp"

#include <sstream>

#include "gqr/errors.hpp"

namespace gqr::io {

std::string tag_name(ClassTag tag) {
  switch (tag) {
    case ClassTag::Unit: return "UNIT";
    case ClassTag::CharA: return "CHI_A";
    case ClassTag::CharProduct: return "CHI_PROD";
    case ClassTag::CharPair: return "CHI_PAIR";
    case ClassTag::Zero: return "ZERO";
  }
  return "UNKNOWN";
}

namespace {

template <typename Derived>
Json rows(const Eigen::MatrixBase<Derived>& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

const char* chi_name(QuadraticCharacter c) { return c == QuadraticCharacter::QR ? "QR" : "QNR"; }

}  // namespace

Json to_json(const IsoWitness& w) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = w.source.n();
  j["source"] = {w.source.a(), w.source.b()};
  j["target"] = {w.target.a(), w.target.b()};
  j["matrix"] = rows(w.matrix);
  return j;
}

Json to_json(const M2Witness& w) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = w.n;
  j["params"] = {w.a, w.b};
  j["I"] = rows(w.I);
  j["J"] = rows(w.J);
  return j;
}

Json to_json(const CanonicalClass& c) {
  Json j;
  j["p"] = c.pp.p();
  j["k"] = c.pp.k();
  j["s"] = c.s;
  j["r"] = c.r;
  j["tag"] = tag_name(c.tag);
  Json chars = Json::array();
  if (c.chi) chars.push_back(chi_name(*c.chi));
  if (c.chi_b) chars.push_back(chi_name(*c.chi_b));
  j["characters"] = chars;
  j["rep"] = {c.rep_a, c.rep_b};
  j["token"] = to_token(c);
  return j;
}

Json to_json(const ClassReport& report) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = report.n;
  j["total"] = report.total();
  Json classes = Json::array();
  for (const auto& entry : report.classes) {
    Json c;
    c["rep"] = {entry.rep.a(), entry.rep.b()};
    c["size"] = entry.size;
    c["canonical_tags"] = to_token(classify_n(entry.rep.a(), entry.rep.b(), report.n));
    classes.push_back(std::move(c));
  }
  j["classes"] = std::move(classes);
  return j;
}

std::string to_csv(const ClassReport& report) {
  std::ostringstream os;
  os << "n,rep_a,rep_b,class_size,canonical_tags\n";
  for (const auto& entry : report.classes)
    os << report.n << ',' << entry.rep.a() << ',' << entry.rep.b() << ',' << entry.size << ','
       << to_token(classify_n(entry.rep.a(), entry.rep.b(), report.n)) << '\n';
  return os.str();
}

IsoWitness witness_from_json(const Json& j) {
  try {
    const Int n = j.at("n").get<Int>();
    const auto src = RingParams::arithmetic(n, j.at("source").at(0).get<Int>(),
                                            j.at("source").at(1).get<Int>());
    const auto tgt = RingParams::arithmetic(n, j.at("target").at(0).get<Int>(),
                                            j.at("target").at(1).get<Int>());
    Mat4 m;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) m(r, c) = j.at("matrix").at(r).at(c).get<Int>();
    return witness_from_matrix(src, tgt, m);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed witness JSON: ") + e.what());
  }
}

}  // namespace gqr::io

#include "relbetti/report.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "relbetti/error.hpp"

namespace relbetti {

using Json = nlohmann::ordered_json;

namespace {

// ------------------------------------------------------------ parsing

struct Ctx {
  std::string origin;

  [[noreturn]] void fail(const std::string& path, const std::string& msg) const {
    throw ParseError(origin + ": " + (path.empty() ? "/" : path) + ": " + msg);
  }

  const Json& at(const Json& obj, const std::string& path, const char* key) const {
    if (!obj.is_object()) fail(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing field \"") + key + "\"");
    return *it;
  }

  const Json& array(const Json& obj, const std::string& path, const char* key) const {
    const Json& a = at(obj, path, key);
    if (!a.is_array()) fail(path + "/" + key, "expected an array");
    return a;
  }

  std::string str(const Json& j, const std::string& path) const {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }

  size_t count(const Json& j, const std::string& path) const {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<int64_t>() >= 0)) fail(path, "expected a nonnegative integer");
    return j.get<size_t>();
  }

  Rational rational(const Json& j, const std::string& path) const {
    if (j.is_number_integer()) return Rational(j.get<int64_t>());
    if (!j.is_string()) fail(path, "expected a rational such as \"1/2\"");
    try {
      return Rational::parse(j.get<std::string>());
    } catch (const std::exception& e) {
      fail(path, e.what());
    }
  }

  GScalar scalar(const Json& j, const std::string& path) const {
    if (j.is_number_integer()) return GScalar(j.get<int64_t>());
    if (!j.is_string()) fail(path, "expected a scalar such as \"1/2-i\"");
    try {
      return GScalar::parse(j.get<std::string>());
    } catch (const std::exception& e) {
      fail(path, e.what());
    }
  }
};

std::string fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream o;
  o << "fnv1a64:" << std::hex;
  o.width(16);
  o.fill('0');
  o << h;
  return o.str();
}

FiniteMeasuredSpace parse_base(const Ctx& c, const Json& obj, const std::string& path) {
  auto it = obj.find("base");
  if (it == obj.end()) return FiniteMeasuredSpace::point();
  std::string p = path + "/base";
  if (it->is_number()) return FiniteMeasuredSpace::uniform(c.count(*it, p));
  if (it->contains("atoms")) return FiniteMeasuredSpace::uniform(c.count(c.at(*it, p, "atoms"), p + "/atoms"));
  FiniteMeasuredSpace x;
  const Json& labels = c.array(*it, p, "labels");
  const Json& weights = c.array(*it, p, "weights");
  if (labels.size() != weights.size()) c.fail(p, "labels and weights differ in length");
  for (size_t k = 0; k < labels.size(); ++k) {
    x.labels.push_back(c.str(labels[k], p + "/labels/" + std::to_string(k)));
    x.weights.push_back(c.rational(weights[k], p + "/weights/" + std::to_string(k)));
  }
  return x;
}

Atom parse_atom(const Ctx& c, const FiniteMeasuredSpace& x, const Json& j, const std::string& path) {
  if (j.is_string()) {
    auto a = x.find(j.get<std::string>());
    if (!a) c.fail(path, "unknown atom \"" + j.get<std::string>() + "\"");
    return *a;
  }
  size_t a = c.count(j, path);
  if (a >= x.size()) c.fail(path, "atom index out of range");
  return Atom(a);
}

FiniteGroup parse_group(const Ctx& c, const Json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return FiniteGroup::named(j.get<std::string>());
    } catch (const Error&) {
      c.fail(path, "unknown group \"" + j.get<std::string>() + "\"");
    }
  }
  FiniteGroup g;
  const Json& labels = c.array(j, path, "labels");
  const Json& table = c.array(j, path, "table");
  for (size_t k = 0; k < labels.size(); ++k) g.labels.push_back(c.str(labels[k], path + "/labels/" + std::to_string(k)));
  if (table.size() != labels.size()) c.fail(path + "/table", "table size differs from the number of labels");
  for (size_t a = 0; a < table.size(); ++a) {
    std::string rp = path + "/table/" + std::to_string(a);
    if (!table[a].is_array() || table[a].size() != labels.size()) c.fail(rp, "row has the wrong length");
    std::vector<uint32_t> row;
    for (size_t b = 0; b < table[a].size(); ++b) {
      size_t v = c.count(table[a][b], rp + "/" + std::to_string(b));
      if (v >= labels.size()) c.fail(rp + "/" + std::to_string(b), "entry out of range");
      row.push_back(uint32_t(v));
    }
    g.table.push_back(std::move(row));
  }
  return g;
}

FiniteGroupoid parse_groupoid(const Ctx& c, const Json& j, const std::string& path) {
  std::string how = c.str(c.at(j, path, "construction"), path + "/construction");
  FiniteMeasuredSpace x = parse_base(c, j, path);
  if (how == "trivial") return build::trivial(x);
  if (how == "pair_relation") return build::pair_relation(x);
  if (how == "from_group") return build::from_group(parse_group(c, c.at(j, path, "group"), path + "/group"));
  if (how == "partition_relation") {
    std::vector<std::vector<Atom>> blocks;
    const Json& bs = c.array(j, path, "blocks");
    for (size_t b = 0; b < bs.size(); ++b) {
      std::string bp = path + "/blocks/" + std::to_string(b);
      if (!bs[b].is_array()) c.fail(bp, "expected an array of atoms");
      std::vector<Atom> block;
      for (size_t k = 0; k < bs[b].size(); ++k) block.push_back(parse_atom(c, x, bs[b][k], bp + "/" + std::to_string(k)));
      blocks.push_back(std::move(block));
    }
    return build::partition_relation(x, blocks);
  }
  if (how == "action_groupoid") {
    FiniteGroup g = parse_group(c, c.at(j, path, "group"), path + "/group");
    const Json& act = c.array(j, path, "action");
    if (act.size() != g.order()) c.fail(path + "/action", "one row per group element expected");
    std::vector<std::vector<Atom>> action;
    for (size_t k = 0; k < act.size(); ++k) {
      std::string rp = path + "/action/" + std::to_string(k);
      if (!act[k].is_array() || act[k].size() != x.size()) c.fail(rp, "one image per atom expected");
      std::vector<Atom> row;
      for (size_t a = 0; a < act[k].size(); ++a) row.push_back(parse_atom(c, x, act[k][a], rp + "/" + std::to_string(a)));
      action.push_back(std::move(row));
    }
    return build::action_groupoid(g, x, action);
  }
  if (how == "explicit") {
    const Json& els = c.array(j, path, "elements");
    std::vector<std::string> labels;
    std::vector<Atom> src, tgt;
    std::map<std::string, Elem> idx;
    for (size_t k = 0; k < els.size(); ++k) {
      std::string ep = path + "/elements/" + std::to_string(k);
      std::string l = c.str(c.at(els[k], ep, "label"), ep + "/label");
      if (!idx.emplace(l, Elem(k)).second) c.fail(ep, "duplicate label \"" + l + "\"");
      labels.push_back(l);
      src.push_back(parse_atom(c, x, c.at(els[k], ep, "source"), ep + "/source"));
      tgt.push_back(parse_atom(c, x, c.at(els[k], ep, "target"), ep + "/target"));
    }
    auto elem = [&](const Json& e, const std::string& p) {
      auto it = idx.find(c.str(e, p));
      if (it == idx.end()) c.fail(p, "unknown element \"" + e.get<std::string>() + "\"");
      return it->second;
    };
    std::vector<Elem> inv(labels.size(), kNoElem);
    for (size_t k = 0; k < els.size(); ++k) {
      std::string ep = path + "/elements/" + std::to_string(k);
      inv[k] = elem(c.at(els[k], ep, "inverse"), ep + "/inverse");
    }
    size_t n = labels.size();
    std::vector<Elem> comp(n * n, kNoElem);
    const Json& prods = c.array(j, path, "products");
    for (size_t k = 0; k < prods.size(); ++k) {
      std::string pp = path + "/products/" + std::to_string(k);
      if (!prods[k].is_array() || prods[k].size() != 3) c.fail(pp, "expected [a, b, ab]");
      Elem a = elem(prods[k][0], pp + "/0"), b = elem(prods[k][1], pp + "/1");
      comp[size_t(a) * n + b] = elem(prods[k][2], pp + "/2");
    }
    return FiniteGroupoid(x, labels, src, tgt, inv, comp);
  }
  c.fail(path + "/construction", "unknown groupoid construction \"" + how + "\"");
}

TwoCocycle parse_cocycle_values(const Ctx& c, const FiniteGroupoid& r, const Json& j, const std::string& path) {
  const auto& x = r.base();
  if (j.contains("values")) {
    TwoCocycle s;
    const Json& vs = c.array(j, path, "values");
    for (size_t k = 0; k < vs.size(); ++k) {
      std::string vp = path + "/values/" + std::to_string(k);
      if (!vs[k].is_array() || vs[k].size() != 4) c.fail(vp, "expected [x, y, z, value]");
      std::array<Atom, 3> key{parse_atom(c, x, vs[k][0], vp + "/0"), parse_atom(c, x, vs[k][1], vp + "/1"),
                              parse_atom(c, x, vs[k][2], vp + "/2")};
      s.values[key] = c.scalar(vs[k][3], vp + "/3");
    }
    return s;
  }
  if (j.contains("coboundary")) {
    std::map<std::pair<Atom, Atom>, GScalar> cv;
    const Json& vs = c.array(j, path, "coboundary");
    for (size_t k = 0; k < vs.size(); ++k) {
      std::string vp = path + "/coboundary/" + std::to_string(k);
      if (!vs[k].is_array() || vs[k].size() != 3) c.fail(vp, "expected [x, y, value]");
      cv[{parse_atom(c, x, vs[k][0], vp + "/0"), parse_atom(c, x, vs[k][1], vp + "/1")}] = c.scalar(vs[k][2], vp + "/2");
    }
    return coboundary(r, cv);
  }
  c.fail(path, "a cocycle needs \"values\" or \"coboundary\"");
}

SVec parse_vector(const Ctx& c, const TracialStarAlgebra& a, const Json& j, const std::string& path) {
  if (!j.is_object()) c.fail(path, "expected an object mapping basis labels to coefficients");
  std::vector<SEntry> e;
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto k = a.find(it.key());
    if (!k) c.fail(path, "unknown basis label \"" + it.key() + "\"");
    e.push_back({*k, c.scalar(it.value(), path + "/" + it.key())});
  }
  return svec_from_pairs(e);
}

Extension parse_explicit_algebra(const Ctx& c, const Json& j, const std::string& path) {
  const Json& ls = c.array(j, path, "labels");
  std::vector<std::string> labels;
  for (size_t k = 0; k < ls.size(); ++k) labels.push_back(c.str(ls[k], path + "/labels/" + std::to_string(k)));
  Index d = Index(labels.size());
  // A scaffold algebra only used to resolve labels.
  TracialStarAlgebra names(labels, std::vector<SVec>(size_t(d) * d), {}, std::vector<SVec>(d), std::vector<GScalar>(d));
  std::vector<SVec> prod(size_t(d) * d), star(d);
  const Json& ps = c.array(j, path, "products");
  for (size_t k = 0; k < ps.size(); ++k) {
    std::string pp = path + "/products/" + std::to_string(k);
    if (!ps[k].is_array() || ps[k].size() != 3) c.fail(pp, "expected [a, b, {label: coefficient}]");
    auto a = names.find(c.str(ps[k][0], pp + "/0"));
    auto b = names.find(c.str(ps[k][1], pp + "/1"));
    if (!a || !b) c.fail(pp, "unknown basis label");
    prod[size_t(*a) * d + *b] = parse_vector(c, names, ps[k][2], pp + "/2");
  }
  SVec unit = parse_vector(c, names, c.at(j, path, "unit"), path + "/unit");
  const Json& st = c.at(j, path, "star");
  if (!st.is_object()) c.fail(path + "/star", "expected an object");
  for (Index k = 0; k < d; ++k) {
    if (!st.contains(labels[k])) c.fail(path + "/star", "missing star of \"" + labels[k] + "\"");
    star[k] = parse_vector(c, names, st[labels[k]], path + "/star/" + labels[k]);
  }
  std::vector<GScalar> tr(d);
  const Json& t = c.at(j, path, "trace");
  if (!t.is_object()) c.fail(path + "/trace", "expected an object");
  for (auto it = t.begin(); it != t.end(); ++it) {
    auto k = names.find(it.key());
    if (!k) c.fail(path + "/trace", "unknown basis label \"" + it.key() + "\"");
    tr[*k] = c.scalar(it.value(), path + "/trace/" + it.key());
  }
  TracialStarAlgebra alg(labels, prod, unit, star, tr);
  std::vector<SVec> sub;
  const Json& sb = c.array(j, path, "sub");
  for (size_t k = 0; k < sb.size(); ++k) sub.push_back(parse_vector(c, alg, sb[k], path + "/sub/" + std::to_string(k)));
  auto av = alg.validate();
  if (!av.ok()) throw PreconditionError("algebra fails " + av.violations.front().axiom, {av.violations.front().witness});
  Extension e = conditional_expectation(std::move(alg), std::move(sub));
  if (j.contains("unitaries")) {
    const Json& us = c.array(j, path, "unitaries");
    for (size_t k = 0; k < us.size(); ++k)
      e.known_unitaries.push_back(parse_vector(c, e.algebra, us[k], path + "/unitaries/" + std::to_string(k)));
  }
  e.name = "explicit";
  return e;
}

void parse_extension(const Ctx& c, const Json& j, const std::string& path, Document& d);

void parse_cocycle(const Ctx& c, const Json& j, const std::string& path, Document& d) {
  d.groupoid = parse_groupoid(c, c.at(j, path, "relation"), path + "/relation");
  d.cocycle = parse_cocycle_values(c, *d.groupoid, j, path);
}

Extension extension_of(const Ctx& c, const Json& j, const std::string& path) {
  Document inner;
  parse_extension(c, j, path, inner);
  return *inner.extension;
}

void parse_extension(const Ctx& c, const Json& j, const std::string& path, Document& d) {
  std::string how = c.str(c.at(j, path, "construction"), path + "/construction");
  auto size = [&]() { return Index(c.count(c.at(j, path, "n"), path + "/n")); };
  if (how == "group_algebra") {
    d.groupoid = build::from_group(parse_group(c, c.at(j, path, "group"), path + "/group"));
    d.extension = convolution_algebra(*d.groupoid);
    d.extension->name = "CG/C";
  } else if (how == "matrix_over_scalars") {
    d.extension = matrix_over_scalars(size());
  } else if (how == "matrix_over_diagonal") {
    d.extension = matrix_over_diagonal(size());
  } else if (how == "matrix_over_itself") {
    d.extension = full_extension(matrix_algebra(size()));
  } else if (how == "convolution") {
    d.groupoid = parse_groupoid(c, c.at(j, path, "groupoid"), path + "/groupoid");
    d.extension = convolution_algebra(*d.groupoid);
  } else if (how == "twisted_convolution") {
    parse_cocycle(c, c.at(j, path, "cocycle"), path + "/cocycle", d);
    d.extension = twisted_convolution(*d.groupoid, *d.cocycle);
  } else if (how == "explicit") {
    d.extension = parse_explicit_algebra(c, j, path);
  } else {
    c.fail(path + "/construction", "unknown extension construction \"" + how + "\"");
  }
}

Extension need_extension(const Document& d) {
  if (d.extension) return *d.extension;
  if (d.kind == "cocycle") return twisted_convolution(*d.groupoid, *d.cocycle);
  if (d.kind == "groupoid") return convolution_algebra(*d.groupoid);
  if (d.kind == "weighted_sum") return weighted_sum(d.parts, d.weights, d.mode);
  throw PreconditionError("no algebra in a " + d.kind + " document");
}

const FiniteGroupoid& need_groupoid(const Document& d) {
  if (!d.groupoid) throw PreconditionError("this command needs a groupoid input (" + d.kind + " given)");
  return *d.groupoid;
}

// ------------------------------------------------------------ rendering

std::string show(const TracialStarAlgebra& a, const SVec& v) {
  if (v.empty()) return "0";
  std::string out;
  for (const auto& e : v) {
    if (!out.empty()) out += " + ";
    out += e.v.is_one() ? a.label(e.i) : "(" + e.v.to_string() + ")" + a.label(e.i);
  }
  return out;
}

Json rationals(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& r : v) a.push_back(r.to_string());
  return a;
}

Json pairs(const std::vector<std::pair<std::string, std::string>>& v) {
  Json o = Json::object();
  for (const auto& [k, x] : v) o[k] = x;
  return o;
}

Json validation(const ValidationReport& r) {
  Json o;
  o["valid"] = r.ok();
  Json vs = Json::array();
  for (const auto& v : r.violations) vs.push_back({{"axiom", v.axiom}, {"witness", v.witness}});
  o["violations"] = vs;
  o["facts"] = pairs(r.facts);
  return o;
}

Json table(const BettiTable& t, const Document& d) {
  Json o;
  o["pipeline"] = t.pipeline;
  o["N"] = t.degree_cap;
  o["betti"] = rationals(t.betti);
  o["homology_dims"] = t.homology_dims;
  o["certified_by_ranks"] = t.certified_by_ranks;
  Json m = pairs(t.metadata);
  m["input hash"] = d.hash;
  o["metadata"] = m;
  return o;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::ok: return "ok";
    case Outcome::discrepancy: return "discrepancy";
    case Outcome::input_error: return "input_error";
    case Outcome::internal_error: return "internal_error";
  }
  return "?";
}

Json input_info(const Document& d) {
  return {{"origin", d.origin}, {"kind", d.kind}, {"name", d.name}, {"hash", d.hash}};
}

Report finish(Json j, Outcome o) {
  j["status"] = outcome_name(o);
  return Report{o, j.dump(2) + "\n"};
}

Report guarded(const std::string& command, const Document& d, const Json& config,
               const std::function<Outcome(Json&)>& body) {
  Json j;
  j["command"] = command;
  j["input"] = input_info(d);
  j["config"] = config;
  Json result = Json::object();
  Outcome o = Outcome::ok;
  try {
    o = body(result);
    j["result"] = result;
  } catch (const PreconditionError& e) {
    o = Outcome::input_error;
    j["error"] = {{"message", e.what()}, {"witnesses", e.witnesses()}};
  } catch (const ParseError& e) {
    o = Outcome::input_error;
    j["error"] = {{"message", e.what()}, {"witnesses", Json::array()}};
  } catch (const std::exception& e) {
    o = Outcome::internal_error;
    j["error"] = {{"message", e.what()}, {"witnesses", Json::array()}};
  }
  return finish(std::move(j), o);
}

Json config_of(const RunOptions& opt) {
  return {{"N", opt.degree_cap}, {"pipeline", opt.pipeline}, {"extended_scope", opt.extended_scope}};
}

void check_degree_cap(const RunOptions& opt) {
  if (opt.degree_cap < 1) throw PreconditionError("N must be at least 1");
}

bool phi_tracial(const FiberSquare& f) {
  for (Index a = 0; a < f.dim(); ++a)
    for (Index b = a + 1; b < f.dim(); ++b)
      if (!(f.phi(f.basis[a] * f.basis[b]) == f.phi(f.basis[b] * f.basis[a]))) return false;
  return true;
}

std::vector<SVec> corpus_projections(const Extension& e, const Document& d) {
  const auto& a = e.algebra;
  std::vector<SVec> out{a.unit()};
  for (const auto& b : e.sub)
    if (is_projection(a, b) && e.commutes_with_sub(b) && b != a.unit()) out.push_back(b);
  if (!d.projection.empty() && e.commutes_with_sub(d.projection)) out.push_back(d.projection);
  return out;
}

}  // namespace

// ------------------------------------------------------------ documents

Document parse_document(const std::string& text, const std::string& origin) {
  Ctx c{origin};
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(origin + ": byte " + std::to_string(e.byte) + ": malformed JSON");
  }
  Document d;
  d.origin = origin;
  d.hash = fnv1a(text);
  d.kind = c.str(c.at(j, "", "kind"), "/kind");
  if (j.contains("name")) d.name = c.str(j["name"], "/name");
  if (d.kind == "groupoid") {
    d.groupoid = parse_groupoid(c, j, "");
  } else if (d.kind == "extension") {
    parse_extension(c, j, "", d);
  } else if (d.kind == "cocycle") {
    parse_cocycle(c, j, "", d);
  } else if (d.kind == "weighted_sum") {
    std::string mode = c.str(c.at(j, "", "mode"), "/mode");
    if (mode == "componentwise") {
      d.mode = SumMode::componentwise;
    } else if (mode == "central") {
      d.mode = SumMode::central;
    } else {
      c.fail("/mode", "expected \"componentwise\" or \"central\"");
    }
    const Json& ps = c.array(j, "", "parts");
    if (ps.empty()) c.fail("/parts", "at least one part expected");
    for (size_t k = 0; k < ps.size(); ++k) {
      std::string pp = "/parts/" + std::to_string(k);
      d.weights.push_back(c.rational(c.at(ps[k], pp, "weight"), pp + "/weight"));
      d.parts.push_back(extension_of(c, c.at(ps[k], pp, "extension"), pp + "/extension"));
    }
  } else if (d.kind == "compression") {
    d.extension = extension_of(c, c.at(j, "", "extension"), "/extension");
    d.projection = parse_vector(c, d.extension->algebra, c.at(j, "", "projection"), "/projection");
  } else {
    c.fail("/kind", "unknown kind \"" + d.kind + "\"");
  }
  if (d.name.empty()) d.name = d.kind;
  return d;
}

Document load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream s;
  s << in.rdbuf();
  return parse_document(s.str(), std::filesystem::path(path).filename().string());
}

Report error_report(const std::string& command, const std::string& message, Outcome outcome,
                    const std::vector<std::string>& witnesses) {
  Json j;
  j["command"] = command;
  j["error"] = {{"message", message}, {"witnesses", witnesses}};
  return finish(std::move(j), outcome);
}

// ------------------------------------------------------------ commands

Report run_validate(const Document& d) {
  return guarded("validate", d, Json::object(), [&](Json& r) {
    bool ok = true;
    auto add = [&](const std::string& what, const ValidationReport& v) {
      r[what] = validation(v);
      ok = ok && v.ok();
    };
    if (d.groupoid) add("groupoid", d.groupoid->validate());
    if (d.kind == "cocycle") {
      add("cocycle", validate_cocycle(*d.groupoid, *d.cocycle));
      if (ok) {
        try {
          add("algebra", twisted_convolution(*d.groupoid, *d.cocycle).validate());
        } catch (const PreconditionError& e) {
          ValidationReport v;
          v.violations.push_back({"twisted algebra", e.what()});
          add("algebra", v);
        }
      }
    } else if (d.kind == "weighted_sum") {
      for (size_t k = 0; k < d.parts.size(); ++k) add("part " + std::to_string(k), d.parts[k].validate());
      add("sum", weighted_sum(d.parts, d.weights, d.mode).validate());
    } else if (d.kind == "groupoid") {
      if (ok) add("algebra", convolution_algebra(*d.groupoid).validate());
    } else {
      add("algebra", d.extension->validate());
    }
    if (d.kind == "compression") {
      const auto& e = *d.extension;
      ValidationReport v;
      if (!is_projection(e.algebra, d.projection)) v.violations.push_back({"projection", show(e.algebra, d.projection)});
      if (!e.commutes_with_sub(d.projection))
        v.violations.push_back({"commutes with B", show(e.algebra, d.projection)});
      v.facts.push_back({"central in B", e.in_center_of_sub(d.projection) ? "yes" : "no"});
      v.facts.push_back({"A is a factor", e.algebra.is_factor() ? "yes" : "no"});
      add("projection", v);
    }
    r["valid"] = ok;
    return ok ? Outcome::ok : Outcome::discrepancy;
  });
}

Report run_betti(const Document& d, const RunOptions& opt) {
  return guarded("betti", d, config_of(opt), [&](Json& r) {
    check_degree_cap(opt);
    const std::string& p = opt.pipeline;
    if (p != "hochschild" && p != "sauer" && p != "both") throw PreconditionError("unknown pipeline \"" + p + "\"");
    std::optional<BettiTable> h, s;
    if (p != "sauer") h = betti_hochschild(need_extension(d), opt.degree_cap);
    if (p != "hochschild") s = betti_sauer(need_groupoid(d), opt.degree_cap);
    Json tables = Json::array();
    if (h) tables.push_back(table(*h, d));
    if (s) tables.push_back(table(*s, d));
    r["tables"] = tables;
    if (h && s) {
      bool eq = h->betti == s->betti;
      r["pipelines_agree"] = eq;
      return eq ? Outcome::ok : Outcome::discrepancy;
    }
    return Outcome::ok;
  });
}

Report run_homology(const Document& d, const RunOptions& opt) {
  return guarded("homology", d, config_of(opt), [&](Json& r) {
    check_degree_cap(opt);
    size_t n = opt.degree_cap;
    auto describe = [&](const PresimplicialModule& p, const TracialStarAlgebra& f) {
      Json o;
      auto pv = p.validate();
      ChainComplex ch = boundary(p);
      o["complex"] = p.name;
      o["chain_dims"] = p.dims;
      o["presimplicial"] = pv.ok();
      o["d_squared_zero"] = ch.validate().ok();
      Json degs = Json::array();
      for (size_t k = 0; k < n; ++k) {
        HomologyResult h = homology(p, ch, k);
        Json e;
        e["degree"] = k;
        e["rank_d_n"] = h.rank_out;
        e["rank_d_n+1"] = h.rank_in;
        e["dim"] = h.dim;
        e["certified_by_ranks"] = h.certified_by_ranks;
        e["vn_dimension"] = vn_dimension(f, h.module).to_string();
        degs.push_back(e);
      }
      o["homology"] = degs;
      return std::make_pair(o, pv.ok());
    };
    const std::string& p = opt.pipeline;
    if (p != "hochschild" && p != "sauer" && p != "both") throw PreconditionError("unknown pipeline \"" + p + "\"");
    bool ok = true;
    Json out = Json::array();
    if (p != "sauer") {
      Extension e = need_extension(d);
      L2Complex l2 = l2_complex(e, n);
      auto [o, good] = describe(l2.complex.module, l2.square.algebra);
      o["fiber_square_dimension"] = l2.square.dim();
      out.push_back(o);
      ok = ok && good;
    }
    if (p != "hochschild") {
      const auto& g = need_groupoid(d);
      auto [o, good] = describe(geometric_complex(g, SpaceKind::classifying, n), convolution_algebra(g).algebra);
      out.push_back(o);
      ok = ok && good;
    }
    r["complexes"] = out;
    return ok ? Outcome::ok : Outcome::discrepancy;
  });
}

Report run_fiber_square(const Document& d, const RunOptions& opt) {
  return guarded("fiber-square", d, config_of(opt), [&](Json& r) {
    bool ok = true;
    Extension e = need_extension(d);
    FiberSquare f = fiber_square(e);
    r["tensor_dimension"] = f.tensor.dim();
    r["generators"] = f.generators.size();
    r["dimension"] = f.dim();
    bool tr = phi_tracial(f);
    r["phi_tracial"] = tr;
    ok = ok && tr;
    Json ps = Json::array();
    for (const auto& p : corpus_projections(e, d)) {
      auto c = projection_trace_identity(f, p);
      ps.push_back({{"p", show(e.algebra, p)},
                    {"tr(p*p)", c.square_side.to_string()},
                    {"tr_B(E(p)^2)", c.sub_side.to_string()},
                    {"equal", c.equal()}});
      ok = ok && c.equal();
    }
    r["projection_identity"] = ps;
    if (d.kind == "cocycle") {
      auto cmp = compare_twisted_fiber_square(*d.groupoid, *d.cocycle);
      r["cocycle"] = {{"identical", cmp.identical},
                      {"operator_spans_equal", cmp.operator_spans_equal},
                      {"twisted_dimension", cmp.twisted_dim},
                      {"untwisted_dimension", cmp.untwisted_dim},
                      {"detail", cmp.detail}};
      ok = ok && cmp.identical;
    } else if (d.groupoid && (d.kind == "groupoid" || e.name == "CG/Linf" || e.name == "CG/C")) {
      auto gf = groupoid_fiber_square(*d.groupoid);
      r["evaluation"] = {{"target", "C(G^e)"},
                         {"enveloping_size", gf.env.groupoid.size()},
                         {"isomorphism", gf.missing_dimension == 0 && gf.square.dim() == gf.env.groupoid.size()}};
      ok = ok && gf.missing_dimension == 0;
    }
    (void)opt;
    return ok ? Outcome::ok : Outcome::discrepancy;
  });
}

Report run_verify(const Document& d, const std::string& theorem, const RunOptions& opt) {
  Json config = config_of(opt);
  config["theorem"] = theorem;
  return guarded("verify", d, config, [&](Json& r) {
    check_degree_cap(opt);
    size_t n = opt.degree_cap;
    TheoremReport t;
    auto need_sum = [&](SumMode m) {
      if (d.kind != "weighted_sum" || d.mode != m)
        throw PreconditionError(theorem + " needs a weighted_sum document in " +
                                (m == SumMode::central ? "central" : "componentwise") + " mode");
    };
    if (theorem == "compression") {
      if (d.kind != "compression") throw PreconditionError("compression needs a compression document");
      t = verify_compression(*d.extension, d.projection, n, opt.extended_scope);
    } else if (theorem == "directed_sum") {
      need_sum(SumMode::componentwise);
      t = verify_directed_sum(d.parts, d.weights, n);
    } else if (theorem == "central_quadratic") {
      need_sum(SumMode::central);
      t = verify_central_quadratic(d.parts, d.weights, n);
    } else if (theorem == "groupoid_equality") {
      t = verify_groupoid_equality(need_groupoid(d), n);
    } else if (theorem == "residual") {
      t = verify_residual(need_groupoid(d), d.cocycle ? &*d.cocycle : nullptr, n);
    } else {
      throw PreconditionError("unknown theorem \"" + theorem + "\"");
    }
    r["theorem"] = t.theorem;
    r["lhs"] = rationals(t.lhs);
    r["rhs"] = rationals(t.rhs);
    r["equal"] = t.equal();
    r["discrepancy"] = rationals(t.discrepancy());
    r["details"] = pairs(t.details);
    r["failures"] = t.failures;
    std::string l0 = t.lhs.empty() ? "" : t.lhs[0].to_string(), r0 = t.rhs.empty() ? "" : t.rhs[0].to_string();
    r["summary"] = t.lhs == t.rhs ? "lhs = rhs = " + l0 : "lhs = " + l0 + ", rhs = " + r0;
    return t.equal() ? Outcome::ok : Outcome::discrepancy;
  });
}

}  // namespace relbetti

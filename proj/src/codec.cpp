#include "dyadcert/codec.hpp"

#include <algorithm>

namespace dyadcert::codec {

namespace {

[[noreturn]] void Fail(const std::string& path, const std::string& what) {
  throw InputError(path + ": " + what);
}

const Json& Field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) Fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) Fail(path, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string Sub(const std::string& path, const std::string& key) { return path + "." + key; }
std::string Sub(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }


}  // namespace

Json ParseDocument(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(source + ": parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

unsigned UnsignedFrom(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) Fail(path, "expected a non-negative integer");
  if (j.is_number_unsigned()) {
    const auto v = j.get<std::uint64_t>();
    if (v > 1000000) Fail(path, "integer out of range");
    return static_cast<unsigned>(v);
  }
  const auto v = j.get<std::int64_t>();
  if (v < 0 || v > 1000000) Fail(path, "expected a non-negative integer");
  return static_cast<unsigned>(v);
}

namespace {
std::uint64_t U64From(const Json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  Fail(path, "expected a non-negative integer");
}
}  // namespace

Rational RationalFrom(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) Fail(path, "expected a rational string \"p/q\"");
  try {
    return Rational::Parse(j.get<std::string>());
  } catch (const std::exception& e) {
    Fail(path, e.what());
  }
}

ClopenSet SetFrom(const Json& j, const std::string& path) {
  const unsigned level = UnsignedFrom(Field(j, "level", path), Sub(path, "level"));
  RequireLevel(level, "set at " + path);
  const bool has_hex = j.contains("atoms");
  const bool has_list = j.contains("atomList");
  if (has_hex == has_list) Fail(path, "exactly one of \"atoms\" and \"atomList\" is required");
  if (has_hex) {
    const Json& hex = j["atoms"];
    if (!hex.is_string()) Fail(Sub(path, "atoms"), "expected a hex string");
    try {
      return ClopenSet::FromMask(ParseMaskHex(level, hex.get<std::string>()));
    } catch (const InputError& e) {
      Fail(Sub(path, "atoms"), e.what());
    }
  }
  const Json& list = j["atomList"];
  if (!list.is_array()) Fail(Sub(path, "atomList"), "expected an array");
  std::vector<std::uint64_t> idx;
  const std::uint64_t atoms = std::uint64_t{2} << level;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::uint64_t v = U64From(list[i], Sub(Sub(path, "atomList"), i));
    if (v >= atoms) Fail(Sub(Sub(path, "atomList"), i), "atom index out of range for the level");
    idx.push_back(v);
  }
  return ClopenSet::FromAtoms(level, idx);
}

std::vector<ClopenSet> FamilyFrom(const Json& j, const std::string& path) {
  const Json* arr = &j;
  std::string p = path;
  if (j.is_object()) {
    for (const char* key : {"family", "elements", "sets"}) {
      if (j.contains(key)) {
        arr = &j[key];
        p = Sub(path, key);
        break;
      }
    }
  }
  if (!arr->is_array()) Fail(p, "expected an array of sets");
  std::vector<ClopenSet> out;
  for (std::size_t i = 0; i < arr->size(); ++i) out.push_back(SetFrom((*arr)[i], Sub(p, i)));
  return out;
}

SignedMeasure MeasureFrom(const Json& j, const std::string& path) {
  const unsigned level = UnsignedFrom(Field(j, "level", path), Sub(path, "level"));
  RequireLevel(level, "measure at " + path);
  const bool dense = j.contains("atomValues");
  const bool sparse = j.contains("atomValueMap");
  if (dense == sparse) Fail(path, "exactly one of \"atomValues\" and \"atomValueMap\" is required");
  if (dense) {
    const Json& vals = j["atomValues"];
    if (!vals.is_array()) Fail(Sub(path, "atomValues"), "expected an array");
    std::vector<Rational> v;
    v.reserve(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) v.push_back(RationalFrom(vals[i], Sub(Sub(path, "atomValues"), i)));
    try {
      return SignedMeasure::Dense(level, v);
    } catch (const InputError& e) {
      Fail(path, e.what());
    }
  }
  const Json& map = j["atomValueMap"];
  if (!map.is_object()) Fail(Sub(path, "atomValueMap"), "expected an object from atom index to value");
  std::map<std::uint64_t, Rational> values;
  for (auto it = map.begin(); it != map.end(); ++it) {
    const std::string key = it.key();
    const std::string kp = Sub(Sub(path, "atomValueMap"), key);
    if (key.empty() || key.size() > 19 || !std::all_of(key.begin(), key.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      Fail(kp, "atom keys must be decimal indices");
    }
    values[std::stoull(key)] = RationalFrom(it.value(), kp);
  }
  try {
    return SignedMeasure(level, std::move(values));
  } catch (const InputError& e) {
    Fail(path, e.what());
  }
}

AtomId AtomFrom(const Json& j, const std::string& path) {
  AtomId a;
  a.level = UnsignedFrom(Field(j, "level", path), Sub(path, "level"));
  a.index = U64From(Field(j, "index", path), Sub(path, "index"));
  if (a.level > 62 || a.index >= (std::uint64_t{2} << a.level)) Fail(path, "atom index out of range for the level");
  return a;
}

TalagrandInstance InstanceFrom(const Json& j) {
  const std::string path = "instance";
  TalagrandInstance inst;
  inst.t = UnsignedFrom(Field(j, "t", path), "instance.t");
  inst.eta = RationalFrom(Field(j, "eta", path), "instance.eta");
  inst.n = UnsignedFrom(Field(j, "n", path), "instance.n");
  inst.p = SetFrom(Field(j, "P", path), "instance.P");
  inst.r = SetFrom(Field(j, "R", path), "instance.R");
  inst.z = SetFrom(Field(j, "Z", path), "instance.Z");
  inst.q = SetFrom(Field(j, "Q", path), "instance.Q");
  inst.g = AtomFrom(Field(j, "G", path), "instance.G");
  if (j.contains("relaxed")) {
    if (!j["relaxed"].is_boolean()) Fail("instance.relaxed", "expected a boolean");
    inst.relaxed = j["relaxed"].get<bool>();
  }
  return inst;
}

WitnessSequencePrefix PrefixFrom(const Json& j, const std::string& path) {
  const Json* arr = &j;
  std::string p = path;
  if (j.is_object()) {
    arr = &Field(j, "entries", path);
    p = Sub(path, "entries");
  }
  if (!arr->is_array()) Fail(p, "expected an array of entries");
  WitnessSequencePrefix out;
  for (std::size_t i = 0; i < arr->size(); ++i) {
    const Json& e = (*arr)[i];
    const std::string ep = Sub(p, i);
    WitnessEntry w;
    w.index = UnsignedFrom(Field(e, "index", ep), Sub(ep, "index"));
    w.nu = MeasureFrom(Field(e, "nu", ep), Sub(ep, "nu"));
    w.h = SetFrom(Field(e, "H", ep), Sub(ep, "H"));
    out.entries.push_back(std::move(w));
  }
  return out;
}

std::vector<ModulusEntry> ModulusFrom(const Json& j, const std::string& path) {
  if (!j.is_array()) Fail(path, "expected an array of {epsilon, delta}");
  std::vector<ModulusEntry> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string ep = Sub(path, i);
    out.push_back({RationalFrom(Field(j[i], "epsilon", ep), Sub(ep, "epsilon")),
                   RationalFrom(Field(j[i], "delta", ep), Sub(ep, "delta"))});
  }
  return out;
}

QuadrupleContext ContextFrom(const Json& j) {
  QuadrupleContext ctx;
  ctx.prefix = PrefixFrom(Field(j, "prefix", "context"), "context.prefix");
  ctx.theta = MeasureFrom(Field(j, "theta", "context"), "context.theta");
  if (j.contains("decomposition")) {
    const Json& d = j["decomposition"];
    const std::string p = "context.decomposition";
    Decomposition dec;
    dec.theta1 = MeasureFrom(Field(d, "theta1", p), p + ".theta1");
    dec.theta2 = MeasureFrom(Field(d, "theta2", p), p + ".theta2");
    dec.modulus = ModulusFrom(Field(d, "modulus", p), p + ".modulus");
    dec.x = SetFrom(Field(d, "X", p), p + ".X");
    dec.epsilon_x = RationalFrom(Field(d, "epsilonX", p), p + ".epsilonX");
    ctx.decomposition = std::move(dec);
  }
  return ctx;
}

GoodQuadruple QuadrupleFrom(const Json& j) {
  const std::string path = "quadruple";
  GoodQuadruple e;
  const Json& bq = Field(j, "Bq", path);
  if (!bq.is_array()) Fail("quadruple.Bq", "expected an array of families");
  for (std::size_t i = 0; i < bq.size(); ++i) e.families.push_back(FamilyFrom(bq[i], Sub("quadruple.Bq", i)));
  e.kernels = FamilyFrom(Field(j, "Nq", path), "quadruple.Nq");
  for (const char* key : {"mq", "nq"}) {
    const Json& arr = Field(j, key, path);
    const std::string p = Sub(path, key);
    if (!arr.is_array()) Fail(p, "expected an array of integers");
    auto& dst = key[0] == 'm' ? e.m : e.n;
    for (std::size_t i = 0; i < arr.size(); ++i) dst.push_back(UnsignedFrom(arr[i], Sub(p, i)));
  }
  return e;
}

TroisiemeInputs TroisiemeInputsFrom(const Json& j) {
  const std::string path = "inputs";
  TroisiemeInputs in;
  in.d0 = FamilyFrom(Field(j, "D0", path), "inputs.D0");
  in.t = UnsignedFrom(Field(j, "t", path), "inputs.t");
  in.eta = RationalFrom(Field(j, "eta", path), "inputs.eta");
  in.x = SetFrom(Field(j, "X", path), "inputs.X");
  in.w = SetFrom(Field(j, "W", path), "inputs.W");
  in.y = SetFrom(Field(j, "Y", path), "inputs.Y");
  in.h = SetFrom(Field(j, "H", path), "inputs.H");
  if (j.contains("mode")) {
    const Json& m = j["mode"];
    if (m == "strict") {
      in.mode = Mode::kStrict;
    } else if (m == "relaxed") {
      in.mode = Mode::kRelaxed;
    } else {
      Fail("inputs.mode", "expected \"strict\" or \"relaxed\"");
    }
  }
  if (j.contains("seed")) in.seed = U64From(j["seed"], "inputs.seed");
  if (j.contains("restarts")) in.budget.restarts = UnsignedFrom(j["restarts"], "inputs.restarts");
  if (j.contains("levelLimit")) in.level_limit = UnsignedFrom(j["levelLimit"], "inputs.levelLimit");
  return in;
}

Json ToJson(const Rational& r) { return r.str(); }

Json ToJson(const ClopenSet& s) {
  const ClopenSet c = s.canonical();
  Json j;
  j["level"] = c.level();
  const std::uint64_t hex_digits = std::max<std::uint64_t>(1, (std::uint64_t{2} << c.level()) / 4);
  if (c.atom_count() * 8 < hex_digits) {
    Json list = Json::array();
    for (auto i : c.atom_indices()) list.push_back(i);
    j["atomList"] = std::move(list);
  } else {
    j["atoms"] = MaskHex(c.mask());
  }
  return j;
}

Json ToJson(const AtomId& a) {
  Json j;
  j["level"] = a.level;
  j["index"] = a.index;
  return j;
}

Json ToJson(const SignedMeasure& m) {
  Json j;
  j["level"] = m.level();
  if (m.atoms() <= kDenseLimit) {
    Json vals = Json::array();
    for (std::uint64_t i = 0; i < m.atoms(); ++i) vals.push_back(m.value(i).str());
    j["atomValues"] = std::move(vals);
  } else {
    Json map = Json::object();
    for (const auto& [atom, v] : m.values()) map[std::to_string(atom)] = v.str();
    j["atomValueMap"] = std::move(map);
  }
  return j;
}

Json FamilyToJson(const std::vector<ClopenSet>& family) {
  Json arr = Json::array();
  for (const auto& s : family) arr.push_back(ToJson(s));
  return arr;
}

Json ToJson(const TalagrandInstance& inst) {
  Json j;
  j["t"] = inst.t;
  j["eta"] = ToJson(inst.eta);
  j["n"] = inst.n;
  j["P"] = ToJson(inst.p);
  j["R"] = ToJson(inst.r);
  j["Z"] = ToJson(inst.z);
  j["Q"] = ToJson(inst.q);
  j["G"] = ToJson(inst.g);
  j["relaxed"] = inst.relaxed;
  return j;
}

Json ToJson(const GoodQuadruple& e) {
  Json j;
  Json bq = Json::array();
  for (const auto& f : e.families) bq.push_back(FamilyToJson(f));
  j["Bq"] = std::move(bq);
  j["Nq"] = FamilyToJson(e.kernels);
  j["mq"] = e.m;
  j["nq"] = e.n;
  j["pPrime"] = e.p_prime();
  return j;
}

Json ToJson(const PropTCertificate& c) {
  Json j;
  j["familyDigest"] = c.family_digest;
  j["epsilon"] = ToJson(c.epsilon);
  j["n"] = c.n;
  j["scannedThrough"] = c.scanned_through;
  j["mMax"] = "unbounded";
  j["tailJustification"] = c.tail_justification;
  Json recs = Json::array();
  for (const auto& r : c.records) {
    Json x;
    x["member"] = r.member;
    x["atom"] = r.atom;
    x["tag"] = r.tag == Alternative::kOmits ? "omits" : "fills";
    x["omits"] = r.omits;
    x["fills"] = r.fills;
    x["t1Slack"] = ToJson(r.t1_slack);
    x["t2Peak"] = ToJson(r.t2_peak);
    x["t2PeakM"] = r.t2_peak_m;
    x["t2Slack"] = ToJson(r.t2_slack);
    recs.push_back(std::move(x));
  }
  j["records"] = std::move(recs);
  return j;
}

Json ToJson(const Violation& v) {
  Json j;
  j["member"] = v.member;
  j["atom"] = v.atom;
  j["condition"] = v.condition == Condition::kT1 ? "T.1" : "T.2";
  j["m"] = v.m;
  j["achieved"] = ToJson(v.achieved);
  j["bound"] = ToJson(v.bound);
  return j;
}

Json ToJson(const VwCounterexample& c) {
  Json j;
  j["sigma"] = ToJson(c.sigma);
  j["N"] = c.big_n;
  Json tau = Json::array();
  for (const auto& a : c.tau) tau.push_back(ToJson(a));
  j["tau"] = std::move(tau);
  Json ws = Json::array();
  for (const auto& w : c.witnesses) {
    Json x;
    x["n"] = w.n;
    x["U"] = ToJson(w.u);
    x["inside"] = ToJson(w.inside);
    x["outside"] = ToJson(w.outside);
    x["half"] = ToJson(w.half);
    x["othersDisjoint"] = w.others_disjoint;
    ws.push_back(std::move(x));
  }
  j["witnesses"] = std::move(ws);
  j["allEqual"] = c.all_equal();
  return j;
}

Json ToJson(const TauMap& t) {
  Json j;
  j["n"] = t.n;
  j["epsilon"] = ToJson(t.epsilon);
  j["errorBound"] = ToJson(t.error_bound);
  Json el = Json::array();
  for (std::size_t i = 0; i < t.elements.size(); ++i) {
    Json x;
    x["element"] = ToJson(t.elements[i]);
    x["image"] = ToJson(t.images[i]);
    x["error"] = ToJson(t.error[i]);
    el.push_back(std::move(x));
  }
  j["elements"] = std::move(el);
  const auto& v = t.verification;
  Json ver;
  ver["zero"] = v.zero;
  ver["unit"] = v.unit;
  ver["complement"] = v.complement;
  ver["join"] = v.join;
  ver["meet"] = v.meet;
  ver["approximation"] = v.approximation;
  ver["identityOnLevel"] = v.identity_on_level;
  ver["pairsChecked"] = v.pairs_checked;
  ver["firstFailure"] = v.first_failure;
  ver["ok"] = v.ok();
  j["verification"] = std::move(ver);
  return j;
}

Json ToJson(const TalagrandReport& r) {
  Json j;
  j["verdict"] = VerdictName(r.verdict);
  j["M"] = ToJson(r.m);
  j["etaPrime"] = ToJson(r.eta_prime);
  j["k"] = r.k;
  j["qPrimeAtoms"] = r.q_prime_atoms;
  j["S"] = ToJson(r.s_score);
  Json per = Json::array();
  for (const auto& c : r.per_m) {
    Json x;
    x["m"] = c.m;
    x["a"] = ToJson(c.a);
    x["b"] = ToJson(c.b);
    x["psi"] = ToJson(c.psi);
    x["bound"] = ToJson(c.bound);
    x["ok"] = c.ok;
    per.push_back(std::move(x));
  }
  j["perCoordinate"] = std::move(per);
  Json tr;
  tr["restartsRun"] = r.trace.restarts_run;
  tr["swaps"] = r.trace.swaps;
  tr["convergence"] = r.trace.convergence;
  tr["escalated"] = r.trace.escalated;
  tr["oracleUsed"] = r.trace.oracle_used;
  tr["oracleCandidates"] = r.trace.oracle_candidates;
  j["trace"] = std::move(tr);
  return j;
}

Json ToJson(const PzReport& r) {
  Json j;
  j["zeta"] = ToJson(r.zeta);
  j["exact"] = r.exact;
  j["probability"] = ToJson(r.probability);
  if (!r.exact) j["monteCarloFrequencyEstimate"] = r.estimate;
  j["omegaAtoms"] = r.omega_atoms;
  j["hits"] = r.hits;
  j["trials"] = r.trials;
  j["omegaMeasure"] = ToJson(r.omega_measure);
  j["gMeasure"] = ToJson(r.g_measure);
  j["omegaLarge"] = r.omega_large;
  j["degenerate"] = r.degenerate;
  j["pass"] = r.pass;
  return j;
}

Json ToJson(const NikodymReport& r) {
  Json j;
  j["n"] = r.n;
  j["epsilon"] = ToJson(r.epsilon);
  j["certificateDigest"] = r.certificate_digest;
  j["mMax"] = r.m_max;
  j["symbolicFrom"] = r.symbolic_from;
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json x;
    x["m"] = row.m;
    x["supValue"] = ToJson(row.sup_value);
    x["formulaSup"] = ToJson(row.formula_sup);
    x["norm"] = ToJson(row.norm);
    x["bounded"] = row.bounded;
    x["normOk"] = row.norm_ok;
    rows.push_back(std::move(x));
  }
  j["rows"] = std::move(rows);
  j["ok"] = r.ok();
  return j;
}

namespace {
Json IssuesJson(const std::vector<PrefixIssue>& issues) {
  Json arr = Json::array();
  for (const auto& i : issues) {
    Json x;
    x["index"] = i.index;
    x["problem"] = i.problem;
    arr.push_back(std::move(x));
  }
  return arr;
}
}  // namespace

Json ToJson(const OscillationReport& r) {
  Json j;
  Json es = Json::array();
  for (const auto& e : r.entries) {
    Json x;
    x["index"] = e.index;
    x["parity"] = e.even ? "even" : "odd";
    x["inside"] = ToJson(e.inside);
    x["outsideVariation"] = ToJson(e.outside_variation);
    x["value"] = ToJson(e.value);
    x["derivedBound"] = ToJson(e.derived_bound);
    x["hypothesis"] = e.hypothesis;
    x["conclusion"] = e.conclusion;
    es.push_back(std::move(x));
  }
  j["entries"] = std::move(es);
  j["evenMax"] = ToJson(r.even_max);
  j["oddMin"] = ToJson(r.odd_min);
  j["separated"] = r.separated;
  j["gap"] = ToJson(r.gap);
  j["issues"] = IssuesJson(r.issues);
  j["ok"] = r.ok();
  return j;
}

Json ToJson(const DecompositionReport& r) {
  Json j;
  j["sumFailures"] = r.sum_failures;
  j["negativeAtoms"] = r.negative_atoms;
  Json mod = Json::array();
  for (const auto& m : r.modulus) {
    Json x;
    x["epsilon"] = ToJson(m.epsilon);
    x["delta"] = ToJson(m.delta);
    x["maxAtoms"] = m.max_atoms;
    x["worstValue"] = ToJson(m.worst_value);
    x["worstSet"] = ToJson(m.worst_set);
    x["ok"] = m.ok;
    mod.push_back(std::move(x));
  }
  j["modulus"] = std::move(mod);
  j["lambdaX"] = ToJson(r.lambda_x);
  j["theta2OutsideX"] = ToJson(r.theta2_outside_x);
  j["orthogonalityOk"] = r.orthogonality_ok;
  j["ok"] = r.ok();
  return j;
}

namespace {
Json ConditionJson(const ConditionRecord& c) {
  Json x;
  x["code"] = c.code;
  x["p"] = c.p;
  if (c.q >= 0) x["q"] = c.q;
  if (c.member >= 0) x["member"] = c.member;
  if (c.atom >= 0) x["atom"] = c.atom;
  if (c.coordinate > 0) x["coordinate"] = c.coordinate;
  x["achieved"] = ToJson(c.achieved);
  x["bound"] = ToJson(c.bound);
  x["ok"] = c.ok;
  if (!c.detail.empty()) x["detail"] = c.detail;
  return x;
}
}  // namespace

Json ToJson(const QuadrupleReport& r) {
  Json j;
  j["good"] = r.good;
  j["checks"] = r.checks;
  Json s = Json::array();
  for (const auto& c : r.summary) s.push_back(ConditionJson(c));
  j["summary"] = std::move(s);
  Json f = Json::array();
  for (const auto& c : r.failures) f.push_back(ConditionJson(c));
  j["failures"] = std::move(f);
  return j;
}

Json ToJson(const TroisiemeResult& r) {
  Json j;
  j["A"] = ToJson(r.a);
  j["zeta"] = ToJson(r.zeta);
  j["delta"] = ToJson(r.delta);
  j["etaBlock"] = ToJson(r.eta_block);
  j["n"] = r.n;
  if (r.n0 > 0) j["nZero"] = r.n0;
  j["algebraAtoms"] = r.algebra_atoms;
  Json blocks = Json::array();
  for (const auto& b : r.blocks) {
    Json x;
    x["index"] = b.index;
    x["U"] = ToJson(b.u);
    x["concentration"] = ToJson(b.concentration);
    x["report"] = ToJson(b.report);
    blocks.push_back(std::move(x));
  }
  j["blocks"] = std::move(blocks);
  Json v;
  v["A1"] = r.a1;
  v["A2"] = r.a2;
  v["A3"] = r.a3;
  v["lambdaA"] = ToJson(r.lambda_a);
  v["A3ScannedThrough"] = r.a3_scanned_through;
  Json fails = Json::array();
  for (const auto& f : r.a3_failures) {
    Json x;
    x["block"] = f.block;
    x["m"] = f.m;
    x["achieved"] = ToJson(f.achieved);
    x["bound"] = ToJson(f.bound);
    fails.push_back(std::move(x));
  }
  v["A3Failures"] = std::move(fails);
  v["valid"] = r.valid();
  j["validation"] = std::move(v);
  j["warnings"] = r.warnings;
  return j;
}

Json ToJson(const std::vector<ScanRecord>& scan) {
  Json arr = Json::array();
  for (const auto& s : scan) {
    Json x;
    x["index"] = s.index;
    x["role"] = s.role;
    x["failed"] = s.failed;
    arr.push_back(std::move(x));
  }
  return arr;
}

Json ToJson(const ExtendResult& r) {
  Json j;
  j["quadruple"] = ToJson(r.extended);
  const auto& k = r.constants;
  Json c;
  c["p"] = k.p;
  c["epsF"] = ToJson(k.eps_f);
  c["mNext"] = k.m_next;
  c["D0Size"] = k.d0_size;
  c["epsD"] = ToJson(k.eps_d);
  c["t"] = k.t;
  c["xi"] = ToJson(k.xi);
  c["delta"] = ToJson(k.delta);
  c["gamma"] = ToJson(k.gamma);
  c["zeta"] = ToJson(k.zeta);
  c["nEven"] = k.n_even;
  c["nOdd"] = k.n_odd;
  c["yValue"] = ToJson(k.y_value);
  j["constants"] = std::move(c);
  j["Y"] = ToJson(r.y);
  j["kernel"] = ToJson(r.kernel);
  j["setConstructor"] = ToJson(r.troisieme);
  j["scan"] = ToJson(r.scan);
  j["warnings"] = r.warnings;
  j["validation"] = ToJson(r.validation);
  return j;
}

Json ToJson(const AssemblyReport& r) {
  Json j;
  j["k"] = r.k;
  j["index"] = r.index;
  j["condition"] = r.condition;
  j["value"] = ToJson(r.value);
  j["bound"] = ToJson(r.bound);
  j["BcapH"] = ToJson(r.b_cap_h);
  j["g1Ok"] = r.g1_ok;
  j["identityOk"] = r.identity_ok;
  j["ok"] = r.ok;
  return j;
}

Json ToJson(const ScaleReport& r) {
  Json j;
  j["reason"] = r.reason;
  j["requiredLevel"] = r.required_level;
  j["maxLevel"] = r.max_level;
  j["nZero"] = r.n_zero;
  j["bytesPerSet"] = r.bytes_per_set;
  return j;
}

}  // namespace dyadcert::codec

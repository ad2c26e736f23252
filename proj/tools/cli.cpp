#include "cli.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "dyadcert/codec.hpp"
#include "dyadcert/construction.hpp"
#include "dyadcert/errors.hpp"
#include "dyadcert/measures.hpp"
#include "dyadcert/prop_t.hpp"
#include "dyadcert/talagrand.hpp"
#include "dyadcert/tau.hpp"
#include "dyadcert/util.hpp"

namespace dyadcert::cli {

namespace {

using codec::Json;

struct Outcome {
  int code = 0;
  Json doc;
};

// Document loading with digests for the manifest.
class Inputs {
 public:
  explicit Inputs(const std::string* stdin_doc) : stdin_(stdin_doc) {}

  Json Load(const std::string& path) {
    std::string text;
    if (path == "-") {
      if (!stdin_) throw InputError("\"-\" given but no document on stdin");
      text = *stdin_;
    } else {
      std::ifstream f(path, std::ios::binary);
      if (!f) throw InputError(path + ": cannot open");
      std::ostringstream ss;
      ss << f.rdbuf();
      text = ss.str();
    }
    digests_[path] = Sha256Hex(text);
    return codec::ParseDocument(text, path == "-" ? "<stdin>" : path);
  }

  Json DigestJson() const {
    Json j = Json::object();
    for (const auto& [k, v] : digests_) j[k] = v;
    return j;
  }

 private:
  const std::string* stdin_;
  std::map<std::string, std::string> digests_;
};

Rational ArgRational(const std::string& text, const std::string& flag) {
  try {
    return Rational::Parse(text);
  } catch (const std::exception& e) {
    throw InputError(flag + ": " + e.what());
  }
}

Json Envelope(const std::string& command) {
  Json j;
  j["command"] = command;
  return j;
}

void Merge(Json& into, const Json& from) {
  for (auto it = from.begin(); it != from.end(); ++it) into[it.key()] = it.value();
}

Json Schema() {
  Json s;
  s["$schema"] = "https://json-schema.org/draft/2020-12/schema";
  s["title"] = "dyadcert documents";
  Json defs;
  defs["rational"] = {{"type", "string"}, {"pattern", "^-?[0-9]+(/[0-9]+)?$"}};
  Json set;
  set["type"] = "object";
  set["required"] = Json::array({"level"});
  set["properties"] = {{"level", {{"type", "integer"}, {"minimum", 0}}},
                       {"atoms", {{"type", "string"}, {"pattern", "^[0-9a-fA-F]+$"},
                                  {"description", "mask hex, most-significant nibble first, bit i = atom i"}}},
                       {"atomList", {{"type", "array"}, {"items", {{"type", "integer"}, {"minimum", 0}}}}}};
  set["oneOf"] = Json::array({{{"required", Json::array({"atoms"})}}, {{"required", Json::array({"atomList"})}}});
  defs["clopenSet"] = set;
  Json atom;
  atom["type"] = "object";
  atom["required"] = Json::array({"level", "index"});
  atom["properties"] = {{"level", {{"type", "integer"}}}, {"index", {{"type", "integer"}}}};
  defs["atom"] = atom;
  Json measure;
  measure["type"] = "object";
  measure["required"] = Json::array({"level"});
  measure["properties"] = {
      {"level", {{"type", "integer"}}},
      {"atomValues", {{"type", "array"}, {"items", {{"$ref", "#/$defs/rational"}}}}},
      {"atomValueMap", {{"type", "object"}, {"additionalProperties", {{"$ref", "#/$defs/rational"}}}}}};
  defs["signedMeasure"] = measure;
  defs["family"] = {{"oneOf", Json::array({{{"type", "array"}, {"items", {{"$ref", "#/$defs/clopenSet"}}}},
                                           {{"type", "object"},
                                            {"properties", {{"family", {{"type", "array"}, {"items", {{"$ref", "#/$defs/clopenSet"}}}}}}}}})}};
  Json inst;
  inst["type"] = "object";
  inst["required"] = Json::array({"t", "eta", "n", "P", "R", "Z", "Q", "G"});
  inst["properties"] = {{"t", {{"type", "integer"}}},
                        {"eta", {{"$ref", "#/$defs/rational"}}},
                        {"n", {{"type", "integer"}}},
                        {"P", {{"$ref", "#/$defs/clopenSet"}}},
                        {"R", {{"$ref", "#/$defs/clopenSet"}}},
                        {"Z", {{"$ref", "#/$defs/clopenSet"}}},
                        {"Q", {{"$ref", "#/$defs/clopenSet"}}},
                        {"G", {{"$ref", "#/$defs/atom"}}},
                        {"relaxed", {{"type", "boolean"}}}};
  defs["talagrandInstance"] = inst;
  Json entry;
  entry["type"] = "object";
  entry["required"] = Json::array({"index", "nu", "H"});
  entry["properties"] = {{"index", {{"type", "integer"}}},
                         {"nu", {{"$ref", "#/$defs/signedMeasure"}}},
                         {"H", {{"$ref", "#/$defs/clopenSet"}}}};
  defs["prefix"] = {{"type", "object"},
                    {"required", Json::array({"entries"})},
                    {"properties", {{"entries", {{"type", "array"}, {"items", entry}}}}}};
  Json modulus = {{"type", "array"},
                  {"items", {{"type", "object"},
                             {"required", Json::array({"epsilon", "delta"})},
                             {"properties", {{"epsilon", {{"$ref", "#/$defs/rational"}}},
                                             {"delta", {{"$ref", "#/$defs/rational"}}}}}}}};
  defs["context"] = {
      {"type", "object"},
      {"required", Json::array({"prefix", "theta"})},
      {"properties",
       {{"prefix", {{"$ref", "#/$defs/prefix"}}},
        {"theta", {{"$ref", "#/$defs/signedMeasure"}}},
        {"decomposition",
         {{"type", "object"},
          {"required", Json::array({"theta1", "theta2", "modulus", "X", "epsilonX"})},
          {"properties",
           {{"theta1", {{"$ref", "#/$defs/signedMeasure"}}},
            {"theta2", {{"$ref", "#/$defs/signedMeasure"}}},
            {"modulus", modulus},
            {"X", {{"$ref", "#/$defs/clopenSet"}}},
            {"epsilonX", {{"$ref", "#/$defs/rational"}}}}}}}}}};
  defs["quadruple"] = {{"type", "object"},
                       {"required", Json::array({"Bq", "Nq", "mq", "nq"})},
                       {"properties",
                        {{"Bq", {{"type", "array"}, {"items", {{"$ref", "#/$defs/family"}}}}},
                         {"Nq", {{"$ref", "#/$defs/family"}}},
                         {"mq", {{"type", "array"}, {"items", {{"type", "integer"}}}}},
                         {"nq", {{"type", "array"}, {"items", {{"type", "integer"}}}}},
                         {"extendWith", {{"$ref", "#/$defs/clopenSet"}}}}}};
  defs["setConstructorInputs"] = {
      {"type", "object"},
      {"required", Json::array({"D0", "t", "eta", "X", "W", "Y", "H"})},
      {"properties",
       {{"D0", {{"$ref", "#/$defs/family"}}},
        {"t", {{"type", "integer"}}},
        {"eta", {{"$ref", "#/$defs/rational"}}},
        {"X", {{"$ref", "#/$defs/clopenSet"}}},
        {"W", {{"$ref", "#/$defs/clopenSet"}}},
        {"Y", {{"$ref", "#/$defs/clopenSet"}}},
        {"H", {{"$ref", "#/$defs/clopenSet"}}},
        {"mode", {{"enum", Json::array({"strict", "relaxed"})}}},
        {"seed", {{"type", "integer"}}},
        {"restarts", {{"type", "integer"}}},
        {"levelLimit", {{"type", "integer"}}}}}};
  defs["runManifest"] = {{"type", "object"},
                         {"required", Json::array({"version", "command", "inputDigests", "seeds",
                                                   "configuration", "outcome"})}};
  s["$defs"] = defs;
  s["exitCodes"] = {{"0", "pass, or constructed and validated"},
                    {"1", "checked and failed"},
                    {"2", "malformed input or unmet precondition"},
                    {"3", "scale refusal; stdout carries the scale report"}};
  return s;
}

struct Options {
  std::string family, elements, instance, m_file, measure, set, set2, prefix, b, context, quadruple, inputs, w;
  std::string epsilon, eta, xi, mode = "enumerate", op;
  unsigned min_level = 0, n = 1, level = 0, t = 1, depth = 10, m_max = 0, k = 0, coordinate = 0;
  std::optional<unsigned> at;
  std::uint64_t seed = 0, oracle_cap = 100000;
  unsigned restarts = 4;
  bool relaxed = false;
};

Json BudgetJson(const SearchBudget& b) {
  Json j;
  j["restarts"] = b.restarts;
  j["extraRestarts"] = b.extra_restarts;
  j["oracleCap"] = b.oracle_cap;
  j["maxSwaps"] = b.max_swaps;
  return j;
}

}  // namespace

int Run(const std::vector<std::string>& argv, const std::string* stdin_doc, std::string& out, std::string& err) {
  CLI::App app{"Exact dyadic clopen-algebra certification", "dyadcert"};
  app.require_subcommand(0, 1);
  bool schema = false;
  std::string manifest_path;
  unsigned level_cap = max_level();
  app.add_flag("--schema", schema, "Print the document schema");
  app.add_option("--manifest", manifest_path, "Write the run manifest to this path");
  app.add_option("--max-level", level_cap, "Level cap for mask allocation")->check(CLI::Range(1u, 40u));

  Options o;
  auto file_opt = [](CLI::App* sub, const char* name, std::string& dst, const char* what, bool required = true) {
    auto* opt = sub->add_option(name, dst, what);
    if (required) opt->required();
  };

  auto* prop = app.add_subcommand("prop-t", "Property (T) certification")->require_subcommand(1);
  auto* certify = prop->add_subcommand("certify", "Smallest certified level for a family");
  file_opt(certify, "--family", o.family, "Family document");
  certify->add_option("--epsilon", o.epsilon, "Tolerance p/q")->required();
  certify->add_option("--min-level", o.min_level, "Start the level search here");
  certify->add_option("--at", o.at, "Check exactly this level and list violations");
  auto* counter = prop->add_subcommand("counterexample", "Witnesses that V_W defeats every level");
  file_opt(counter, "--w", o.w, "Nonempty clopen set W");
  counter->add_option("--depth", o.depth, "Number of levels to witness");

  auto* tau = app.add_subcommand("tau", "Quasi-projection homomorphism")->require_subcommand(1);
  auto* tau_build = tau->add_subcommand("build", "Images of the listed elements");
  file_opt(tau_build, "--elements", o.elements, "Family document");
  tau_build->add_option("--n", o.n, "Target level")->required();
  tau_build->add_option("--epsilon", o.epsilon, "epsilon in (0, 1/4)")->required();

  auto* tal = app.add_subcommand("talagrand", "Constrained minimization of S(M)")->require_subcommand(1);
  auto* solve_cmd = tal->add_subcommand("solve", "Swap local search with escalation");
  file_opt(solve_cmd, "--instance", o.instance, "Instance document");
  solve_cmd->add_option("--seed", o.seed, "Search seed");
  solve_cmd->add_option("--restarts", o.restarts, "Descents before escalation");
  solve_cmd->add_flag("--relaxed", o.relaxed, "Skip the scalar hypotheses");
  solve_cmd->add_option("--oracle-cap", o.oracle_cap, "Largest C(|Q'|, k) for the exhaustive oracle");
  auto* pz = tal->add_subcommand("pz", "Paley-Zygmund check for a candidate M");
  file_opt(pz, "--instance", o.instance, "Instance document");
  file_opt(pz, "--m", o.m_file, "Set document for M");
  pz->add_option("--xi", o.xi, "xi p/q")->required();
  pz->add_option("--mode", o.mode, "enumerate or sample:N:S");
  auto* nz = tal->add_subcommand("n-zero", "Smallest n >= t with n^3 <= eta 2^n");
  nz->add_option("--t", o.t, "t")->required();
  nz->add_option("--eta", o.eta, "eta p/q")->required();

  auto* meas = app.add_subcommand("measure", "Signed measures on a level")->require_subcommand(1);
  auto* tv = meas->add_subcommand("tv", "Total variation, optionally on a set");
  file_opt(tv, "--measure", o.measure, "Measure document");
  file_opt(tv, "--set", o.set, "Set document", false);
  auto* wit = meas->add_subcommand("witness", "The measure mu_n at a level");
  wit->add_option("--n", o.n, "n")->required();
  wit->add_option("--level", o.level, "Level of the emitted measure")->required();
  auto* nik = meas->add_subcommand("nikodym-demo", "Pointwise-small, norm-large witnesses for a family");
  file_opt(nik, "--family", o.family, "Family document");
  nik->add_option("--epsilon", o.epsilon, "Tolerance p/q")->required();
  nik->add_option("--m-max", o.m_max, "Last explicitly scanned m")->required();
  auto* osc = meas->add_subcommand("oscillation", "Even/odd separation of |nu(B)| along a prefix");
  file_opt(osc, "--prefix", o.prefix, "Prefix document");
  file_opt(osc, "--b", o.b, "Set document for B");
  auto* dec = meas->add_subcommand("decomp-validate", "Validate a supplied Lebesgue decomposition");
  file_opt(dec, "--context", o.context, "Context document with a decomposition");

  auto* quad = app.add_subcommand("quadruple", "Good quadruples")->require_subcommand(1);
  auto* qval = quad->add_subcommand("validate", "Check the structure and G.1-G.4");
  file_opt(qval, "--quadruple", o.quadruple, "Quadruple document");
  file_opt(qval, "--context", o.context, "Context document");
  qval->add_flag("--relaxed", o.relaxed, "Accepted for symmetry with extend");
  qval->add_option("--seed", o.seed, "Unused by validation; recorded in the manifest");
  auto* qext = quad->add_subcommand("extend", "Append one kernel");
  file_opt(qext, "--quadruple", o.quadruple, "Quadruple document");
  file_opt(qext, "--context", o.context, "Context document");
  file_opt(qext, "--b", o.b, "Set to add to the family (else the quadruple's extendWith)", false);
  qext->add_flag("--relaxed", o.relaxed, "Relaxed scale");
  qext->add_option("--seed", o.seed, "Search seed");
  qext->add_option("--restarts", o.restarts, "Descents per block before escalation");

  auto* trois = app.add_subcommand("troisieme", "Build the set A for the extension step");
  file_opt(trois, "--inputs", o.inputs, "Inputs document");

  auto* asm_cmd = app.add_subcommand("assemble-b", "Check |nu_{n_k}(B cap H_{n_k})| for a kernel sequence");
  file_opt(asm_cmd, "--nq", o.quadruple, "Quadruple document (Nq and nq)");
  file_opt(asm_cmd, "--context", o.context, "Context document");
  asm_cmd->add_option("--k", o.k, "Index k")->required();

  auto* setc = app.add_subcommand("set", "Clopen set arithmetic");
  setc->add_option("op", o.op, "lambda|phi|psi|normalize|meet|join|complement|difference|symdiff")->required();
  file_opt(setc, "--a", o.set, "Set document");
  file_opt(setc, "--b", o.set2, "Second set document", false);
  setc->add_option("--m", o.coordinate, "Coordinate for phi and psi");
  setc->add_option("--level", o.level, "Target level for normalize");

  std::vector<std::string> rev(argv.rbegin(), argv.rend());
  const unsigned saved_cap = max_level();
  std::ostringstream out_s, err_s;
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out = app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out_s, err_s);
    out = out_s.str();
    err = err_s.str();
    return code == 0 ? 0 : 2;
  }

  std::vector<std::string> path;
  for (CLI::App* cur = &app; !cur->get_subcommands().empty();) {
    cur = cur->get_subcommands().front();
    path.push_back(cur->get_name());
  }
  std::string command;
  for (const auto& p : path) command += (command.empty() ? "" : " ") + p;

  Inputs in(stdin_doc);
  Outcome res;
  Json config;
  config["maxLevel"] = level_cap;
  std::vector<std::uint64_t> seeds;
  SearchBudget budget;
  budget.restarts = o.restarts;
  budget.oracle_cap = o.oracle_cap;

  try {
    set_max_level(level_cap);
    if (schema) {
      res.doc = Schema();
    } else if (command.empty()) {
      throw InputError("no command given; see --help");
    } else if (command == "prop-t certify") {
      const auto fam = codec::FamilyFrom(in.Load(o.family), "family");
      const Rational eps = ArgRational(o.epsilon, "--epsilon");
      res.doc = Envelope(command);
      if (o.at) {
        const PropTResult r = check_prop_t_at(fam, eps, *o.at);
        res.doc["passed"] = r.passed();
        if (r.passed()) {
          res.doc["certificate"] = codec::ToJson(*r.certificate);
        } else {
          Json v = Json::array();
          for (const auto& x : r.violations) v.push_back(codec::ToJson(x));
          res.doc["violations"] = std::move(v);
          res.code = 1;
        }
      } else {
        const PropTLevel lvl = find_prop_t_level(fam, eps, o.min_level);
        res.doc["passed"] = true;
        res.doc["certificate"] = codec::ToJson(lvl.certificate);
        const std::string replay = ReverifyCertificate(fam, lvl.certificate);
        res.doc["reverified"] = replay.empty();
        if (!replay.empty()) {
          res.doc["reverifyFailure"] = replay;
          res.code = 1;
        }
      }
    } else if (command == "prop-t counterexample") {
      const ClopenSet w = codec::SetFrom(in.Load(o.w), "W");
      const VwCounterexample c = build_vw_counterexample(w, o.depth);
      res.doc = Envelope(command);
      Merge(res.doc, codec::ToJson(c));
      res.code = c.all_equal() ? 0 : 1;
    } else if (command == "tau build") {
      const auto elems = codec::FamilyFrom(in.Load(o.elements), "elements");
      const Rational eps = ArgRational(o.epsilon, "--epsilon");
      res.doc = Envelope(command);
      try {
        const TauMap t = build_tau(elems, o.n, eps);
        Merge(res.doc, codec::ToJson(t));
        res.code = t.verification.ok() ? 0 : 1;
      } catch (const TauHypothesisError& e) {
        const auto& f = e.failure();
        Json h;
        h["element"] = f.element;
        h["atom"] = f.atom;
        h["inside"] = codec::ToJson(f.inside);
        h["outside"] = codec::ToJson(f.outside);
        h["bound"] = codec::ToJson(f.bound);
        res.doc["hypothesisFailure"] = std::move(h);
        res.code = 1;
      }
    } else if (command == "talagrand solve") {
      TalagrandInstance inst = codec::InstanceFrom(in.Load(o.instance));
      if (o.relaxed) inst.relaxed = true;
      seeds.push_back(o.seed);
      config["budget"] = BudgetJson(budget);
      const TalagrandReport r = solve(inst, o.seed, budget);
      res.doc = Envelope(command);
      Merge(res.doc, codec::ToJson(r));
      res.code = r.verdict == Verdict::kBoundMet ? 0 : 1;
    } else if (command == "talagrand pz") {
      const TalagrandInstance inst = codec::InstanceFrom(in.Load(o.instance));
      const ClopenSet m = codec::SetFrom(in.Load(o.m_file), "M");
      const Rational xi = ArgRational(o.xi, "--xi");
      PzMode mode;
      if (o.mode == "enumerate") {
        mode.enumerate = true;
      } else if (o.mode.rfind("sample:", 0) == 0) {
        const auto rest = o.mode.substr(7);
        const auto colon = rest.find(':');
        if (colon == std::string::npos) throw InputError("--mode: expected sample:N:S");
        try {
          std::size_t used = 0;
          mode.samples = std::stoull(rest.substr(0, colon), &used);
          if (used != colon) throw InputError("--mode: bad sample count");
          const std::string s = rest.substr(colon + 1);
          mode.seed = std::stoull(s, &used);
          if (used != s.size()) throw InputError("--mode: bad seed");
        } catch (const std::logic_error&) {
          throw InputError("--mode: expected sample:N:S with decimal N and S");
        }
        mode.enumerate = false;
        seeds.push_back(mode.seed);
      } else {
        throw InputError("--mode: expected enumerate or sample:N:S");
      }
      const PzReport r = paley_zygmund_check(inst, m, xi, mode);
      res.doc = Envelope(command);
      Merge(res.doc, codec::ToJson(r));
      res.code = r.pass ? 0 : 1;
    } else if (command == "talagrand n-zero") {
      const Rational eta = ArgRational(o.eta, "--eta");
      res.doc = Envelope(command);
      res.doc["t"] = o.t;
      res.doc["eta"] = codec::ToJson(eta);
      res.doc["nZero"] = n_zero(o.t, eta);
    } else if (command == "measure tv") {
      const SignedMeasure nu = codec::MeasureFrom(in.Load(o.measure), "measure");
      res.doc = Envelope(command);
      if (!o.set.empty()) {
        const ClopenSet a = codec::SetFrom(in.Load(o.set), "set");
        res.doc["value"] = codec::ToJson(nu(a));
        res.doc["variation"] = codec::ToJson(nu.variation(a));
      } else {
        res.doc["value"] = codec::ToJson(nu(ClopenSet::Full()));
        res.doc["variation"] = codec::ToJson(nu.norm());
      }
    } else if (command == "measure witness") {
      res.doc = Envelope(command);
      res.doc["n"] = o.n;
      const SignedMeasure mu = nikodym_witness(o.n, o.level);
      res.doc["measure"] = codec::ToJson(mu);
      res.doc["norm"] = codec::ToJson(mu.norm());
    } else if (command == "measure nikodym-demo") {
      const auto fam = codec::FamilyFrom(in.Load(o.family), "family");
      const NikodymReport r = nikodym_demo(fam, ArgRational(o.epsilon, "--epsilon"), o.m_max);
      res.doc = Envelope(command);
      Merge(res.doc, codec::ToJson(r));
      res.code = r.ok() ? 0 : 1;
    } else if (command == "measure oscillation") {
      const WitnessSequencePrefix pre = codec::PrefixFrom(in.Load(o.prefix), "prefix");
      const ClopenSet b = codec::SetFrom(in.Load(o.b), "B");
      const OscillationReport r = oscillation_check(pre, b);
      res.doc = Envelope(command);
      Merge(res.doc, codec::ToJson(r));
      res.code = r.ok() ? 0 : 1;
    } else if (command == "measure decomp-validate") {
      const QuadrupleContext ctx = codec::ContextFrom(in.Load(o.context));
      if (!ctx.decomposition) throw InputError("context: missing field \"decomposition\"");
      const auto& d = *ctx.decomposition;
      const DecompositionReport r = validate_decomposition(ctx.theta, d.theta1, d.theta2, d.modulus, d.x, d.epsilon_x);
      res.doc = Envelope(command);
      Merge(res.doc, codec::ToJson(r));
      res.code = r.ok() ? 0 : 1;
    } else if (command == "quadruple validate") {
      const GoodQuadruple e = codec::QuadrupleFrom(in.Load(o.quadruple));
      const QuadrupleContext ctx = codec::ContextFrom(in.Load(o.context));
      const QuadrupleReport r = validate_good_quadruple(e, ctx);
      res.doc = Envelope(command);
      res.doc["pPrime"] = e.p_prime();
      Merge(res.doc, codec::ToJson(r));
      res.code = r.good ? 0 : 1;
    } else if (command == "quadruple extend") {
      const Json qdoc = in.Load(o.quadruple);
      const GoodQuadruple e = codec::QuadrupleFrom(qdoc);
      const QuadrupleContext ctx = codec::ContextFrom(in.Load(o.context));
      ClopenSet b;
      if (!o.b.empty()) {
        b = codec::SetFrom(in.Load(o.b), "B");
      } else if (qdoc.contains("extendWith")) {
        b = codec::SetFrom(qdoc["extendWith"], "quadruple.extendWith");
      } else {
        throw InputError("extend needs --b or an \"extendWith\" field");
      }
      seeds.push_back(o.seed);
      config["budget"] = BudgetJson(budget);
      config["mode"] = o.relaxed ? "relaxed" : "strict";
      res.doc = Envelope(command);
      try {
        const ExtendResult r = extend_quadruple(e, b, ctx, o.relaxed ? Mode::kRelaxed : Mode::kStrict, o.seed, budget);
        Merge(res.doc, codec::ToJson(r));
        res.code = r.validation.good ? 0 : 1;
      } catch (const ExtendExhausted& x) {
        res.doc["exhausted"] = x.what();
        res.doc["scan"] = codec::ToJson(x.scan());
        res.code = 1;
      }
    } else if (command == "troisieme") {
      const TroisiemeInputs ti = codec::TroisiemeInputsFrom(in.Load(o.inputs));
      seeds.push_back(ti.seed);
      config["budget"] = BudgetJson(ti.budget);
      config["mode"] = ti.mode == Mode::kStrict ? "strict" : "relaxed";
      const TroisiemeResult r = construct_A_troisieme(ti);
      res.doc = Envelope(command);
      Merge(res.doc, codec::ToJson(r));
      res.code = r.valid() ? 0 : 1;
    } else if (command == "assemble-b") {
      const GoodQuadruple e = codec::QuadrupleFrom(in.Load(o.quadruple));
      const QuadrupleContext ctx = codec::ContextFrom(in.Load(o.context));
      const AssemblyReport r = assemble_limit_set(e.kernels, e.n, ctx, o.k);
      res.doc = Envelope(command);
      Merge(res.doc, codec::ToJson(r));
      res.code = r.ok ? 0 : 1;
    } else if (command == "set") {
      const ClopenSet a = codec::SetFrom(in.Load(o.set), "a");
      std::optional<ClopenSet> b;
      if (!o.set2.empty()) b = codec::SetFrom(in.Load(o.set2), "b");
      res.doc = Envelope("set " + o.op);
      if (o.op == "lambda") {
        res.doc["value"] = codec::ToJson(lambda(a));
      } else if (o.op == "phi") {
        res.doc["m"] = o.coordinate;
        res.doc["value"] = codec::ToJson(phi(a, o.coordinate));
      } else if (o.op == "psi") {
        if (!b) throw InputError("psi needs --b");
        res.doc["m"] = o.coordinate;
        res.doc["value"] = codec::ToJson(psi(a, *b, o.coordinate));
      } else if (o.op == "normalize") {
        const ClopenSet s = normalize(a, o.level);
        Json sj;
        sj["level"] = s.level();
        sj["atoms"] = MaskHex(s.mask());
        res.doc["set"] = std::move(sj);
      } else if (auto op = ParseSetOp(o.op)) {
        res.doc["set"] = codec::ToJson(algebra(*op, a, b));
      } else {
        throw InputError("unknown set operation \"" + o.op + "\"");
      }
    }
  } catch (const ScaleError& e) {
    res.code = 3;
    res.doc = Envelope(command);
    res.doc["scaleReport"] = codec::ToJson(e.report());
    err = std::string("scale refusal: ") + e.what() + "\n";
  } catch (const InputError& e) {
    res.code = 2;
    res.doc = Json();
    err = std::string("error: ") + e.what() + "\n";
  } catch (const CheckFailure& e) {
    res.code = 1;
    res.doc = Envelope(command);
    res.doc["checkFailure"] = e.what();
    err = std::string("check failed: ") + e.what() + "\n";
  } catch (const ExtendExhausted& e) {
    res.code = 1;
    res.doc = Envelope(command);
    res.doc["exhausted"] = e.what();
    err = std::string("exhausted: ") + e.what() + "\n";
  } catch (const std::bad_alloc&) {
    res.code = 3;
    res.doc = Json();
    err = "error: out of memory\n";
  } catch (const std::exception& e) {
    res.code = 2;
    res.doc = Json();
    err = std::string("error: ") + e.what() + "\n";
  }
  set_max_level(saved_cap);

  if (!res.doc.is_null()) out = res.doc.dump(2) + "\n";

  if (!manifest_path.empty()) {
    Json m;
    m["version"] = kVersion;
    m["command"] = argv;
    m["inputDigests"] = in.DigestJson();
    m["seeds"] = seeds;
    m["configuration"] = config;
    m["outcome"] = res.code;
    m["outputDigest"] = Sha256Hex(out);
    std::ofstream f(manifest_path, std::ios::binary);
    if (!f) {
      err += "error: cannot write manifest " + manifest_path + "\n";
      return res.code == 0 ? 2 : res.code;
    }
    f << m.dump(2) << "\n";
  }
  return res.code;
}

}  // namespace dyadcert::cli

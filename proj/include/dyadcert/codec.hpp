#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dyadcert/clopen.hpp"
#include "dyadcert/construction.hpp"
#include "dyadcert/errors.hpp"
#include "dyadcert/measures.hpp"
#include "dyadcert/prop_t.hpp"
#include "dyadcert/rational.hpp"
#include "dyadcert/talagrand.hpp"
#include "dyadcert/tau.hpp"

namespace dyadcert::codec {

using Json = nlohmann::ordered_json;

// Parses a document; throws InputError carrying the byte offset on failure.
Json ParseDocument(const std::string& text, const std::string& source);

// Decoders throw InputError naming the offending JSON path.
Rational RationalFrom(const Json& j, const std::string& path);
ClopenSet SetFrom(const Json& j, const std::string& path);
std::vector<ClopenSet> FamilyFrom(const Json& j, const std::string& path);
SignedMeasure MeasureFrom(const Json& j, const std::string& path);
AtomId AtomFrom(const Json& j, const std::string& path);
TalagrandInstance InstanceFrom(const Json& j);
WitnessSequencePrefix PrefixFrom(const Json& j, const std::string& path);
QuadrupleContext ContextFrom(const Json& j);
GoodQuadruple QuadrupleFrom(const Json& j);
TroisiemeInputs TroisiemeInputsFrom(const Json& j);
std::vector<ModulusEntry> ModulusFrom(const Json& j, const std::string& path);
unsigned UnsignedFrom(const Json& j, const std::string& path);

Json ToJson(const Rational& r);
Json ToJson(const ClopenSet& s);
Json ToJson(const AtomId& a);
Json ToJson(const SignedMeasure& m);
Json FamilyToJson(const std::vector<ClopenSet>& family);
Json ToJson(const TalagrandInstance& inst);
Json ToJson(const GoodQuadruple& e);

Json ToJson(const PropTCertificate& c);
Json ToJson(const Violation& v);
Json ToJson(const VwCounterexample& c);
Json ToJson(const TauMap& t);
Json ToJson(const TalagrandReport& r);
Json ToJson(const PzReport& r);
Json ToJson(const NikodymReport& r);
Json ToJson(const OscillationReport& r);
Json ToJson(const DecompositionReport& r);
Json ToJson(const QuadrupleReport& r);
Json ToJson(const TroisiemeResult& r);
Json ToJson(const ExtendResult& r);
Json ToJson(const AssemblyReport& r);
Json ToJson(const ScaleReport& r);
Json ToJson(const std::vector<ScanRecord>& scan);

// Set-valued JSON sizes above this many atoms are written as atom lists or maps.
inline constexpr std::uint64_t kDenseLimit = 4096;

}  // namespace dyadcert::codec

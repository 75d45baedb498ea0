#pragma once

// JSON certificates. Every number is an exact "num/den" or integer string;
// verification recomputes from the file alone.

#include <optional>
#include <string>
#include <vector>

#include "dioph/construction.hpp"
#include "dioph/dimension.hpp"
#include "dioph/schmidt_game.hpp"
#include "json.hpp"

namespace dioph {

using json = nlohmann::ordered_json;

json to_json(const ConstructionParams& p);
ConstructionParams params_from_json(const json& j);

json to_json(const ConditionReport& r);
json to_json(const ParentReport& r);
json to_json(const DimensionReport& d);
json to_json(const Lemma1Report& r);

/// kind "construction": params, levels (intervals as [parent, s] pairs plus
/// per-parent drop logs), condition reports and an optional dimension block.
json construction_certificate(const Construction& c, const std::optional<DimensionReport>& dim = std::nullopt);
/// Rebuilds the levels recorded in a construction certificate.
std::vector<LevelSet> levels_from_certificate(const json& j, const ConstructionParams& p);

/// kind "point".
json point_certificate(const ConstructionParams& p, std::size_t depth, std::uint64_t seed, const PointCertificate& cert);
PointCertificate point_from_json(const json& j);

/// kind "game_batch": a list of transcripts with their reports.
json game_batch(const std::vector<Transcript>& games, const BigInt& q_bound);

struct VerifyResult {
  std::string kind;
  bool ok = true;
  std::vector<std::string> problems;
  json details;
};

/// Dispatches on "kind". Never throws for a failed check; malformed files
/// raise VerificationFailure.
VerifyResult verify_certificate(const json& j);

/// Serialized form written to disk: compact, newline-terminated.
std::string dump_certificate(const json& j);

}  // namespace dioph

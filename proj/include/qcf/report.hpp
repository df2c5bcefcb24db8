// JSON report rendering. Key order is fixed (ordered_json) so identical
// inputs serialize to identical bytes.

#pragma once

#include <string>

#include <json.hpp>

#include "qcf/adversary.hpp"
#include "qcf/protocol.hpp"

namespace qcf {

using ojson = nlohmann::ordered_json;

ojson code_json(const LinearCode& code, bool include_generator = false);
ojson config_json(const ProtocolConfig& config);
ojson check_record_json(const CheckRecord& record);
ojson outcome_json(const Outcome& outcome);

ojson run_report_json(const ProtocolConfig& config, std::uint64_t seed, const RunResult& result,
                      bool include_transcript);

ojson campaign_report_json(const ProtocolConfig& config, std::uint64_t seed,
                           const std::string& alice, const std::string& bob,
                           const CampaignStats& stats);

ojson bias_report_json(const BiasReport& report);

std::string render(const ojson& j);  // 2-space indented, trailing newline

}  // namespace qcf

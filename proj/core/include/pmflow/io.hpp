#pragma once

// Deterministic report artifacts: atomic text output, CSV tables, and JSON
// bodies for the report types. Every artifact carries the format version and
// a hash of the configuration that produced it; none carry timestamps, so
// identical runs produce identical bytes.

#include <cstdint>
#include <string>
#include <vector>

#include "pmflow/asymptotics.hpp"
#include "pmflow/forces.hpp"
#include "pmflow/solver.hpp"

namespace pmflow {

// Write via a sibling temp file + rename so readers never see partial output.
void write_text_atomic(const std::string& path, const std::string& content);

// FNV-1a over the canonical (key-sorted) configuration text.
std::uint64_t config_hash(const std::string& canonical_config);
std::string hash_hex(std::uint64_t h);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Leading comment lines carry format_version and config hash; numbers are
// printed with %.12g.
std::string to_csv(const CsvTable& table, std::uint64_t cfg_hash);

CsvTable rate_report_table(const RateReport& rep);

std::string rate_report_json(const RateReport& rep, std::uint64_t cfg_hash);
std::string stability_report_json(const StabilityReport& rep,
                                  std::uint64_t cfg_hash);
std::string convergence_report_json(const ConvergenceReport& rep,
                                    std::uint64_t cfg_hash);
std::string certificate_json(const PicardCertificate& cert,
                             std::uint64_t cfg_hash);
std::string self_similarity_json(const SelfSimilarityReport& rep,
                                 std::uint64_t cfg_hash);
std::string moment_report_json(const MomentReport& rep, std::uint64_t cfg_hash);
std::string pv_report_json(const PvPairingReport& rep, std::uint64_t cfg_hash);

}  // namespace pmflow

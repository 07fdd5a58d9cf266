#include "pmflow/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "pmflow/detail/rng.hpp"
#include "pmflow/version.hpp"

namespace pmflow {

using nlohmann::json;

void write_text_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out.write(content.data(), std::streamsize(content.size()));
    if (!out) throw std::runtime_error("short write: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename into place: " + path);
  }
}

std::uint64_t config_hash(const std::string& canonical_config) {
  return detail::fnv1a(canonical_config.data(), canonical_config.size());
}

std::string hash_hex(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

json meta(std::uint64_t cfg_hash) {
  return json{{"format_version", format_version},
              {"config_hash", hash_hex(cfg_hash)}};
}

std::string dump(json j) { return j.dump(2) + "\n"; }

const char* bound_type_name(RateReport::BoundType b) {
  return b == RateReport::BoundType::equality ? "equality" : "upper_bound";
}

json samples_json(const std::vector<RateSample>& samples) {
  json arr = json::array();
  for (const RateSample& s : samples) arr.push_back({{"t", s.t}, {"value", s.value}});
  return arr;
}

json rate_body(const RateReport& rep) {
  return json{{"exponent_fit", rep.exponent_fit},
              {"exponent_theory", rep.exponent_theory},
              {"r_squared", rep.r_squared},
              {"tolerance", rep.tolerance},
              {"bound_type", bound_type_name(rep.bound_type)},
              {"pass", rep.pass},
              {"samples", samples_json(rep.samples)}};
}

}  // namespace

std::string to_csv(const CsvTable& table, std::uint64_t cfg_hash) {
  std::string out;
  out += "# format_version=" + std::to_string(format_version) + "\n";
  out += "# config_hash=" + hash_hex(cfg_hash) + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out += ',';
    out += table.columns[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw std::invalid_argument("csv row width mismatch");
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += fmt_num(row[c]);
    }
    out += '\n';
  }
  return out;
}

CsvTable rate_report_table(const RateReport& rep) {
  CsvTable t;
  t.columns = {"t", "value"};
  for (const RateSample& s : rep.samples) t.rows.push_back({s.t, s.value});
  return t;
}

std::string rate_report_json(const RateReport& rep, std::uint64_t cfg_hash) {
  json j = meta(cfg_hash);
  j["rate"] = rate_body(rep);
  return dump(j);
}

std::string stability_report_json(const StabilityReport& rep,
                                  std::uint64_t cfg_hash) {
  json j = meta(cfg_hash);
  json sweeps = json::array();
  for (const auto& sw : rep.sweeps)
    sweeps.push_back(
        {{"s", sw.s}, {"lhs", sw.lhs}, {"rhs", sw.rhs}, {"c", sw.c()}});
  j["stability"] = {{"sweeps", sweeps},
                    {"slope", rep.slope},
                    {"c_spread", rep.c_spread},
                    {"pass", rep.pass}};
  return dump(j);
}

std::string convergence_report_json(const ConvergenceReport& rep,
                                    std::uint64_t cfg_hash) {
  json j = meta(cfg_hash);
  j["convergence"] = {{"rate", rate_body(rep.rate)},
                      {"weighted", samples_json(rep.weighted)},
                      {"weighted_decreasing", rep.weighted_decreasing},
                      {"force_gap_sup", rep.force_gap_sup},
                      {"datum_gap_final", rep.datum_gap_final},
                      {"pass", rep.pass}};
  return dump(j);
}

std::string certificate_json(const PicardCertificate& cert,
                             std::uint64_t cfg_hash) {
  json j = meta(cfg_hash);
  j["certificate"] = {{"y_norm", cert.y_norm},
                      {"lambda", cert.lambda},
                      {"eta", cert.eta},
                      {"smallness_ok", cert.smallness_ok},
                      {"bound_norm", cert.bound_norm},
                      {"uniqueness_radius", cert.uniqueness_radius},
                      {"predicted_ratio", cert.predicted_ratio},
                      {"max_observed_ratio", cert.max_observed_ratio},
                      {"a_posteriori_residual", cert.a_posteriori_residual},
                      {"residuals", cert.residuals},
                      {"iterations", cert.iterations},
                      {"converged", cert.converged}};
  return dump(j);
}

std::string self_similarity_json(const SelfSimilarityReport& rep,
                                 std::uint64_t cfg_hash) {
  json j = meta(cfg_hash);
  json pairs = json::array();
  for (const auto& p : rep.pairs)
    pairs.push_back({{"t", p.t}, {"t4", p.t4}, {"rel_error", p.rel_error}});
  j["self_similarity"] = {{"pairs", pairs}, {"worst", rep.worst}};
  return dump(j);
}

std::string moment_report_json(const MomentReport& rep,
                               std::uint64_t cfg_hash) {
  json j = meta(cfg_hash);
  j["moment_majorant"] = {{"lhs", rep.lhs},
                          {"rhs", rep.rhs},
                          {"fourier_constant", rep.fourier_constant},
                          {"geometry_constant", rep.geometry_constant},
                          {"moment", rep.moment},
                          {"margin", rep.margin()}};
  return dump(j);
}

std::string pv_report_json(const PvPairingReport& rep, std::uint64_t cfg_hash) {
  json j = meta(cfg_hash);
  j["pv_pairing"] = {{"direct", rep.direct},
                     {"fourier_side", rep.fourier_side},
                     {"consistent", rep.consistent}};
  return dump(j);
}

}  // namespace pmflow

#pragma once

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "factpat/bigint.hpp"
#include "factpat/census.hpp"
#include "factpat/estimate.hpp"
#include "factpat/families.hpp"
#include "factpat/patterns.hpp"

namespace factpat {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "factpat-report-v1";

namespace detail {

inline Json ratio_json(const Ratio& x) { return Json{{"exact", to_string(x)}, {"approx", to_double(x)}}; }

inline Json interval_json(const Interval& x) { return Json{{"lo", ratio_json(x.lo)}, {"hi", ratio_json(x.hi)}}; }

inline Json tally_json(const CostTally& t) {
  return Json{{"field_mults", t.field_mults}, {"field_invs", t.field_invs}, {"gcd_calls", t.gcd_calls},
              {"powmod_mults", t.powmod_mults}, {"divrem_calls", t.divrem_calls}};
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline Json to_json(const BoundReport& b, const std::string& theorem) {
  return Json{{"theorem", theorem},
              {"main_term", detail::ratio_json(b.main_term)},
              {"error_bound", detail::interval_json(b.error_bound)},
              {"observed", b.observed.str()},
              {"holds", b.holds},
              {"slack", b.slack}};
}

inline Json to_json(const FamilySpec& spec) {
  return Json{{"kind", kind_name(spec.kind)},
              {"descriptor", spec.descriptor},
              {"degree", spec.degree},
              {"m", spec.m},
              {"delta", spec.delta().str()},
              {"D", spec.D().str()},
              {"delta_G", spec.delta_G().str()},
              {"wt_degrees", spec.wt_degrees},
              {"plain_degrees", spec.plain_degrees},
              {"hypotheses", spec.verified ? "verified" : "unverified"},
              {"notes", spec.notes}};
}

inline Json to_json(const CensusReport& rep) {
  Json j;
  j["schema"] = kReportSchema;
  j["kind"] = "pattern-census";
  j["family"] = rep.family;
  j["family_spec"] = to_json(rep.spec);
  j["field"] = rep.field;
  j["q"] = rep.q;
  j["r"] = rep.r;
  j["m"] = rep.m;
  j["delta"] = rep.delta.str();
  j["D"] = rep.D.str();
  j["delta_G"] = rep.delta_G.str();
  j["mode"] = rep.mode == CensusMode::Exhaustive ? "exhaustive" : "sampled";
  j["sample_size"] = rep.sample_size;
  j["seed"] = rep.seed;
  j["members"] = rep.members;
  j["square_free"] = rep.square_free;
  j["non_square_free"] = rep.members - rep.square_free;
  j["hypothesis_failures"] = rep.hypothesis_failures;
  Json rows = Json::array();
  for (const auto& row : rep.rows) {
    Json r;
    r["pattern"] = row.pattern.to_string();
    r["lambda"] = row.pattern.lambda();
    r["count"] = row.count;
    r["count_sq"] = row.count_sq;
    r["count_nsq"] = row.count_nsq;
    r["T"] = detail::ratio_json(row.T);
    r["applicable"] = row.applicable;
    if (rep.mode == CensusMode::Exhaustive) {
      r["all"] = to_json(row.all, "pattern_bound_all");
      r["sq"] = to_json(row.sq, "pattern_bound_sq");
    } else {
      r["main_term"] = detail::ratio_json(row.main_term);
      r["frequency"] = row.frequency;
      r["std_error"] = row.std_error;
      r["tolerance"] = row.tolerance;
    }
    r["holds"] = row.holds(rep.mode);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  if (rep.mode == CensusMode::Exhaustive) {
    j["family_size"] = Json{{"applicable", rep.size.applicable},
                            {"hypothesis_met", rep.size.bounds.hypothesis_met},
                            {"lower", detail::interval_json(rep.size.bounds.lower)},
                            {"half_lower", detail::ratio_json(rep.size.bounds.half_lower)},
                            {"inv_upper", detail::interval_json(rep.size.bounds.inv_upper)},
                            {"holds_lower", rep.size.holds_lower},
                            {"holds_half", rep.size.holds_half}};
    j["square_free_probability"] = Json{{"applicable", rep.sq.applicable},
                                        {"hypothesis_met", rep.sq.bound.hypothesis_met},
                                        {"bound", detail::ratio_json(rep.sq.bound.value)},
                                        {"fraction", detail::ratio_json(rep.sq.fraction)},
                                        {"holds", rep.sq.holds}};
  }
  j["oracle"] = Json{{"policy", policy_name(rep.oracle.policy)},
                     {"checked", rep.oracle.checked},
                     {"mismatches", rep.oracle.mismatches},
                     {"note", rep.oracle.note}};
  j["status"] = rep.status();
  return j;
}

inline Json to_json(const CostCensus& c) {
  Json j;
  j["schema"] = kReportSchema;
  j["kind"] = "cost-census";
  j["family"] = c.family;
  j["field"] = c.field;
  j["q"] = c.q;
  j["r"] = c.r;
  j["n"] = c.n;
  j["seed"] = c.seed;
  const CostTally* tallies[4] = {&c.totals.x1, &c.totals.x2, &c.totals.x3, &c.totals.x4};
  Json stages = Json::array();
  for (int i = 0; i < 4; ++i) {
    stages.push_back(Json{{"stage", "X" + std::to_string(i + 1)},
                          {"totals", detail::tally_json(*tallies[i])},
                          {"mean_arithmetic", c.stage[i].mean()},
                          {"std_error", c.stage[i].std_error()}});
  }
  j["stages"] = std::move(stages);
  const double M = c.model.M;
  const double r1 = c.r + 1.0;
  const double lq = c.model.lambda_q;
  j["model"] = Json{{"M", M},
                    {"U", c.model.U},
                    {"lambda_q", c.model.lambda_q},
                    {"nu_q", c.model.nu_q},
                    {"M_r1_lambda_q", M * r1 * lq},
                    {"M_log_q", M * std::log2(static_cast<double>(c.q))},
                    {"ddf_shape", "xi*(2*tau1*lambda(q)+tau1+tau2*log r)*M(r)*(r+1)"},
                    {"xi", c.model.xi},
                    {"mu", c.model.mu}};
  j["ddf_ratio"] = c.stage[1].mean() / (lq * M * r1);
  j["ddf_completion"] = Json{{"frequency", c.ddf_completion_frequency()},
                             {"exact", detail::ratio_json(prob_distinct_lengths(c.r))},
                             {"reference", ddf_completion_reference(c.r)}};
  j["largest_degree"] = Json{{"mean_over_r1", c.largest_degree.mean() / r1},
                             {"std_error_over_r1", c.largest_degree.std_error() / r1},
                             {"exact_over_r1", to_double(expected_longest_cycle(c.r)) / r1},
                             {"xi", kGolomb}};
  j["checks"] = Json{{"square_free_runs", c.square_free_runs},
                     {"erf_gcd_violations", c.erf_gcd_violations},
                     {"ddf_iteration_violations", c.ddf_iteration_violations}};
  j["status"] = c.status();
  return j;
}

/// Problems found in a report document; empty when it matches the schema.
inline std::vector<std::string> validate_report(const Json& j) {
  std::vector<std::string> bad;
  auto need = [&](const Json& obj, const char* key, Json::value_t type) {
    if (!obj.contains(key)) {
      bad.push_back(std::string("missing ") + key);
      return;
    }
    const auto t = obj.at(key).type();
    const bool numeric = type == Json::value_t::number_unsigned &&
                         (t == Json::value_t::number_integer || t == Json::value_t::number_unsigned);
    if (t != type && !numeric) bad.push_back(std::string("wrong type for ") + key);
  };
  using V = Json::value_t;
  need(j, "schema", V::string);
  if (j.value("schema", "") != kReportSchema) bad.push_back("unknown schema");
  need(j, "kind", V::string);
  need(j, "family", V::string);
  need(j, "q", V::number_unsigned);
  need(j, "r", V::number_unsigned);
  need(j, "seed", V::number_unsigned);
  need(j, "status", V::number_unsigned);
  const std::string kind = j.value("kind", "");
  if (kind == "pattern-census") {
    need(j, "mode", V::string);
    need(j, "members", V::number_unsigned);
    need(j, "rows", V::array);
    if (j.contains("rows") && j["rows"].is_array())
      for (const auto& row : j["rows"]) {
        need(row, "pattern", V::string);
        need(row, "count", V::number_unsigned);
        need(row, "count_sq", V::number_unsigned);
        need(row, "count_nsq", V::number_unsigned);
        need(row, "holds", V::boolean);
      }
  } else if (kind == "cost-census") {
    need(j, "n", V::number_unsigned);
    need(j, "stages", V::array);
    need(j, "model", V::object);
  } else {
    bad.push_back("unknown kind");
  }
  return bad;
}

inline std::string emit_json(const CensusReport& rep) { return to_json(rep).dump(2) + "\n"; }
inline std::string emit_json(const CostCensus& c) { return to_json(c).dump(2) + "\n"; }

/// One row per pattern.
inline std::string emit_csv(const CensusReport& rep) {
  std::ostringstream out;
  out.precision(17);
  out << "pattern,count,count_sq,count_nsq,T,main_term,bound_all,holds_all,bound_sq,holds_sq,frequency,std_error,"
         "tolerance,applicable,holds\n";
  for (const auto& row : rep.rows) {
    out << detail::csv_quote(row.pattern.to_string()) << ',' << row.count << ',' << row.count_sq << ','
        << row.count_nsq << ',' << to_string(row.T) << ',' << to_double(row.main_term) << ',';
    if (rep.mode == CensusMode::Exhaustive)
      out << row.all.bound_value() << ',' << row.all.holds << ',' << row.sq.bound_value() << ',' << row.sq.holds
          << ",,,,";
    else
      out << ",,,," << row.frequency << ',' << row.std_error << ',' << row.tolerance << ',';
    out << row.applicable << ',' << row.holds(rep.mode) << '\n';
  }
  return out.str();
}

/// One row per stage.
inline std::string emit_csv(const CostCensus& c) {
  std::ostringstream out;
  out.precision(17);
  out << "stage,field_mults,field_invs,gcd_calls,powmod_mults,divrem_calls,mean_arithmetic,std_error\n";
  const CostTally* tallies[4] = {&c.totals.x1, &c.totals.x2, &c.totals.x3, &c.totals.x4};
  for (int i = 0; i < 4; ++i) {
    const CostTally& t = *tallies[i];
    out << 'X' << i + 1 << ',' << t.field_mults << ',' << t.field_invs << ',' << t.gcd_calls << ','
        << t.powmod_mults << ',' << t.divrem_calls << ',' << c.stage[i].mean() << ',' << c.stage[i].std_error()
        << '\n';
  }
  return out.str();
}

}  // namespace factpat

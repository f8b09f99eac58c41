#pragma once

// JSON and CSV renderings of reports, support profiles and surveys.

#include "pstlab/pst.hpp"
#include "pstlab/spectral.hpp"
#include "pstlab/verify.hpp"

#include "json.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace pstlab {

using Json = nlohmann::ordered_json;

inline Json vector_json(const ExactVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(x.str());
  return a;
}

inline Json ids_json(const std::vector<EigenvalueId>& ids) {
  Json a = Json::array();
  for (const auto& id : ids) a.push_back(id.str());
  return a;
}

inline Json projection_json(const ProjectionRecord& r) {
  return {{"eigenvalue", r.eigenvalue.str()}, {"of_u", vector_json(r.of_u)}, {"of_v", vector_json(r.of_v)}};
}

inline Json certificate_json(const Certificate& c) {
  Json j = {{"kind", to_string(c.kind)}, {"detail", c.detail}};
  Json w = Json::array();
  for (const auto& r : c.witnesses) w.push_back(projection_json(r));
  j["witnesses"] = std::move(w);
  if (!c.support.empty()) {
    Json s = Json::array();
    for (const auto& r : c.support) s.push_back(projection_json(r));
    j["support"] = std::move(s);
  }
  if (c.vertex >= 0) {
    j["vertex"] = c.vertex;
    j["minpoly"] = c.minpoly.str();
    j["residual"] = c.residual.str();
  }
  return j;
}

inline Json report_json(const PSTReport& r) {
  Json j = {{"graph6", r.graph6}, {"kind", to_string(r.kind)}, {"u", r.u}, {"v", r.v}, {"verdict", to_string(r.verdict)}};
  j["certificate"] = r.verdict == Verdict::No ? certificate_json(r.certificate) : Json(nullptr);
  if (r.verdict == Verdict::Undecided) j["reason"] = r.undecided_reason;
  j["g"] = r.g == 0 ? Json(nullptr) : Json(r.g);
  if (r.time) {
    j["time"] = {{"num", r.time->multiple_of_pi.get_num().get_str()},
                 {"den", r.time->multiple_of_pi.get_den().get_str()},
                 {"sqrt_delta", r.time->sqrt_delta},
                 {"text", r.time->str()},
                 {"decimal", r.time->value()}};
  } else {
    j["time"] = nullptr;
  }
  if (r.phase) {
    const auto z = r.phase->value();
    j["phase"] = {{"s_num", r.phase->s.get_num().get_str()},
                  {"s_den", r.phase->s.get_den().get_str()},
                  {"text", r.phase->str()},
                  {"re", z.real()},
                  {"im", z.imag()}};
  } else {
    j["phase"] = nullptr;
  }
  j["plus_set"] = ids_json(r.plus_set);
  j["minus_set"] = ids_json(r.minus_set);
  return j;
}

inline Json profile_json(const SupportProfile& p) {
  Json s = Json::array();
  for (std::size_t i = 0; i < p.support.size(); ++i) {
    Json e = {{"eigenvalue", p.support[i].str()}};
    e["projection"] = p.support[i].is_residual() ? vector_json(p.residual_component) : vector_json(p.projections[i]);
    s.push_back(std::move(e));
  }
  return {{"vertex", p.u}, {"kind", to_string(p.kind)}, {"minpoly", p.minpoly.str()}, {"support", std::move(s)}};
}

inline Json survey_record_json(const SurveyRecord& r) {
  return {{"graph6", r.graph6},
          {"n", r.n},
          {"spanning_trees", r.spanning_trees.get_str()},
          {"tau_odd", r.tau_odd},
          {"tau_power_of_two", r.tau_power_of_two},
          {"has_small_twins", r.has_small_twins},
          {"no_admissible_pair", r.no_admissible_pair},
          {"bipartite", r.bipartite},
          {"lmax_integer", r.lmax_integer},
          {"lpst_pairs", r.lpst_pairs},
          {"apst_pairs", r.apst_pairs},
          {"undecided_pairs", r.undecided_pairs},
          {"violations", r.violations}};
}

/// Flat (metric, value) view of an aggregate, shared by JSON and CSV.
inline std::vector<std::pair<std::string, long long>> aggregate_rows(const SurveyAggregate& a) {
  return {{"connected", a.connected},
          {"tau_odd", a.tau_odd},
          {"odd_order_tau_odd", a.odd_order_tau_odd},
          {"tau_pow2", a.tau_pow2},
          {"pow2_with_small_twins", a.pow2_with_small_twins},
          {"ruled_out_small_twins", a.ruled_out_small_twins},
          {"ruled_out_no_admissible_pair", a.ruled_out_no_admissible_pair},
          {"bipartite", a.bipartite},
          {"lmax_integer", a.lmax_integer},
          {"lpst_graphs", a.lpst_graphs},
          {"lpst_pairs", a.lpst_pairs},
          {"apst_graphs", a.apst_graphs},
          {"apst_pairs", a.apst_pairs},
          {"undecided_pairs", a.undecided_pairs},
          {"violations", a.violations}};
}

inline Json aggregate_json(const SurveyAggregate& a) {
  Json j = {{"source", a.source}};
  for (const auto& [k, v] : aggregate_rows(a)) j[k] = v;
  j["violation_samples"] = a.violation_samples;
  return j;
}

inline Json paper_json(const std::vector<PaperAssertion>& checks, const std::string& reading) {
  Json a = Json::array();
  for (const auto& c : checks) a.push_back({{"name", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"pass", c.pass()}});
  return {{"ruled_out_reading", reading}, {"checks", std::move(a)}};
}

inline std::string aggregate_csv(const SurveyAggregate& a) {
  std::ostringstream os;
  os << "metric,value\n";
  for (const auto& [k, v] : aggregate_rows(a)) os << k << ',' << v << '\n';
  return os.str();
}

}  // namespace pstlab

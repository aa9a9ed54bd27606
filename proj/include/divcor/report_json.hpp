#pragma once

// JSON views of the report types, for the CLI and test harnesses.

#include "json.hpp"

#include "divcor/anatomy.hpp"
#include "divcor/correlate.hpp"
#include "divcor/majorants.hpp"
#include "divcor/singular.hpp"

namespace divcor {

inline nlohmann::json to_json(const AnatomyParams& ap) {
  return {
      {"k", ap.k},
      {"X", ap.X},
      {"p1", ap.p1},
      {"q1", ap.q1},
      {"p2", ap.p2},
      {"q2", ap.q2},
      {"p3", ap.p3},
      {"q3", ap.q3},
      {"eps_prime", ap.eps_prime},
      {"omega_cap", ap.omega_cap},
      {"large_prime_lo", ap.large_prime_lo},
      {"large_omega_cap", ap.large_omega_cap},
      {"psi_value", ap.psi_value},
      {"clamped",
       {ap.clamped[0], ap.clamped[1], ap.clamped[2], ap.clamped[3], ap.clamped[4],
        ap.clamped[5]}},
  };
}

inline nlohmann::json to_json(const MajorantParams& mp) {
  return {{"k", mp.k},
          {"X", mp.X},
          {"M", mp.M},
          {"m_clamped", mp.m_clamped},
          {"omega_cap", mp.omega_cap},
          {"eps_prime", mp.eps_prime}};
}

inline nlohmann::json to_json(const DiscardedMassReport& r) {
  return {{"k", r.k},
          {"l", r.l},
          {"X", r.X},
          {"H", r.H},
          {"lemma_sum", r.lemma_sum},
          {"lemma_normalized", r.lemma_normalized},
          {"mass_fraction", r.mass_fraction},
          {"kept", r.kept},
          {"discarded", r.discarded}};
}

inline nlohmann::json to_json(const MajorizeReport& r) {
  return {{"max_ratio", r.max_ratio},
          {"argmax_n", r.argmax_n},
          {"s_size", r.s_size},
          {"bound", r.bound}};
}

inline nlohmann::json to_json(const ShortIntervalProfile& p) {
  return {{"H1", p.H1},     {"q", p.q},     {"a", p.a},
          {"samples", p.samples}, {"seed", p.seed}, {"k_norm", p.k_norm},
          {"p50", p.p50},   {"p90", p.p90}, {"p99", p.p99},
          {"p100", p.p100}};
}

inline nlohmann::json to_json(const SingularConstant& c) {
  nlohmann::json j = {{"k", c.k},         {"h", c.h},
                      {"value", c.value}, {"product", c.product},
                      {"p_max", c.p_max}, {"tail_bound", c.tail_bound}};
  if (c.l) j["l"] = *c.l;
  return j;
}

inline nlohmann::json to_json(const CorrelationReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"h", row.h},
                    {"empirical", row.empirical},
                    {"main_term", row.main_term},
                    {"ratio", row.ratio}});
  return {{"X", r.X},
          {"H", r.H},
          {"k", r.k},
          {"l", r.l},
          {"lambda_mode", r.lambda_mode},
          {"restricted", r.restricted},
          {"extended_window", r.extended_window},
          {"rows", rows},
          {"deviation", r.deviation},
          {"pearson_h_profile", r.pearson_h_profile},
          {"timing",
           {{"sieve_seconds", r.sieve_seconds},
            {"corr_seconds", r.corr_seconds},
            {"const_seconds", r.const_seconds}}}};
}

inline nlohmann::json to_json(const MajorArcReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"h", row.h},
                    {"mt_real", row.mt_real},
                    {"mt_imag", row.mt_imag},
                    {"main_term", row.main_term},
                    {"ratio", row.ratio}});
  return {{"X", r.X},     {"H", r.H},         {"Q", r.Q},
          {"k", r.k},     {"l", r.l},         {"delta", r.delta},
          {"rows", rows}, {"pearson", r.pearson}};
}

inline nlohmann::json to_json(const MinorArcEnergy& e, uint64_t h_max) {
  nlohmann::json rows = nlohmann::json::array();
  for (size_t i = 0; i < e.remainder_mod.size(); ++i)
    rows.push_back({{"h", static_cast<int64_t>(i) - static_cast<int64_t>(h_max)},
                    {"remainder_mod", e.remainder_mod[i]}});
  return {{"rows", rows},
          {"aggregate_S", e.aggregate_S},
          {"aggregate_normalized", e.aggregate_normalized}};
}

}  // namespace divcor

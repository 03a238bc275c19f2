#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "pfm/clustering.hpp"
#include "pfm/model.hpp"
#include "pfm/sampling.hpp"
#include "pfm/spectral.hpp"

namespace pfm {

// Unspecified constants of the bounds, exposed as configuration.
struct TheoryConstants {
  double varkappa = 1.0;
  double gamma = 1.0;
  double epsilon = 1.0;
  double C0 = 1.0;
  double psi = 1.0;
  double qr_epsilon = 0.1;   // Qin-Rohe failure probability
  double ccwt_delta = 0.01;  // Chaudhuri-Chung-Tsiatas delta
};

struct AssumptionRecord {
  int id;             // 1..7
  std::string name;
  double observed;
  double threshold;
  bool pass;
};

struct AssumptionReport {
  std::vector<AssumptionRecord> items;
  double log_n = 0.0;
  TheoryConstants constants;
  bool all_pass() const {
    for (const auto& item : items)
      if (!item.pass) return false;
    return true;
  }
};

// Numeric evaluation of Theorem 3's assumptions 1-7 (natural logs).
AssumptionReport check_assumptions(const PfmModel& model, const SampledGraph& graph,
                                   const SeparationReport& sep, const SpectralEmbedding& spectrum,
                                   const TheoryConstants& constants = {});

struct BoundReport {
  std::string variant;  // "pfm" or "hpfm"
  double bound = 0.0;
  double term_concentration = 0.0;  // C0 gamma^4 / (denom^2 log n)
  double term_degree = 0.0;         // 4 eps^2 / dhat_min
  double prefactor = 0.0;           // K d_tot / (n d_min g_max)
  double probability = 0.0;         // (1 - 2exp(...)) (1 - e^{-gamma})
  double simplified = 0.0;          // K varkappa (C0 g^4 + 4 e^2 s^2) / (g_max s^2 log n)
  double denom = 0.0;               // sigma (pfm) or |lambda_K| (hpfm)
  double observed_p_err = -1.0;
};

// Theorem 3 mis-clustering bound. variant "hpfm" uses |lambda_K| of the frame,
// "pfm" uses the eigengap sigma of the expected spectrum.
BoundReport theorem3_bound(const AssumptionReport& assumptions, const PfmModel& model,
                           const SampledGraph& graph, const SeparationReport& sep,
                           const SpectralEmbedding& expected_spectrum, const std::string& variant,
                           const TheoryConstants& constants = {}, double observed_p_err = -1.0);

struct RelatedWorkRecord {
  std::string name;
  bool satisfied;
  nlohmann::json details;
};

// Qin-Rohe: lower bound on lambda_K for concentration with probability 1-eps.
RelatedWorkRecord check_qin_rohe(const PfmModel& model, double epsilon = 0.1);

// Rohe-Chatterjee-Yu: tau_n^2 log n > 2 with tau_n = d_min / n.
RelatedWorkRecord check_rohe_chatterjee_yu(const PfmModel& model);

// Balcan et al.: every node more connected inside its own community.
RelatedWorkRecord check_balcan(const SampledGraph& graph, const Partition& truth);

// Ng-Jordan-Weiss: delta > (2 + 2 sqrt 2) eps must stay below 1.
RelatedWorkRecord check_ng_jordan_weiss(const SampledGraph& graph, const Partition& truth);

// Chaudhuri-Chung-Tsiatas: d_i >= (128/9) ln(6n/delta).
RelatedWorkRecord check_chaudhuri_chung_tsiatas(const PfmModel& model, double delta = 0.01);

nlohmann::json assumptions_to_json(const AssumptionReport& report);
nlohmann::json bound_to_json(const BoundReport& report);

}  // namespace pfm

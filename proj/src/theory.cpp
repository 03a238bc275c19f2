#include "pfm/theory.hpp"

#include <cmath>

#include "pfm/kernels.hpp"

namespace pfm {

AssumptionReport check_assumptions(const PfmModel& model, const SampledGraph& graph,
                                   const SeparationReport& sep, const SpectralEmbedding& spectrum,
                                   const TheoryConstants& constants) {
  AssumptionReport report;
  report.constants = constants;
  const double log_n = std::log(static_cast<double>(model.partition.n));
  report.log_n = log_n;

  const double max_s = model.d_max_scaled / model.partition.n;
  report.items = {
      {1, "hpfm_model", model.is_hpfm ? 1.0 : 0.0, 1.0, model.is_hpfm},
      {2, "max_edge_probability", max_s, 1.0, max_s <= 1.0},
      {3, "dhat_min_vs_log_n", graph.dhat_min, log_n, graph.dhat_min >= log_n},
      {4, "d_min_vs_log_n", model.d_min, log_n, model.d_min >= log_n},
      {5, "d_max_vs_kappa_log_n", model.d_max_scaled, constants.varkappa * log_n,
       model.d_max_scaled <= constants.varkappa * log_n},
      {6, "g_max_positive", sep.g_max, 0.0, sep.g_max > 0.0},
      {7, "eigengap_positive", spectrum.sigma, 0.0, spectrum.sigma > 0.0},
  };
  return report;
}

BoundReport theorem3_bound(const AssumptionReport& assumptions, const PfmModel& model,
                           const SampledGraph& graph, const SeparationReport& sep,
                           const SpectralEmbedding& expected_spectrum, const std::string& variant,
                           const TheoryConstants& constants, double observed_p_err) {
  BoundReport report;
  report.variant = variant;
  report.observed_p_err = observed_p_err;

  if (sep.g_max <= 0.0) fail(ErrorCode::AssumptionViolated, "g_max must be positive");
  const int K = model.frame.K;
  if (variant == "hpfm") {
    // lambda_K of the model's expected spectrum (the frame eigenvalue once
    // cluster weights are rho-proportional).
    report.denom = std::abs(expected_spectrum.eigenvalues[K - 1]);
    if (report.denom <= 0.0) fail(ErrorCode::AssumptionViolated, "lambda_K is zero");
  } else if (variant == "pfm") {
    report.denom = expected_spectrum.sigma;
    if (report.denom <= 0.0) fail(ErrorCode::AssumptionViolated, "eigengap sigma is zero");
  } else {
    fail(ErrorCode::InvalidSpec, "variant must be pfm or hpfm");
  }

  const double n = model.partition.n;
  const double log_n = assumptions.log_n;
  const double g4 = std::pow(constants.gamma, 4);
  const double e2 = constants.epsilon * constants.epsilon;
  const double s2 = report.denom * report.denom;

  report.prefactor = K * model.d_tot / (n * model.d_min * sep.g_max);
  report.term_concentration = constants.C0 * g4 / (s2 * log_n);
  report.term_degree = 4.0 * e2 / graph.dhat_min;
  report.bound = report.prefactor * (report.term_concentration + report.term_degree);
  report.probability =
      (1.0 - 2.0 * std::exp(-e2 / (2.0 + constants.epsilon / std::sqrt(log_n)))) *
      (1.0 - std::exp(-constants.gamma));
  report.simplified = K * constants.varkappa * (constants.C0 * g4 + 4.0 * e2 * s2) /
                      (sep.g_max * s2 * log_n);
  return report;
}

RelatedWorkRecord check_qin_rohe(const PfmModel& model, double epsilon) {
  const int K = model.frame.K;
  // The paper's printed pair (12.3 at d_min 77.4, minimal d_min 11718) pins
  // the coefficient at 24, not the stated 8 sqrt(3); see the project notes.
  const double coefficient = 24.0;
  const double required =
      coefficient * std::sqrt(K * std::log(K / epsilon) / model.d_min);
  const double minimal_d_min = coefficient * coefficient * K * std::log(K / epsilon);
  RelatedWorkRecord record;
  record.name = "qin_rohe";
  record.satisfied = required <= 1.0;
  record.details = {{"epsilon", epsilon},
                    {"required_lambda_K", required},
                    {"minimal_d_min", minimal_d_min},
                    {"d_min", model.d_min}};
  return record;
}

RelatedWorkRecord check_rohe_chatterjee_yu(const PfmModel& model) {
  const double n = model.partition.n;
  const double log_n = std::log(n);
  const double tau = model.d_min / n;
  const double value = tau * tau * log_n;
  RelatedWorkRecord record;
  record.name = "rohe_chatterjee_yu";
  record.satisfied = value > 2.0;
  record.details = {{"tau_n", tau},
                    {"tau_sq_log_n", value},
                    {"minimal_d_min", n * std::sqrt(2.0 / log_n)},
                    {"d_min", model.d_min}};
  return record;
}

RelatedWorkRecord check_balcan(const SampledGraph& graph, const Partition& truth) {
  Vector in, out;
  kernels::in_out_degrees(in, out, graph.A, truth.labels);
  int count = 0;
  for (int i = 0; i < truth.n; ++i)
    if (out[i] > in[i]) ++count;
  RelatedWorkRecord record;
  record.name = "balcan";
  record.satisfied = count == 0;
  record.details = {{"nodes_more_connected_outside", count}, {"n", truth.n}};
  return record;
}

RelatedWorkRecord check_ng_jordan_weiss(const SampledGraph& graph, const Partition& truth) {
  const int n = truth.n;
  const int K = truth.K;
  const Vector& dhat = graph.empirical_degrees;
  for (int i = 0; i < n; ++i)
    if (!(dhat[i] > 0.0)) fail(ErrorCode::ZeroDegreeNode, "node " + std::to_string(i));

  // eps1: worst cross-community sum of A_jk^2 / (dhat_j dhat_k).
  // eps2: worst community value of (sum_k 1/dhat_k) * sqrt(within-community
  // coherence); the printed formula is garbled, see the project notes.
  Matrix cross = Matrix::Zero(K, K);
#pragma omp parallel
  {
    Matrix local = Matrix::Zero(K, K);
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i) {
      const int li = truth.labels[i];
      for (int j = 0; j < n; ++j)
        if (graph.A(j, i)) local(li, truth.labels[j]) += 1.0 / (dhat[i] * dhat[j]);
    }
#pragma omp critical
    cross += local;
  }

  double eps1 = 0.0;
  for (int a = 0; a < K; ++a)
    for (int b = 0; b < K; ++b)
      if (a != b) eps1 = std::max(eps1, cross(a, b));

  double eps2 = 0.0;
  for (int k = 0; k < K; ++k) {
    double inv_sum = 0.0;
    for (int node : truth.members[k]) inv_sum += 1.0 / dhat[node];
    eps2 = std::max(eps2, inv_sum * std::sqrt(cross(k, k)));
  }

  const double eps = std::sqrt(K * (K - 1) * eps1 + K * eps2 * eps2);
  const double delta_required = (2.0 + 2.0 * std::sqrt(2.0)) * eps;
  RelatedWorkRecord record;
  record.name = "ng_jordan_weiss";
  record.satisfied = delta_required < 1.0;
  record.details = {{"eps1", eps1},
                    {"eps2", eps2},
                    {"eps", eps},
                    {"delta_required", delta_required}};
  return record;
}

RelatedWorkRecord check_chaudhuri_chung_tsiatas(const PfmModel& model, double delta) {
  const double n = model.partition.n;
  const double threshold = 128.0 / 9.0 * std::log(6.0 * n / delta);
  RelatedWorkRecord record;
  record.name = "chaudhuri_chung_tsiatas";
  record.satisfied = model.d_min >= threshold;
  record.details = {{"delta", delta}, {"threshold", threshold}, {"d_min", model.d_min}};
  return record;
}

nlohmann::json assumptions_to_json(const AssumptionReport& report) {
  nlohmann::json doc;
  doc["log_n"] = report.log_n;
  doc["constants"] = {{"varkappa", report.constants.varkappa},
                      {"gamma", report.constants.gamma},
                      {"epsilon", report.constants.epsilon},
                      {"C0", report.constants.C0},
                      {"psi", report.constants.psi}};
  doc["assumptions"] = nlohmann::json::array();
  for (const auto& item : report.items)
    doc["assumptions"].push_back({{"id", item.id},
                                  {"name", item.name},
                                  {"observed", item.observed},
                                  {"threshold", item.threshold},
                                  {"pass", item.pass}});
  return doc;
}

nlohmann::json bound_to_json(const BoundReport& report) {
  return {{"variant", report.variant},
          {"bound", report.bound},
          {"prefactor", report.prefactor},
          {"term_concentration", report.term_concentration},
          {"term_degree", report.term_degree},
          {"probability", report.probability},
          {"simplified", report.simplified},
          {"denom", report.denom},
          {"observed_p_err", report.observed_p_err}};
}

}  // namespace pfm

#include "kboot/report_json.hpp"

#include "kboot/version.hpp"

namespace kboot::report {

json make_header(const std::string& command, json config) {
  json header;
  header["schema_version"] = kSchemaVersion;
  header["version"] = kVersion;
  header["rng"] = kRngVersion;
  header["command"] = command;
  header["config"] = std::move(config);
  return header;
}

json to_json(const SeedSpec& seed) {
  return {{"master_seed", seed.master_seed}, {"stream_id", seed.stream_id}};
}

json to_json(const bootstrap::BootstrapSpec& spec) {
  json j;
  j["method"] = bootstrap::method_name(spec.method);
  j["weights"] = spec.weights.name();
  j["kappa"] = spec.kappa;
  j["B"] = spec.B;
  j["alpha"] = spec.alpha;
  j["sided"] = bootstrap::sided_name(spec.sided);
  j["seed"] = to_json(spec.seed);
  return j;
}

json to_json(const bootstrap::PValueReport& report) {
  json j = to_json(report.spec);
  j["statistic"] = report.statistic;
  j["p_value"] = report.p_value;
  j["critical_value"] = report.critical_value;
  j["reject"] = report.reject;
  return j;
}

json to_json(const smooth::CheckReport& report) {
  return {{"check", report.check},
          {"trials", report.trials},
          {"max_violation", report.max_violation},
          {"bound", report.bound},
          {"passed", report.passed}};
}

json to_json(const experiments::UniformityReport& report) {
  json cells = json::array();
  for (std::size_t k = 0; k < report.kappas.size(); ++k) {
    cells.push_back({{"kappa", report.kappas[k]},
                     {"repetitions", report.pvalues[k].size()},
                     {"ks_uniform", report.ks[k]}});
  }
  return {{"cells", cells}};
}

json to_json(const experiments::CoverageReport& report) {
  json cells = json::array();
  for (const auto& cell : report.cells) {
    cells.push_back({{"n", cell.cell.n},
                     {"p", cell.cell.p},
                     {"kappa", cell.cell.kappa},
                     {"method", bootstrap::method_name(cell.cell.method)},
                     {"rejection_rate", cell.rejection_rate},
                     {"abs_error", cell.abs_error},
                     {"mc_se", cell.mc_se}});
  }
  return {{"alpha", report.alpha}, {"reps", report.reps}, {"cells", cells}};
}

json to_json(const experiments::LevyReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    json entry = {{"epsilon", e.epsilon}, {"estimate", e.estimate}};
    if (report.equal_variance) {
      entry["bound"] = e.bound;
      entry["slack"] = e.slack;
    }
    entry["passed"] = e.passed;
    entries.push_back(entry);
  }
  return {{"check", "levy_concentration"},
          {"draws", report.draws},
          {"a_p_hat", report.a_p_hat},
          {"abar_p_hat", report.abar_p_hat},
          {"equal_variance", report.equal_variance},
          {"entries", entries},
          {"passed", report.passed}};
}

json to_json(const experiments::MaxInequalityReport& report) {
  json tails = json::array();
  for (const auto& t : report.tails) {
    tails.push_back({{"r", t.r},
                     {"estimate", t.estimate},
                     {"bound", t.bound},
                     {"mc_se", t.mc_se},
                     {"passed", t.passed}});
  }
  return {{"check", "gaussian_max_inequalities"},
          {"draws", report.draws},
          {"max_mean", {{"estimate", report.max_mean_hat},
                        {"bound", report.max_mean_bound},
                        {"mc_se", report.max_mean_se},
                        {"passed", report.max_mean_passed}}},
          {"tails", tails},
          {"passed", report.passed}};
}

json to_json(const experiments::ComparisonReport& report) {
  return {{"check", "gaussian_comparison"},
          {"draws", report.draws},
          {"ks", report.ks},
          {"delta", report.delta},
          {"mc_se", report.mc_se}};
}

}  // namespace kboot::report

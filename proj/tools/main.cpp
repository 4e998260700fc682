#include <algorithm>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cee/ioutil.hpp"
#include "cee/report.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitBudgetExceeded = 3;

cee::SystemState parse_state(const std::string& text, int n) {
  if (static_cast<int>(text.size()) != n) {
    throw cee::ValidationError("state-length-mismatch",
                               "state '" + text + "' for n = " + std::to_string(n));
  }
  std::vector<int> bits;
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw cee::ValidationError("state-bit-invalid", std::string(1, c));
    }
    bits.push_back(c - '0');
  }
  return cee::SystemState::from_bits(bits);
}

cee::Metric parse_metric(const std::string& name) {
  if (name == "emd") return cee::Metric::Emd;
  if (name == "id") return cee::Metric::IntrinsicDifference;
  throw cee::ValidationError("unknown-metric", name);
}

cee::PhiMode parse_phi_mode(const std::string& name) {
  if (name == "mip") return cee::PhiMode::Mip;
  if (name == "sum-distinctions") return cee::PhiMode::SumDistinctions;
  throw cee::ValidationError("unknown-phi-mode", name);
}

json input_entry(const std::string& path) {
  return {{"path", path}, {"fnv1a64", cee::fnv1a64_hex(cee::read_file(path))}};
}

void emit(const json& report, const std::string& out_path) {
  std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    cee::atomic_write_file(out_path, text);
  }
}

json complexes_report(const cee::Tpm& tpm, cee::SystemState state,
                      const cee::PhiOptions& options, int relations_order) {
  auto complexes = cee::find_complexes(tpm, state, options);
  auto filtered = cee::exclusion_filter(complexes);
  json jc = json::array(), jf = json::array();
  for (const auto& c : complexes) jc.push_back(cee::complex_to_json(c));
  for (const auto& c : filtered) jf.push_back(cee::complex_to_json(c));
  json report;
  report["complexes"] = std::move(jc);
  report["excluded"] = std::move(jf);
  if (!filtered.empty()) {
    report["ces"] = cee::ces_to_json(cee::cause_effect_structure(
        tpm, filtered.front().elements, state, options, relations_order));
  } else {
    report["ces"] = json::object();
  }
  report["phi_metric"] = cee::metric_name(options.metric);
  report["phi_mode"] = cee::phi_mode_name(options.mode);
  return report;
}

struct CommonFlags {
  std::string metric = "emd";
  std::string phi_mode = "mip";
  int relations_order = 2;
  std::string out;

  cee::PhiOptions phi_options() const {
    return {parse_metric(metric), parse_phi_mode(phi_mode)};
  }
};

int run(int argc, char** argv) {
  CLI::App app{"cause-effect structure analysis of binary-state TPMs"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto add_common = [&](CLI::App* cmd, bool with_relations = true) {
    cmd->add_option("--metric", flags.metric, "distance metric: emd | id");
    cmd->add_option("--phi-mode", flags.phi_mode,
                    "system phi mode: mip | sum-distinctions");
    if (with_relations) {
      cmd->add_option("--relations-order", flags.relations_order,
                      "relation order: 2 (pairs) or 3 (adds triples)");
    }
    cmd->add_option("--out", flags.out, "output file (default: stdout)");
  };

  // analyze
  std::string tpm_path, state_text;
  auto* analyze = app.add_subcommand("analyze", "complexes + cause-effect structure of a TPM file");
  analyze->add_option("tpm", tpm_path, "TPM JSON file")->required();
  analyze->add_option("--state", state_text, "current state, element 0 first, e.g. 10")
      ->required();
  add_common(analyze);

  // compose
  std::string compose_a, compose_b, compose_out;
  auto* compose = app.add_subcommand("compose", "tensor product of two TPM files");
  compose->add_option("a", compose_a, "first TPM file")->required();
  compose->add_option("b", compose_b, "second TPM file (high bits)")->required();
  compose->add_option("--out", compose_out, "output TPM file")->required();

  // factorize
  std::string fact_path;
  double fact_epsilon = 1e-6;
  auto* factorize = app.add_subcommand("factorize", "split a TPM into independent factors");
  factorize->add_option("tpm", fact_path, "TPM JSON file")->required();
  factorize->add_option("--epsilon", fact_epsilon, "residual tolerance (default 1e-6)");
  factorize->add_option("--out", flags.out, "output file (default: stdout)");

  // grain
  std::string grain_path, grain_state, stride_set = "1,2,4", grain_csv;
  size_t grain_budget = 20000;
  auto* grain = app.add_subcommand("grain", "search coarse-grainings for maximal cause-effect power");
  grain->add_option("tpm", grain_path, "TPM JSON file")->required();
  grain->add_option("--state", grain_state, "current micro state")->required();
  grain->add_option("--stride-set", stride_set, "comma-separated temporal strides (default 1,2,4)");
  grain->add_option("--budget", grain_budget, "max grains to evaluate (default 20000)");
  grain->add_option("--csv", grain_csv, "also write a phi-vs-grain CSV");
  add_common(grain, false);

  // simulate
  std::string sim_config_path, sim_out;
  std::uint64_t seed_override = 0;
  bool seed_given = false;
  auto* simulate = app.add_subcommand("simulate", "run the lattice imaginary-time simulator");
  simulate->add_option("config", sim_config_path, "sim config JSON file")->required();
  simulate->add_option("--out", sim_out, "trajectory output file")->required();
  simulate->add_option("--seed", seed_override, "override the config seed")
      ->each([&](const std::string&) { seed_given = true; });

  // pipeline
  std::string pipe_config_path, pipe_tpm_out;
  double pipe_epsilon = 0.05;
  double pipe_smoothing = 1.0;
  auto* pipeline = app.add_subcommand(
      "pipeline", "simulate -> empirical TPM -> complexes -> factorization");
  pipeline->add_option("config", pipe_config_path, "sim config JSON file")->required();
  pipeline->add_option("--epsilon", pipe_epsilon,
                       "factorization tolerance for the empirical TPM (default 0.05)");
  pipeline->add_option("--smoothing", pipe_smoothing, "Laplace smoothing (default 1)");
  pipeline->add_option("--tpm-out", pipe_tpm_out, "also write the empirical TPM file");
  add_common(pipeline);

  // sweep
  std::string sweep_config_path, sweep_csv, couplings_text = "0,0.25,0.5,1";
  int sweep_seeds = 10;
  auto* sweep = app.add_subcommand(
      "sweep", "residual-vs-coupling sweep over seeds (CSV for plotting)");
  sweep->add_option("config", sweep_config_path, "sim config JSON file")->required();
  sweep->add_option("--couplings", couplings_text, "comma-separated coupling values");
  sweep->add_option("--seeds", sweep_seeds, "seeds per coupling (default 10)");
  sweep->add_option("--csv", sweep_csv, "CSV output file")->required();
  sweep->add_option("--out", flags.out, "summary JSON (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  if (analyze->parsed()) {
    cee::Tpm tpm = cee::read_tpm_file(tpm_path);
    cee::SystemState state = parse_state(state_text, tpm.n());
    json report = complexes_report(tpm, state, flags.phi_options(),
                                   flags.relations_order);
    report["inputs"] = {{"tpm", input_entry(tpm_path)}};
    report["settings"] = {{"state", state_text},
                          {"relations_order", flags.relations_order}};
    report["version"] = cee::kToolVersion;
    emit(report, flags.out);
    return kExitOk;
  }

  if (compose->parsed()) {
    cee::Tpm a = cee::read_tpm_file(compose_a);
    cee::Tpm b = cee::read_tpm_file(compose_b);
    cee::Tpm product = cee::tensor_product(a, b);
    cee::atomic_write_file(compose_out, cee::tpm_to_json(product) + "\n");
    return kExitOk;
  }

  if (factorize->parsed()) {
    cee::Tpm tpm = cee::read_tpm_file(fact_path);
    auto f = cee::factorize(tpm, fact_epsilon);
    json report;
    report["factorization"] = cee::factorization_to_json(f);
    report["inputs"] = {{"tpm", input_entry(fact_path)}};
    report["settings"] = {{"epsilon", cee::round_12sig(fact_epsilon)}};
    report["version"] = cee::kToolVersion;
    emit(report, flags.out);
    return kExitOk;
  }

  if (grain->parsed()) {
    cee::Tpm tpm = cee::read_tpm_file(grain_path);
    cee::SystemState state = parse_state(grain_state, tpm.n());
    cee::GrainBudget budget;
    budget.max_grains = grain_budget;
    budget.strides.clear();
    std::stringstream ss(stride_set);
    for (std::string item; std::getline(ss, item, ',');) {
      budget.strides.push_back(std::stoi(item));
    }
    auto result = cee::grain_search(tpm, state, budget, flags.phi_options());
    json report;
    report["grains"] = cee::grain_search_to_json(result);
    report["partial"] = result.partial;
    report["inputs"] = {{"tpm", input_entry(grain_path)}};
    report["settings"] = {{"state", grain_state},
                          {"stride_set", stride_set},
                          {"budget", grain_budget}};
    report["phi_metric"] = cee::metric_name(flags.phi_options().metric);
    report["phi_mode"] = cee::phi_mode_name(flags.phi_options().mode);
    report["version"] = cee::kToolVersion;
    if (!grain_csv.empty()) {
      std::string csv = "grain,partition,thresholds,stride,big_phi\n";
      for (size_t i = 0; i < result.maximal.size(); ++i) {
        const auto& r = result.maximal[i];
        std::string partition, thresholds;
        for (size_t g = 0; g < r.grain.groups.size(); ++g) {
          if (g) partition += '|';
          auto elems = cee::bits::to_elements(r.grain.groups[g]);
          for (size_t e = 0; e < elems.size(); ++e) {
            if (e) partition += '+';
            partition += std::to_string(elems[e]);
          }
          if (g) thresholds += '|';
          thresholds += std::to_string(r.grain.thresholds[g]);
        }
        char phi[40];
        std::snprintf(phi, sizeof(phi), "%.12g", r.big_phi);
        csv += std::to_string(i) + "," + partition + "," + thresholds + "," +
               std::to_string(r.grain.stride) + "," + phi + "\n";
      }
      cee::atomic_write_file(grain_csv, csv);
    }
    emit(report, flags.out);
    return result.partial ? kExitBudgetExceeded : kExitOk;
  }

  if (simulate->parsed()) {
    cee::SimConfig config = cee::read_sim_config_file(sim_config_path);
    if (seed_given) config.seed = seed_override;
    auto output = cee::simulate(config);
    cee::atomic_write_file(sim_out, cee::trajectory_to_json(output) + "\n");
    return kExitOk;
  }

  if (pipeline->parsed()) {
    cee::SimConfig config = cee::read_sim_config_file(pipe_config_path);
    auto output = cee::simulate(config);
    auto encoder = cee::Encoder::half_ring(config);
    cee::Tpm tpm = cee::empirical_tpm(output.ensemble, encoder, pipe_smoothing);
    std::string tpm_text = cee::tpm_to_json(tpm);
    if (!pipe_tpm_out.empty()) cee::atomic_write_file(pipe_tpm_out, tpm_text + "\n");

    // analyze at the final observed joint state
    std::vector<int> sites(output.ensemble.paths.size());
    for (size_t p = 0; p < sites.size(); ++p) sites[p] = output.ensemble.paths[p].back();
    cee::SystemState state(encoder.map(sites), encoder.out_bits);

    auto options = flags.phi_options();
    json report = complexes_report(tpm, state, options, flags.relations_order);
    report["factorization"] =
        cee::factorization_to_json(cee::factorize(tpm, pipe_epsilon));
    report["empirical_tpm"] = {{"fnv1a64", cee::fnv1a64_hex(tpm_text)},
                               {"n", tpm.n()}};
    auto phys = cee::physicality(cee::Regime::Euclidean, false, 0.0);
    report["ledger"] = cee::ledger_to_json(output.ledger, config.area_tn, phys);
    report["inputs"] = {{"config", input_entry(pipe_config_path)}};
    report["settings"] = {{"epsilon", cee::round_12sig(pipe_epsilon)},
                          {"smoothing", cee::round_12sig(pipe_smoothing)},
                          {"relations_order", flags.relations_order}};
    report["version"] = cee::kToolVersion;
    emit(report, flags.out);
    return kExitOk;
  }

  if (sweep->parsed()) {
    cee::SimConfig base = cee::read_sim_config_file(sweep_config_path);
    std::vector<double> couplings;
    std::stringstream ss(couplings_text);
    for (std::string item; std::getline(ss, item, ',');) {
      couplings.push_back(std::stod(item));
    }
    if (sweep_seeds < 1) {
      throw cee::ValidationError("config-invalid", "seeds must be >= 1");
    }
    std::string csv = "coupling,seed,residual\n";
    json medians = json::array();
    for (double g : couplings) {
      std::vector<double> residuals;
      for (int s = 0; s < sweep_seeds; ++s) {
        cee::SimConfig config = base;
        config.coupling = g;
        config.seed = base.seed + static_cast<std::uint64_t>(s);
        auto output = cee::simulate(config);
        cee::Tpm tpm = cee::empirical_tpm(output.ensemble,
                                          cee::Encoder::half_ring(config));
        double r = tpm.n() >= 2 ? cee::min_bipartition_residual(tpm) : 0.0;
        residuals.push_back(r);
        char line[96];
        std::snprintf(line, sizeof(line), "%.12g,%llu,%.12g\n", g,
                      static_cast<unsigned long long>(config.seed), r);
        csv += line;
      }
      std::sort(residuals.begin(), residuals.end());
      size_t m = residuals.size();
      double median = m % 2 ? residuals[m / 2]
                            : 0.5 * (residuals[m / 2 - 1] + residuals[m / 2]);
      medians.push_back({{"coupling", cee::round_12sig(g)},
                         {"median_residual", cee::round_12sig(median)}});
    }
    cee::atomic_write_file(sweep_csv, csv);
    json report;
    report["medians"] = std::move(medians);
    report["inputs"] = {{"config", input_entry(sweep_config_path)}};
    report["settings"] = {{"couplings", couplings_text},
                          {"seeds", sweep_seeds}};
    report["version"] = cee::kToolVersion;
    emit(report, flags.out);
    return kExitOk;
  }

  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const cee::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

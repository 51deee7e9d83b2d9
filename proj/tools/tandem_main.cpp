// Command-line front end: `run` executes a configured GP/EQ ensemble over a
// dataset, `simulate` runs the Monte-Carlo probability model, `eval-solver`
// evaluates one equation script, `report` re-renders persisted results.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tandem/eqscript.hpp"
#include "tandem/harness.hpp"
#include "tandem/mc_sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

nlohmann::json rate_to_json(const tandem::RateEstimate& rate) {
  return {
      {"count", rate.count},
      {"stderr", rate.standard_error()},
      {"total", rate.total},
      {"value", rate.value()},
  };
}

nlohmann::json sim_report_to_json(const tandem::SimReport& report) {
  return {
      {"analytic",
       {
           {"p_single", report.p_single},
           {"p_total_linear", report.p_total_linear},
       }},
      {"params",
       {
           {"hint_gain_eq", report.params.hint_gain_eq},
           {"hint_gain_gp", report.params.hint_gain_gp},
           {"max_rounds", report.params.max_rounds},
           {"n_pairs", report.params.n_pairs},
           {"p_numerical", report.params.p_numerical},
           {"p_reason", report.params.p_reason},
           {"seed", report.params.seed},
           {"trials", report.params.trials},
           {"wrong_space", report.params.wrong_space},
       }},
      {"rates",
       {
           {"eq_accuracy", rate_to_json(report.eq_accuracy)},
           {"gp_accuracy", rate_to_json(report.gp_accuracy)},
           {"pair_disagree_rate", rate_to_json(report.pair_disagree_rate)},
           {"pair_match_correct_rate",
            rate_to_json(report.pair_match_correct_rate)},
           {"pair_match_wrong_rate",
            rate_to_json(report.pair_match_wrong_rate)},
           {"pair_no_answer_rate", rate_to_json(report.pair_no_answer_rate)},
           {"topology_accuracy", rate_to_json(report.topology_accuracy)},
       }},
  };
}

tandem::SimParams sim_params_from_json(const nlohmann::json& doc) {
  tandem::SimParams params;
  params.n_pairs = doc.value("n_pairs", params.n_pairs);
  params.p_reason = doc.value("p_reason", params.p_reason);
  params.p_numerical = doc.value("p_numerical", params.p_numerical);
  params.wrong_space = doc.value("wrong_space", params.wrong_space);
  params.hint_gain_gp = doc.value("hint_gain_gp", params.hint_gain_gp);
  params.hint_gain_eq = doc.value("hint_gain_eq", params.hint_gain_eq);
  params.max_rounds = doc.value("max_rounds", params.max_rounds);
  params.trials = doc.value("trials", params.trials);
  params.seed = doc.value("seed", params.seed);
  return params;
}

void emit(const nlohmann::json& doc, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::ofstream out(output_path, std::ios::trunc);
  out << doc.dump(2) << "\n";
  if (!out) throw tandem::RunError("cannot write " + output_path);
}

int cmd_run(const std::string& config_path, const std::string& report_override,
            bool quiet) {
  tandem::RunConfig config = tandem::RunConfig::from_file(config_path);
  if (!report_override.empty()) config.report_path = report_override;
  tandem::RunReport report = tandem::run(config);
  if (!quiet) std::cout << tandem::render_tables(report);
  return kExitOk;
}

int cmd_simulate(const tandem::SimParams& params, const std::string& sweep_spec,
                 const std::string& output_path) {
  if (sweep_spec.empty()) {
    emit(sim_report_to_json(tandem::simulate(params)), output_path);
    return kExitOk;
  }
  std::vector<int> n_values;
  std::stringstream ss(sweep_spec);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) n_values.push_back(std::stoi(item));
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [n, report] : tandem::sweep(params, n_values))
    out.push_back({{"n", n}, {"report", sim_report_to_json(report)}});
  emit(out, output_path);
  return kExitOk;
}

int cmd_eval_solver(const std::string& file, std::size_t step_limit) {
  std::string source;
  if (file.empty()) {
    std::stringstream buffer;
    buffer << std::cin.rdbuf();
    source = buffer.str();
  } else {
    std::ifstream in(file);
    if (!in) {
      std::cerr << "cannot open script: " << file << "\n";
      return kExitConfig;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    source = buffer.str();
  }
  try {
    tandem::eqscript::EquationProgram program = tandem::eqscript::parse(source);
    tandem::eqscript::EvalOutcome outcome =
        tandem::eqscript::evaluate(program, step_limit);
    std::cout << tandem::render(outcome.answer) << "\n";
    return kExitOk;
  } catch (const tandem::eqscript::SyntaxError& e) {
    nlohmann::json err = {{"error",
                           {{"column", e.column},
                            {"kind", "syntax_error"},
                            {"line", e.line},
                            {"message", e.what()}}}};
    std::cout << err.dump() << "\n";
    return kExitRuntime;
  } catch (const tandem::eqscript::EvalError& e) {
    static const char* kKinds[] = {"undefined_variable",    "division_by_zero",
                                   "non_integer_exponent",  "exponent_too_large",
                                   "non_integer_modulo",    "step_limit_exceeded"};
    nlohmann::json err = {{"error",
                           {{"kind", kKinds[static_cast<int>(e.kind)]},
                            {"line", e.line},
                            {"message", e.what()}}}};
    std::cout << err.dump() << "\n";
    return kExitRuntime;
  }
}

int cmd_report(const std::string& input, const std::string& format) {
  std::vector<tandem::QuestionResult> results = tandem::load_results(input);
  int n_pairs = results.empty()
                    ? 0
                    : static_cast<int>(results.front().transcripts.size());
  tandem::ReportConfigEcho echo;
  echo.n_pairs = n_pairs;
  echo.dataset = input;
  echo.hint_target = "unknown";
  echo.max_rounds = 0;
  tandem::RunReport report =
      tandem::aggregate_results(results, n_pairs, echo);
  if (format == "json")
    std::cout << tandem::report_to_json(report).dump(2) << "\n";
  else
    std::cout << tandem::render_tables(report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GP/EQ pair orchestration with cross-inference voting"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "execute a configured run");
  std::string config_path, report_override;
  bool quiet = false;
  run_cmd->add_option("--config", config_path, "run config JSON")->required();
  run_cmd->add_option("--report", report_override,
                      "write the report JSON here (overrides config)");
  run_cmd->add_flag("--quiet", quiet, "suppress the rendered tables");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo probability model");
  std::string params_path, sweep_spec, sim_output;
  tandem::SimParams params;
  sim_cmd->add_option("--params", params_path, "SimParams JSON file");
  sim_cmd->add_option("--n-pairs", params.n_pairs, "pairs per question");
  sim_cmd->add_option("--p-reason", params.p_reason, "GP correctness probability");
  sim_cmd->add_option("--p-numerical", params.p_numerical,
                      "EQ correctness probability");
  sim_cmd->add_option("--wrong-space", params.wrong_space,
                      "shared wrong-answer space size W");
  sim_cmd->add_option("--hint-gain-gp", params.hint_gain_gp,
                      "per-round GP probability boost");
  sim_cmd->add_option("--hint-gain-eq", params.hint_gain_eq,
                      "per-round EQ probability boost");
  sim_cmd->add_option("--max-rounds", params.max_rounds, "rounds per pair");
  sim_cmd->add_option("--trials", params.trials, "Monte-Carlo trials");
  sim_cmd->add_option("--seed", params.seed, "base seed");
  sim_cmd->add_option("--sweep", sweep_spec, "comma-separated n values");
  sim_cmd->add_option("--output", sim_output, "write the JSON report here");

  // eval-solver
  auto* eval_cmd = app.add_subcommand("eval-solver", "evaluate one equation script");
  std::string script_file;
  std::size_t step_limit = tandem::eqscript::kDefaultStepLimit;
  eval_cmd->add_option("--file", script_file, "script path (default: stdin)");
  eval_cmd->add_option("--step-limit", step_limit, "evaluation step limit");

  // report
  auto* report_cmd = app.add_subcommand("report", "re-render persisted results");
  std::string report_input, report_format = "text";
  report_cmd->add_option("--input", report_input, "results JSONL file")->required();
  report_cmd->add_option("--format", report_format, "text | json")
      ->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(config_path, report_override, quiet);
    if (sim_cmd->parsed()) {
      if (!params_path.empty()) {
        std::ifstream in(params_path);
        if (!in) throw tandem::ConfigError("cannot open params: " + params_path);
        params = sim_params_from_json(nlohmann::json::parse(in));
      }
      return cmd_simulate(params, sweep_spec, sim_output);
    }
    if (eval_cmd->parsed()) return cmd_eval_solver(script_file, step_limit);
    if (report_cmd->parsed()) return cmd_report(report_input, report_format);
  } catch (const tandem::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const tandem::DatasetError& e) {
    std::cerr << "dataset error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

// Command-line front end for the genre auction engine.
//
// Subcommands: auction, generate, benchmark, verify, coherence, eval.
// Exit codes: 0 success, 2 validation/argument error, 3 bound violation,
// 4 provider error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "genreads/auction.hpp"
#include "genreads/benchmark.hpp"
#include "genreads/calibrate.hpp"
#include "genreads/evalstats.hpp"
#include "genreads/groundtruth.hpp"
#include "genreads/insertion.hpp"
#include "genreads/io.hpp"
#include "genreads/judge.hpp"
#include "genreads/providers.hpp"
#include "genreads/synthetic.hpp"

namespace {

using nlohmann::json;

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw genreads::ArgumentError("cannot open file: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void emit(const json& doc, const std::string& output) {
  if (output.empty() || output == "-")
    std::cout << doc.dump(2) << std::endl;
  else
    genreads::detail::write_json_file(output, doc);
}

genreads::CalibrationSpec parse_calibration(const std::string& method, double temperature) {
  genreads::CalibrationSpec spec;
  if (method == "softmax")
    spec.method = genreads::CalibrationMethod::kSoftmax;
  else if (method == "clip")
    spec.method = genreads::CalibrationMethod::kClipNormalize;
  else
    throw genreads::ArgumentError("unknown calibration method: " + method);
  spec.temperature = temperature;
  return spec;
}

struct AuctionArgs {
  std::string taxonomy, bids, coherence, response, creatives, output, rendered;
  int k = 1;
};

int cmd_auction(const AuctionArgs& args) {
  auto taxonomy = genreads::load_taxonomy(args.taxonomy);
  const auto bids = genreads::load_bids(args.bids, taxonomy);
  const auto coherence = genreads::load_coherence(args.coherence, taxonomy);
  genreads::AuctionConfig config;
  config.K = args.k;

  const auto report = genreads::validate_inputs(bids, coherence, config);
  if (!report.ok()) {
    json violations = json::array();
    for (const auto& v : report.violations)
      violations.push_back({{"code", v.code}, {"message", v.message}});
    std::cerr << json{{"error", "validation"}, {"violations", violations}}.dump(2) << std::endl;
    return 2;
  }

  const auto outcome = genreads::run_vcg(bids, coherence, config);
  emit(genreads::outcome_to_json(outcome, bids.advertiser_ids()), args.output);

  if (!args.response.empty()) {
    if (args.creatives.empty())
      throw genreads::ArgumentError("--creatives is required when --response is given");
    const auto response = genreads::segment(read_text(args.response));
    if (response.num_slots() != coherence.num_slots())
      throw genreads::DimensionError(
          "response has " + std::to_string(response.num_slots()) +
          " slots but the coherence matrix has " + std::to_string(coherence.num_slots()));
    const auto creatives = genreads::load_creatives(args.creatives);
    const auto rendered =
        genreads::render(response, outcome.allocation, bids.advertiser_ids(), creatives);
    if (args.rendered.empty() || args.rendered == "-")
      std::cout << rendered;
    else
      genreads::detail::write_text_file(args.rendered, rendered);
  }
  return 0;
}

struct GenerateArgs {
  std::size_t advertisers = 100, sentences = 9, genres = 10;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
};

int cmd_generate(const GenerateArgs& args) {
  const auto workload =
      genreads::synthetic_workload(args.advertisers, args.sentences, args.genres, args.seed);
  genreads::save_taxonomy(args.out_dir + "/taxonomy.json", *workload.taxonomy);
  genreads::save_bids(args.out_dir + "/bids.json", workload.bids);
  genreads::save_coherence(args.out_dir + "/coherence.json", workload.coherence);
  std::cout << "wrote taxonomy.json, bids.json, coherence.json to " << args.out_dir
            << std::endl;
  return 0;
}

struct BenchmarkArgs {
  std::vector<std::size_t> advertisers{1000};
  std::vector<std::size_t> slots{21};
  std::size_t genres = 100;
  int k = 5, trials = 10;
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_benchmark(const BenchmarkArgs& args) {
  const auto cells = genreads::run_benchmark(args.advertisers, args.slots, args.genres, args.k,
                                             args.trials, args.seed);
  json table = json::array();
  for (const auto& cell : cells)
    table.push_back({{"advertisers", cell.advertisers},
                     {"slots", cell.slots},
                     {"trials", cell.trials},
                     {"mean_seconds", cell.mean_seconds}});
  emit({{"genres", args.genres}, {"k", args.k}, {"cells", table}}, args.output);
  return 0;
}

struct VerifyArgs {
  int models = 500, trials = 8;
  std::uint64_t seed = 0;
  double radius = 0.2, bound_scale = 1.0;
  std::string output, counterexample = "counterexample.json";
};

int cmd_verify(const VerifyArgs& args) {
  auto taxonomy_for = [](int trial) { return genreads::synthetic_taxonomy(2 + trial % 3); };
  json summary = {{"models", args.models},
                  {"violations", 0},
                  {"max_epsilon", 0.0},
                  {"bound_scale", args.bound_scale}};
  genreads::AuctionConfig config;
  config.K = 2;

  for (int trial = 0; trial < args.models; ++trial) {
    const auto model = genreads::random_intent_model(taxonomy_for(trial), 3, 3,
                                                     args.seed * 1000003 + trial);
    const auto estimate = genreads::perturb_coherence(genreads::true_coherence(model),
                                                      args.radius, args.seed ^ (trial + 1));
    const auto p1 = genreads::verify_prop1(model, estimate, args.trials,
                                           args.seed + 7 * trial, args.bound_scale);
    const auto p2 = genreads::verify_prop2(model, estimate, config, args.bound_scale);
    const auto p3 = genreads::verify_prop3(model);
    summary["max_epsilon"] =
        std::max(summary["max_epsilon"].get<double>(), p1.errors.epsilon());

    if (p1.violations > 0 || !p2.holds || !p3.holds) {
      summary["violations"] = summary["violations"].get<int>() + 1;
      genreads::detail::write_json_file(args.counterexample,
                                        genreads::intent_model_to_json(model));
      emit(summary, args.output);
      throw genreads::BoundViolation(
          "bound violated on model " + std::to_string(trial) + "; counterexample written to " +
          args.counterexample);
    }
  }
  emit(summary, args.output);
  return 0;
}

struct CoherenceArgs {
  std::string response, taxonomy, provider = "mock", embeddings, output;
  std::string judge_url = "http://localhost:8000", judge_model = "judge";
  std::string calibration = "softmax";
  double temperature = 1.0;
  int instances = 1;
  std::uint64_t seed = 0;
};

int cmd_coherence(const CoherenceArgs& args) {
  auto taxonomy = genreads::load_taxonomy(args.taxonomy);
  const auto response = genreads::segment(read_text(args.response));
  const auto spec = parse_calibration(args.calibration, args.temperature);

  genreads::SignalFn provider;
  if (args.provider == "mock") {
    provider = genreads::mock_provider(taxonomy, args.seed);
  } else if (args.provider == "embedding") {
    if (args.embeddings.empty())
      throw genreads::ArgumentError("--embeddings is required for the embedding provider");
    const auto set = genreads::load_embeddings(args.embeddings);
    provider = genreads::embedding_provider(set, response, taxonomy);
  } else if (args.provider == "judge") {
    genreads::JudgeConfig config;
    config.base_url = args.judge_url;
    config.model = args.judge_model;
    static genreads::JudgeClient client(config);
    provider = genreads::judge_provider(client, response, taxonomy, args.instances);
  } else {
    throw genreads::ArgumentError("unknown provider: " + args.provider);
  }

  const auto coherence = genreads::build_coherence(response, taxonomy, provider, spec);
  if (args.output.empty() || args.output == "-") {
    json slots = json::array();
    for (std::size_t j = 0; j < coherence.num_slots(); ++j) slots.push_back(coherence.column(j));
    std::cout << json{{"calibrated", true}, {"slots", slots}}.dump(2) << std::endl;
  } else {
    genreads::save_coherence(args.output, coherence);
  }
  return 0;
}

struct EvalArgs {
  std::string ratings, metric, output;
  int max_committee = 0, resamples = 100;
  std::uint64_t seed = 0;
};

int cmd_eval(const EvalArgs& args) {
  const auto table = genreads::load_ratings_csv(args.ratings);
  json doc = {{"raters", table.num_raters()}, {"tasks", table.num_tasks()}};

  if (table.num_raters() >= 3) {
    json per_rater = json::array();
    for (const auto& entry : genreads::individual_to_group(table))
      per_rater.push_back({{"rater", entry.rater}, {"rho", entry.rho}});
    doc["individual_to_group"] = per_rater;
  }

  if (!args.metric.empty()) {
    const auto metric = genreads::load_metric_csv(args.metric, table.tasks());
    doc["metric_rho"] = genreads::spearman_pairwise(metric, table.mean_scores());
    const int max_committee =
        args.max_committee > 0 ? args.max_committee : static_cast<int>(table.num_raters()) - 1;
    if (table.num_raters() >= 2) {
      const auto curve = genreads::committee_equivalence(table, metric, max_committee,
                                                         args.resamples, args.seed);
      doc["committee_mean_rho"] = curve.mean_rho;
      doc["rater_equivalence"] = curve.equivalence;
    }
  }
  emit(doc, args.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Genre-based ad auctions for LLM responses"};
  app.require_subcommand(1);
  app.set_config("--config");

  std::uint64_t seed = 0;
  std::string output;
  app.add_option("--seed", seed, "Root RNG seed")->capture_default_str();
  app.add_option("--output", output, "Output path ('-' for stdout)");

  AuctionArgs auction;
  auto* sub_auction = app.add_subcommand("auction", "Run one auction over prepared inputs");
  sub_auction->add_option("--taxonomy", auction.taxonomy, "Taxonomy JSON")->required();
  sub_auction->add_option("--bids", auction.bids, "Bid profile JSON")->required();
  sub_auction->add_option("--coherence", auction.coherence, "Coherence matrix JSON")->required();
  sub_auction->add_option("-k,--num-ads", auction.k, "Number of ads to insert")
      ->check(CLI::PositiveNumber);
  sub_auction->add_option("--response", auction.response, "Organic response text file");
  sub_auction->add_option("--creatives", auction.creatives, "Creative catalog JSON");
  sub_auction->add_option("--rendered", auction.rendered, "Rendered response output path");

  GenerateArgs generate;
  auto* sub_generate = app.add_subcommand("generate", "Generate a synthetic workload");
  sub_generate->add_option("-n,--advertisers", generate.advertisers)->check(CLI::PositiveNumber);
  sub_generate->add_option("-m,--sentences", generate.sentences)->check(CLI::PositiveNumber);
  sub_generate->add_option("-l,--genres", generate.genres)->check(CLI::PositiveNumber);
  sub_generate->add_option("--out-dir", generate.out_dir, "Directory for the generated files");

  BenchmarkArgs benchmark;
  auto* sub_benchmark = app.add_subcommand("benchmark", "Time auctions over a size grid");
  sub_benchmark->add_option("-n,--advertisers", benchmark.advertisers, "Advertiser counts");
  sub_benchmark->add_option("-s,--slots", benchmark.slots, "Slot counts");
  sub_benchmark->add_option("-l,--genres", benchmark.genres)->check(CLI::PositiveNumber);
  sub_benchmark->add_option("-k,--num-ads", benchmark.k)->check(CLI::PositiveNumber);
  sub_benchmark->add_option("--trials", benchmark.trials)->check(CLI::PositiveNumber);

  VerifyArgs verify;
  auto* sub_verify = app.add_subcommand("verify", "Check the error bounds on random models");
  sub_verify->add_option("--models", verify.models)->check(CLI::PositiveNumber);
  sub_verify->add_option("--trials", verify.trials)->check(CLI::PositiveNumber);
  sub_verify->add_option("--radius", verify.radius, "Coherence noise radius");
  sub_verify->add_option("--bound-scale", verify.bound_scale,
                         "Bound multiplier (< 1 is a negative control)");
  sub_verify->add_option("--counterexample", verify.counterexample,
                         "Where to dump a violating model");

  CoherenceArgs coherence;
  auto* sub_coherence = app.add_subcommand("coherence", "Build a coherence matrix");
  sub_coherence->add_option("--response", coherence.response, "Organic response text file")
      ->required();
  sub_coherence->add_option("--taxonomy", coherence.taxonomy, "Taxonomy JSON")->required();
  sub_coherence->add_option("--provider", coherence.provider, "mock | embedding | judge");
  sub_coherence->add_option("--embeddings", coherence.embeddings, "Embedding set JSON");
  sub_coherence->add_option("--judge-url", coherence.judge_url, "Judge endpoint base URL");
  sub_coherence->add_option("--judge-model", coherence.judge_model, "Judge model name");
  sub_coherence->add_option("--instances", coherence.instances, "Judge instances to average")
      ->check(CLI::PositiveNumber);
  sub_coherence->add_option("--calibration", coherence.calibration, "softmax | clip");
  sub_coherence->add_option("--temperature", coherence.temperature)->check(CLI::PositiveNumber);

  EvalArgs eval;
  auto* sub_eval = app.add_subcommand("eval", "Correlate metric scores with human ratings");
  sub_eval->add_option("--ratings", eval.ratings, "Ratings CSV (rater_id,task_id,score)")
      ->required();
  sub_eval->add_option("--metric", eval.metric, "Metric CSV (task_id,score)");
  sub_eval->add_option("--max-committee", eval.max_committee,
                       "Largest committee size (default raters-1)");
  sub_eval->add_option("--resamples", eval.resamples)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  auction.output = output;
  benchmark.output = output;
  benchmark.seed = seed;
  generate.seed = seed;
  verify.output = output;
  verify.seed = seed;
  coherence.output = output;
  coherence.seed = seed;
  eval.output = output;
  eval.seed = seed;

  try {
    if (sub_auction->parsed()) return cmd_auction(auction);
    if (sub_generate->parsed()) return cmd_generate(generate);
    if (sub_benchmark->parsed()) return cmd_benchmark(benchmark);
    if (sub_verify->parsed()) return cmd_verify(verify);
    if (sub_coherence->parsed()) return cmd_coherence(coherence);
    if (sub_eval->parsed()) return cmd_eval(eval);
  } catch (const genreads::BoundViolation& e) {
    std::cerr << "bound violation: " << e.what() << std::endl;
    return 3;
  } catch (const genreads::ProviderError& e) {
    std::cerr << "provider error: " << e.what() << std::endl;
    if (!e.payload().empty()) std::cerr << "payload: " << e.payload() << std::endl;
    return 4;
  } catch (const genreads::Error& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
  return 0;
}

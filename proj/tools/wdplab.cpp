// wdplab: instance generation, labeling, sample building, training, solving and
// benchmarking for multi-unit winner determination.

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "wdp/bench.hpp"
#include "wdp/errors.hpp"
#include "wdp/exact.hpp"
#include "wdp/gnn.hpp"
#include "wdp/heuristics.hpp"
#include "wdp/instgen.hpp"
#include "wdp/io.hpp"
#include "wdp/postprocess.hpp"
#include "wdp/samples.hpp"

namespace fs = std::filesystem;
using namespace wdp;

namespace {

// WDPLAB_SEED wins over any seed given on the command line.
std::uint64_t effective_seed(std::uint64_t seed) {
  if (const char* env = std::getenv("WDPLAB_SEED"); env && *env) return std::stoull(env);
  return seed;
}

std::vector<fs::path> instance_paths(const fs::path& in) {
  if (fs::is_directory(in)) return list_json_files(in);
  return {in};
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(std::stod(part));
  return out;
}

std::vector<Method> parse_methods(const std::string& csv) {
  std::vector<Method> out;
  std::stringstream ss(csv);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(method_from_string(part));
  return out;
}

void print_allocation(const AuctionInstance& inst, const Allocation& alloc) {
  const auto eval = evaluate_allocation(inst, alloc);
  std::cout << inst.name << ": revenue " << format_double(eval.revenue) << ", "
            << alloc.num_accepted() << " of " << inst.num_bids() << " bids accepted\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Winner determination for multi-unit combinatorial auctions"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate an auction instance");
  gen->require_subcommand(1);
  SynthConfig synth;
  std::string gen_out;
  auto* gen_synth = gen->add_subcommand("synth", "Decay-distribution instance");
  gen_synth->add_option("--bids", synth.num_bids, "Number of bids M")->capture_default_str();
  gen_synth->add_option("--items", synth.num_items, "Number of items N")->capture_default_str();
  gen_synth->add_option("--umax", synth.max_units, "Maximum units per item")->capture_default_str();
  gen_synth->add_option("--item-prob", synth.item_prob)->capture_default_str();
  gen_synth->add_option("--unit-prob", synth.unit_prob)->capture_default_str();
  gen_synth->add_option("--seed", synth.seed)->capture_default_str();
  gen_synth->add_option("--out", gen_out)->required();
  gen_synth->callback([&] {
    synth.seed = effective_seed(synth.seed);
    const auto inst = gen_synthetic(synth);
    save_instance(gen_out, inst);
    std::cout << "wrote " << inst.name << " to " << gen_out << "\n";
  });

  VmConfig vm;
  std::string vm_dist = "0.1,0.4,0.5";
  auto* gen_vm_cmd = gen->add_subcommand("vm", "Cloud VM allocation instance");
  gen_vm_cmd->add_option("--users", vm.num_users)->capture_default_str();
  gen_vm_cmd->add_option("--types", vm.num_vm_types, "Number of VM types")->capture_default_str();
  gen_vm_cmd->add_option("--units-per-type", vm.units_per_type)->capture_default_str();
  gen_vm_cmd->add_option("--dist", vm_dist, "Heavy,medium,light user fractions")->capture_default_str();
  gen_vm_cmd->add_option("--seed", vm.seed)->capture_default_str();
  gen_vm_cmd->add_option("--out", gen_out)->required();
  gen_vm_cmd->callback([&] {
    vm.type_fractions = parse_list(vm_dist);
    vm.seed = effective_seed(vm.seed);
    const auto inst = gen_vm(vm);
    save_instance(gen_out, inst);
    std::cout << "wrote " << inst.name << " to " << gen_out << "\n";
  });

  // label
  std::string label_in, label_out;
  double label_limit = 1800.0;
  auto* label = app.add_subcommand("label", "Label instances with branch-and-bound");
  label->add_option("--in", label_in, "Instance file or directory")->required();
  label->add_option("--out", label_out, "Output directory")->required();
  label->add_option("--time-limit", label_limit, "Seconds per instance")->capture_default_str();
  label->callback([&] {
    std::vector<AuctionInstance> instances;
    std::vector<fs::path> paths = instance_paths(label_in);
    for (const auto& p : paths) instances.push_back(load_instance(p));
    const auto labeled = label_instances(instances, std::chrono::duration<double>(label_limit));
    for (std::size_t i = 0; i < labeled.size(); ++i) {
      save_labeled_instance(fs::path(label_out) / paths[i].filename(), labeled[i]);
      std::cout << paths[i].filename().string() << ": revenue "
                << format_double(evaluate_allocation(labeled[i].instance, labeled[i].allocation).revenue)
                << (labeled[i].optimal ? " (optimal)" : " (time limit)") << "\n";
    }
  });

  // samples
  std::string samples_labels, samples_out, samples_mode = "optimum-only";
  double samples_pk = 0.8;
  std::uint64_t samples_seed = 0;
  ExpansionConfig expansion;
  auto* samples = app.add_subcommand("samples", "Build single-label training samples");
  samples->add_option("--labels", samples_labels, "Directory of label files")->required();
  samples->add_option("--mode", samples_mode)->check(CLI::IsMember({"optimum-only", "mix"}))->capture_default_str();
  samples->add_option("--pk", samples_pk, "Node keeping probability")->capture_default_str();
  samples->add_option("--copies", expansion.copies, "Mix mode: copies per instance")->capture_default_str();
  samples->add_option("--gap", expansion.gap_threshold, "Mix mode: gap threshold")->capture_default_str();
  samples->add_option("--seed", samples_seed)->capture_default_str();
  samples->add_option("--out", samples_out)->required();
  samples->callback([&] {
    Rng rng(effective_seed(samples_seed));
    std::vector<LabeledInstance> labeled;
    std::size_t skipped = 0;
    for (const auto& p : list_json_files(samples_labels)) {
      auto li = load_labeled_instance(p);
      if (li.optimal) {
        labeled.push_back(std::move(li));
      } else {
        ++skipped;
      }
    }
    if (skipped) std::cerr << "warning: skipped " << skipped << " unproven labels\n";
    if (sample_mode_from_string(samples_mode) == SampleMode::mix)
      labeled = expand_instance_set(labeled, expansion, rng);
    const auto data = single_label_sample_generation(labeled, samples_pk, rng);
    save_dataset(samples_out, data);
    std::cout << "wrote " << data.size() << " samples from " << labeled.size() << " instances to "
              << samples_out << "\n";
  });

  // train
  std::string train_samples_path, train_validation_path, train_out;
  bool train_pipeline = false;
  TrainConfig tc;
  std::size_t train_q = 16;
  std::string optimizer = "adam";
  PipelineConfig pc;
  pc.generator.num_bids = 50;
  pc.generator.num_items = 5;
  pc.generator.max_units = 5;
  std::string pipeline_mode = "optimum-only";
  double pipeline_limit = 60.0;
  auto* train_cmd = app.add_subcommand("train", "Train the GNN");
  train_cmd->add_option("--samples", train_samples_path, "Dataset file");
  train_cmd->add_option("--validation", train_validation_path, "Validation dataset file");
  train_cmd->add_flag("--pipeline", train_pipeline, "Generate, label, sample and train in one go");
  train_cmd->add_option("--out", train_out, "Model file")->required();
  train_cmd->add_option("--epochs", tc.epochs)->capture_default_str();
  train_cmd->add_option("--lr", tc.learning_rate)->capture_default_str();
  train_cmd->add_option("--batch", tc.batch_size)->capture_default_str();
  train_cmd->add_option("--patience", tc.patience)->capture_default_str();
  train_cmd->add_option("--optimizer", optimizer)->check(CLI::IsMember({"adam", "sgd"}))->capture_default_str();
  train_cmd->add_option("--q", train_q, "Embedding width")->capture_default_str();
  train_cmd->add_option("--seed", tc.seed)->capture_default_str();
  train_cmd->add_option("--bids", pc.generator.num_bids, "Pipeline: bids per instance")->capture_default_str();
  train_cmd->add_option("--items", pc.generator.num_items, "Pipeline: items per instance")->capture_default_str();
  train_cmd->add_option("--umax", pc.generator.max_units, "Pipeline: max units")->capture_default_str();
  train_cmd->add_option("--instances", pc.train_instances, "Pipeline: training instances")->capture_default_str();
  train_cmd->add_option("--val-instances", pc.validation_instances)->capture_default_str();
  train_cmd->add_option("--min-samples", pc.min_samples)->capture_default_str();
  train_cmd->add_option("--mode", pipeline_mode)->check(CLI::IsMember({"optimum-only", "mix"}))->capture_default_str();
  train_cmd->add_option("--pk", pc.keep_prob)->capture_default_str();
  train_cmd->add_option("--time-limit", pipeline_limit, "Pipeline: labeling seconds per instance")->capture_default_str();
  train_cmd->callback([&] {
    tc.seed = effective_seed(tc.seed);
    tc.optimizer = optimizer == "adam" ? Optimizer::adam : Optimizer::sgd;
    if (train_pipeline) {
      pc.generator.seed = tc.seed;
      pc.train = tc;
      pc.q = train_q;
      pc.mode = sample_mode_from_string(pipeline_mode);
      pc.time_limit = std::chrono::duration<double>(pipeline_limit);
      pc.model_out = train_out;
      pc.log = [](const std::string& m) { std::cerr << m << "\n"; };
      const auto r = pipeline_train(pc);
      const auto& s = r.summary;
      std::cout << "labeled " << s.labeled_instances << " (dropped " << s.dropped_instances
                << ", after expansion " << s.expanded_instances << ")\n"
                << "train samples " << s.train_samples << " (formula at P_k=1: "
                << s.expected_train_samples << "), validation samples " << s.validation_samples << "\n"
                << "epochs " << s.epochs_run << ", best epoch " << s.best_epoch << ", final train loss "
                << s.final_train_loss << ", best validation loss " << s.best_validation_loss << "\n"
                << "model written to " << train_out << "\n";
      return;
    }
    if (train_samples_path.empty()) throw CLI::ValidationError("train", "--samples or --pipeline is required");
    const auto data = load_dataset(train_samples_path);
    const auto graphs = encode_samples(data);
    std::vector<LabeledGraph> validation;
    if (!train_validation_path.empty()) validation = encode_samples(load_dataset(train_validation_path));
    tc.on_epoch = [](std::size_t e, double tl, double vl) {
      std::cerr << "epoch " << e << " train " << tl << " validation " << vl << "\n";
    };
    const auto r = train(init_model(train_q, tc.seed), graphs, tc, validation);
    save_model_file(train_out, r.model);
    std::cout << "trained on " << graphs.size() << " samples, " << r.train_loss.size()
              << " epochs, final loss " << r.train_loss.back() << "; model written to " << train_out << "\n";
  });

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one instance");
  solve->require_subcommand(1);
  std::string solve_in, solve_out, solve_model, solve_mode = "basic", solve_method = "greedy";
  double solve_limit = 1800.0;
  bool solve_brute = false;
  std::uint64_t solve_seed = 0;

  auto* solve_exact = solve->add_subcommand("exact", "Branch-and-bound or brute force");
  solve_exact->add_option("--in", solve_in)->required();
  solve_exact->add_option("--out", solve_out)->required();
  solve_exact->add_option("--time-limit", solve_limit)->capture_default_str();
  solve_exact->add_flag("--brute", solve_brute, "Exhaustive search (M <= 25)");
  solve_exact->callback([&] {
    const auto inst = load_instance(solve_in);
    const auto r = solve_brute ? brute_force(inst)
                               : branch_and_bound(inst, std::chrono::duration<double>(solve_limit));
    Json j = allocation_to_json(inst, r.allocation);
    j["proven_optimal"] = r.proven_optimal;
    j["nodes"] = r.nodes_explored;
    write_json_file(solve_out, j);
    print_allocation(inst, r.allocation);
  });

  auto* solve_gnn = solve->add_subcommand("gnn", "GNN with basic or traversal post-processing");
  solve_gnn->add_option("--model", solve_model)->required();
  solve_gnn->add_option("--in", solve_in)->required();
  solve_gnn->add_option("--mode", solve_mode)->check(CLI::IsMember({"basic", "traversal"}))->capture_default_str();
  solve_gnn->add_option("--out", solve_out)->required();
  solve_gnn->callback([&] {
    const auto inst = load_instance(solve_in);
    const auto model = load_model_file(solve_model);
    const auto trace = solve_mode == "basic" ? basic_solve(model, inst) : traversal_solve(model, inst);
    Json j = allocation_to_json(inst, trace.allocation);
    j["gnn_calls"] = trace.gnn_calls;
    write_json_file(solve_out, j);
    print_allocation(inst, trace.allocation);
    std::cout << "gnn calls: " << trace.gnn_calls << "\n";
  });

  auto* solve_heur = solve->add_subcommand("heuristic", "Baseline heuristic");
  solve_heur->add_option("--method", solve_method)
      ->check(CLI::IsMember({"rlp", "ss", "casanova", "greedy"}))
      ->capture_default_str();
  solve_heur->add_option("--in", solve_in)->required();
  solve_heur->add_option("--seed", solve_seed)->capture_default_str();
  solve_heur->add_option("--out", solve_out)->required();
  solve_heur->callback([&] {
    const auto inst = load_instance(solve_in);
    Rng rng(effective_seed(solve_seed));
    Allocation alloc;
    if (solve_method == "rlp") alloc = rlp(inst, rng);
    else if (solve_method == "ss") alloc = ss(inst);
    else if (solve_method == "casanova") alloc = casanova(inst, CasanovaParams{}, rng);
    else alloc = greedy_density(inst);
    write_json_file(solve_out, allocation_to_json(inst, alloc));
    print_allocation(inst, alloc);
  });

  // bench
  std::string bench_in, bench_out, bench_model, bench_methods = "exact,greedy,ss,rlp,casanova";
  std::string bench_reference = "exact", bench_alloc_dir;
  std::uint64_t bench_seed = 0;
  double bench_limit = 60.0;
  bool bench_no_timing = false;
  auto* bench = app.add_subcommand("bench", "Run methods over an instance set and write a CSV report");
  bench->add_option("--instances", bench_in, "Instance file or directory")->required();
  bench->add_option("--methods", bench_methods,
                    "Comma list of exact,brute,gnn-basic,gnn-traversal,rlp,ss,casanova,greedy")
      ->capture_default_str();
  bench->add_option("--model", bench_model, "Model file for gnn methods");
  bench->add_option("--reference", bench_reference)->check(CLI::IsMember({"exact", "best-known"}))->capture_default_str();
  bench->add_option("--seed", bench_seed)->capture_default_str();
  bench->add_option("--time-limit", bench_limit, "Exact solver seconds per instance")->capture_default_str();
  bench->add_flag("--no-timing", bench_no_timing, "Write time_ms as 0 for reproducible reports");
  bench->add_option("--allocations", bench_alloc_dir, "Directory for per-cell allocation files");
  bench->add_option("--out", bench_out, "CSV path")->required();
  bench->callback([&] {
    BenchConfig cfg;
    for (const auto& p : instance_paths(bench_in)) cfg.instances.push_back(load_instance(p));
    cfg.methods = parse_methods(bench_methods);
    std::optional<GnnModel> model;
    if (!bench_model.empty()) {
      model = load_model_file(bench_model);
      cfg.model = &*model;
    }
    cfg.reference = bench_reference == "exact" ? ReferencePolicy::exact : ReferencePolicy::best_known;
    cfg.seed = effective_seed(bench_seed);
    cfg.exact_time_limit = std::chrono::duration<double>(bench_limit);
    cfg.record_timing = !bench_no_timing;
    if (!bench_alloc_dir.empty()) cfg.allocations_dir = bench_alloc_dir;
    const auto rows = run_benchmark(cfg);
    write_report_file(bench_out, rows);
    std::cout << "wrote " << rows.size() << " rows to " << bench_out << "\n";
  });

  // report
  std::string report_in;
  auto* report = app.add_subcommand("report", "Summarize a benchmark CSV by method and size");
  report->add_option("--in", report_in)->required();
  report->callback([&] {
    const auto summary = summarize(read_report_file(report_in));
    std::cout << std::left << std::setw(15) << "method" << std::right << std::setw(7) << "M"
              << std::setw(6) << "n" << std::setw(10) << "gap%" << std::setw(12) << "time_ms"
              << std::setw(8) << "uti" << std::setw(8) << "sat" << std::setw(10) << "iters" << "\n";
    std::cout << std::fixed;
    for (const auto& s : summary) {
      std::cout << std::left << std::setw(15) << s.method << std::right << std::setw(7) << s.num_bids
                << std::setw(6) << s.count << std::setw(10) << std::setprecision(3) << 100.0 * s.mean_gap
                << std::setw(12) << std::setprecision(2) << s.mean_time_ms << std::setw(8)
                << std::setprecision(3) << s.mean_utilization << std::setw(8) << s.mean_satisfaction
                << std::setw(10) << std::setprecision(1) << s.mean_iterations << "\n";
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

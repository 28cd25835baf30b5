#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wdp/core.hpp"
#include "wdp/exact.hpp"
#include "wdp/gnn.hpp"
#include "wdp/heuristics.hpp"
#include "wdp/instgen.hpp"
#include "wdp/samples.hpp"

namespace wdp {

enum class Method { exact, brute, gnn_basic, gnn_traversal, rlp, ss, casanova, greedy };
std::string to_string(Method method);
/// "exact", "brute", "gnn-basic", "gnn-traversal", "rlp", "ss", "casanova", "greedy".
Method method_from_string(const std::string& name);
bool needs_model(Method method);

enum class ReferencePolicy {
  exact,       // branch-and-bound revenue; falls back to best-known when not proven
  best_known,  // best revenue over the methods in the run
};

struct BenchConfig {
  std::vector<AuctionInstance> instances;
  std::vector<Method> methods;
  const GnnModel* model = nullptr;
  ReferencePolicy reference = ReferencePolicy::exact;
  std::uint64_t seed = 0;
  std::chrono::duration<double> exact_time_limit{60.0};
  CasanovaParams casanova;
  /// When false, time_ms is written as 0 so that repeated runs give identical reports.
  bool record_timing = true;
  /// When set, each cell's allocation is written to <dir>/<instance>__<method>.json.
  std::optional<std::filesystem::path> allocations_dir;
};

struct ReportRow {
  std::string instance;
  std::size_t num_bids = 0;
  std::size_t num_items = 0;
  int max_units = 0;
  std::string method;
  double revenue = 0.0;
  double reference = 0.0;
  double gap = 0.0;
  double time_ms = 0.0;
  double utilization = 0.0;
  double satisfaction = 0.0;
  std::size_t iterations = 0;
  /// Whether `reference` is a proven optimum (false means best-known).
  bool proven_optimal = false;
};

inline constexpr const char* kReportHeader =
    "instance,M,N,u_max,method,revenue,reference,gap,time_ms,utilization,satisfaction,"
    "iterations,proven_optimal";

/// One row per (instance, method), sorted by (instance, method). Throws ContractError if
/// a solver returns an infeasible allocation or a GNN method has no model.
std::vector<ReportRow> run_benchmark(const BenchConfig& cfg);

void write_report(std::ostream& out, const std::vector<ReportRow>& rows);
void write_report_file(const std::filesystem::path& path, const std::vector<ReportRow>& rows);
std::vector<ReportRow> read_report_file(const std::filesystem::path& path);

struct ReportSummary {
  std::string method;
  std::size_t num_bids = 0;
  std::size_t count = 0;
  double mean_gap = 0.0;
  double mean_time_ms = 0.0;
  double mean_utilization = 0.0;
  double mean_satisfaction = 0.0;
  double mean_iterations = 0.0;
};

/// Means grouped by (method, M), sorted by (method, M).
std::vector<ReportSummary> summarize(const std::vector<ReportRow>& rows);

inline constexpr int kGenerationAttempts = 100;

/// Instance i of a generator stream; distinct streams give disjoint instance sets. A seed
/// whose draw budget runs out is replaced by the stream's next seed, up to 100 times.
AuctionInstance generate_instance(const SynthConfig& generator, std::uint64_t stream,
                                  std::size_t index);

enum class SampleMode { optimum_only, mix };
std::string to_string(SampleMode mode);
SampleMode sample_mode_from_string(const std::string& name);

struct PipelineConfig {
  SynthConfig generator;
  std::size_t train_instances = 100;
  std::size_t validation_instances = 20;
  /// Keep labeling further training instances until this many samples exist.
  std::size_t min_samples = 0;
  std::size_t max_train_instances = 5000;
  std::chrono::duration<double> time_limit{60.0};
  SampleMode mode = SampleMode::optimum_only;
  double keep_prob = 1.0;
  ExpansionConfig expansion;
  std::size_t q = 16;
  TrainConfig train;
  std::optional<std::filesystem::path> model_out;
  std::function<void(const std::string&)> log;
};

struct PipelineSummary {
  std::size_t labeled_instances = 0;
  std::size_t dropped_instances = 0;
  std::size_t expanded_instances = 0;  // after mix expansion (equals labeled otherwise)
  std::size_t train_samples = 0;
  std::size_t expected_train_samples = 0;  // sum of (K-1)(K+2)/2 over expanded instances
  std::size_t validation_samples = 0;
  std::size_t epochs_run = 0;
  std::size_t best_epoch = 0;
  double final_train_loss = 0.0;
  double best_validation_loss = 0.0;
};

struct PipelineResult {
  GnnModel model;
  PipelineSummary summary;
  TrainResult history;
};

/// Generates, labels with branch-and-bound, builds samples, trains with early stopping on
/// the validation instances, and optionally saves the model. Unproven labels are dropped;
/// more than half dropped aborts with ContractError.
PipelineResult pipeline_train(const PipelineConfig& cfg);

/// Branch-and-bound labels for `instances`, computed concurrently. Unproven results are
/// returned with optimal = false.
std::vector<LabeledInstance> label_instances(const std::vector<AuctionInstance>& instances,
                                             std::chrono::duration<double> time_limit);

}  // namespace wdp

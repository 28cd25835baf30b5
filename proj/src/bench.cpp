#include "wdp/bench.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <sstream>

#include "wdp/errors.hpp"
#include "wdp/io.hpp"
#include "wdp/postprocess.hpp"

namespace wdp {

namespace {

constexpr std::array<std::pair<Method, const char*>, 8> kMethodNames{{
    {Method::exact, "exact"},
    {Method::brute, "brute"},
    {Method::gnn_basic, "gnn-basic"},
    {Method::gnn_traversal, "gnn-traversal"},
    {Method::rlp, "rlp"},
    {Method::ss, "ss"},
    {Method::casanova, "casanova"},
    {Method::greedy, "greedy"},
}};

using Clock = std::chrono::steady_clock;

struct Cell {
  Allocation allocation;
  double revenue = 0.0;
  double time_ms = 0.0;
  std::size_t iterations = 0;
  bool proven = false;
};

int max_units(const AuctionInstance& inst) {
  int best = 0;
  for (const Item& item : inst.items) best = std::max(best, item.units);
  return best;
}

Cell run_exact(const AuctionInstance& inst, std::chrono::duration<double> limit) {
  const auto start = Clock::now();
  ExactResult r = branch_and_bound(inst, limit);
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return {std::move(r.allocation), r.revenue, ms, r.nodes_explored, r.proven_optimal};
}

Cell run_cell(const BenchConfig& cfg, const AuctionInstance& inst, Method method, Rng rng) {
  Cell cell;
  if (method == Method::exact) return run_exact(inst, cfg.exact_time_limit);
  if (needs_model(method) && cfg.model == nullptr)
    throw ContractError("method " + to_string(method) + " requires a model");
  // GNN timing includes per-iteration re-encoding but not the first encoding.
  const BidItemGraph initial = needs_model(method) ? build_graph(inst) : BidItemGraph{};
  const auto start = Clock::now();
  switch (method) {
    case Method::brute: {
      ExactResult r = brute_force(inst);
      cell.allocation = std::move(r.allocation);
      cell.iterations = r.nodes_explored;
      cell.proven = true;
      break;
    }
    case Method::gnn_basic:
    case Method::gnn_traversal: {
      const BidScorer scorer = model_scorer(*cfg.model, ExecPolicy::serial);
      SolveTrace t = method == Method::gnn_basic ? basic_solve(scorer, initial)
                                                 : traversal_solve(scorer, initial);
      cell.allocation = std::move(t.allocation);
      cell.iterations = t.gnn_calls;
      break;
    }
    case Method::rlp:
      cell.allocation = rlp(inst, rng);
      break;
    case Method::ss:
      cell.allocation = ss(inst);
      break;
    case Method::casanova: {
      CasanovaResult r = casanova_search(inst, cfg.casanova, rng);
      cell.allocation = std::move(r.allocation);
      cell.iterations = r.steps;
      break;
    }
    case Method::greedy:
      cell.allocation = greedy_density(inst);
      break;
    case Method::exact:
      break;
  }
  cell.time_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return cell;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") != std::string::npos)
    throw FormatError("report field contains a CSV delimiter: " + s);
  return s;
}

}  // namespace

std::string to_string(Method method) {
  for (const auto& [m, name] : kMethodNames)
    if (m == method) return name;
  return "unknown";
}

Method method_from_string(const std::string& name) {
  for (const auto& [m, n] : kMethodNames)
    if (name == n) return m;
  throw ContractError("unknown method '" + name + "'");
}

bool needs_model(Method method) {
  return method == Method::gnn_basic || method == Method::gnn_traversal;
}

std::vector<ReportRow> run_benchmark(const BenchConfig& cfg) {
  if (cfg.methods.empty()) throw ContractError("benchmark needs at least one method");
  for (Method m : cfg.methods)
    if (needs_model(m) && cfg.model == nullptr)
      throw ContractError("method " + to_string(m) + " requires a model");
  std::map<std::string, std::size_t> names;
  for (std::size_t i = 0; i < cfg.instances.size(); ++i)
    if (!names.emplace(cfg.instances[i].name, i).second)
      throw ContractError("duplicate instance name '" + cfg.instances[i].name + "'");

  const std::size_t num_inst = cfg.instances.size();
  const std::size_t num_methods = cfg.methods.size();
  const bool need_reference_exact =
      cfg.reference == ReferencePolicy::exact &&
      std::find(cfg.methods.begin(), cfg.methods.end(), Method::exact) == cfg.methods.end();
  const std::size_t per_instance = num_methods + (need_reference_exact ? 1 : 0);

  std::vector<Cell> cells(num_inst * per_instance);
  std::vector<std::string> errors(cells.size());
  const Rng base(cfg.seed);
#pragma omp parallel for schedule(dynamic)
  for (long c = 0; c < static_cast<long>(cells.size()); ++c) {
    const std::size_t i = static_cast<std::size_t>(c) / per_instance;
    const std::size_t k = static_cast<std::size_t>(c) % per_instance;
    const Method method = k < num_methods ? cfg.methods[k] : Method::exact;
    try {
      cells[c] = run_cell(cfg, cfg.instances[i], method,
                          base.derive(i * kMethodNames.size() + static_cast<std::size_t>(method)));
      if (!evaluate_allocation(cfg.instances[i], cells[c].allocation).feasible)
        throw ContractError("infeasible allocation");
    } catch (const std::exception& e) {
      errors[c] = to_string(method) + " on " + cfg.instances[i].name + ": " + e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw ContractError("benchmark aborted: " + e);

  std::vector<ReportRow> rows;
  for (std::size_t i = 0; i < num_inst; ++i) {
    const AuctionInstance& inst = cfg.instances[i];
    Cell* first = &cells[i * per_instance];
    for (std::size_t k = 0; k < per_instance; ++k)
      first[k].revenue = evaluate_allocation(inst, first[k].allocation).revenue;

    double reference = 0.0;
    bool proven = false;
    for (std::size_t k = 0; k < per_instance; ++k) {
      const Method method = k < num_methods ? cfg.methods[k] : Method::exact;
      const bool exact_like = method == Method::exact || method == Method::brute;
      if (exact_like && first[k].proven) {
        reference = first[k].revenue;
        proven = true;
        break;
      }
    }
    if (!proven) {
      for (std::size_t k = 0; k < per_instance; ++k) reference = std::max(reference, first[k].revenue);
    }

    for (std::size_t k = 0; k < num_methods; ++k) {
      const Cell& cell = first[k];
      const MetricsRow m = metrics(inst, cell.allocation, reference);
      ReportRow row;
      row.instance = inst.name;
      row.num_bids = inst.num_bids();
      row.num_items = inst.num_items();
      row.max_units = max_units(inst);
      row.method = to_string(cfg.methods[k]);
      row.revenue = m.revenue;
      row.reference = reference;
      row.gap = m.gap;
      row.time_ms = cfg.record_timing ? cell.time_ms : 0.0;
      row.utilization = m.utilization;
      row.satisfaction = m.satisfaction;
      row.iterations = cell.iterations;
      row.proven_optimal = proven;
      rows.push_back(std::move(row));

      if (cfg.allocations_dir) {
        write_json_file(*cfg.allocations_dir / (inst.name + "__" + to_string(cfg.methods[k]) + ".json"),
                        allocation_to_json(inst, cell.allocation));
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.instance, a.method) < std::tie(b.instance, b.method);
  });
  return rows;
}

void write_report(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << kReportHeader << '\n';
  for (const auto& r : rows) {
    out << csv_field(r.instance) << ',' << r.num_bids << ',' << r.num_items << ',' << r.max_units
        << ',' << csv_field(r.method) << ',' << format_double(r.revenue) << ','
        << format_double(r.reference) << ',' << format_double(r.gap) << ','
        << format_double(r.time_ms) << ',' << format_double(r.utilization) << ','
        << format_double(r.satisfaction) << ',' << r.iterations << ','
        << (r.proven_optimal ? "true" : "false") << '\n';
  }
}

void write_report_file(const std::filesystem::path& path, const std::vector<ReportRow>& rows) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write report " + path.string());
  write_report(out, rows);
}

std::vector<ReportRow> read_report_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open report " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kReportHeader)
    throw FormatError(path.string() + ": missing or unexpected report header");
  std::vector<ReportRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 13)
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected 13 fields");
    try {
      ReportRow r;
      r.instance = f[0];
      r.num_bids = std::stoul(f[1]);
      r.num_items = std::stoul(f[2]);
      r.max_units = std::stoi(f[3]);
      r.method = f[4];
      r.revenue = std::stod(f[5]);
      r.reference = std::stod(f[6]);
      r.gap = std::stod(f[7]);
      r.time_ms = std::stod(f[8]);
      r.utilization = std::stod(f[9]);
      r.satisfaction = std::stod(f[10]);
      r.iterations = std::stoul(f[11]);
      if (f[12] != "true" && f[12] != "false") throw std::invalid_argument("proven_optimal");
      r.proven_optimal = f[12] == "true";
      rows.push_back(std::move(r));
    } catch (const std::logic_error& e) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": bad field (" + e.what() + ")");
    }
  }
  return rows;
}

std::vector<ReportSummary> summarize(const std::vector<ReportRow>& rows) {
  std::map<std::pair<std::string, std::size_t>, ReportSummary> groups;
  for (const auto& r : rows) {
    auto& s = groups[{r.method, r.num_bids}];
    s.method = r.method;
    s.num_bids = r.num_bids;
    ++s.count;
    s.mean_gap += r.gap;
    s.mean_time_ms += r.time_ms;
    s.mean_utilization += r.utilization;
    s.mean_satisfaction += r.satisfaction;
    s.mean_iterations += static_cast<double>(r.iterations);
  }
  std::vector<ReportSummary> out;
  for (auto& [key, s] : groups) {
    const double n = static_cast<double>(s.count);
    s.mean_gap /= n;
    s.mean_time_ms /= n;
    s.mean_utilization /= n;
    s.mean_satisfaction /= n;
    s.mean_iterations /= n;
    out.push_back(s);
  }
  return out;
}

AuctionInstance generate_instance(const SynthConfig& generator, std::uint64_t stream,
                                  std::size_t index) {
  SynthConfig cfg = generator;
  Rng seeds = Rng(generator.seed).derive(stream).derive(index);
  // Small unit spaces sometimes cannot hold M non-dominated bids; draw another seed.
  for (int attempt = 1;; ++attempt) {
    cfg.seed = seeds.next_u64();
    try {
      return gen_synthetic(cfg);
    } catch (const GenerationExhausted&) {
      if (attempt == kGenerationAttempts) throw;
    }
  }
}

std::string to_string(SampleMode mode) {
  return mode == SampleMode::optimum_only ? "optimum-only" : "mix";
}

SampleMode sample_mode_from_string(const std::string& name) {
  if (name == "optimum-only") return SampleMode::optimum_only;
  if (name == "mix") return SampleMode::mix;
  throw ContractError("unknown sample mode '" + name + "'");
}

std::vector<LabeledInstance> label_instances(const std::vector<AuctionInstance>& instances,
                                             std::chrono::duration<double> time_limit) {
  std::vector<LabeledInstance> out(instances.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(instances.size()); ++i) {
    const auto& inst = instances[static_cast<std::size_t>(i)];
    ExactResult r = branch_and_bound(inst, time_limit);
    out[static_cast<std::size_t>(i)] = {inst, std::move(r.allocation), r.proven_optimal};
  }
  return out;
}

namespace {

constexpr std::uint64_t kTrainStream = 0;
constexpr std::uint64_t kValidationStream = 1;

}  // namespace

PipelineResult pipeline_train(const PipelineConfig& cfg) {
  auto log = [&](const std::string& msg) {
    if (cfg.log) cfg.log(msg);
  };
  if (cfg.train_instances == 0) throw ContractError("pipeline needs at least one training instance");
  const Rng sample_rng(cfg.train.seed ^ 0x5a5a5a5aULL);
  PipelineSummary summary;
  std::size_t generated = 0;

  auto label_batch = [&](std::uint64_t stream, std::size_t from, std::size_t count) {
    std::vector<AuctionInstance> batch;
    for (std::size_t i = from; i < from + count; ++i)
      batch.push_back(generate_instance(cfg.generator, stream, i));
    generated += count;
    std::vector<LabeledInstance> kept;
    for (auto& li : label_instances(batch, cfg.time_limit)) {
      if (li.optimal) {
        kept.push_back(std::move(li));
      } else {
        ++summary.dropped_instances;
        log("warning: dropped " + li.instance.name + " (not proven optimal within the time limit)");
      }
    }
    return kept;
  };
  auto check_drops = [&] {
    if (2 * summary.dropped_instances > generated)
      throw ContractError("pipeline aborted: " + std::to_string(summary.dropped_instances) + " of " +
                          std::to_string(generated) + " label instances were not proven optimal");
  };
  auto make_samples = [&](const LabeledInstance& li, std::uint64_t stream, std::size_t index) {
    Rng r = sample_rng.derive(stream).derive(index);
    return single_label_sample_generation(std::span(&li, 1), cfg.keep_prob, r);
  };

  std::vector<TrainingSample> train_samples;
  std::size_t next = 0;
  std::size_t chunk_id = 0;
  std::size_t expanded_index = 0;
  while (next < cfg.train_instances ||
         (train_samples.size() < cfg.min_samples && next < cfg.max_train_instances)) {
    const std::size_t count = next < cfg.train_instances
                                  ? cfg.train_instances
                                  : std::min<std::size_t>(32, cfg.max_train_instances - next);
    auto kept = label_batch(kTrainStream, next, count);
    next += count;
    summary.labeled_instances += kept.size();
    if (cfg.mode == SampleMode::mix) {
      Rng r = sample_rng.derive(2).derive(chunk_id);
      kept = expand_instance_set(kept, cfg.expansion, r);
    }
    ++chunk_id;
    summary.expanded_instances += kept.size();
    for (const auto& li : kept) {
      summary.expected_train_samples += expected_sample_count(li.allocation.num_accepted());
      auto s = make_samples(li, kTrainStream, expanded_index++);
      std::move(s.begin(), s.end(), std::back_inserter(train_samples));
    }
    log("labeled " + std::to_string(next) + " training instances, " +
        std::to_string(train_samples.size()) + " samples");
  }
  check_drops();
  if (train_samples.size() < cfg.min_samples)
    log("warning: only " + std::to_string(train_samples.size()) + " samples after " +
        std::to_string(next) + " instances");
  if (train_samples.empty()) throw ContractError("pipeline produced no training samples");

  std::vector<TrainingSample> validation_samples;
  if (cfg.validation_instances > 0) {
    const auto kept = label_batch(kValidationStream, 0, cfg.validation_instances);
    check_drops();
    for (std::size_t i = 0; i < kept.size(); ++i) {
      auto s = make_samples(kept[i], kValidationStream, i);
      std::move(s.begin(), s.end(), std::back_inserter(validation_samples));
    }
  }
  summary.train_samples = train_samples.size();
  summary.validation_samples = validation_samples.size();
  log("samples: " + std::to_string(summary.train_samples) + " train (formula " +
      std::to_string(summary.expected_train_samples) + " at P_k=1), " +
      std::to_string(summary.validation_samples) + " validation");

  const auto train_graphs = encode_samples(train_samples);
  const auto validation_graphs = encode_samples(validation_samples);
  TrainConfig tc = cfg.train;
  if (!tc.on_epoch && cfg.log) {
    tc.on_epoch = [&](std::size_t epoch, double tl, double vl) {
      std::ostringstream msg;
      msg << "epoch " << epoch << " train " << tl << " validation " << vl;
      log(msg.str());
    };
  }
  PipelineResult result;
  result.history = train(init_model(cfg.q, cfg.train.seed), train_graphs, tc, validation_graphs);
  result.model = result.history.model;
  summary.epochs_run = result.history.train_loss.size();
  summary.best_epoch = result.history.best_epoch;
  summary.final_train_loss = result.history.train_loss.back();
  summary.best_validation_loss =
      result.history.validation_loss.empty() ? 0.0 : result.history.validation_loss[summary.best_epoch];
  result.summary = summary;
  if (cfg.model_out) {
    if (cfg.model_out->has_parent_path()) std::filesystem::create_directories(cfg.model_out->parent_path());
    save_model_file(cfg.model_out->string(), result.model);
  }
  return result;
}

}  // namespace wdp

#include "wdp/samples.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "wdp/errors.hpp"
#include "wdp/graph.hpp"
#include "wdp/io.hpp"

namespace wdp {

std::string to_string(SampleSource source) {
  return source == SampleSource::optimal ? "optimal" : "suboptimal";
}

std::vector<TrainingSample> one_hot_label_generation(const RemovalState& state, double keep_prob,
                                                     Rng& rng, SampleSource source) {
  std::vector<TrainingSample> out;
  for (std::size_t m : state.allocation.winners()) {
    if (rng.bernoulli(keep_prob)) out.push_back({state.instance, m, source});
  }
  return out;
}

RemovalState remove_allocated_bid(const RemovalState& state, std::size_t m) {
  const AuctionInstance& inst = state.instance;
  if (state.allocation.size() != inst.num_bids())
    throw DimensionError("allocation length does not match bid count");
  if (m >= inst.num_bids() || !state.allocation.accepted(m))
    throw ContractError("node removal: bid " + std::to_string(m) + " is not allocated");

  std::vector<int> remaining = inst.capacities();
  deduct(inst.bids[m].demand, remaining);
  std::vector<std::size_t> keep_items;
  for (std::size_t n = 0; n < remaining.size(); ++n)
    if (remaining[n] > 0) keep_items.push_back(n);

  RemovalState next;
  next.instance.name = inst.name;
  for (std::size_t n : keep_items) next.instance.items.push_back(Item{remaining[n]});
  for (std::size_t b = 0; b < inst.num_bids(); ++b) {
    if (b == m || !fits(inst.bids[b].demand, remaining)) continue;
    Bid reduced;
    reduced.price = inst.bids[b].price;
    for (std::size_t n : keep_items) reduced.demand.push_back(inst.bids[b].demand[n]);
    next.instance.bids.push_back(std::move(reduced));
    next.allocation.decisions.push_back(state.allocation.decisions[b]);
  }
  return next;
}

RemovalState node_removal(const RemovalState& state, Rng& rng) {
  const auto winners = state.allocation.winners();
  if (winners.empty()) throw ContractError("node removal: no allocated bid");
  return remove_allocated_bid(state, winners[rng.index(winners.size())]);
}

std::size_t expected_sample_count(std::size_t winners) {
  return winners < 2 ? 0 : (winners - 1) * (winners + 2) / 2;
}

std::vector<TrainingSample> single_label_sample_generation(std::span<const LabeledInstance> instances,
                                                           double keep_prob, Rng& rng) {
  const Rng base(rng.next_u64());
  std::vector<TrainingSample> out;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const LabeledInstance& li = instances[i];
    if (!evaluate_allocation(li.instance, li.allocation).feasible)
      throw ContractError("sample generation: allocation of " + li.instance.name + " is infeasible");
    Rng local = base.derive(i);
    const SampleSource source = li.optimal ? SampleSource::optimal : SampleSource::suboptimal;
    RemovalState state{li.instance, li.allocation};
    while (state.allocation.num_accepted() >= 2 && state.instance.num_bids() >= 2) {
      auto batch = one_hot_label_generation(state, keep_prob, local, source);
      std::move(batch.begin(), batch.end(), std::back_inserter(out));
      state = node_removal(state, local);
    }
  }
  return out;
}

namespace {

double revenue_of(const AuctionInstance& inst, const std::vector<std::uint8_t>& d) {
  double total = 0.0;
  for (std::size_t m = 0; m < d.size(); ++m)
    if (d[m]) total += inst.bids[m].price;
  return total;
}

// One local-search move: delete one or two random winners, optionally force a different
// bid in (a swap), then refill in density order without re-adding the deleted bids. The
// refill skips each candidate with probability 0.2 so repeated moves explore more.
std::vector<std::uint8_t> local_move(const AuctionInstance& inst, const std::vector<std::size_t>& order,
                                     std::vector<std::uint8_t> d, Rng& rng) {
  std::vector<std::size_t> winners;
  for (std::size_t m = 0; m < d.size(); ++m)
    if (d[m]) winners.push_back(m);
  if (winners.empty()) return d;
  std::vector<std::uint8_t> removed(d.size(), 0);
  const std::size_t deletions = winners.size() >= 2 && rng.bernoulli(0.5) ? 2 : 1;
  for (std::size_t k = 0; k < deletions; ++k) {
    const std::size_t pick = k + rng.index(winners.size() - k);
    std::swap(winners[k], winners[pick]);
    d[winners[k]] = 0;
    removed[winners[k]] = 1;
  }

  std::vector<int> remaining = inst.capacities();
  for (std::size_t m = 0; m < d.size(); ++m)
    if (d[m]) deduct(inst.bids[m].demand, remaining);

  if (rng.bernoulli(0.5)) {
    std::vector<std::size_t> candidates;
    for (std::size_t m = 0; m < d.size(); ++m)
      if (!d[m] && !removed[m] && fits(inst.bids[m].demand, remaining)) candidates.push_back(m);
    if (!candidates.empty()) {
      const std::size_t forced = candidates[rng.index(candidates.size())];
      d[forced] = 1;
      deduct(inst.bids[forced].demand, remaining);
    }
  }
  for (std::size_t m : order) {
    if (d[m] || removed[m] || !fits(inst.bids[m].demand, remaining)) continue;
    if (rng.bernoulli(0.2)) continue;
    d[m] = 1;
    deduct(inst.bids[m].demand, remaining);
  }
  return d;
}

}  // namespace

std::vector<LabeledInstance> expand_instance_set(std::span<const LabeledInstance> instances,
                                                 const ExpansionConfig& cfg, Rng& rng) {
  if (cfg.gap_threshold < 0.0 || cfg.gap_threshold >= 1.0)
    throw ContractError("gap threshold must be in [0, 1)");
  const Rng base(rng.next_u64());
  std::vector<LabeledInstance> out;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const LabeledInstance& li = instances[i];
    out.push_back(li);
    if (cfg.copies == 0) continue;
    const AuctionInstance& inst = li.instance;
    const double optimum = revenue_of(inst, li.allocation.decisions);
    const double floor = (1.0 - cfg.gap_threshold) * optimum - kRevenueTol;
    const auto order = density_order(inst);
    Rng local = base.derive(i);

    std::vector<std::vector<std::uint8_t>> pool{li.allocation.decisions};
    std::set<std::vector<std::uint8_t>> seen{li.allocation.decisions};
    const std::size_t attempts = cfg.copies * cfg.attempts_per_copy;
    for (std::size_t a = 0; a < attempts && pool.size() - 1 < cfg.copies; ++a) {
      auto candidate = local_move(inst, order, pool[local.index(pool.size())], local);
      if (revenue_of(inst, candidate) < floor || !seen.insert(candidate).second) continue;
      pool.push_back(candidate);
      out.push_back({inst, Allocation(std::move(candidate)), false});
    }
  }
  return out;
}

std::vector<LabeledGraph> encode_samples(std::span<const TrainingSample> samples) {
  std::vector<LabeledGraph> out(samples.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(samples.size()); ++i) {
    const auto& s = samples[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = {normalize_features(build_graph(s.state)), s.label};
  }
  return out;
}

void save_dataset(const std::filesystem::path& path, std::span<const TrainingSample> samples) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write dataset " + path.string());
  for (const auto& s : samples) {
    const Json j = {{"instance", to_json(s.state)},
                    {"label_index", s.label},
                    {"source", to_string(s.source)}};
    out << j.dump() << '\n';
  }
}

std::vector<TrainingSample> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open dataset " + path.string());
  std::vector<TrainingSample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const Json j = Json::parse(line);
      TrainingSample s;
      s.state = instance_from_json(j.at("instance"));
      s.label = j.at("label_index").get<std::size_t>();
      const auto source = j.at("source").get<std::string>();
      if (source != "optimal" && source != "suboptimal")
        throw FormatError("unknown sample source '" + source + "'");
      s.source = source == "optimal" ? SampleSource::optimal : SampleSource::suboptimal;
      if (s.label >= s.state.num_bids()) throw FormatError("label index out of range");
      out.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void save_labeled_instance(const std::filesystem::path& path, const LabeledInstance& labeled) {
  Json j = allocation_to_json(labeled.instance, labeled.allocation);
  j["instance"] = to_json(labeled.instance);
  j["proven_optimal"] = labeled.optimal;
  write_json_file(path, j);
}

LabeledInstance load_labeled_instance(const std::filesystem::path& path) {
  const Json j = read_json_file(path);
  try {
    LabeledInstance li;
    li.instance = instance_from_json(j.at("instance"));
    li.allocation = allocation_from_json(j);
    li.optimal = j.at("proven_optimal").get<bool>();
    if (li.allocation.size() != li.instance.num_bids())
      throw FormatError("decisions length does not match bid count");
    return li;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace wdp

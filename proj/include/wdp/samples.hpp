#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wdp/core.hpp"
#include "wdp/gnn.hpp"
#include "wdp/rng.hpp"

namespace wdp {

enum class SampleSource { optimal, suboptimal };
std::string to_string(SampleSource source);

/// A residual auction plus the index of its single positive bid.
struct TrainingSample {
  AuctionInstance state;
  std::size_t label = 0;
  SampleSource source = SampleSource::optimal;
};

struct LabeledInstance {
  AuctionInstance instance;
  Allocation allocation;
  bool optimal = true;
};

/// An auction state together with the allocation being peeled apart.
struct RemovalState {
  AuctionInstance instance;
  Allocation allocation;
};

/// Emits (state, j) for every accepted bid j, each kept with probability `keep_prob`.
/// One draw is consumed per accepted bid, in index order.
std::vector<TrainingSample> one_hot_label_generation(const RemovalState& state, double keep_prob,
                                                     Rng& rng,
                                                     SampleSource source = SampleSource::optimal);

/// Removes accepted bid `m`: its units are deducted, exhausted items dropped, and every
/// bid that no longer fits the remaining units dropped with it. Throws ContractError if
/// `m` is not accepted.
RemovalState remove_allocated_bid(const RemovalState& state, std::size_t m);
/// remove_allocated_bid on a uniformly chosen accepted bid.
RemovalState node_removal(const RemovalState& state, Rng& rng);

/// Alternates one-hot generation and node removal while at least two accepted bids and
/// two bids remain. With keep_prob = 1 an instance with K winners yields (K-1)(K+2)/2.
std::vector<TrainingSample> single_label_sample_generation(std::span<const LabeledInstance> instances,
                                                           double keep_prob, Rng& rng);

/// (K-1)(K+2)/2, zero for K < 2.
std::size_t expected_sample_count(std::size_t winners);

struct ExpansionConfig {
  double gap_threshold = 0.01;
  std::size_t copies = 7;
  std::size_t attempts_per_copy = 200;
};

/// Appends up to `copies` distinct near-optimal allocations per instance, found by
/// random delete / swap / greedy re-insert moves starting from the optimum or from an
/// allocation found earlier. Originals come first, each followed by its copies.
std::vector<LabeledInstance> expand_instance_set(std::span<const LabeledInstance> instances,
                                                 const ExpansionConfig& cfg, Rng& rng);

/// Graph-encodes and normalizes every sample.
std::vector<LabeledGraph> encode_samples(std::span<const TrainingSample> samples);

/// One JSON object per line: {"instance", "label_index", "source"}.
void save_dataset(const std::filesystem::path& path, std::span<const TrainingSample> samples);
std::vector<TrainingSample> load_dataset(const std::filesystem::path& path);

/// {"instance", "decisions", "revenue", "proven_optimal"}
void save_labeled_instance(const std::filesystem::path& path, const LabeledInstance& labeled);
LabeledInstance load_labeled_instance(const std::filesystem::path& path);

}  // namespace wdp

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dpfl/model.hpp"

namespace dpfl {

struct Dataset {
  Eigen::MatrixXd features;  // N x input_dim
  Eigen::VectorXi labels;    // values in [0, class_count)
  int class_count = 0;
};

// One client's slice of a parent dataset, as example indices.
struct ClientShard {
  int client_id = 0;
  std::vector<int> examples;
};

struct PartitionConfig {
  int num_clients = 50;
  bool iid = false;
  double dirichlet_alpha = 0.6;  // ignored when iid
  std::uint64_t seed = 0;
};

// Balanced Gaussian mixture: class c is centered at separation * u_c for a
// deterministic unit direction u_c, identity covariance.
Dataset synth_dataset(int classes, int dims, int n, double separation,
                      std::uint64_t seed);

// Per-client label proportions drawn from Dir(alpha); each class's examples
// are split across clients by largest-remainder apportionment against those
// proportions. Every example lands in exactly one shard; empty shards are
// repaired by stealing one example from the largest shard.
std::vector<ClientShard> dirichlet_partition(const Dataset& ds,
                                             const PartitionConfig& cfg);

// CSV schema: header "f0,...,f{D-1},label", UTF-8, '\n' newlines. Labels are
// re-indexed densely from 0 in sorted order on load.
Dataset load_csv(const std::string& path, int feature_columns);
void save_csv(const Dataset& ds, const std::string& path);

Batch make_batch(const Dataset& ds, std::span<const int> indices);

// Splits indices of [0, n) into disjoint train/test index sets.
std::pair<std::vector<int>, std::vector<int>> train_test_split(
    int n, double train_fraction, std::uint64_t seed);

// Chops the given examples into consecutive batches of at most batch_size.
std::vector<Batch> to_batches(const Dataset& ds, std::span<const int> indices,
                              int batch_size);

}  // namespace dpfl

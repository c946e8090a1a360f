#include "dpfl/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "dpfl/errors.hpp"
#include "dpfl/rng.hpp"

namespace dpfl {

Dataset synth_dataset(int classes, int dims, int n, double separation,
                      std::uint64_t seed) {
  if (classes < 2) throw DomainError("synth_dataset: need at least 2 classes");
  if (n < classes) throw DomainError("synth_dataset: need n >= classes");
  if (dims < 1) throw DomainError("synth_dataset: need dims >= 1");

  // Deterministic unit direction per class.
  Rng dir_rng(derive_seed(seed, 1ULL));
  Eigen::MatrixXd centers(classes, dims);
  for (int c = 0; c < classes; ++c) {
    Eigen::VectorXd u = dir_rng.normal_vector(dims);
    const double norm = u.norm();
    if (norm == 0.0) u[0] = 1.0; else u /= norm;
    centers.row(c) = separation * u.transpose();
  }

  Dataset ds;
  ds.class_count = classes;
  ds.features.resize(n, dims);
  ds.labels.resize(n);
  Rng rng(derive_seed(seed, 2ULL));
  for (int i = 0; i < n; ++i) {
    const int c = i % classes;  // balanced labels
    ds.labels[i] = c;
    ds.features.row(i) =
        centers.row(c) + rng.normal_vector(dims).transpose();
  }
  return ds;
}

std::vector<ClientShard> dirichlet_partition(const Dataset& ds,
                                             const PartitionConfig& cfg) {
  const int num_examples = static_cast<int>(ds.labels.size());
  const int num_clients = cfg.num_clients;
  if (num_clients < 1)
    throw DomainError("dirichlet_partition: need at least 1 client");
  if (num_clients > num_examples)
    throw DomainError("dirichlet_partition: more clients than examples");
  if (!cfg.iid && !(cfg.dirichlet_alpha > 0.0))
    throw DomainError("dirichlet_partition: dirichlet_alpha must be positive");

  std::vector<ClientShard> shards(num_clients);
  for (int i = 0; i < num_clients; ++i) shards[i].client_id = i;

  Rng rng(derive_seed(cfg.seed, 3ULL));

  if (cfg.iid) {
    // Shuffled deal, round-robin.
    std::vector<int> order = rng.sample_without_replacement(num_examples, num_examples);
    for (int i = 0; i < num_examples; ++i)
      shards[i % num_clients].examples.push_back(order[i]);
  } else {
    // Indices of each class, in a shuffled global order.
    std::vector<int> order = rng.sample_without_replacement(num_examples, num_examples);
    std::vector<std::vector<int>> by_class(ds.class_count);
    for (int idx : order) by_class[ds.labels[idx]].push_back(idx);

    // Per-client label proportion vectors.
    Eigen::MatrixXd props(num_clients, ds.class_count);
    for (int i = 0; i < num_clients; ++i)
      props.row(i) = rng.dirichlet(cfg.dirichlet_alpha, ds.class_count).transpose();

    // Largest-remainder apportionment of each class against the clients'
    // proportions for that class.
    for (int c = 0; c < ds.class_count; ++c) {
      const int count = static_cast<int>(by_class[c].size());
      if (count == 0) continue;
      Eigen::VectorXd weights = props.col(c);
      const double total = weights.sum();
      if (total <= 0.0) weights.setConstant(1.0 / num_clients);
      else weights /= total;

      std::vector<int> quota(num_clients, 0);
      std::vector<std::pair<double, int>> remainders(num_clients);
      int assigned = 0;
      for (int i = 0; i < num_clients; ++i) {
        const double exact = weights[i] * count;
        quota[i] = static_cast<int>(std::floor(exact));
        assigned += quota[i];
        remainders[i] = {exact - std::floor(exact), i};
      }
      std::sort(remainders.begin(), remainders.end(),
                [](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first > b.first;
                  return a.second < b.second;
                });
      for (int r = 0; r < count - assigned; ++r)
        quota[remainders[r % num_clients].second] += 1;

      int at = 0;
      for (int i = 0; i < num_clients; ++i)
        for (int j = 0; j < quota[i]; ++j)
          shards[i].examples.push_back(by_class[c][at++]);
    }
  }

  // Repair empty shards by stealing one example from the largest shard.
  for (auto& shard : shards) {
    if (!shard.examples.empty()) continue;
    auto largest = std::max_element(
        shards.begin(), shards.end(), [](const auto& a, const auto& b) {
          return a.examples.size() < b.examples.size();
        });
    if (largest->examples.size() <= 1)
      throw DomainError("dirichlet_partition: cannot repair empty shard");
    shard.examples.push_back(largest->examples.back());
    largest->examples.pop_back();
  }
  return shards;
}

Dataset load_csv(const std::string& path, int feature_columns) {
  if (feature_columns < 1) throw DomainError("load_csv: need feature_columns >= 1");
  std::ifstream in(path);
  if (!in) throw DomainError("load_csv: cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw DomainError("load_csv: empty file " + path);

  std::vector<std::vector<double>> rows;
  std::vector<double> raw_labels;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      std::size_t pos = 0;
      double value = 0.0;
      try {
        value = std::stod(cell, &pos);
      } catch (const std::exception&) {
        throw DomainError("load_csv: non-numeric value at line " +
                          std::to_string(line_no));
      }
      if (pos != cell.size())
        throw DomainError("load_csv: malformed value at line " +
                          std::to_string(line_no));
      row.push_back(value);
    }
    if (static_cast<int>(row.size()) != feature_columns + 1)
      throw DomainError("load_csv: wrong column count at line " +
                        std::to_string(line_no));
    raw_labels.push_back(row.back());
    row.pop_back();
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DomainError("load_csv: no data rows in " + path);

  // Dense re-indexing of labels, sorted ascending.
  std::map<long long, int> label_map;
  for (double raw : raw_labels) {
    const double rounded = std::round(raw);
    if (std::abs(raw - rounded) > 1e-9)
      throw DomainError("load_csv: non-integer label value");
    label_map.emplace(static_cast<long long>(rounded), 0);
  }
  int next = 0;
  for (auto& [key, idx] : label_map) idx = next++;

  Dataset ds;
  ds.class_count = next;
  ds.features.resize(static_cast<Eigen::Index>(rows.size()), feature_columns);
  ds.labels.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < feature_columns; ++j) ds.features(i, j) = rows[i][j];
    ds.labels[static_cast<Eigen::Index>(i)] =
        label_map.at(static_cast<long long>(std::round(raw_labels[i])));
  }
  return ds;
}

void save_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DomainError("save_csv: cannot open " + path);
  for (int j = 0; j < ds.features.cols(); ++j) out << "f" << j << ",";
  out << "label\n";
  char buf[64];
  for (Eigen::Index i = 0; i < ds.features.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.features.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", ds.features(i, j));
      out << buf << ",";
    }
    out << ds.labels[i] << "\n";
  }
}

Batch make_batch(const Dataset& ds, std::span<const int> indices) {
  Batch batch;
  batch.features.resize(static_cast<Eigen::Index>(indices.size()), ds.features.cols());
  batch.labels.resize(static_cast<Eigen::Index>(indices.size()));
  for (std::size_t i = 0; i < indices.size(); ++i) {
    batch.features.row(static_cast<Eigen::Index>(i)) = ds.features.row(indices[i]);
    batch.labels[static_cast<Eigen::Index>(i)] = ds.labels[indices[i]];
  }
  return batch;
}

std::pair<std::vector<int>, std::vector<int>> train_test_split(
    int n, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw DomainError("train_test_split: fraction must be in (0,1)");
  Rng rng(derive_seed(seed, 4ULL));
  std::vector<int> order = rng.sample_without_replacement(n, n);
  const int train_n = std::max(1, static_cast<int>(std::lround(train_fraction * n)));
  std::vector<int> train(order.begin(), order.begin() + std::min(train_n, n - 1));
  std::vector<int> test(order.begin() + train.size(), order.end());
  return {std::move(train), std::move(test)};
}

std::vector<Batch> to_batches(const Dataset& ds, std::span<const int> indices,
                              int batch_size) {
  if (batch_size < 1) throw DomainError("to_batches: batch_size must be >= 1");
  std::vector<Batch> batches;
  for (std::size_t at = 0; at < indices.size(); at += batch_size) {
    const std::size_t len = std::min<std::size_t>(batch_size, indices.size() - at);
    batches.push_back(make_batch(ds, indices.subspan(at, len)));
  }
  return batches;
}

}  // namespace dpfl

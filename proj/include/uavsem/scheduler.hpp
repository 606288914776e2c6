#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "uavsem/predictor.hpp"

namespace uavsem {

// Every slot in the horizon is a predicted outage, so proportional
// allocation has nothing to divide over.
class NoUsableSlotsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Integer sample budgets, one per slot, summing exactly to `total`.
struct BudgetAllocation {
  std::vector<int> samples_per_slot;
  int total = 0;
};

enum class BlockKind { kStructure, kTexture };

struct GridPos {
  int row = 0;
  int col = 0;
};

struct BlockDescriptor {
  int id = 0;
  BlockKind kind = BlockKind::kTexture;
  int length = 0;                 // serialized samples r_l
  std::optional<GridPos> grid;    // texture blocks only
};

inline constexpr int kUnscheduled = -1;

// Sparse form of the binary assignment b_{l,k}: each block maps to one
// slot or to kUnscheduled.
struct BlockSchedule {
  std::vector<int> slot_of_block;  // indexed by block id
  std::vector<int> per_slot_used;
};

enum class SlotOrder { kSnrDescending, kTemporal };

// Reliability-to-weight mapping: log2(1 + linear SNR) on slots predicted
// usable, exactly zero elsewhere.
inline std::vector<double> slot_weights(const PredictedTrace& pred,
                                        double gamma_min_db) {
  std::vector<double> weights;
  weights.reserve(pred.snr_db.size());
  for (double snr_db : pred.snr_db) {
    if (snr_db >= gamma_min_db)
      weights.push_back(std::log2(1.0 + std::pow(10.0, snr_db / 10.0)));
    else
      weights.push_back(0.0);
  }
  return weights;
}

// Proportional allocation with floor integerization. The remainder goes
// one sample at a time to the usable slots with the largest fractional
// parts (ties broken by lower slot index); if the remainder exceeds the
// number of usable slots the pass repeats, so the budget always sums to
// n_tot exactly and outage slots always stay at zero.
inline BudgetAllocation allocate_budgets(const std::vector<double>& weights,
                                         int n_tot) {
  if (n_tot < 0) throw std::invalid_argument("allocate: negative total budget");
  constexpr double kEpsilon = 1e-9;

  const double weight_sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<int> usable;
  for (std::size_t k = 0; k < weights.size(); ++k)
    if (weights[k] > 0.0) usable.push_back(static_cast<int>(k));
  if (usable.empty()) throw NoUsableSlotsError("no usable slots in prediction");

  BudgetAllocation alloc;
  alloc.total = n_tot;
  alloc.samples_per_slot.assign(weights.size(), 0);

  std::vector<double> fractional(weights.size(), 0.0);
  int assigned = 0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double share = n_tot * weights[k] / (weight_sum + kEpsilon);
    const double floored = std::floor(share);
    alloc.samples_per_slot[k] = static_cast<int>(floored);
    fractional[k] = share - floored;
    assigned += alloc.samples_per_slot[k];
  }

  std::stable_sort(usable.begin(), usable.end(), [&](int a, int b) {
    return fractional[a] > fractional[b];
  });
  int remainder = n_tot - assigned;
  for (std::size_t i = 0; remainder > 0; ++i, --remainder)
    alloc.samples_per_slot[usable[i % usable.size()]] += 1;
  return alloc;
}

// Structure-first greedy fill. Blocks are taken in priority order (all
// structure blocks, then texture blocks in row-major grid order); slots
// are visited in a fixed order per `order` and each block lands in the
// first visited slot with enough remaining budget. Blocks that fit
// nowhere stay UNSCHEDULED; only predicted-usable slots are visited.
inline BlockSchedule schedule_blocks(const std::vector<BlockDescriptor>& blocks,
                                     const BudgetAllocation& alloc,
                                     const PredictedTrace& pred,
                                     SlotOrder order = SlotOrder::kSnrDescending) {
  if (alloc.samples_per_slot.size() != pred.snr_db.size())
    throw std::invalid_argument("schedule: allocation/prediction length mismatch");

  std::vector<int> visit;
  for (std::size_t k = 0; k < pred.usable.size(); ++k)
    if (pred.usable[k]) visit.push_back(static_cast<int>(k));
  if (order == SlotOrder::kSnrDescending) {
    std::stable_sort(visit.begin(), visit.end(), [&](int a, int b) {
      return pred.snr_db[a] > pred.snr_db[b];
    });
  }

  std::vector<int> priority(blocks.size());
  std::iota(priority.begin(), priority.end(), 0);
  auto rank = [&](const BlockDescriptor& b) {
    // Structure before texture; texture in row-major spatial order.
    if (b.kind == BlockKind::kStructure) return -1;
    if (b.grid) return b.grid->row * 1000 + b.grid->col;
    return b.id + 1000000;
  };
  std::stable_sort(priority.begin(), priority.end(), [&](int a, int b) {
    return rank(blocks[a]) < rank(blocks[b]);
  });

  int max_id = -1;
  for (const auto& b : blocks) max_id = std::max(max_id, b.id);

  BlockSchedule schedule;
  schedule.slot_of_block.assign(max_id + 1, kUnscheduled);
  schedule.per_slot_used.assign(alloc.samples_per_slot.size(), 0);

  std::vector<int> remaining = alloc.samples_per_slot;
  for (int idx : priority) {
    const BlockDescriptor& block = blocks[idx];
    if (block.length <= 0) throw std::invalid_argument("schedule: non-positive block length");
    for (int slot : visit) {
      if (remaining[slot] >= block.length) {
        remaining[slot] -= block.length;
        schedule.per_slot_used[slot] += block.length;
        schedule.slot_of_block[block.id] = slot;
        break;
      }
    }
  }
  return schedule;
}

// Canonical block layout of the codec: one structure block followed by a
// 4x4 grid of texture blocks in row-major order (ids 1..16).
inline std::vector<BlockDescriptor> make_block_descriptors(int r_s, int r_t) {
  std::vector<BlockDescriptor> blocks;
  blocks.push_back({0, BlockKind::kStructure, r_s, std::nullopt});
  for (int row = 0; row < 4; ++row)
    for (int col = 0; col < 4; ++col)
      blocks.push_back({1 + row * 4 + col, BlockKind::kTexture, r_t,
                        GridPos{row, col}});
  return blocks;
}

// Uniform baseline: floor(n_tot / K) everywhere, remainder one sample
// each to the earliest slots. Prediction-blind by construction.
inline BudgetAllocation uniform_allocation(int n_tot, std::size_t horizon) {
  if (horizon == 0) throw std::invalid_argument("uniform allocation: empty horizon");
  BudgetAllocation alloc;
  alloc.total = n_tot;
  const int base = n_tot / static_cast<int>(horizon);
  int remainder = n_tot - base * static_cast<int>(horizon);
  alloc.samples_per_slot.assign(horizon, base);
  for (int k = 0; remainder > 0; ++k, --remainder) alloc.samples_per_slot[k] += 1;
  return alloc;
}

}  // namespace uavsem

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "oracles.hpp"
#include "uavsem/rng.hpp"
#include "uavsem/scheduler.hpp"

using namespace uavsem;
using Catch::Approx;

TEST_CASE("slot weights") {
  SECTION("unit linear SNR") {
    const PredictedTrace pred = make_predicted_trace({0.0}, -10.0);
    CHECK(slot_weights(pred, -10.0)[0] == Approx(1.0));
  }
  SECTION("20 dB") {
    const PredictedTrace pred = make_predicted_trace({20.0}, 5.0);
    CHECK(slot_weights(pred, 5.0)[0] == Approx(std::log2(101.0)));
    CHECK(slot_weights(pred, 5.0)[0] == Approx(6.658).margin(1e-3));
  }
  SECTION("predicted outage weighs zero") {
    const PredictedTrace pred = make_predicted_trace({3.0}, 5.0);
    CHECK(slot_weights(pred, 5.0)[0] == 0.0);
  }
}

TEST_CASE("worked allocation instance") {
  const PredictedTrace pred = make_predicted_trace({10.0, 3.0, 20.0, 10.0}, 5.0);
  const auto weights = slot_weights(pred, 5.0);
  CHECK(weights[0] == Approx(3.459431619));
  CHECK(weights[1] == 0.0);
  CHECK(weights[2] == Approx(6.658211483));

  const BudgetAllocation alloc = allocate_budgets(weights, 100);
  CHECK(alloc.samples_per_slot == std::vector<int>{26, 0, 49, 25});
  CHECK(std::accumulate(alloc.samples_per_slot.begin(),
                        alloc.samples_per_slot.end(), 0) == 100);
}

TEST_CASE("single usable slot receives everything") {
  const auto weights = slot_weights(make_predicted_trace({2.0, 15.0, 1.0}, 5.0), 5.0);
  const BudgetAllocation alloc = allocate_budgets(weights, 512);
  CHECK(alloc.samples_per_slot == std::vector<int>{0, 512, 0});
}

TEST_CASE("symmetric usable slots split evenly") {
  const auto weights = slot_weights(make_predicted_trace({12, 12, 12, 12}, 5.0), 5.0);
  const BudgetAllocation alloc = allocate_budgets(weights, 100);
  CHECK(alloc.samples_per_slot == std::vector<int>{25, 25, 25, 25});
}

TEST_CASE("no usable slots is an error") {
  const auto weights = slot_weights(make_predicted_trace({1.0, -3.0}, 5.0), 5.0);
  CHECK_THROWS_AS(allocate_budgets(weights, 100), NoUsableSlotsError);
}

TEST_CASE("share monotonicity in predicted SNR") {
  // Raising one usable slot's prediction never shrinks its real-valued
  // share n_tot * w_k / (sum + eps).
  Rng rng(21);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<double> snr(5);
    for (double& s : snr) s = rng.uniform() * 30.0;
    const int k = static_cast<int>(rng.uniform() * 5.0);
    std::vector<double> snr_up = snr;
    snr_up[k] += rng.uniform() * 10.0;

    const auto w0 = slot_weights(make_predicted_trace(snr, 5.0), 5.0);
    const auto w1 = slot_weights(make_predicted_trace(snr_up, 5.0), 5.0);
    if (w0[k] == 0.0) continue;  // slot must be usable before the bump
    const double sum0 = std::accumulate(w0.begin(), w0.end(), 0.0);
    const double sum1 = std::accumulate(w1.begin(), w1.end(), 0.0);
    const double share0 = 512.0 * w0[k] / (sum0 + 1e-9);
    const double share1 = 512.0 * w1[k] / (sum1 + 1e-9);
    CHECK(share1 >= share0 - 1e-9);
  }
}

TEST_CASE("random allocations satisfy the invariants") {
  Rng rng(31);
  for (int iter = 0; iter < 500; ++iter) {
    const int horizon = 1 + static_cast<int>(rng.uniform() * 12.0);
    std::vector<double> snr(horizon);
    for (double& s : snr) s = -10.0 + rng.uniform() * 40.0;
    const PredictedTrace pred = make_predicted_trace(snr, 5.0);
    const auto weights = slot_weights(pred, 5.0);
    const int n_tot = static_cast<int>(rng.uniform() * 2000.0);

    const bool any_usable =
        std::accumulate(weights.begin(), weights.end(), 0.0) > 0.0;
    if (!any_usable) {
      CHECK_THROWS_AS(allocate_budgets(weights, n_tot), NoUsableSlotsError);
      continue;
    }
    const BudgetAllocation alloc = allocate_budgets(weights, n_tot);
    CHECK(std::accumulate(alloc.samples_per_slot.begin(),
                          alloc.samples_per_slot.end(), 0) == n_tot);
    for (int k = 0; k < horizon; ++k) {
      CHECK(alloc.samples_per_slot[k] >= 0);
      if (weights[k] == 0.0) CHECK(alloc.samples_per_slot[k] == 0);
    }
  }
}

TEST_CASE("worked greedy fill instance") {
  // Budgets 200/162/150 over three usable slots in SNR-descending order:
  // structure + 3 textures, then 6, then 6; one texture left over.
  const PredictedTrace pred = make_predicted_trace({30.0, 20.0, 10.0}, 5.0);
  BudgetAllocation alloc;
  alloc.total = 512;
  alloc.samples_per_slot = {200, 162, 150};
  const auto blocks = make_block_descriptors(128, 24);

  const BlockSchedule schedule = schedule_blocks(blocks, alloc, pred);
  CHECK(schedule.slot_of_block[0] == 0);  // structure in the best slot
  CHECK(schedule.per_slot_used == std::vector<int>{200, 162 - 18, 150 - 6});
  int unscheduled = 0;
  for (int slot : schedule.slot_of_block)
    if (slot == kUnscheduled) ++unscheduled;
  CHECK(unscheduled == 1);
  CHECK(schedule.slot_of_block[16] == kUnscheduled);  // last texture in priority order
  CHECK(oracles::check_schedule(blocks, alloc, pred, schedule).empty());
}

TEST_CASE("oversized structure stays unscheduled, textures still fit") {
  const PredictedTrace pred = make_predicted_trace({20.0, 18.0}, 5.0);
  BudgetAllocation alloc;
  alloc.total = 100;
  alloc.samples_per_slot = {60, 40};
  const auto blocks = make_block_descriptors(512, 10);

  const BlockSchedule schedule = schedule_blocks(blocks, alloc, pred);
  CHECK(schedule.slot_of_block[0] == kUnscheduled);
  int scheduled = 0;
  for (std::size_t id = 1; id < schedule.slot_of_block.size(); ++id)
    if (schedule.slot_of_block[id] != kUnscheduled) ++scheduled;
  CHECK(scheduled == 10);  // 6 in the 60-slot, 4 in the 40-slot
  CHECK(oracles::check_schedule(blocks, alloc, pred, schedule).empty());
}

TEST_CASE("single-bin fit schedules every block") {
  const PredictedTrace pred = make_predicted_trace({2.0, 25.0}, 5.0);
  const auto weights = slot_weights(pred, 5.0);
  const BudgetAllocation alloc = allocate_budgets(weights, 512);
  const auto blocks = make_block_descriptors(128, 24);  // 128 + 16*24 = 512
  const BlockSchedule schedule = schedule_blocks(blocks, alloc, pred);
  for (int slot : schedule.slot_of_block) CHECK(slot == 1);
  CHECK(schedule.per_slot_used[1] == 512);
}

TEST_CASE("temporal order fills earlier slots first") {
  const PredictedTrace pred = make_predicted_trace({10.0, 30.0}, 5.0);
  BudgetAllocation alloc;
  alloc.total = 300;
  alloc.samples_per_slot = {150, 150};
  const auto blocks = make_block_descriptors(128, 24);

  const BlockSchedule temporal =
      schedule_blocks(blocks, alloc, pred, SlotOrder::kTemporal);
  CHECK(temporal.slot_of_block[0] == 0);
  const BlockSchedule by_snr =
      schedule_blocks(blocks, alloc, pred, SlotOrder::kSnrDescending);
  CHECK(by_snr.slot_of_block[0] == 1);
}

TEST_CASE("greedy schedule against exhaustive search on small instances") {
  Rng rng(47);
  for (int iter = 0; iter < 60; ++iter) {
    const int horizon = 2 + static_cast<int>(rng.uniform() * 3.0);  // 2..4
    std::vector<double> snr(horizon);
    for (double& s : snr) s = rng.uniform() * 30.0;
    const PredictedTrace pred = make_predicted_trace(snr, 5.0);

    BudgetAllocation alloc;
    alloc.samples_per_slot.resize(horizon);
    for (int k = 0; k < horizon; ++k)
      alloc.samples_per_slot[k] =
          pred.usable[k] ? static_cast<int>(rng.uniform() * 60.0) : 0;
    alloc.total = std::accumulate(alloc.samples_per_slot.begin(),
                                  alloc.samples_per_slot.end(), 0);

    const int num_blocks = 2 + static_cast<int>(rng.uniform() * 5.0);  // 2..6
    std::vector<BlockDescriptor> blocks;
    blocks.push_back({0, BlockKind::kStructure,
                      1 + static_cast<int>(rng.uniform() * 40.0), std::nullopt});
    for (int b = 1; b < num_blocks; ++b)
      blocks.push_back({b, BlockKind::kTexture,
                        1 + static_cast<int>(rng.uniform() * 30.0),
                        GridPos{(b - 1) / 4, (b - 1) % 4}});

    bool any_usable = false;
    for (bool u : pred.usable) any_usable |= u;
    if (!any_usable) continue;

    const BlockSchedule schedule = schedule_blocks(blocks, alloc, pred);
    const std::string issue = oracles::check_schedule(blocks, alloc, pred, schedule);
    INFO(issue);
    CHECK(issue.empty());

    long greedy_total = 0;
    for (const auto& b : blocks)
      if (schedule.slot_of_block[b.id] != kUnscheduled) greedy_total += b.length;
    CHECK(greedy_total <= oracles::brute_force_max_packed(blocks, alloc, pred));
  }
}

TEST_CASE("uniform allocation splits evenly with remainder to the front") {
  const BudgetAllocation alloc = uniform_allocation(512, 10);
  CHECK(alloc.samples_per_slot ==
        std::vector<int>{52, 52, 51, 51, 51, 51, 51, 51, 51, 51});
  CHECK(std::accumulate(alloc.samples_per_slot.begin(),
                        alloc.samples_per_slot.end(), 0) == 512);
}

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "uavsem/phy.hpp"

using namespace uavsem;
using Catch::Approx;

namespace {

SlotPayload one_block_payload(int block_id, std::vector<float> symbols, int slot = 0) {
  SlotPayload payload;
  payload.slot = slot;
  payload.segments.push_back(make_segment(block_id, std::move(symbols)));
  return payload;
}

}  // namespace

TEST_CASE("noiseless limit returns the transmitted symbols") {
  std::vector<float> symbols;
  Rng rng(3);
  for (int i = 0; i < 500; ++i) symbols.push_back(static_cast<float>(rng.normal()));
  const auto outcomes =
      transmit_slot(one_block_payload(0, symbols), 300.0, 5.0, 42);
  REQUIRE(outcomes.size() == 1);
  REQUIRE(outcomes[0].status == BlockStatus::kDelivered);
  CHECK(outcomes[0].received == symbols);
}

TEST_CASE("noise variance matches 1/gamma") {
  // Unit-power block of 10^6 symbols at 10 dB: error variance 0.1 +/- 2%.
  std::vector<float> symbols(1000000);
  for (std::size_t i = 0; i < symbols.size(); ++i)
    symbols[i] = (i % 2 == 0) ? 1.0f : -1.0f;
  const auto outcomes = transmit_slot(one_block_payload(0, symbols), 10.0, 5.0, 7);
  REQUIRE(outcomes[0].status == BlockStatus::kDelivered);
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const double e = static_cast<double>(outcomes[0].received[i]) - symbols[i];
    sum_sq += e * e;
  }
  CHECK(sum_sq / symbols.size() == Approx(0.1).epsilon(0.02));
}

TEST_CASE("realized outage erases every block in the slot") {
  SlotPayload payload;
  payload.segments.push_back(make_segment(0, std::vector<float>(16, 1.0f)));
  payload.segments.push_back(make_segment(1, std::vector<float>(16, 2.0f)));
  const auto outcomes = transmit_slot(payload, 4.9, 5.0, 11);
  REQUIRE(outcomes.size() == 2);
  for (const auto& o : outcomes) {
    CHECK(o.status == BlockStatus::kErased);
    CHECK(o.received.empty());
  }
}

TEST_CASE("usability boundary delivers") {
  const auto outcomes =
      transmit_slot(one_block_payload(0, std::vector<float>(8, 1.0f)), 5.0, 5.0, 1);
  CHECK(outcomes[0].status == BlockStatus::kDelivered);
}

TEST_CASE("power normalization preserves shape") {
  // (received - s) / scale is noise with variance 1/gamma regardless of
  // the block's own power.
  std::vector<float> symbols(200000);
  Rng rng(5);
  for (auto& s : symbols) s = static_cast<float>(rng.normal(0.0, 37.0));  // hot block
  const auto seg = make_segment(0, symbols);
  CHECK(seg.scale == Approx(37.0).epsilon(0.02));

  const double snr_db = 7.0;
  const auto outcomes = transmit_slot(one_block_payload(0, symbols), snr_db, 5.0, 19);
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    const double e =
        (static_cast<double>(outcomes[0].received[i]) - symbols[i]) / seg.scale;
    sum_sq += e * e;
  }
  CHECK(sum_sq / symbols.size() ==
        Approx(std::pow(10.0, -snr_db / 10.0)).epsilon(0.03));
}

TEST_CASE("zero blocks use scale one") {
  const auto seg = make_segment(0, std::vector<float>(10, 0.0f));
  CHECK(seg.scale == 1.0);
  const auto outcomes =
      transmit_slot(one_block_payload(0, std::vector<float>(10, 0.0f)), 10.0, 5.0, 3);
  CHECK(outcomes[0].status == BlockStatus::kDelivered);
}

TEST_CASE("non-finite SNR is a domain error") {
  CHECK_THROWS_AS(transmit_slot(one_block_payload(0, {1.0f}),
                                std::numeric_limits<double>::quiet_NaN(), 5.0, 1),
                  std::domain_error);
}

TEST_CASE("slot noise seeds are order independent") {
  CHECK(slot_noise_seed(123, 0) != slot_noise_seed(123, 1));
  CHECK(slot_noise_seed(123, 4) == slot_noise_seed(123, 4));
  CHECK(slot_noise_seed(123, 4) != slot_noise_seed(124, 4));
}

TEST_CASE("assembly bookkeeping") {
  const auto blocks = make_block_descriptors(8, 4);
  const PredictedTrace pred = make_predicted_trace({20.0, 15.0, 10.0}, 5.0);
  BudgetAllocation alloc;
  alloc.total = 72;
  alloc.samples_per_slot = {24, 24, 24};
  const BlockSchedule schedule = schedule_blocks(blocks, alloc, pred);

  // Transmit everything at high SNR: nothing missing afterwards.
  std::vector<BlockOutcome> outcomes;
  for (int k = 0; k < 3; ++k) {
    SlotPayload payload;
    payload.slot = k;
    for (const auto& b : blocks)
      if (schedule.slot_of_block[b.id] == k)
        payload.segments.push_back(make_segment(
            b.id, std::vector<float>(static_cast<std::size_t>(b.length), 1.0f)));
    for (auto& o : transmit_slot(payload, 40.0, 5.0, slot_noise_seed(9, k)))
      outcomes.push_back(std::move(o));
  }
  const ReceptionState rx = assemble_reception(blocks, schedule, outcomes);
  CHECK(rx.structure.has_value());
  int present = 0;
  for (const auto& t : rx.textures)
    if (t.has_value()) ++present;
  int scheduled_textures = 0;
  for (std::size_t id = 1; id < schedule.slot_of_block.size(); ++id)
    if (schedule.slot_of_block[id] != kUnscheduled) ++scheduled_textures;
  CHECK(present == scheduled_textures);

  SECTION("duplicate placement is an internal error") {
    auto duplicated = outcomes;
    duplicated.push_back(outcomes.front());
    CHECK_THROWS_AS(assemble_reception(blocks, schedule, duplicated),
                    std::logic_error);
  }
}

TEST_CASE("single erased texture leaves exactly that cell missing") {
  const auto blocks = make_block_descriptors(8, 4);
  BlockSchedule schedule;
  schedule.slot_of_block.assign(blocks.size(), kUnscheduled);
  schedule.per_slot_used = {0};
  std::vector<BlockOutcome> outcomes;
  for (const auto& b : blocks) {
    schedule.slot_of_block[b.id] = 0;
    BlockOutcome o;
    o.block_id = b.id;
    const bool is_target =
        b.grid.has_value() && b.grid->row == 2 && b.grid->col == 3;
    o.status = is_target ? BlockStatus::kErased : BlockStatus::kDelivered;
    if (!is_target)
      o.received.assign(static_cast<std::size_t>(b.length), 0.5f);
    outcomes.push_back(std::move(o));
  }
  const ReceptionState rx = assemble_reception(blocks, schedule, outcomes);
  CHECK(rx.structure.has_value());
  for (int row = 0; row < 4; ++row)
    for (int col = 0; col < 4; ++col)
      CHECK(rx.textures[row * 4 + col].has_value() == !(row == 2 && col == 3));
}

TEST_CASE("erasure correctness over randomized slots") {
  // A block is missing iff it was unscheduled or its slot's realized SNR
  // fell below the threshold.
  Rng rng(71);
  for (int iter = 0; iter < 300; ++iter) {
    const int horizon = 1 + static_cast<int>(rng.uniform() * 5.0);
    std::vector<double> pred_snr(horizon), real_snr(horizon);
    for (int k = 0; k < horizon; ++k) {
      pred_snr[k] = rng.uniform() * 30.0 - 5.0;
      real_snr[k] = pred_snr[k] + rng.normal(0.0, 6.0);
    }
    const PredictedTrace pred = make_predicted_trace(pred_snr, 5.0);
    bool any_usable = false;
    for (bool u : pred.usable) any_usable |= u;
    if (!any_usable) continue;

    const auto blocks = make_block_descriptors(16, 8);
    const auto weights = slot_weights(pred, 5.0);
    const auto alloc = allocate_budgets(weights, 80);
    const auto schedule = schedule_blocks(blocks, alloc, pred);

    std::vector<BlockOutcome> outcomes;
    for (int k = 0; k < horizon; ++k) {
      SlotPayload payload;
      payload.slot = k;
      for (const auto& b : blocks)
        if (schedule.slot_of_block[b.id] == k)
          payload.segments.push_back(make_segment(
              b.id, std::vector<float>(static_cast<std::size_t>(b.length), 1.0f)));
      if (payload.segments.empty()) continue;
      for (auto& o :
           transmit_slot(payload, real_snr[k], 5.0, slot_noise_seed(iter, k)))
        outcomes.push_back(std::move(o));
    }
    const ReceptionState rx = assemble_reception(blocks, schedule, outcomes);

    for (const auto& b : blocks) {
      const int slot = schedule.slot_of_block[b.id];
      const bool expect_missing = slot == kUnscheduled || real_snr[slot] < 5.0;
      const bool missing =
          b.kind == BlockKind::kStructure
              ? !rx.structure.has_value()
              : !rx.textures[b.grid->row * 4 + b.grid->col].has_value();
      CHECK(missing == expect_missing);
    }
  }
}

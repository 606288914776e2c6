#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "uavsem/codec.hpp"
#include "uavsem/rng.hpp"
#include "uavsem/scheduler.hpp"

namespace uavsem {

// Symbols queued for one slot, with per-block boundaries kept intact and
// each block's power-normalization factor carried as idealized (noiseless)
// side information.
struct SlotPayload {
  struct Segment {
    int block_id = 0;
    std::vector<float> symbols;
    double scale = 1.0;
  };
  int slot = 0;
  std::vector<Segment> segments;
};

enum class BlockStatus { kDelivered, kErased };

struct BlockOutcome {
  int block_id = 0;
  BlockStatus status = BlockStatus::kErased;
  std::vector<float> received;  // empty when erased
  double slot_snr_db = 0.0;
};

inline double block_rms(const std::vector<float>& symbols) {
  double energy = 0.0;
  for (float v : symbols) energy += static_cast<double>(v) * v;
  if (symbols.empty() || energy == 0.0) return 1.0;  // zero blocks: scale 1
  return std::sqrt(energy / symbols.size());
}

inline SlotPayload::Segment make_segment(int block_id, std::vector<float> symbols) {
  SlotPayload::Segment seg;
  seg.block_id = block_id;
  seg.scale = block_rms(symbols);
  seg.symbols = std::move(symbols);
  return seg;
}

// Analog transmission through one slot. Below the usability threshold the
// slot carries nothing and every block is ERASED. Otherwise each block is
// normalized to unit average symbol power, corrupted by AWGN of variance
// 1/gamma (the post-equalization equivalent of y = g s + n with perfect
// gain knowledge) and de-normalized with the stored scale; this collapses
// to received = s + scale * w. Noise is drawn in segment order, one value
// per symbol.
inline std::vector<BlockOutcome> transmit_slot(const SlotPayload& payload,
                                               double slot_snr_db,
                                               double gamma_min_db,
                                               std::uint64_t seed) {
  const double snr_linear = std::pow(10.0, slot_snr_db / 10.0);
  if (!(snr_linear > 0.0))
    throw std::domain_error("transmit: non-positive linear SNR");

  std::vector<BlockOutcome> outcomes;
  outcomes.reserve(payload.segments.size());
  if (slot_snr_db < gamma_min_db) {
    for (const auto& seg : payload.segments)
      outcomes.push_back({seg.block_id, BlockStatus::kErased, {}, slot_snr_db});
    return outcomes;
  }

  Rng rng(seed);
  const double noise_std = std::sqrt(1.0 / snr_linear);
  for (const auto& seg : payload.segments) {
    BlockOutcome out;
    out.block_id = seg.block_id;
    out.status = BlockStatus::kDelivered;
    out.slot_snr_db = slot_snr_db;
    out.received.reserve(seg.symbols.size());
    for (float s : seg.symbols)
      out.received.push_back(
          static_cast<float>(s + seg.scale * rng.normal(0.0, noise_std)));
    outcomes.push_back(std::move(out));
  }
  return outcomes;
}

// Deterministic per-slot noise seed; slot outcomes do not depend on the
// order slots are processed in.
inline std::uint64_t slot_noise_seed(std::uint64_t trial_seed, std::size_t slot) {
  return derive_seed(trial_seed, 0x70687900ULL + slot);  // "phy" stream
}

// Places delivered blocks at their (kind, grid) positions; erased and
// never-scheduled blocks stay MISSING.
inline ReceptionState assemble_reception(
    const std::vector<BlockDescriptor>& blocks, const BlockSchedule& schedule,
    const std::vector<BlockOutcome>& outcomes) {
  ReceptionState rx;
  for (const auto& outcome : outcomes) {
    if (outcome.status != BlockStatus::kDelivered) continue;
    const BlockDescriptor* desc = nullptr;
    for (const auto& b : blocks)
      if (b.id == outcome.block_id) {
        desc = &b;
        break;
      }
    if (desc == nullptr)
      throw std::logic_error("assemble: outcome for unknown block id");
    if (static_cast<std::size_t>(desc->id) >= schedule.slot_of_block.size() ||
        schedule.slot_of_block[desc->id] == kUnscheduled)
      throw std::logic_error("assemble: delivered block was never scheduled");
    if (desc->kind == BlockKind::kStructure) {
      if (rx.structure.has_value())
        throw std::logic_error("assemble: duplicate structure placement");
      rx.structure = outcome.received;
    } else {
      if (!desc->grid.has_value())
        throw std::logic_error("assemble: texture block without grid position");
      const int idx = desc->grid->row * kTextureGridSize + desc->grid->col;
      if (rx.textures[idx].has_value())
        throw std::logic_error("assemble: duplicate texture placement");
      rx.textures[idx] = outcome.received;
    }
  }
  return rx;
}

}  // namespace uavsem

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "asv/episode.hpp"
#include "asv/rng.hpp"

namespace asv {

struct BufferUnderfilled : SimError {
  using SimError::SimError;
};

// Binary indexed sum over leaf values; parents are always recomputed as the
// sum of both children, so the root stays consistent with the leaves under
// arbitrarily many updates.
class SumTree {
public:
  explicit SumTree(size_t capacity);

  void set(size_t i, double value);
  double get(size_t i) const { return tree_[base_ + i]; }
  double total() const { return tree_[1]; }

  // Prefix-sum descent: returns the leaf index owning mass point u in
  // [0, total).
  size_t sample(double u) const;

private:
  size_t cap_, base_;
  std::vector<double> tree_;
};

// Fixed-size slots allocated in blocks on demand, so an oversized capacity
// only costs what is actually filled.
class SlotStore {
public:
  void configure(size_t slot_bytes, size_t slots_per_block = 4096);
  uint8_t* slot(size_t i);
  const uint8_t* slot(size_t i) const;

private:
  size_t slot_bytes_ = 0, per_block_ = 0;
  std::vector<std::unique_ptr<uint8_t[]>> blocks_;
};

// FIFO transition ring with proportional prioritized sampling.  Observations
// are stored quantized to uint8 (inputs are in [0,1]); priorities are stored
// already raised to alpha.  New transitions enter at the running maximum raw
// priority.
class PrioritizedReplay {
public:
  PrioritizedReplay(size_t capacity, size_t obs_floats, double alpha, double eps_prio);

  size_t size() const { return size_; }
  size_t capacity() const { return cap_; }
  size_t obs_floats() const { return obs_floats_; }

  void push(const float* obs, uint8_t action, float reward, const float* next_obs,
            uint8_t next_mask_bits, bool done);

  // Stratified proportional draw of `batch` indices with importance weights
  // (1/(N*P(i)))^beta, normalized by the batch maximum.
  void sample(size_t batch, double beta, Rng& rng, std::vector<size_t>& indices,
              std::vector<double>& weights);

  void update_priorities(const std::vector<size_t>& indices, const std::vector<float>& td_abs);

  void decode_obs(size_t i, float* out) const;
  void decode_next_obs(size_t i, float* out) const;
  uint8_t action(size_t i) const;
  float reward(size_t i) const;
  ActionMask next_mask(size_t i) const;
  bool done(size_t i) const;

  double tree_total() const { return tree_.total(); }
  double priority(size_t i) const { return tree_.get(i); }

private:
  size_t cap_, obs_floats_, slot_bytes_;
  double alpha_, eps_prio_, max_raw_ = 1.0;
  size_t head_ = 0, size_ = 0;
  SumTree tree_;
  SlotStore store_;
};

}  // namespace asv

#include "asv/replay.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace asv {

SumTree::SumTree(size_t capacity) : cap_(capacity) {
  base_ = 1;
  while (base_ < cap_) base_ <<= 1;
  tree_.assign(2 * base_, 0.0);
}

void SumTree::set(size_t i, double value) {
  size_t node = base_ + i;
  tree_[node] = value;
  for (node >>= 1; node >= 1; node >>= 1) tree_[node] = tree_[2 * node] + tree_[2 * node + 1];
}

size_t SumTree::sample(double u) const {
  size_t node = 1;
  while (node < base_) {
    size_t left = 2 * node;
    if (u < tree_[left]) {
      node = left;
    } else {
      u -= tree_[left];
      node = left + 1;
    }
  }
  return std::min(node - base_, cap_ - 1);
}

void SlotStore::configure(size_t slot_bytes, size_t slots_per_block) {
  slot_bytes_ = slot_bytes;
  per_block_ = slots_per_block;
  blocks_.clear();
}

uint8_t* SlotStore::slot(size_t i) {
  size_t block = i / per_block_;
  while (blocks_.size() <= block)
    blocks_.push_back(std::make_unique<uint8_t[]>(slot_bytes_ * per_block_));
  return blocks_[block].get() + (i % per_block_) * slot_bytes_;
}

const uint8_t* SlotStore::slot(size_t i) const {
  return blocks_[i / per_block_].get() + (i % per_block_) * slot_bytes_;
}

namespace {
// slot layout: obs | next_obs | action | mask | done | reward(float)
size_t layout_bytes(size_t obs_floats) { return 2 * obs_floats + 3 + sizeof(float); }
}  // namespace

PrioritizedReplay::PrioritizedReplay(size_t capacity, size_t obs_floats, double alpha,
                                     double eps_prio)
    : cap_(capacity),
      obs_floats_(obs_floats),
      slot_bytes_(layout_bytes(obs_floats)),
      alpha_(alpha),
      eps_prio_(eps_prio),
      tree_(capacity) {
  store_.configure(slot_bytes_);
}

void PrioritizedReplay::push(const float* obs, uint8_t action, float reward,
                             const float* next_obs, uint8_t next_mask_bits, bool done) {
  size_t i = head_;
  uint8_t* s = store_.slot(i);
  for (size_t k = 0; k < obs_floats_; ++k)
    s[k] = static_cast<uint8_t>(std::lround(std::clamp(obs[k], 0.0f, 1.0f) * 255.0f));
  uint8_t* sn = s + obs_floats_;
  for (size_t k = 0; k < obs_floats_; ++k)
    sn[k] = static_cast<uint8_t>(std::lround(std::clamp(next_obs[k], 0.0f, 1.0f) * 255.0f));
  s[2 * obs_floats_] = action;
  s[2 * obs_floats_ + 1] = next_mask_bits;
  s[2 * obs_floats_ + 2] = done ? 1 : 0;
  std::memcpy(s + 2 * obs_floats_ + 3, &reward, sizeof(float));

  tree_.set(i, std::pow(max_raw_, alpha_));
  head_ = (head_ + 1) % cap_;
  size_ = std::min(size_ + 1, cap_);
}

void PrioritizedReplay::sample(size_t batch, double beta, Rng& rng,
                               std::vector<size_t>& indices, std::vector<double>& weights) {
  if (size_ < batch) throw BufferUnderfilled("replay holds fewer transitions than the batch");
  indices.resize(batch);
  weights.resize(batch);
  double total = tree_.total();
  double seg = total / static_cast<double>(batch);
  double max_w = 0.0;
  for (size_t k = 0; k < batch; ++k) {
    double u = (static_cast<double>(k) + rng.uniform()) * seg;
    size_t i = std::min(tree_.sample(u), size_ - 1);
    indices[k] = i;
    double p = tree_.get(i) / total;
    double w = std::pow(static_cast<double>(size_) * p, -beta);
    weights[k] = w;
    max_w = std::max(max_w, w);
  }
  for (double& w : weights) w /= max_w;
}

void PrioritizedReplay::update_priorities(const std::vector<size_t>& indices,
                                          const std::vector<float>& td_abs) {
  for (size_t k = 0; k < indices.size(); ++k) {
    double raw = std::fabs(static_cast<double>(td_abs[k])) + eps_prio_;
    max_raw_ = std::max(max_raw_, raw);
    tree_.set(indices[k], std::pow(raw, alpha_));
  }
}

void PrioritizedReplay::decode_obs(size_t i, float* out) const {
  const uint8_t* s = store_.slot(i);
  for (size_t k = 0; k < obs_floats_; ++k) out[k] = static_cast<float>(s[k]) / 255.0f;
}

void PrioritizedReplay::decode_next_obs(size_t i, float* out) const {
  const uint8_t* s = store_.slot(i) + obs_floats_;
  for (size_t k = 0; k < obs_floats_; ++k) out[k] = static_cast<float>(s[k]) / 255.0f;
}

uint8_t PrioritizedReplay::action(size_t i) const { return store_.slot(i)[2 * obs_floats_]; }

ActionMask PrioritizedReplay::next_mask(size_t i) const {
  return ActionMask::from_bits(store_.slot(i)[2 * obs_floats_ + 1]);
}

bool PrioritizedReplay::done(size_t i) const { return store_.slot(i)[2 * obs_floats_ + 2] != 0; }

float PrioritizedReplay::reward(size_t i) const {
  float r;
  std::memcpy(&r, store_.slot(i) + 2 * obs_floats_ + 3, sizeof(float));
  return r;
}

}  // namespace asv

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dqnav/network.hpp"
#include "dqnav/replay.hpp"
#include "dqnav/schedule.hpp"

namespace dqnav {

// Optional instrumentation of the learning cadence.
struct AgentHooks {
  std::function<void(uint64_t global_step, double loss)> on_train;
  std::function<void(uint64_t global_step)> on_sync;
};

struct AgentConfig {
  double gamma = 0.99;
  double learning_rate = 1e-3;
  int batch_size = 32;
  uint64_t train_every = 50;
  uint64_t sync_every = 500;
  size_t replay_capacity = 50000;
  size_t min_replay_before_training = 128;
  EpsilonSchedule epsilon;

  void validate() const {
    if (!(gamma >= 0.0 && gamma < 1.0))
      fail(ErrorKind::invalid_argument, "agent.gamma must lie in [0, 1)");
    if (learning_rate <= 0.0)
      fail(ErrorKind::invalid_argument, "agent.learning_rate must be > 0");
    if (batch_size < 1) fail(ErrorKind::invalid_argument, "agent.batch_size must be > 0");
    if (train_every == 0 || sync_every == 0)
      fail(ErrorKind::invalid_argument, "agent.train_every and agent.sync_every must be > 0");
    if (replay_capacity == 0)
      fail(ErrorKind::invalid_argument, "agent.replay_capacity must be > 0");
    epsilon.validate();
  }
};

// Q_value is trained; Q_target only serves TD targets and is refreshed by
// copying Q_value.
struct QNetworkPair {
  NetworkParams<float> value_net;
  NetworkParams<float> target_net;
};

// Greedy action (lowest index wins ties), or uniform random with
// probability eps.
int select_action(const Network<float>& net, const NetworkParams<float>& params,
                  const Tensor3<float>& state, double eps, Rng& rng);

int argmax_action(std::span<const float> q_values);

// y = R for terminal transitions, else R + gamma * max_a Q_target(S', a).
std::vector<double> compute_targets(const std::vector<const Transition*>& batch,
                                    const Network<float>& net,
                                    const NetworkParams<float>& target_net,
                                    double gamma);

// The collision-avoidance learner: dual networks, replay buffer,
// exploration schedule and the minibatch training step.
class Agent {
 public:
  Agent(const AgentConfig& cfg, const Network<float>& net, uint64_t master_seed);

  const AgentConfig& config() const { return cfg_; }
  const Network<float>& net() const { return net_; }
  const QNetworkPair& networks() const { return pair_; }
  ReplayBuffer& replay() { return replay_; }
  const ReplayBuffer& replay() const { return replay_; }

  uint64_t global_step() const { return global_step_; }
  uint64_t train_invocations() const { return train_invocations_; }
  uint64_t sync_count() const { return sync_count_; }

  double epsilon_now() const { return epsilon_at(cfg_.epsilon, global_step_); }

  int act(const Tensor3<float>& state, double eps, Rng& rng) const {
    return select_action(net_, pair_.value_net, state, eps, rng);
  }

  // Records a transition and advances the global step counter; trains
  // every train_every steps once the warm-up fill is met and syncs the
  // target every sync_every steps. Returns the loss when a training step
  // ran.
  std::optional<double> observe(Transition t);

  // One SGD minibatch update of the value network against frozen targets.
  double train_step(const std::vector<const Transition*>& batch);

  void sync_target() {
    pair_.target_net = pair_.value_net;
    ++sync_count_;
  }

  void set_hooks(AgentHooks hooks) { hooks_ = std::move(hooks); }

  void save_checkpoint(const std::string& path) const;
  void load_checkpoint(const std::string& path);

  // Replaces both parameter sets (checkpoint surgery, policy stubs in
  // tests). Shapes must match the plan.
  void set_networks(QNetworkPair pair) {
    if (!pair.value_net.shape_matches(pair_.value_net) ||
        !pair.target_net.shape_matches(pair_.target_net))
      fail(ErrorKind::shape_mismatch, "set_networks: shapes do not match the plan");
    pair_ = std::move(pair);
  }

 private:
  AgentConfig cfg_;
  const Network<float>& net_;
  QNetworkPair pair_;
  ReplayBuffer replay_;
  uint64_t master_seed_;
  uint64_t global_step_ = 0;
  uint64_t train_invocations_ = 0;
  uint64_t sync_count_ = 0;
  AgentHooks hooks_;
};

}  // namespace dqnav

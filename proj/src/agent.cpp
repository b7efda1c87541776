#include "dqnav/agent.hpp"

#include <algorithm>
#include <cmath>

#include "dqnav/checkpoint.hpp"

namespace dqnav {

int argmax_action(std::span<const float> q_values) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(q_values.size()); ++i)
    if (q_values[i] > q_values[best]) best = i;
  return best;
}

int select_action(const Network<float>& net, const NetworkParams<float>& params,
                  const Tensor3<float>& state, double eps, Rng& rng) {
  if (eps < 0.0 || eps > 1.0)
    fail(ErrorKind::invalid_argument, "select_action: eps must lie in [0, 1]");
  if (eps > 0.0 && rng.uniform() < eps)
    return static_cast<int>(rng.uniform_index(net.output_width()));
  const std::vector<float> q = net.forward(params, state);
  return argmax_action(q);
}

std::vector<double> compute_targets(const std::vector<const Transition*>& batch,
                                    const Network<float>& net,
                                    const NetworkParams<float>& target_net,
                                    double gamma) {
  if (batch.empty()) fail(ErrorKind::invalid_argument, "compute_targets: empty batch");
  std::vector<double> y;
  y.reserve(batch.size());
  for (const Transition* t : batch) {
    if (t->terminal) {
      y.push_back(t->reward);
      continue;
    }
    const std::vector<float> q = net.forward(target_net, t->next_state.to_input());
    y.push_back(t->reward + gamma * static_cast<double>(*std::max_element(q.begin(), q.end())));
  }
  return y;
}

Agent::Agent(const AgentConfig& cfg, const Network<float>& net, uint64_t master_seed)
    : cfg_(cfg), net_(net), replay_(cfg.replay_capacity), master_seed_(master_seed) {
  cfg_.validate();
  pair_.value_net = net_.init_params(derive_seed(master_seed, {stream::init_params}));
  pair_.target_net = pair_.value_net;  // step-0 targets are self-consistent
}

std::optional<double> Agent::observe(Transition t) {
  replay_.push(std::move(t));
  ++global_step_;

  std::optional<double> loss;
  if (global_step_ % cfg_.train_every == 0) {
    Rng rng(derive_seed(master_seed_, {stream::minibatch, global_step_}));
    auto batch = replay_.sample(static_cast<size_t>(cfg_.batch_size),
                                cfg_.min_replay_before_training, rng);
    if (batch) {
      loss = train_step(*batch);
      if (hooks_.on_train) hooks_.on_train(global_step_, *loss);
    }
  }
  if (global_step_ % cfg_.sync_every == 0) {
    sync_target();
    if (hooks_.on_sync) hooks_.on_sync(global_step_);
  }
  return loss;
}

double Agent::train_step(const std::vector<const Transition*>& batch) {
  const std::vector<double> targets =
      compute_targets(batch, net_, pair_.target_net, cfg_.gamma);

  // Loss = mean over the batch of (y - Q(s, a_taken))^2; only the taken
  // action's output receives gradient.
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  GradientSet<float> grads = zeros_like(pair_.value_net);
  double loss = 0.0;
  ForwardCache<float> cache;
  std::vector<float> out_grad(static_cast<size_t>(net_.output_width()));
  for (size_t i = 0; i < batch.size(); ++i) {
    const Transition& t = *batch[i];
    const std::vector<float> q = net_.forward(pair_.value_net, t.state.to_input(), &cache);
    const double err = static_cast<double>(q[t.action]) - targets[i];
    loss += err * err * inv_b;
    std::fill(out_grad.begin(), out_grad.end(), 0.0f);
    out_grad[t.action] = static_cast<float>(2.0 * err * inv_b);
    add_scaled(grads, net_.backward(pair_.value_net, cache, out_grad), 1.0f);
  }
  if (!std::isfinite(loss))
    fail(ErrorKind::diverged,
         "training diverged: non-finite loss at global step " +
             std::to_string(global_step_));

  sgd_step(pair_.value_net, grads, static_cast<float>(cfg_.learning_rate));
  ++train_invocations_;
  return loss;
}

void Agent::save_checkpoint(const std::string& path) const {
  NetworkParams<float> all;
  for (const auto& t : pair_.value_net.tensors)
    all.tensors.push_back({"value/" + t.name, t.shape, t.data});
  for (const auto& t : pair_.target_net.tensors)
    all.tensors.push_back({"target/" + t.name, t.shape, t.data});
  all.tensors.push_back({"meta/global_step", {2},
                         {static_cast<float>(global_step_ >> 31),
                          static_cast<float>(global_step_ & 0x7fffffffull)}});
  save_params(all, path);
}

void Agent::load_checkpoint(const std::string& path) {
  const NetworkParams<float> all = load_params(path);
  NetworkParams<float> value, target;
  uint64_t step = 0;
  for (const auto& t : all.tensors) {
    if (t.name.starts_with("value/"))
      value.tensors.push_back({t.name.substr(6), t.shape, t.data});
    else if (t.name.starts_with("target/"))
      target.tensors.push_back({t.name.substr(7), t.shape, t.data});
    else if (t.name == "meta/global_step" && t.data.size() == 2)
      step = (static_cast<uint64_t>(t.data[0]) << 31) | static_cast<uint64_t>(t.data[1]);
  }
  if (value.tensors.empty())
    fail(ErrorKind::bad_format, path + ": checkpoint holds no value-network tensors");
  if (!pair_.value_net.shape_matches(value))
    fail(ErrorKind::bad_format, path + ": checkpoint shapes do not match the network plan");
  if (target.tensors.empty()) target = value;
  pair_.value_net = std::move(value);
  pair_.target_net = std::move(target);
  global_step_ = step;
}

}  // namespace dqnav

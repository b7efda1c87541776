#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "dqnav/agent.hpp"
#include "dqnav/checkpoint.hpp"

using namespace dqnav;

namespace {

// 8x8 single-frame states are enough to drive the machinery in tests
constexpr int kFrame = 8;

FrameStack stack_of(float fill) {
  auto f = std::make_shared<Frame>();
  f->size = kFrame;
  f->data.assign(kFrame * kFrame, fill);
  return FrameStack::initial(f, 1);
}

Transition transition_of(float state_fill, int action, double reward, bool terminal) {
  return {stack_of(state_fill), action, reward, stack_of(state_fill + 0.25f), terminal};
}

Network<float> tiny_net(int outputs) {
  return Network<float>({LayerSpec::flatten(), LayerSpec::dense(outputs)},
                        kFrame, kFrame, 1);
}

}  // namespace

TEST_CASE("epsilon schedule: endpoints exact, linear midpoint") {
  EpsilonSchedule s;  // 0.1 -> 0.001 over 100k steps
  CHECK(epsilon_at(s, 0) == 0.1);
  CHECK(epsilon_at(s, s.anneal_steps) == 0.001);
  CHECK(epsilon_at(s, s.anneal_steps * 10) == 0.001);
  CHECK(epsilon_at(s, s.anneal_steps / 2) == doctest::Approx(0.0505).epsilon(1e-12));
}

TEST_CASE("epsilon schedule: bounded and non-increasing") {
  EpsilonSchedule s{0.1, 0.001, 977};
  double prev = epsilon_at(s, 0);
  for (uint64_t step = 0; step <= 2000; ++step) {
    const double e = epsilon_at(s, step);
    CHECK(e <= s.eps_start);
    CHECK(e >= s.eps_end);
    CHECK(e <= prev + 1e-15);
    prev = e;
  }
}

TEST_CASE("select_action: eps 0 takes the unique argmax") {
  auto net = tiny_net(13);
  auto params = net.make_zero_params();
  params.tensors[1].data[7] = 1.0f;  // bias lifts action 7
  Rng rng(1);
  for (int i = 0; i < 5; ++i)
    CHECK(select_action(net, params, stack_of(0.5f).to_input(), 0.0, rng) == 7);
}

TEST_CASE("select_action: ties resolve to the lowest index") {
  auto net = tiny_net(13);
  auto params = net.make_zero_params();
  params.tensors[1].data[2] = 3.0f;
  params.tensors[1].data[5] = 3.0f;
  Rng rng(1);
  CHECK(select_action(net, params, stack_of(0.1f).to_input(), 0.0, rng) == 2);
}

TEST_CASE("select_action: adding a constant to all Q-values keeps the greedy choice") {
  auto net = tiny_net(13);
  auto params = net.init_params(17);
  const auto state = stack_of(0.3f).to_input();
  Rng rng(1);
  const int before = select_action(net, params, state, 0.0, rng);
  for (auto& b : params.tensors[1].data) b += 5.25f;
  const int after = select_action(net, params, state, 0.0, rng);
  CHECK(before == after);
}

TEST_CASE("select_action: eps 1 is uniform across the 13 actions") {
  auto net = tiny_net(13);
  auto params = net.make_zero_params();
  const auto state = stack_of(0.0f).to_input();
  Rng rng(42);
  int counts[13] = {};
  for (int i = 0; i < 13000; ++i)
    ++counts[select_action(net, params, state, 1.0, rng)];
  for (int a = 0; a < 13; ++a) {
    CAPTURE(a);
    CHECK(counts[a] >= 1000 - 150);
    CHECK(counts[a] <= 1000 + 150);
  }
}

TEST_CASE("replay buffer: grows to capacity, then FIFO eviction") {
  ReplayBuffer buf(2);
  buf.push(transition_of(0.1f, 1, 1.0, false));
  CHECK(buf.size() == 1);
  buf.push(transition_of(0.2f, 2, 2.0, false));
  buf.push(transition_of(0.3f, 3, 3.0, false));
  CHECK(buf.size() == 2);
  // the first transition is gone
  CHECK(buf.at(0).action == 3);
  CHECK(buf.at(1).action == 2);

  for (int i = 0; i < 40; ++i) {
    buf.push(transition_of(0.0f, i, 0.0, false));
    CHECK(buf.size() <= buf.capacity());
  }
}

TEST_CASE("replay buffer: below-threshold sampling signals not-ready") {
  ReplayBuffer buf(100);
  for (int i = 0; i < 9; ++i) buf.push(transition_of(0.0f, i, 0.0, false));
  Rng rng(1);
  CHECK_FALSE(buf.sample(4, 10, rng).has_value());
  buf.push(transition_of(0.0f, 9, 0.0, false));
  CHECK(buf.sample(4, 10, rng).has_value());
}

TEST_CASE("replay buffer: a 1-element buffer repeats that element") {
  ReplayBuffer buf(8);
  buf.push(transition_of(0.5f, 11, -2.0, true));
  Rng rng(3);
  auto batch = buf.sample(4, 1, rng);
  REQUIRE(batch.has_value());
  CHECK(batch->size() == 4);
  for (const Transition* t : *batch) CHECK(t->action == 11);
}

TEST_CASE("replay buffer: 100k draws from 10 elements are uniform") {
  ReplayBuffer buf(10);
  for (int i = 0; i < 10; ++i) buf.push(transition_of(0.0f, i, 0.0, false));
  Rng rng(7);
  auto batch = buf.sample(100000, 10, rng);
  REQUIRE(batch.has_value());

  uint64_t counts[10] = {};
  for (const Transition* t : *batch) ++counts[t->action];

  double chi2 = 0.0;
  for (uint64_t c : counts) {
    CHECK(c >= 9500);  // 10% +- 0.5%
    CHECK(c <= 10500);
    const double d = static_cast<double>(c) - 10000.0;
    chi2 += d * d / 10000.0;
  }
  // chi-square df=9 critical value at p = 0.001
  CHECK(chi2 < 27.877164871256568);
}

TEST_CASE("compute_targets: terminal, zero-gamma and bootstrap arithmetic") {
  auto net = tiny_net(13);
  auto params = net.make_zero_params();

  Transition terminal = transition_of(0.1f, 0, -49.5, true);
  Transition step_a = transition_of(0.2f, 1, 1.0, false);
  std::vector<const Transition*> batch{&terminal, &step_a};

  auto y0 = compute_targets(batch, net, params, 0.99);
  CHECK(y0[0] == doctest::Approx(-49.5));  // terminal rule: y = R
  auto y1 = compute_targets({&step_a}, net, params, 0.0);
  CHECK(y1[0] == doctest::Approx(1.0));  // gamma 0 kills the future

  // R = 1, gamma 0.9, max next-state Q = 2  ->  2.8
  params.tensors[1].data[4] = 2.0f;
  auto y2 = compute_targets({&step_a}, net, params, 0.9);
  CHECK(y2[0] == doctest::Approx(2.8));
}

TEST_CASE("train_step bootstraps from the frozen target network, not the value net") {
  auto net = tiny_net(13);
  AgentConfig cfg;
  cfg.gamma = 0.9;
  cfg.learning_rate = 1e-6;
  Agent agent(cfg, net, 5);

  // drive the nets apart first
  Transition warm = transition_of(0.9f, 3, 2.0, true);
  agent.train_step({&warm});
  REQUIRE_FALSE(agent.networks().value_net == agent.networks().target_net);

  Transition t = transition_of(0.2f, 1, 1.0, false);
  const auto q_next =
      net.forward(agent.networks().target_net, t.next_state.to_input());
  const double y =
      1.0 + 0.9 * *std::max_element(q_next.begin(), q_next.end());
  const double q =
      net.forward(agent.networks().value_net, t.state.to_input())[1];
  const double loss = agent.train_step({&t});
  CHECK(loss == doctest::Approx((q - y) * (q - y)).epsilon(1e-6));
}

TEST_CASE("agent: both networks start identical; sync is idempotent") {
  auto net = tiny_net(13);
  Agent agent({}, net, 3);
  CHECK(agent.networks().value_net == agent.networks().target_net);
  agent.sync_target();
  agent.sync_target();
  CHECK(agent.networks().value_net == agent.networks().target_net);
}

TEST_CASE("train_step: exact predictions give zero loss and unchanged params") {
  auto net = tiny_net(13);
  AgentConfig cfg;
  cfg.learning_rate = 0.05;
  Agent agent(cfg, net, 9);

  // terminal transitions whose reward equals the current prediction
  std::vector<Transition> ts;
  for (int a = 0; a < 4; ++a) {
    Transition t = transition_of(0.1f * a, a, 0.0, true);
    const auto q = net.forward(agent.networks().value_net, t.state.to_input());
    t.reward = q[a];
    ts.push_back(std::move(t));
  }
  std::vector<const Transition*> batch;
  for (auto& t : ts) batch.push_back(&t);

  const auto before = agent.networks().value_net;
  const double loss = agent.train_step(batch);
  CHECK(loss == doctest::Approx(0.0));
  CHECK(agent.networks().value_net == before);
}

TEST_CASE("train_step: single transition moves the prediction toward the target") {
  auto net = tiny_net(2);
  AgentConfig cfg;
  cfg.learning_rate = 1e-3;
  Agent agent(cfg, net, 21);

  Transition t = transition_of(0.7f, 0, 3.0, true);
  const auto state = t.state.to_input();
  const double q0 = net.forward(agent.networks().value_net, state)[0];
  agent.train_step({&t});
  const double q1 = net.forward(agent.networks().value_net, state)[0];
  CHECK(std::abs(q1 - 3.0) < std::abs(q0 - 3.0));  // strictly closer

  // one-dimensional SGD oracle: q' = q - lr * 2 (q - y) * ||x||^2_aug
  // (weights see x, the bias sees 1)
  double sq = 1.0;
  for (float v : state.data) sq += static_cast<double>(v) * v;
  const double expect = q0 - cfg.learning_rate * 2.0 * (q0 - 3.0) * sq;
  CHECK(q1 == doctest::Approx(expect).epsilon(1e-4));
}

TEST_CASE("train_step: batch gradient matches finite differences of the loss") {
  auto net = tiny_net(3);
  AgentConfig cfg;
  cfg.learning_rate = 1.0;  // recovered gradient = before - after
  cfg.gamma = 0.5;
  Agent agent(cfg, net, 33);

  std::vector<Transition> ts;
  ts.push_back(transition_of(0.2f, 0, 1.0, false));
  ts.push_back(transition_of(0.5f, 2, -1.5, true));
  ts.push_back(transition_of(0.8f, 1, 0.25, false));
  std::vector<const Transition*> batch;
  for (auto& t : ts) batch.push_back(&t);

  const auto targets =
      compute_targets(batch, net, agent.networks().target_net, cfg.gamma);
  const auto before = agent.networks().value_net;
  auto loss_at = [&](const NetworkParams<float>& p) {
    double l = 0.0;
    for (size_t i = 0; i < batch.size(); ++i) {
      const double q = net.forward(p, batch[i]->state.to_input())[batch[i]->action];
      l += (q - targets[i]) * (q - targets[i]);
    }
    return l / static_cast<double>(batch.size());
  };

  agent.train_step(batch);
  const auto& after = agent.networks().value_net;

  // the loss is quadratic in any single parameter, so central differences
  // with a large step are exact up to float noise
  const float h = 0.05f;
  for (size_t ti = 0; ti < before.count(); ++ti) {
    for (size_t i = 0; i < before.at(ti).data.size(); i += 17) {
      NetworkParams<float> probe = before;
      probe.at(ti).data[i] += h;
      const double f_hi = loss_at(probe);
      probe.at(ti).data[i] -= 2 * h;
      const double f_lo = loss_at(probe);
      const double fd = (f_hi - f_lo) / (2.0 * h);
      const double applied = static_cast<double>(before.at(ti).data[i]) -
                             static_cast<double>(after.at(ti).data[i]);
      CHECK(applied == doctest::Approx(fd).epsilon(5e-3).scale(1.0));
    }
  }
}

TEST_CASE("train_step never writes the target network") {
  auto net = tiny_net(13);
  Agent agent({}, net, 4);
  const auto target_before = agent.networks().target_net;
  std::vector<Transition> ts;
  for (int i = 0; i < 8; ++i) ts.push_back(transition_of(0.1f * i, i, 1.0, i % 2 == 0));
  std::vector<const Transition*> batch;
  for (auto& t : ts) batch.push_back(&t);
  agent.train_step(batch);
  CHECK(agent.networks().target_net == target_before);
  CHECK_FALSE(agent.networks().value_net == target_before);

  agent.sync_target();
  CHECK(agent.networks().value_net == agent.networks().target_net);
}

TEST_CASE("train_step: non-finite loss raises a divergence error") {
  auto net = tiny_net(2);
  Agent agent({}, net, 6);
  Transition t = transition_of(0.3f, 0, std::numeric_limits<double>::infinity(), true);
  try {
    agent.train_step({&t});
    FAIL("expected divergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::diverged);
  }
}

TEST_CASE("loss is non-increasing on a single repeated transition") {
  auto net = tiny_net(4);
  AgentConfig cfg;
  cfg.learning_rate = 1e-3;
  Agent agent(cfg, net, 8);
  Transition t = transition_of(0.4f, 2, 5.0, true);

  double prev = agent.train_step({&t});
  for (int i = 0; i < 99; ++i) {
    const double loss = agent.train_step({&t});
    CHECK(loss <= prev + 1e-9);
    prev = loss;
  }
}

TEST_CASE("observe: trains at multiples of train_every after warm-up, syncs on schedule") {
  auto net = tiny_net(13);
  AgentConfig cfg;
  cfg.train_every = 5;
  cfg.sync_every = 10;
  cfg.min_replay_before_training = 8;
  cfg.batch_size = 4;
  Agent agent(cfg, net, 10);

  std::vector<uint64_t> trained, synced;
  agent.set_hooks({[&](uint64_t s, double) { trained.push_back(s); },
                   [&](uint64_t s) { synced.push_back(s); }});

  for (int i = 0; i < 30; ++i) agent.observe(transition_of(0.01f * i, i % 13, 0.5, false));

  CHECK(trained == std::vector<uint64_t>{10, 15, 20, 25, 30});
  CHECK(synced == std::vector<uint64_t>{10, 20, 30});
  CHECK(agent.train_invocations() == 5);
  CHECK(agent.global_step() == 30);
}

TEST_CASE("agent checkpoint roundtrips both networks and the step counter") {
  auto net = tiny_net(13);
  Agent agent({}, net, 12);
  for (int i = 0; i < 60; ++i)
    agent.observe(transition_of(0.01f * i, i % 13, 0.1, i % 7 == 0));

  auto dir = std::filesystem::temp_directory_path() / "dqnav_test_agent";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "agent.dqnav").string();
  agent.save_checkpoint(path);

  Agent restored({}, net, 999);
  restored.load_checkpoint(path);
  CHECK(restored.networks().value_net == agent.networks().value_net);
  CHECK(restored.networks().target_net == agent.networks().target_net);
  CHECK(restored.global_step() == agent.global_step());
}

// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset, e.g. `acceptance 1 2 3`.

#include "predprey/env/world.hpp"
#include "predprey/nn/checkpoint.hpp"
#include "predprey/ppo/gae.hpp"
#include "predprey/ppo/update.hpp"
#include "predprey/stats/efficiency.hpp"
#include "predprey/stats/evaluate.hpp"
#include "predprey/stats/hypothesis.hpp"
#include "predprey/train/trainer.hpp"

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace predprey;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Reference condition means -> efficiency, tolerance 0.01.
Outcome efficiency_arithmetic() {
  struct Row {
    double pos, neg, caught, expected;
  };
  const Row rows[] = {{326.88, 320.44, 55.48, 207.312},
                      {779.4, 706.88, 72.7, 565.324},
                      {1455.18, 491.24, 0.0, 1356.93},
                      {779.4, 706.88, 72.7, 565.324},
                      {1476.62, 504.98, 102.08, 1273.544}};
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, std::abs(stats::task_efficiency(r.pos, r.neg, r.caught) - r.expected));
  return {worst <= 0.01, fmt("max |error| %.4g over 5 values", worst)};
}

// Synthetic n=50 groups with the reference moments; d and F within 1%.
Outcome effect_sizes() {
  struct Moments {
    double mean, sd;
  };
  struct Pair {
    Moments a, b;
    double d, f;
  };
  const Pair pairs[] = {
      {{207.312, 33.835}, {565.324, 53.164}, -8.034, 1613.742},
      {{326.88, 34.231}, {779.4, 57.434}, -9.571, 2290.235},
      {{320.44, 35.595}, {706.88, 53.059}, -8.553, 1829.039},
      {{55.48, 15.931}, {72.7, 11.784}, -1.228, 37.758},
      {{1356.93, 108.803}, {1273.544, 124.072}, 0.714, 12.767},
      {{565.324, 53.164}, {1273.544, 124.072}, -7.420, 1376.41},
      {{1356.93, 108.803}, {565.324, 53.164}, 9.244, 2136.585},
  };
  double worst_d = 0.0, worst_f = 0.0, worst_anova = 0.0;
  for (const auto& p : pairs) {
    const auto a = stats::moment_matched_sample(p.a.mean, p.a.sd, 50);
    const auto b = stats::moment_matched_sample(p.b.mean, p.b.sd, 50);
    const double d = stats::cohens_d(a, b).value_or(NAN);
    const double f = d * d * 50.0 / 2.0;
    const double f_anova = stats::one_way_anova(std::vector<std::vector<double>>{a, b}).f_score;
    worst_d = std::max(worst_d, std::abs(d - p.d) / std::abs(p.d));
    worst_f = std::max(worst_f, std::abs(f - p.f) / p.f);
    worst_anova = std::max(worst_anova, std::abs(f_anova - p.f) / p.f);
  }
  const bool ok = worst_d < 0.01 && worst_f < 0.01 && worst_anova < 0.01;
  return {ok, fmt("max rel error d %.3g, F(d) %.3g, F(anova) %.3g", worst_d, worst_f, worst_anova)};
}

Outcome clip_truth_table() {
  const double eps = 0.2;
  int matched = 0;
  for (double r : {0.5, 1.0, 1.5}) {
    for (double adv : {-1.0, 0.0, 1.0}) {
      const double clipped_r = r < 1.0 - eps ? 1.0 - eps : (r > 1.0 + eps ? 1.0 + eps : r);
      const double expected = std::min(r * adv, clipped_r * adv);
      matched += ppo::clipped_surrogate(r, adv, eps) == expected;
    }
  }
  return {matched == 9, fmt("%d/9 cases exact", matched)};
}

Outcome gae_oracle() {
  std::mt19937_64 rng(404);
  std::uniform_int_distribution<int> len(1, 64);
  std::uniform_real_distribution<double> u(-2.0, 2.0), p(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < 1000; ++s) {
    const auto n = static_cast<std::size_t>(len(rng));
    std::vector<double> rewards(n), values(n);
    std::vector<std::uint8_t> done(n);
    for (std::size_t t = 0; t < n; ++t) {
      rewards[t] = u(rng);
      values[t] = u(rng);
      done[t] = p(rng) < 0.1;
    }
    const double boot = u(rng), gamma = 0.9 + 0.1 * p(rng), lambda = 0.8 + 0.2 * p(rng);
    const auto got = ppo::compute_gae(rewards, values, done, boot, gamma, lambda);
    const auto want = oracle::brute_gae(rewards, values, done, boot, gamma, lambda);
    for (std::size_t t = 0; t < n; ++t) {
      worst = std::max(worst, std::abs(got.advantages[t] - want[t]));
      worst = std::max(worst, std::abs(got.returns[t] - (want[t] + values[t])));
    }
  }
  return {worst <= 1e-10, fmt("max |error| %.3g over 1000 sequences", worst)};
}

Outcome loss_gradient() {
  const auto branches = env::prey_action_space();
  nn::DenseNet net = fixture::random_net(5, 8, {6, 6}, branches.logit_count());
  const auto buf = fixture::frozen_buffer(net, 40, {0.6, 0.85, 1.0, 1.15, 1.5}, 9);
  ppo::PpoHyperparams hp;
  std::vector<std::size_t> idx(buf.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> grad;
  ppo::ppo_loss(net, branches, buf, idx, buf.advantages(), hp, &grad);
  const auto numeric = oracle::finite_difference(
      net.parameters(), [&] { return ppo::ppo_loss(net, branches, buf, idx, buf.advantages(), hp, nullptr).total; },
      1e-5);
  std::size_t within = 0;
  double worst = 0.0;
  for (std::size_t i = 0; i < grad.size(); ++i) {
    const double e = oracle::relative_error(grad[i], numeric[i]);
    within += e <= 1e-4;
    worst = std::max(worst, e);
  }
  const double frac = static_cast<double>(within) / static_cast<double>(grad.size());
  return {frac >= 0.95 && worst <= 1e-3,
          fmt("%zu params, %.1f%% within 1e-4, max rel error %.3g", grad.size(), 100.0 * frac, worst)};
}

Outcome environment_invariants() {
  const env::WorldConfig c;
  env::World w(c, 606);
  std::mt19937_64 rng(606);
  std::uniform_int_distribution<int> act(0, env::prey_action_space().joint_size() - 1);
  std::vector<int> actions(static_cast<std::size_t>(c.n_prey));
  long contained = 0, conserved = 0, reward_mismatch = 0;
  long pos = 0, neg = 0, caught = 0;
  double reward_sum = 0.0;
  const long steps = 100'000;
  for (long t = 0; t < steps; ++t) {
    if (t > 0 && t % c.episode_length == 0) w.reset_episode();
    for (int& a : actions) a = act(rng);
    const auto r = w.step(actions);
    std::vector<double> expected(static_cast<std::size_t>(c.n_prey), 0.0);
    for (const auto& e : r.events) {
      const double v = e.kind == env::EventKind::PositiveCollected ? 1.0
                       : e.kind == env::EventKind::NegativeCollected ? -0.2
                                                                       : -1.0;
      expected[static_cast<std::size_t>(e.prey_id)] += v;
      pos += e.kind == env::EventKind::PositiveCollected;
      neg += e.kind == env::EventKind::NegativeCollected;
      caught += e.kind == env::EventKind::PreyCaught;
    }
    for (std::size_t i = 0; i < expected.size(); ++i) reward_mismatch += r.rewards[i] != expected[i];
    for (double x : r.rewards) reward_sum += x;

    const auto& s = w.state();
    bool ok = true;
    for (const auto& b : s.prey) {
      ok = ok && oracle::inside_arena(b.position, c.prey_radius, c) &&
           !oracle::inside_any_barrier(b.position, c.prey_radius, c);
    }
    ok = ok && oracle::inside_arena(s.predator->body.position, c.predator_radius, c) &&
         !oracle::inside_any_barrier(s.predator->body.position, c.predator_radius, c);
    contained += ok;
    long n_pos = 0;
    for (const auto& pt : s.points) n_pos += pt.polarity == env::Polarity::Positive;
    conserved += n_pos == c.n_positive_points && static_cast<long>(s.points.size()) - n_pos == c.n_negative_points;
  }
  const double accounted = static_cast<double>(pos) - 0.2 * static_cast<double>(neg) - static_cast<double>(caught);

  env::World v(c, 607);
  std::mt19937_64 vr(607);
  std::uniform_real_distribution<double> coord(-c.half_side(), c.half_side()), angle(0.0, 360.0);
  int agree = 0;
  for (int i = 0; i < 1000; ++i) {
    auto& s = v.mutable_state();
    s.predator->body.position = {coord(vr), coord(vr)};
    s.predator->body.heading = angle(vr);
    // Half the prey placed near the predator so both outcomes are exercised.
    if (i % 2) {
      s.prey[0].position = {coord(vr), coord(vr)};
    } else {
      std::uniform_real_distribution<double> near(-c.predator_view_radius, c.predator_view_radius);
      s.prey[0].position = {std::clamp(s.predator->body.position.x + near(vr), -c.half_side(), c.half_side()),
                            std::clamp(s.predator->body.position.y + near(vr), -c.half_side(), c.half_side())};
    }
    agree += v.predator_can_see(0) == oracle::can_see(s.predator->body.position, s.predator->body.heading,
                                                      s.prey[0].position, c.predator_view_radius,
                                                      c.predator_view_angle, c.barrier_layout);
  }
  const bool ok = contained == steps && conserved == steps && reward_mismatch == 0 &&
                  std::abs(reward_sum - accounted) <= 1e-9 * std::max(1.0, std::abs(accounted)) && agree == 1000;
  return {ok, fmt("contained %ld/%ld, conserved %ld/%ld, per-step reward mismatches %ld, total %.6f vs %.6f "
                  "(%ld pos, %ld neg, %ld caught), visibility %d/1000",
                  contained, steps, conserved, steps, reward_mismatch, reward_sum, accounted, pos, neg, caught, agree)};
}

double mean_of(auto first, auto last) {
  const auto n = std::distance(first, last);
  return n > 0 ? std::accumulate(first, last, 0.0) / static_cast<double>(n) : NAN;
}

Outcome learning_signal() {
  int successes = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto cfg = train::ScenarioConfig::for_scenario(3);
    cfg.hyperparams.max_steps = 200'000;
    cfg.seed = seed;
    train::Trainer t(cfg);
    t.run();
    std::vector<double> rewards, entropy;
    for (const auto& e : t.episodes()) rewards.push_back(e.mean_reward);
    for (const auto& m : t.metrics()) {
      if (!std::isnan(m.entropy)) entropy.push_back(m.entropy);
    }
    if (rewards.size() < 2 || entropy.size() < 2) {
      detail += fmt(" seed %llu: too little data;", static_cast<unsigned long long>(seed));
      continue;
    }
    const auto dr = std::max<std::size_t>(1, rewards.size() / 10);
    const auto de = std::max<std::size_t>(1, entropy.size() / 10);
    const double r0 = mean_of(rewards.begin(), rewards.begin() + static_cast<long>(dr));
    const double r1 = mean_of(rewards.end() - static_cast<long>(dr), rewards.end());
    const double e0 = mean_of(entropy.begin(), entropy.begin() + static_cast<long>(de));
    const double e1 = mean_of(entropy.end() - static_cast<long>(de), entropy.end());
    const bool ok = r1 > r0 && e1 < e0;
    successes += ok;
    detail += fmt(" seed %llu: reward %.2f->%.2f entropy %.3f->%.3f (%zu episodes)%s;",
                  static_cast<unsigned long long>(seed), r0, r1, e0, e1, rewards.size(), ok ? "" : " no");
  }
  return {successes >= 4, fmt("%d/5 seeds improved;", successes) + detail};
}

Outcome directional_experiment() {
  auto train_model = [](bool predator) {
    auto cfg = train::ScenarioConfig::for_scenario(predator ? 2 : 3);
    cfg.hyperparams.max_steps = 200'000;
    cfg.seed = 808;
    train::Trainer t(cfg);
    t.run();
    return t.net();
  };
  const auto with_pred = train_model(true);
  const auto without_pred = train_model(false);

  stats::EvalOptions opts;
  opts.n_runs = 20;
  opts.base_seed = 909;
  env::WorldConfig tested_without;
  tested_without.predator_present = false;
  const env::WorldConfig tested_with;
  const auto c1 = stats::evaluate_condition(without_pred, tested_without, opts).runs;
  const auto c2 = stats::evaluate_condition(with_pred, tested_with, opts).runs;
  const auto c3 = stats::evaluate_condition(without_pred, tested_with, opts).runs;

  const auto eff = stats::welch_t_test(stats::efficiencies(c1), stats::efficiencies(c2));
  const auto cat = stats::welch_t_test(stats::catches(c3), stats::catches(c2));
  const auto s1 = stats::summarize("c1", c1), s2 = stats::summarize("c2", c2), s3 = stats::summarize("c3", c3);
  const bool ok = s1.efficiency.mean > s2.efficiency.mean && eff.p_greater < 0.05 &&
                  s3.caught.mean > s2.caught.mean && cat.p_greater < 0.05;
  return {ok, fmt("efficiency c1 %.2f > c2 %.2f (p=%.3g); caught c3 %.2f > c2 %.2f (p=%.3g); c3 efficiency %.2f",
                  s1.efficiency.mean, s2.efficiency.mean, eff.p_greater, s3.caught.mean, s2.caught.mean,
                  cat.p_greater, s3.efficiency.mean)};
}

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "predprey_acceptance_determinism";
  std::filesystem::remove_all(dir);
  auto cfg = train::ScenarioConfig::for_scenario(1);
  cfg.hyperparams.max_steps = 40'000;
  cfg.seed = 77;
  auto train_into = [&](const std::string& name) {
    train::Trainer t(cfg);
    t.set_output_dir(dir / name);
    t.run();
    return t.checkpoint();
  };
  const auto a = train_into("a");
  const auto b = train_into("b");
  const std::string ma = read_bytes(dir / "a" / "metrics.csv"), mb = read_bytes(dir / "b" / "metrics.csv");
  const bool metrics_same = !ma.empty() && ma == mb;
  const bool ckpt_same = nn::encode_checkpoint(a) == nn::encode_checkpoint(b);

  train::Trainer first(cfg);
  first.run_until(17'000);
  first.save(dir / "mid.ckpt");
  train::Trainer resumed = train::Trainer::resume(cfg, dir / "mid.ckpt");
  resumed.set_output_dir(dir / "resumed");
  resumed.run();
  const bool resume_same = read_bytes(dir / "resumed" / "metrics.csv") == ma &&
                           nn::encode_checkpoint(resumed.checkpoint()) == nn::encode_checkpoint(a);
  std::filesystem::remove_all(dir);
  return {metrics_same && ckpt_same && resume_same,
          fmt("metrics csv identical: %s, checkpoints identical: %s, resume at step 17000 identical: %s",
              metrics_same ? "yes" : "no", ckpt_same ? "yes" : "no", resume_same ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"task efficiency arithmetic", efficiency_arithmetic},
      {"effect size reproduction", effect_sizes},
      {"clip truth table", clip_truth_table},
      {"GAE brute-force equivalence", gae_oracle},
      {"loss gradient vs finite differences", loss_gradient},
      {"environment invariants", environment_invariants},
      {"learning signal", learning_signal},
      {"directional predator experiment", directional_experiment},
      {"determinism and resume", determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.contains(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("criterion %d %s: %s (%s) [%.1fs]\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

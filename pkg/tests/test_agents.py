import numpy as np
import pytest

from darclab.agents import (
    ALGORITHMS,
    ExplorationConfig,
    TargetConfig,
    actor_gradient,
    clipped_min_q,
    critic_loss,
    estimator_value,
    make_agent,
    policy_actions,
    select_action,
    smoothed_target_action,
    soft_target,
    target_daddpg,
    target_datd3,
    target_ddpg,
    target_td3,
    train_step,
)
from darclab.envs import GOLDMINER_SPEC, EnvSpec
from darclab.errors import ConfigError, NumericalError
from darclab.neural import adam_step, mlp_forward
from darclab.replay import ReplayBuffer, Transition
from helpers import FixedNormal, constant_net, linear_net, random_net

SPEC2 = EnvSpec(state_dim=2, action_dim=1, action_bound=1.5, episode_length=50)


def filled_buffer(spec, n=300, seed=0):
    rng = np.random.default_rng(seed)
    buf = ReplayBuffer(1000, spec.state_dim, spec.action_dim)
    for _ in range(n):
        s = rng.normal(size=spec.state_dim)
        a = rng.uniform(-spec.action_bound, spec.action_bound, spec.action_dim)
        buf.push(Transition(s, a, rng.normal(), rng.normal(size=spec.state_dim), False))
    return buf


# --- configuration validation ---------------------------------------------------


def test_target_config_rejects_bad_nu_and_clip():
    with pytest.raises(ConfigError):
        TargetConfig(nu=1.0)
    with pytest.raises(ConfigError):
        TargetConfig(nu=-0.1)
    with pytest.raises(ConfigError):
        TargetConfig(noise_clip=0.0)
    with pytest.raises(ConfigError):
        ExplorationConfig(mode="greedy")


def test_make_agent_network_counts():
    rng = np.random.default_rng(0)
    expected = {
        "ddpg": (1, 1), "td3": (1, 2), "daddpg": (2, 1),
        "datd3": (2, 2), "ctd3": (2, 2), "darc": (2, 2),
    }
    for algo in ALGORITHMS:
        agent = make_agent(algo, SPEC2, (8, 8), rng)
        assert (len(agent.actors), len(agent.critics)) == expected[algo]
        assert len(agent.target_actors) == len(agent.actors)
        assert len(agent.target_critics) == len(agent.critics)
        for online, target in zip(agent.actors, agent.target_actors):
            assert np.array_equal(online.flat, target.flat)
    with pytest.raises(ConfigError):
        make_agent("sac", SPEC2, (8, 8), rng)


# --- smoothed target action -------------------------------------------------------


def test_smoothed_action_zero_std_is_exact_policy_output():
    rng = np.random.default_rng(1)
    actor = random_net(rng, (2, 8, 1), output_bound=1.5)
    cfg = TargetConfig(target_noise_std=0.0)
    s = np.array([0.3, -0.8])
    assert np.array_equal(
        smoothed_target_action(actor, s, cfg, rng, 1.5), mlp_forward(actor, s)
    )


def test_smoothed_action_clips_noise_then_clamps():
    # actor outputs exactly 0.3; a drawn noise of 0.9 clips to c=0.5 -> 0.8
    actor = linear_net([[0.0, 0.0]], [0.3])
    cfg = TargetConfig(target_noise_std=0.2, noise_clip=0.5)
    out = smoothed_target_action(actor, np.array([1.0, 2.0]), cfg, FixedNormal(0.9), 1.5)
    assert out == pytest.approx([0.8], abs=0)


def test_smoothed_action_respects_action_bound():
    rng = np.random.default_rng(2)
    actor = random_net(rng, (2, 8, 1), output_bound=1.5)
    cfg = TargetConfig(target_noise_std=5.0, noise_clip=10.0)
    for _ in range(100):
        out = smoothed_target_action(actor, rng.normal(size=2), cfg, rng, 1.5)
        assert np.all(np.abs(out) <= 1.5)


# --- target estimators ---------------------------------------------------------------


def test_target_ddpg_constant_critic():
    actor = random_net(np.random.default_rng(3), (2, 8, 1), output_bound=1.5)
    assert target_ddpg(constant_net(3, 2.0), actor, np.array([0.1, 0.2])) == 2.0


def test_target_ddpg_is_forward_composition():
    rng = np.random.default_rng(4)
    critic = random_net(rng, (3, 8, 1))
    actor = random_net(rng, (2, 8, 1), output_bound=1.5)
    s = rng.normal(size=2)
    a = mlp_forward(actor, s)
    expected = mlp_forward(critic, np.concatenate([s, a]))[0]
    assert target_ddpg(critic, actor, s) == expected


def test_target_ddpg_linear_critic_returns_actor_output():
    # Q(s, a) = a and a deterministic actor emitting 0.7
    critic = linear_net([[0.0, 0.0, 1.0]], [0.0])
    actor = linear_net([[0.0, 0.0]], [0.7])
    assert target_ddpg(critic, actor, np.array([5.0, -2.0])) == pytest.approx(0.7)


def test_target_td3_takes_min_and_reduces_to_ddpg_for_identical_critics():
    rng = np.random.default_rng(5)
    actor = random_net(rng, (2, 8, 1), output_bound=1.5)
    s = rng.normal(size=2)
    q1, q2 = constant_net(3, 1.0), constant_net(3, 2.0)
    assert target_td3((q1, q2), actor, s) == 1.0
    critic = random_net(rng, (3, 8, 1))
    assert target_td3((critic, critic), actor, s) == target_ddpg(critic, actor, s)
    assert target_td3((q1, q2), actor, s) <= target_ddpg(q1, actor, s)
    assert target_td3((q1, q2), actor, s) <= target_ddpg(q2, actor, s)


def test_target_daddpg_hand_min_and_identical_actor_reduction():
    rng = np.random.default_rng(6)
    s = rng.normal(size=2)
    # critic Q(s, a) = a: actors emitting 1.2 and 0.8 give min 0.8
    critic = linear_net([[0.0, 0.0, 1.0]], [0.0])
    actors = (linear_net([[0.0, 0.0]], [1.2]), linear_net([[0.0, 0.0]], [0.8]))
    assert target_daddpg(critic, actors, s) == pytest.approx(0.8)
    actor = random_net(rng, (2, 8, 1), output_bound=1.5)
    assert target_daddpg(critic, (actor, actor), s) == target_ddpg(critic, actor, s)


def test_theorem1_pointwise_on_random_cases():
    rng = np.random.default_rng(7)
    for _ in range(200):
        critic = random_net(rng, (3, 10, 1), scale=rng.uniform(0.5, 2))
        actors = [random_net(rng, (2, 10, 1), output_bound=1.5) for _ in range(2)]
        s = rng.normal(size=2)
        v = target_daddpg(critic, actors, s)
        assert v <= target_ddpg(critic, actors[0], s)
        assert v <= target_ddpg(critic, actors[1], s)


def test_target_datd3_hand_example_and_reductions():
    s = np.array([0.0])
    # critics read the action directly; evaluate at a'=(x) and a''=(y)
    # Q1(s,a) = a, Q2(s,a) = 2a at a'=1.0 -> min(1, 2)=1; at a''=x
    q1 = linear_net([[0.0, 1.0]], [0.0])
    q2 = linear_net([[0.0, 2.0]], [0.0])

    # hand case: Q1(a')=1, Q2(a')=2, Q1(a'')=3, Q2(a'')=0.5 is not realizable
    # with monotone critics sharing one action, so check with constants:
    class Vals:
        pass

    qa = constant_net(2, 1.0)   # Q1 anywhere = 1.0
    qb = constant_net(2, 2.0)   # Q2 anywhere = 2.0
    assert target_datd3((qa, qb), s, np.array([0.3]), np.array([-0.2])) == 1.0

    # linear case: a'=0.6 -> min(0.6, 1.2)=0.6 ; a''=-0.4 -> min(-0.4,-0.8)=-0.8
    v = target_datd3((q1, q2), s, np.array([0.6]), np.array([-0.4]))
    assert v == pytest.approx(max(0.6, -0.8))

    # identical actions reduce to the td3 value at that action
    a = np.array([0.25])
    td3_v = float(clipped_min_q((q1, q2), s[None, :], a[None, :])[0])
    assert target_datd3((q1, q2), s, a, a) == td3_v


def test_theorem2_pointwise_on_random_cases():
    rng = np.random.default_rng(8)
    cfg = TargetConfig()
    for _ in range(200):
        critics = [random_net(rng, (3, 10, 1), scale=rng.uniform(0.5, 2)) for _ in range(2)]
        actors = [random_net(rng, (2, 10, 1), output_bound=1.5) for _ in range(2)]
        s = rng.normal(size=2)
        a1 = smoothed_target_action(actors[0], s, cfg, rng, 1.5)
        a2 = smoothed_target_action(actors[1], s, cfg, rng, 1.5)
        v_td3 = float(clipped_min_q(critics, s[None, :], a1[None, :])[0])
        assert target_datd3(critics, s, a1, a2) >= v_td3


def test_soft_target_hand_value_endpoint_and_monotonicity():
    s = np.array([0.0])
    # both critics read the action: per-actor values Q1=1.0 at a'=1.0 and
    # Q2=0.5 at a''=0.5; nu=0.25 -> 0.25*0.5 + 0.75*1.0 = 0.875
    q_lin = linear_net([[0.0, 1.0]], [0.0])
    critics = (q_lin, q_lin)
    a1, a2 = np.array([1.0]), np.array([0.5])
    assert soft_target(critics, s, a1, a2, 0.25) == pytest.approx(0.875)
    assert soft_target(critics, s, a1, a2, 0.0) == target_datd3(critics, s, a1, a2)

    rng = np.random.default_rng(9)
    for _ in range(100):
        critics = [random_net(rng, (3, 10, 1)) for _ in range(2)]
        a1, a2 = rng.normal(size=1), rng.normal(size=1)
        s = rng.normal(size=2)
        values = [soft_target(critics, s, a1, a2, nu) for nu in (0.0, 0.25, 0.5, 0.75)]
        assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))
        q1 = float(clipped_min_q(critics, s[None, :], a1[None, :])[0])
        q2 = float(clipped_min_q(critics, s[None, :], a2[None, :])[0])
        assert min(q1, q2) - 1e-12 <= values[-1] <= max(q1, q2) + 1e-12
        # nu -> 1 limit approaches the pairwise min
        assert soft_target(critics, s, a1, a2, 1 - 1e-12) == pytest.approx(min(q1, q2))


def test_soft_target_equal_values_invariant_and_nu_validation():
    s, a = np.array([0.0]), np.array([0.1])
    q = constant_net(2, 3.0)
    for nu in (0.0, 0.3, 0.9):
        assert soft_target((q, q), s, a, a, nu) == pytest.approx(3.0)
    with pytest.raises(ConfigError):
        soft_target((q, q), s, a, a, 1.0)


# --- critic loss ------------------------------------------------------------------


def test_critic_loss_without_penalty_is_mean_squared_td_error():
    rng = np.random.default_rng(10)
    critic = random_net(rng, (3, 8, 1))
    states = rng.normal(size=(6, 2))
    actions = rng.normal(size=(6, 1))
    y = rng.normal(size=6)
    loss, _ = critic_loss(critic, states, actions, y)
    q = mlp_forward(critic, np.hstack((states, actions)))[:, 0]
    assert loss == pytest.approx(np.mean((q - y) ** 2))


def test_critic_loss_hand_value_with_penalty():
    # Q1(s,a)=2, Q2(s,a)=1, y=1.5, lam=0.005: 0.25 + 0.005*1 = 0.255
    critic = constant_net(2, 2.0)
    loss, _ = critic_loss(
        critic,
        np.array([[0.0]]),
        np.array([[0.0]]),
        np.array([1.5]),
        other_q=np.array([1.0]),
        lam=0.005,
    )
    assert loss == pytest.approx(0.255)


def test_critic_loss_zero_when_fitting_targets_and_twin():
    critic = constant_net(2, 1.5)
    loss, grads = critic_loss(
        critic,
        np.array([[0.2], [0.4]]),
        np.array([[0.0], [0.1]]),
        np.array([1.5, 1.5]),
        other_q=np.array([1.5, 1.5]),
        lam=0.005,
    )
    assert loss == 0.0
    assert not grads.flat.any()


def test_critic_loss_rejects_non_finite_targets():
    critic = constant_net(2, 0.0)
    with pytest.raises(NumericalError):
        critic_loss(critic, np.zeros((1, 1)), np.zeros((1, 1)), np.array([np.inf]))


def test_critic_loss_gradient_matches_finite_differences_with_penalty():
    rng = np.random.default_rng(11)
    critic = random_net(rng, (3, 8, 1))
    other = random_net(rng, (3, 8, 1))
    states = rng.normal(size=(5, 2))
    actions = rng.normal(size=(5, 1))
    y = rng.normal(size=5)
    other_q = mlp_forward(other, np.hstack((states, actions)))[:, 0]
    _, grads = critic_loss(critic, states, actions, y, other_q, lam=0.01)
    h = 1e-5
    for arr, g in ((critic.weights[0], grads.weight_grads[0]), (critic.biases[1], grads.bias_grads[1])):
        for idx in np.ndindex(arr.shape):
            old = arr[idx]
            arr[idx] = old + h
            fp = critic_loss(critic, states, actions, y, other_q, lam=0.01)[0]
            arr[idx] = old - h
            fm = critic_loss(critic, states, actions, y, other_q, lam=0.01)[0]
            arr[idx] = old
            fd = (fp - fm) / (2 * h)
            assert abs(g[idx] - fd) <= max(1e-8, 1e-4 * max(abs(g[idx]), abs(fd)))


# --- actor gradient -----------------------------------------------------------------


def test_actor_gradient_zero_for_action_independent_critic():
    rng = np.random.default_rng(12)
    actor = random_net(rng, (2, 8, 1), output_bound=1.5)
    critic = linear_net([[3.0, -1.0, 0.0]], [0.5])  # depends on state only
    _, grads = actor_gradient(actor, critic, rng.normal(size=(4, 2)))
    assert grads.flat == pytest.approx(np.zeros_like(grads.flat), abs=1e-14)


def test_actor_gradient_linear_chain_rule():
    # critic Q(s, a) = 3a and a purely linear actor pi(s) = w s:
    # d(mean Q)/dw = 3 * mean(s)
    critic = linear_net([[0.0, 3.0]], [0.0])
    actor = linear_net([[0.5]], [0.0])  # identity output, single weight
    states = np.array([[1.0], [2.0], [3.0]])
    mean_q, grads = actor_gradient(actor, critic, states)
    assert grads.weight_grads[0][0, 0] == pytest.approx(3.0 * 2.0)
    assert grads.bias_grads[0][0] == pytest.approx(3.0)
    assert mean_q == pytest.approx(3.0 * 0.5 * 2.0)


def test_actor_update_increases_objective_on_frozen_quadratic_critic():
    rng = np.random.default_rng(13)
    spec = SPEC2
    agent = make_agent("ddpg", spec, (8, 8), rng)
    # critic Q(s, a) = -(a - 0.3)^2 approximated by its exact ReLU form:
    # -(relu(a-0.3) + relu(0.3-a))^2 is not expressible; use smooth tanh
    # critic instead: any differentiable critic works for the ascent check
    critic = random_net(rng, (3, 16, 1), scale=1.5)
    agent.critics[0] = critic
    states = rng.normal(size=(32, 2))

    def objective():
        a = mlp_forward(agent.actors[0], states)
        return float(mlp_forward(critic, np.hstack((states, a))).mean())

    before = objective()
    mean_q, grads = actor_gradient(agent.actors[0], critic, states)
    assert mean_q == pytest.approx(before)
    grads.flat *= -1.0
    adam_step(agent.actors[0], grads, agent.actor_opts[0], lr=1e-4)
    assert objective() > before


# --- action selection ------------------------------------------------------------------


def _scripted_agent(score1, score2, act1=0.5, act2=-0.5):
    """daddpg-shaped agent whose critic scores actor-1 and actor-2 actions
    with the given values: Q(s, a) depends only on a's sign."""
    rng = np.random.default_rng(14)
    agent = make_agent("daddpg", GOLDMINER_SPEC, (4, 4), rng)
    slope = (score1 - score2) / (act1 - act2)
    intercept = score1 - slope * act1
    agent.critics[0] = linear_net([[0.0, slope]], [intercept])
    agent.actors[0] = linear_net([[0.0]], [np.arctanh(act1 / 1.5)], output_bound=1.5)
    agent.actors[1] = linear_net([[0.0]], [np.arctanh(act2 / 1.5)], output_bound=1.5)
    return agent


def test_select_action_follows_higher_scoring_actor():
    agent = _scripted_agent(score1=1.0, score2=0.5)
    expl = ExplorationConfig(action_noise_std=0.0, mode="maxq")
    a = select_action(agent, np.array([0.0]), expl, np.random.default_rng(0))
    assert a == pytest.approx([0.5])

    agent = _scripted_agent(score1=0.2, score2=0.9)
    a = select_action(agent, np.array([0.0]), expl, np.random.default_rng(0))
    assert a == pytest.approx([-0.5])


def test_select_action_tie_goes_to_first_actor():
    agent = _scripted_agent(score1=0.7, score2=0.7)
    expl = ExplorationConfig(action_noise_std=0.0, mode="maxq")
    a = select_action(agent, np.array([0.0]), expl, np.random.default_rng(0))
    assert a == pytest.approx([0.5])


def test_select_action_first_mode_ignores_scores():
    agent = _scripted_agent(score1=0.0, score2=5.0)
    expl = ExplorationConfig(action_noise_std=0.0, mode="first")
    a = select_action(agent, np.array([0.0]), expl, np.random.default_rng(0))
    assert a == pytest.approx([0.5])


def test_select_action_noise_stays_within_bounds():
    rng = np.random.default_rng(15)
    agent = make_agent("darc", GOLDMINER_SPEC, (8, 8), rng)
    expl = ExplorationConfig(action_noise_std=0.5, mode="maxq")
    for _ in range(200):
        a = select_action(agent, rng.normal(size=1), expl, rng)
        assert np.all(np.abs(a) <= 1.5)


def test_select_action_invariant_to_constant_critic_shift():
    rng = np.random.default_rng(16)
    agent = make_agent("darc", GOLDMINER_SPEC, (8, 8), rng)
    expl = ExplorationConfig(action_noise_std=0.0, mode="maxq")
    states = [rng.normal(size=1) for _ in range(20)]
    before = [select_action(agent, s, expl, rng).copy() for s in states]
    for critic in agent.critics:
        critic.biases[-1] += 123.45  # shift every Q output by a constant
    after = [select_action(agent, s, expl, rng) for s in states]
    for a, b in zip(before, after):
        assert np.array_equal(a, b)


def test_policy_actions_single_actor_agents_use_their_actor():
    rng = np.random.default_rng(17)
    agent = make_agent("td3", GOLDMINER_SPEC, (8, 8), rng)
    states = rng.normal(size=(5, 1))
    assert np.array_equal(
        policy_actions(agent, states, "maxq"), mlp_forward(agent.actors[0], states)
    )


# --- train_step semantics ----------------------------------------------------------------


def snapshot(agent):
    return [n.flat.copy() for n in (*agent.actors, *agent.critics,
                                    *agent.target_actors, *agent.target_critics)]


def changed(agent, snap):
    nets = (*agent.actors, *agent.critics, *agent.target_actors, *agent.target_critics)
    return [not np.array_equal(n.flat, s) for n, s in zip(nets, snap)]


def test_td3_delays_actor_and_target_updates_to_even_steps():
    rng = np.random.default_rng(18)
    agent = make_agent("td3", SPEC2, (8, 8), rng)
    buf = filled_buffer(SPEC2)
    cfg = TargetConfig()
    r1, r2 = np.random.default_rng(1), np.random.default_rng(2)

    snap = snapshot(agent)
    train_step(agent, buf, cfg, r1, r2, batch_size=16)  # step index 0: full update
    actor_ch, c1_ch, c2_ch, ta_ch, tc1_ch, tc2_ch = changed(agent, snap)
    assert all((actor_ch, c1_ch, c2_ch, ta_ch, tc1_ch, tc2_ch))

    snap = snapshot(agent)
    train_step(agent, buf, cfg, r1, r2, batch_size=16)  # step index 1: critics only
    actor_ch, c1_ch, c2_ch, ta_ch, tc1_ch, tc2_ch = changed(agent, snap)
    assert (c1_ch, c2_ch) == (True, True)
    assert (actor_ch, ta_ch, tc1_ch, tc2_ch) == (False, False, False, False)


def test_daddpg_alternates_actors_and_updates_critic_every_step():
    rng = np.random.default_rng(19)
    agent = make_agent("daddpg", SPEC2, (8, 8), rng)
    buf = filled_buffer(SPEC2)
    cfg = TargetConfig()
    r1, r2 = np.random.default_rng(1), np.random.default_rng(2)

    snap = snapshot(agent)
    train_step(agent, buf, cfg, r1, r2, batch_size=16)  # parity 0: actor 1 branch
    a1_ch, a2_ch, c_ch, ta1_ch, ta2_ch, tc_ch = changed(agent, snap)
    assert (a1_ch, a2_ch, c_ch) == (True, False, True)
    assert (ta1_ch, ta2_ch, tc_ch) == (True, False, True)

    snap = snapshot(agent)
    train_step(agent, buf, cfg, r1, r2, batch_size=16)  # parity 1: actor 2 branch
    a1_ch, a2_ch, c_ch, ta1_ch, ta2_ch, tc_ch = changed(agent, snap)
    assert (a1_ch, a2_ch, c_ch) == (False, True, True)
    assert (ta1_ch, ta2_ch, tc_ch) == (False, True, False)


def test_darc_cross_update_leaves_other_pair_bitwise_unchanged():
    rng = np.random.default_rng(20)
    agent = make_agent("darc", SPEC2, (8, 8), rng)
    buf = filled_buffer(SPEC2)
    cfg = TargetConfig()
    r1, r2 = np.random.default_rng(1), np.random.default_rng(2)

    snap = snapshot(agent)
    metrics = train_step(agent, buf, cfg, r1, r2, batch_size=16)  # even step: pair 1
    a1_ch, a2_ch, c1_ch, c2_ch, ta1_ch, ta2_ch, tc1_ch, tc2_ch = changed(agent, snap)
    assert (a1_ch, c1_ch, ta1_ch, tc1_ch) == (True, True, True, True)
    assert (a2_ch, c2_ch, ta2_ch, tc2_ch) == (False, False, False, False)
    assert {"td_loss", "penalty", "target_mean", "critic_deviance"} <= set(metrics)

    snap = snapshot(agent)
    train_step(agent, buf, cfg, r1, r2, batch_size=16)  # odd step: pair 2
    a1_ch, a2_ch, c1_ch, c2_ch, ta1_ch, ta2_ch, tc1_ch, tc2_ch = changed(agent, snap)
    assert (a2_ch, c2_ch, ta2_ch, tc2_ch) == (True, True, True, True)
    assert (a1_ch, c1_ch, ta1_ch, tc1_ch) == (False, False, False, False)


def test_ctd3_updates_one_pair_per_step():
    rng = np.random.default_rng(21)
    agent = make_agent("ctd3", SPEC2, (8, 8), rng)
    buf = filled_buffer(SPEC2)
    r1, r2 = np.random.default_rng(1), np.random.default_rng(2)
    snap = snapshot(agent)
    train_step(agent, buf, TargetConfig(), r1, r2, batch_size=16)
    a1_ch, a2_ch, c1_ch, c2_ch, *_ = changed(agent, snap)
    assert (a1_ch, c1_ch) == (True, True)
    assert (a2_ch, c2_ch) == (False, False)


def test_darc_both_mode_with_lam_nu_zero_reproduces_datd3_bitwise():
    spec = SPEC2
    buf = filled_buffer(spec, n=400, seed=3)
    cfg = TargetConfig(nu=0.0, lam=0.0)

    darc = make_agent("darc", spec, (8, 8), np.random.default_rng(42), update_scheme="both")
    datd3 = make_agent("datd3", spec, (8, 8), np.random.default_rng(42))
    for a, b in zip(
        (*darc.actors, *darc.critics), (*datd3.actors, *datd3.critics)
    ):
        assert np.array_equal(a.flat, b.flat)

    ra1, rt1 = np.random.default_rng(7), np.random.default_rng(8)
    ra2, rt2 = np.random.default_rng(7), np.random.default_rng(8)
    for _ in range(15):
        train_step(darc, buf, cfg, ra1, rt1, batch_size=20)
        train_step(datd3, buf, cfg, ra2, rt2, batch_size=20)
    for a, b in zip(
        (*darc.actors, *darc.critics, *darc.target_actors, *darc.target_critics),
        (*datd3.actors, *datd3.critics, *datd3.target_actors, *datd3.target_critics),
    ):
        assert np.array_equal(a.flat, b.flat)


def test_ddpg_updates_everything_every_step():
    rng = np.random.default_rng(22)
    agent = make_agent("ddpg", SPEC2, (8, 8), rng)
    buf = filled_buffer(SPEC2)
    r1, r2 = np.random.default_rng(1), np.random.default_rng(2)
    for _ in range(3):
        snap = snapshot(agent)
        train_step(agent, buf, TargetConfig(), r1, r2, batch_size=16)
        assert all(changed(agent, snap))


def test_estimator_value_matches_definitional_forms():
    rng = np.random.default_rng(23)
    cfg = TargetConfig(nu=0.25)
    states = rng.normal(size=(6, 2))

    agent = make_agent("ddpg", SPEC2, (8, 8), rng)
    expected = target_ddpg(agent.target_critics[0], agent.target_actors[0], states)
    assert np.array_equal(estimator_value(agent, states, cfg), expected)

    agent = make_agent("daddpg", SPEC2, (8, 8), rng)
    expected = target_daddpg(agent.target_critics[0], agent.target_actors, states)
    assert np.array_equal(estimator_value(agent, states, cfg), expected)

    agent = make_agent("td3", SPEC2, (8, 8), rng)
    expected = target_td3(agent.target_critics, agent.target_actors[0], states)
    assert np.array_equal(estimator_value(agent, states, cfg), expected)

    agent = make_agent("datd3", SPEC2, (8, 8), rng)
    a1 = mlp_forward(agent.target_actors[0], states)
    a2 = mlp_forward(agent.target_actors[1], states)
    expected = target_datd3(agent.target_critics, states, a1, a2)
    assert np.array_equal(estimator_value(agent, states, cfg), expected)

    agent = make_agent("darc", SPEC2, (8, 8), rng)
    a1 = mlp_forward(agent.target_actors[0], states)
    a2 = mlp_forward(agent.target_actors[1], states)
    expected = soft_target(agent.target_critics, states, a1, a2, 0.25)
    assert np.array_equal(estimator_value(agent, states, cfg), expected)

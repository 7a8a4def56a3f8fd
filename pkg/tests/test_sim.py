import math
import statistics

import pytest

from transfer_bai.complexity import theorem2_bound
from transfer_bai.env import BanditEnv, Bernoulli, Gaussian, Uniform
from transfer_bai.presets import make_bai, make_thresholding
from transfer_bai.rng import SampleStream, bernoulli_sample, gaussian_sample, trial_seed, uniform_sample
from transfer_bai.sim import Instance, is_eps_optimal, run_batch, run_trial
from transfer_bai.transfer import TransferFunction


def bai_instance(**kw):
    return Instance(BanditEnv.gaussian([1.0, 0.0]), make_bai(2), delta=0.1, **kw)


# --- streams and samplers ----------------------------------------------------------


def test_streams_are_reproducible_and_distinct():
    a = [SampleStream(5).next_raw() for _ in range(3)]
    s1, s2 = SampleStream(5), SampleStream(5)
    assert [s1.next_raw() for _ in range(1000)] == [s2.next_raw() for _ in range(1000)]
    assert SampleStream(5).next_raw() != SampleStream(6).next_raw()
    assert SampleStream(5, 1).next_raw() != SampleStream(5, 0).next_raw()
    assert len(set(a)) == 1


def test_trial_seeds_differ():
    seeds = {trial_seed(7, k) for k in range(1000)}
    assert len(seeds) == 1000
    assert trial_seed(7, 3) == trial_seed(7, 3)


def test_uniform_open_interval():
    s = SampleStream(0)
    xs = [s.uniform_open() for _ in range(10_000)]
    assert 0.0 < min(xs) and max(xs) < 1.0


def test_degenerate_bernoulli():
    s = SampleStream(1)
    assert all(bernoulli_sample(s, 0.0) == 0.0 for _ in range(1000))
    assert all(bernoulli_sample(s, 1.0) == 1.0 for _ in range(1000))


def test_gaussian_mean_within_five_standard_errors():
    s = SampleStream(42)
    n = 10**6
    xs = [gaussian_sample(s, 0.3, 1.0) for _ in range(n)]
    assert abs(math.fsum(xs) / n - 0.3) <= 0.005
    assert statistics.pstdev(xs[:100_000]) == pytest.approx(1.0, abs=0.01)


def test_uniform_range_and_mean():
    s = SampleStream(3)
    xs = [uniform_sample(s, -2.0, 4.0) for _ in range(100_000)]
    assert -2.0 < min(xs) and max(xs) < 4.0
    assert abs(statistics.fmean(xs) - 1.0) < 5 * 6 / math.sqrt(12 * 100_000)


@pytest.mark.parametrize(
    "fn,args", [(gaussian_sample, (0.0, 0.0)), (bernoulli_sample, (1.5,)), (uniform_sample, (1.0, 1.0))]
)
def test_sampler_parameter_errors(fn, args):
    with pytest.raises(ValueError):
        fn(SampleStream(0), *args)


def test_subgaussian_scales():
    assert Bernoulli(0.3).subgaussian_scale == 0.5
    assert Uniform(0.0, 3.0).subgaussian_scale == 1.5
    env = BanditEnv((Gaussian(0.0, 2.0),))
    with pytest.raises(ValueError):
        env.check_subgaussian(1.0)
    with pytest.raises(ValueError):
        Instance(BanditEnv((Uniform(0.0, 4.0), Gaussian(0.0))), make_bai(2), delta=0.1)


# --- harness ---------------------------------------------------------------------


def test_eps_optimality():
    assert is_eps_optimal([1.0, 0.9], 0, 0.0)
    assert not is_eps_optimal([1.0, 0.9], 1, 0.0)
    assert is_eps_optimal([1.0, 0.9], 1, 0.1)
    assert is_eps_optimal([0.3, 0.1 + 0.2], 1, 0.0)


def test_trial_record_fields():
    inst = bai_instance()
    report = theorem2_bound(inst.tf, inst.env.means, 0.0, 0.1)
    r = run_trial(inst, "tlucb", 9, 4, report.theorem2_total)
    assert r.seed == trial_seed(9, 4)
    assert r.correct and r.selected == 0
    assert sum(r.per_arm_pulls) == r.total_pulls == 2 + 2 * r.rounds
    assert r.bound_held and r.good_event_held


def test_batch_counts_and_summary():
    batch = run_batch(bai_instance(), "tlucb", 60, base_seed=1)
    assert batch.n_trials == 60 == len(batch.trials)
    assert [t.trial_index for t in batch.trials] == list(range(60))
    assert 0 <= batch.error_count <= 60
    s = batch.summary()
    for key in ("error_rate", "mean_total_pulls", "median_total_pulls", "p95_total_pulls", "empty_dtilde_count"):
        assert key in s
    assert s["mean_total_pulls"] == statistics.fmean(t.total_pulls for t in batch.trials)


def test_parallel_matches_serial():
    inst = Instance(BanditEnv.gaussian([0.5, -0.5]), make_thresholding(2, 0.0), delta=0.1)
    serial = run_batch(inst, "tlucb", 40, base_seed=11, parallelism=1)
    parallel = run_batch(inst, "tlucb", 40, base_seed=11, parallelism=4)
    assert serial == parallel


def test_empty_dtilde_counted_as_error():
    inst = Instance(
        BanditEnv.gaussian([1.0, 0.0]),
        TransferFunction.from_matrix([[1.0, 1.0], [0.0, 1.0]]),
        delta=0.1,
        scale_shift=((1.0, 0.0), (1.0, 0.0)),
    )
    batch = run_batch(inst, "microlucb", 10)
    assert batch.empty_dtilde_count == 10 == batch.error_count
    assert all(t.selected == -1 for t in batch.trials)


def test_capped_trials_are_errors():
    tf = TransferFunction.from_matrix([[1.0, 0.0], [1.0, 0.0]])
    inst = Instance(BanditEnv.gaussian([0.0, 0.0]), tf, delta=0.1, max_rounds=20)
    batch = run_batch(inst, "tlucb", 5)
    assert batch.capped_count == 5 == batch.error_count


def test_batch_argument_errors():
    with pytest.raises(ValueError):
        run_batch(bai_instance(), "tlucb", 0)
    with pytest.raises(ValueError):
        run_batch(bai_instance(), "ucb", 5)
    with pytest.raises(ValueError):
        Instance(BanditEnv.gaussian([0.0]), make_bai(2), delta=0.1)

"""Tests for brute force, simulated annealing, quadratization and the k-means baseline."""

import numpy as np
import pytest
from pydantic import ValidationError

from core.dataset import Dataset, basis_index
from core.errors import ConstraintError, DataError, ProblemTooLargeError
from core.hamiltonian import hamiltonian_diagonal
from core.polynomial import SpinPolynomial, evaluate, spin_to_binary
from objectives import ObjectiveKind, build_inter, build_objective, raw_objective
from solvers import (
    AnnealSchedule,
    VariableMap,
    anneal_objective,
    brute_force,
    kmeans_baseline,
    labels_to_spins,
    polynomial_energy,
    quadratize,
    simulated_annealing,
    verify_quadratization,
)
from tools.synthetic import GaussianSpec, generate_gaussian

ZZ = SpinPolynomial(2, terms={(0, 1): 1.0})


def random_polynomial(rng, n, max_degree=2, num_terms=20):
    terms = []
    for _ in range(num_terms):
        size = min(n, int(rng.integers(1, max_degree + 1)))
        terms.append((rng.choice(n, size=size, replace=False), rng.normal()))
    return SpinPolynomial.from_terms(n, terms, constant=rng.normal())


def same_partition(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return np.array_equal(a, b) or np.array_equal(a, -b)


class TestBruteForce:
    def test_antiferromagnetic_pair(self):
        result = brute_force(ZZ, return_minimizers=True)
        assert result.best_energy == -1.0
        assert result.best_assignment.tolist() == [1, -1]
        assert result.symmetric
        assert result.num_evaluations == 2
        assert result.minimizers.tolist() == [[1, -1], [-1, 1]]

    def test_linear_term_is_not_symmetric(self):
        result = brute_force(SpinPolynomial(1, terms={(0,): 1.0}))
        assert result.best_assignment.tolist() == [-1]
        assert result.best_energy == -1.0
        assert not result.symmetric
        assert result.num_evaluations == 2

    def test_ties_resolve_to_lowest_index(self):
        result = brute_force(SpinPolynomial(3, constant=4.0))
        assert result.best_assignment.tolist() == [1, 1, 1]
        assert result.best_energy == 4.0

    def test_agrees_with_hamiltonian_diagonal(self, rng):
        poly = random_polynomial(rng, 12, max_degree=4, num_terms=40)
        diagonal = hamiltonian_diagonal(poly)
        result = brute_force(poly)
        assert result.best_energy == pytest.approx(diagonal.min(), abs=1e-12)
        assert basis_index(result.best_assignment) == int(np.argmin(diagonal))

    @pytest.mark.parametrize("kind", list(ObjectiveKind))
    def test_symmetric_search_matches_full_diagonal(self, random_dataset, kind):
        poly = build_objective(kind, random_dataset(9, 2, seed=3))
        result = brute_force(poly, return_minimizers=True)
        diagonal = hamiltonian_diagonal(poly)
        assert result.num_evaluations == 256
        assert result.best_energy == pytest.approx(diagonal.min())
        assert {basis_index(z) for z in result.minimizers} == set(
            np.flatnonzero(diagonal <= diagonal.min() + 1e-9 * max(1.0, abs(diagonal.min()))).tolist()
        )

    def test_result_is_read_only(self):
        with pytest.raises(ValueError):
            brute_force(ZZ).best_assignment[0] = 1

    def test_size_guards(self):
        with pytest.raises(ProblemTooLargeError):
            brute_force(SpinPolynomial(5), max_vars=4)
        with pytest.raises(ProblemTooLargeError):
            brute_force(SpinPolynomial(17), return_minimizers=True)

    def test_to_dict(self):
        document = brute_force(ZZ).to_dict()
        assert document["best_assignment"] == [1, -1]
        assert document["best_energy"] == -1.0
        assert document["method"] == "brute_force"
        assert document["seed_used"] is None


class TestAnnealSchedule:
    def test_betas_are_geometric(self):
        betas = AnnealSchedule(sweeps=5, beta_initial=1.0, beta_final=16.0).betas()
        assert betas == pytest.approx([1.0, 2.0, 4.0, 8.0, 16.0])

    @pytest.mark.parametrize("fields", [
        {'beta_initial': 2.0, 'beta_final': 1.0},
        {'sweeps': 0},
        {'restarts': 0},
        {'beta_initial': 0.0},
        {'seed': -1},
    ])
    def test_rejects_invalid(self, fields):
        with pytest.raises(ValidationError):
            AnnealSchedule(**fields)

    def test_from_config_applies_overrides(self):
        schedule = AnnealSchedule.from_config(sweeps=7, seed=None)
        assert schedule.sweeps == 7
        assert schedule.seed == 0
        assert schedule.beta_final == 50.0


class TestSimulatedAnnealing:
    schedule = AnnealSchedule(sweeps=200, beta_initial=0.1, beta_final=50.0, restarts=4, seed=11)

    def test_reported_energy_is_exact(self, rng):
        poly = random_polynomial(rng, 10)
        result = simulated_annealing(poly, self.schedule)
        assert result.best_energy == evaluate(poly, result.best_assignment)
        assert len(result.per_restart_energies) == 4
        assert min(result.per_restart_energies) == result.best_energy
        assert result.seed_used == 11
        assert result.method == "simulated_annealing"

    def test_same_seed_same_result(self, rng):
        poly = random_polynomial(rng, 9)
        first = simulated_annealing(poly, self.schedule)
        second = simulated_annealing(poly, self.schedule)
        assert first.best_assignment.tolist() == second.best_assignment.tolist()
        assert first.per_restart_energies == second.per_restart_energies

    def test_frozen_schedule_ends_in_local_minimum(self, rng):
        poly = random_polynomial(rng, 10)
        frozen = AnnealSchedule(sweeps=30, beta_initial=1e6, beta_final=1e6, restarts=1, seed=2)
        result = simulated_annealing(poly, frozen)
        model = polynomial_energy(poly)
        model.reset(result.best_assignment)
        assert all(model.delta(i) >= -1e-12 for i in range(10))

    def test_finds_brute_force_optimum(self, two_blobs):
        poly = build_objective(ObjectiveKind.COMBINED, two_blobs)
        exact = brute_force(poly)
        annealed = simulated_annealing(poly, self.schedule)
        assert annealed.best_energy == pytest.approx(exact.best_energy, rel=1e-9)
        assert same_partition(annealed.best_assignment, exact.best_assignment)

    def test_quartic_polynomial_with_verification(self, random_dataset):
        poly = build_inter(random_dataset(7, 2, seed=4))
        result = simulated_annealing(poly, self.schedule, verify=True)
        assert result.best_energy == pytest.approx(brute_force(poly).best_energy, rel=1e-9)

    def test_incremental_models_track_energy(self, rng):
        for degree in (2, 4):
            poly = random_polynomial(rng, 8, max_degree=degree, num_terms=30)
            model = polynomial_energy(poly)
            model.reset(rng.choice([-1, 1], size=8))
            for i in rng.integers(0, 8, size=25):
                model.flip(int(i), model.delta(int(i)))
                assert model.current == pytest.approx(evaluate(poly, model.z[:8]), abs=1e-9)

    def test_empty_problem_rejected(self):
        with pytest.raises(DataError):
            simulated_annealing(SpinPolynomial(0), self.schedule)


class TestAnnealObjective:
    schedule = AnnealSchedule(sweeps=150, restarts=4, seed=5)

    def test_large_inter_uses_cluster_moments(self, random_dataset):
        data = random_dataset(8, 2, seed=12)
        result = anneal_objective("inter", data, self.schedule, verify=True, max_quartic_vars=5)
        assert result.best_energy == pytest.approx(raw_objective(ObjectiveKind.INTER, data, result.best_assignment))
        assert result.best_energy == pytest.approx(brute_force(build_inter(data)).best_energy, rel=1e-6)

    @pytest.mark.parametrize("kind", ["combined", "intra*", "maxcut"])
    def test_energies_are_raw_objective_values(self, kind, random_dataset):
        data = random_dataset(8, 3, seed=1)
        result = anneal_objective(kind, data, self.schedule)
        expected = raw_objective(kind, data, result.best_assignment)
        assert result.best_energy == pytest.approx(expected, rel=1e-9, abs=1e-9)


@pytest.mark.slow
class TestAnnealingMatchesExactOptimum:
    """Default-schedule annealing against brute force on 16-point subsamples"""

    @pytest.fixture(scope="class")
    def gaussian(self):
        return generate_gaussian(GaussianSpec.from_config())

    @pytest.mark.parametrize("kind, required", [
        (ObjectiveKind.WEIGHTED_MAXCUT, 0.9),
        (ObjectiveKind.INTRA, 0.9),
        (ObjectiveKind.INTRA_STAR, 0.9),
        (ObjectiveKind.COMBINED, 0.9),
        (ObjectiveKind.INTER, 0.8),
    ])
    def test_success_rate(self, gaussian, kind, required):
        hits = 0
        for seed in range(20):
            rows = np.random.default_rng(seed).choice(gaussian.num_points, size=16, replace=False)
            poly = build_objective(kind, Dataset(points=gaussian.points[rows]))
            exact = brute_force(poly).best_energy
            annealed = simulated_annealing(poly, AnnealSchedule.from_config(seed=seed)).best_energy
            hits += annealed <= exact + 1e-9 * max(1.0, abs(exact))
        assert hits / 20 >= required


class TestQuadratize:
    def test_quadratic_passthrough(self, rng):
        poly = random_polynomial(rng, 5)
        form, var_map = quadratize(poly)
        assert var_map.auxiliaries == {}
        assert form.num_vars == 5
        expected = spin_to_binary(poly)
        assert form.offset == expected.offset
        assert dict(form.quadratic) == dict(expected.quadratic)

    def test_quartic_term(self):
        poly = SpinPolynomial(4, terms={(0, 1, 2, 3): 1.0})
        form, var_map = quadratize(poly)
        assert form.num_vars > 4
        assert all(len(pair) == 2 for pair in form.quadratic)
        check = verify_quadratization(poly, form, var_map)
        assert check.sound
        assert check.original_minimum == -1.0
        assert len(check.original_minimizers) == 8

    def test_cubic_term_with_default_penalty(self):
        poly = SpinPolynomial(3, terms={(0, 1, 2): -1.0})
        form, var_map = quadratize(poly)
        check = verify_quadratization(poly, form, var_map)
        assert check.sound
        assert check.form_minimum == pytest.approx(-1.0)

    def test_small_penalty_admits_cheating(self):
        poly = SpinPolynomial(3, terms={(0, 1, 2): -1.0})
        form, var_map = quadratize(poly, penalty=0.01)
        check = verify_quadratization(poly, form, var_map)
        assert not check.sound
        assert check.form_minimum < check.original_minimum

    @pytest.mark.parametrize("seed", range(50))
    def test_inter_objective(self, random_dataset, seed):
        poly = build_inter(random_dataset(4 + seed % 3, 2, seed=seed))
        form, var_map = quadratize(poly)
        assert len(var_map.auxiliaries) > 0
        assert var_map.num_vars == form.num_vars
        assert verify_quadratization(poly, form, var_map).sound

    def test_faithful_auxiliaries_reproduce_energies(self, rng):
        poly = random_polynomial(rng, 6, max_degree=4, num_terms=25)
        form, var_map = quadratize(poly)
        for z in rng.choice([-1, 1], size=(20, 6)):
            y = var_map.extend((1 + z) // 2)
            assert form.evaluate(y) == pytest.approx(evaluate(poly, z), abs=1e-8)

    def test_rejects_non_positive_penalty(self):
        with pytest.raises(ConstraintError):
            quadratize(SpinPolynomial(3, terms={(0, 1, 2): 1.0}), penalty=0.0)

    def test_verification_size_guard(self):
        poly = SpinPolynomial(4, terms={(0, 1, 2, 3): 1.0})
        form, var_map = quadratize(poly)
        with pytest.raises(ProblemTooLargeError):
            verify_quadratization(poly, form, var_map, max_vars=4)

    def test_variable_map(self):
        var_map = VariableMap(num_original=3, auxiliaries={3: (0, 1), 4: (2, 3)})
        assert var_map.extend([1, 1, 1]).tolist() == [1, 1, 1, 1, 1]
        assert var_map.extend([1, 0, 1]).tolist() == [1, 0, 1, 0, 0]
        assert var_map.project([1, 0, 1, 0, 0]).tolist() == [1, 0, 1]


class TestKMeans:
    def test_recovers_separated_blobs(self, two_blobs):
        labels = kmeans_baseline(two_blobs, k=2, seed=3)
        assert same_partition(labels_to_spins(labels), labels_to_spins(two_blobs.labels))

    def test_three_clusters(self, three_blobs):
        labels = kmeans_baseline(three_blobs, k=3)
        assert len(set(labels.tolist())) == 3
        for block in range(3):
            assert len(set(labels[4 * block:4 * block + 4].tolist())) == 1

    @pytest.mark.parametrize("k", [1, 11])
    def test_rejects_bad_k(self, two_blobs, k):
        with pytest.raises(DataError):
            kmeans_baseline(two_blobs, k=k)

    def test_labels_to_spins(self):
        assert labels_to_spins([0, 1, 2, 0]).tolist() == [1, -1, -1, 1]

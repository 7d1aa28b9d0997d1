import math

import numpy as np
import pytest

import seqmeas as sm

KET0 = np.array([1, 0], dtype=complex)


def test_spectral_decompose_pauli_x():
    sd = sm.spectral_decompose(sm.pauli_x())
    assert sd.eigenvalues == pytest.approx([-1.0, 1.0], abs=1e-12)
    np.testing.assert_allclose(sd.projectors[1], 0.5 * np.ones((2, 2)), atol=1e-12)
    np.testing.assert_allclose(sm.reconstruct(sd), sm.pauli_x(), atol=1e-12)


def test_sequential_joint_and_gap():
    table = sm.sequential_joint(KET0, sm.pauli_z(), sm.pauli_x(), "z", "x")
    # rows: first outcome -1, +1
    np.testing.assert_allclose(table["q"], [[0.0, 0.0], [0.5, 0.5]], atol=1e-12)
    assert table["order"] == ("z", "x")
    assert sm.order_symmetry_gap(KET0, sm.pauli_z(), sm.pauli_x()) == pytest.approx(0.25, abs=1e-12)


def test_numpy_oracle_for_sequential_joint():
    rng = np.random.default_rng(1)
    for _ in range(20):
        m = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        n = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        a, b = (m + m.conj().T) / 2, (n + n.conj().T) / 2
        psi = sm.normalize(rng.normal(size=3) + 1j * rng.normal(size=3))
        sa, sb = sm.spectral_decompose(a), sm.spectral_decompose(b)
        q = sm.sequential_joint(psi, sa, sb)["q"]
        for i, pa in enumerate(sa.projectors):
            for j, pb in enumerate(sb.projectors):
                assert q[i, j] == pytest.approx(np.linalg.norm(pb @ pa @ psi) ** 2, abs=1e-12)


def test_errors_are_value_errors():
    with pytest.raises(sm.ZeroProbabilityError):
        sm.luders_collapse(KET0, sm.pauli_z(), 0)
    with pytest.raises(sm.NotHermitianError):
        sm.spectral_decompose(np.array([[0, 1], [0, 0]], dtype=complex))
    with pytest.raises(ValueError):
        sm.born_probability(np.array([1, 1], dtype=complex), sm.pauli_z(), 0)


def test_singlet_correlation():
    a = sm.AngleSetting(0.0, sm.Leg.first)
    b = sm.AngleSetting(math.pi / 3, sm.Leg.second)
    assert sm.correlation(a, b) == pytest.approx(-0.5, abs=1e-12)
    d = sm.conditional_decomposition(a, b)
    assert d["identity_holds"]
    with pytest.raises(sm.LegMismatchError):
        sm.correlation(a, a)


def test_bell_and_chsh():
    r = sm.bell_inequality_report(0.0, math.pi / 3, 2 * math.pi / 3)
    assert r["paper_form"]["satisfied"]
    assert not r["textbook_form"]["satisfied"]
    s = sm.chsh(
        sm.AngleSetting(0.0, sm.Leg.first),
        sm.AngleSetting(math.pi / 2, sm.Leg.first),
        sm.AngleSetting(math.pi / 4, sm.Leg.second),
        sm.AngleSetting(3 * math.pi / 4, sm.Leg.second),
    )
    assert abs(s) == pytest.approx(2 * math.sqrt(2), abs=1e-10)


def test_simulation_is_deterministic():
    c = sm.SimConfig()
    c.n_pairs = 5000
    c.theta_a, c.theta_b = 0.2, 1.1
    c.window_delta = math.inf
    c.seed = 4
    first = sm.empirical_correlation(c)
    assert first == sm.empirical_correlation(c, workers=3)
    assert abs(first["e_hat"] + math.cos(0.9)) <= 4 * first["std_err"]
    events = sm.run_experiment(c)
    assert len(events) == 5000
    assert sm.match_coincidences(events, c)["n_matched"] == 5000


def test_feasibility():
    problem = {
        "variables": ["A1", "A2", "B1", "B2"],
        "pairwise": [
            {"x": "A1", "y": "B1", "correlation": -math.sqrt(0.5)},
            {"x": "A1", "y": "B2", "correlation": math.sqrt(0.5)},
            {"x": "A2", "y": "B1", "correlation": -math.sqrt(0.5)},
            {"x": "A2", "y": "B2", "correlation": -math.sqrt(0.5)},
        ],
    }
    assert sm.solve_feasibility(problem)["status"] == "infeasible"
    for entry in problem["pairwise"]:
        entry["correlation"] = 0.0
    result = sm.solve_feasibility(problem)
    assert result["status"] == "feasible"
    assert sum(result["witness"]) == pytest.approx(1.0)
    with pytest.raises(sm.MalformedProblemError):
        sm.solve_feasibility({"variables": ["a"], "pairwise": [{"x": "a", "y": "b", "correlation": 0}]})

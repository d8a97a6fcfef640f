import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import minimize_scalar

from anthill.antenna import (
    AMPLITUDES_AND_PHASES,
    DB_FLOOR,
    ArrayGeometry,
    Excitation,
    RadiationPattern,
    SynthesisProblem,
    array_factor,
    compute_pattern,
    extract_metrics,
    synthesis_fitness,
    theta_grid,
    write_pattern_csv,
)

UNIFORM_10_SLL = -12.966168393846736  # continuous optimum of the N=10 Dirichlet kernel, see below


def dirichlet_db(u, n):
    psi = np.pi * u
    return 20 * np.log10(abs(np.sin(n * psi / 2) / (n * np.sin(psi / 2))))


def continuous_max_sll(n):
    """Oracle: maximize each half-wave-spaced side lobe between its analytic nulls."""
    nulls = [k / n * 2 for k in range(1, n // 2 + 1)]  # u = 2k/n with d = 0.5
    edges = nulls + ([1.0] if nulls[-1] < 1.0 else [])
    best = -np.inf
    for a, b in zip(edges, edges[1:]):
        r = minimize_scalar(lambda u: -dirichlet_db(u, n), bounds=(a + 1e-9, b - 1e-12),
                            method="bounded", options={"xatol": 1e-12})
        best = max(best, -r.fun, dirichlet_db(b, n) if b == 1.0 else -np.inf)
    return best


def lobe_count_oracle(n, d=0.5):
    """Side lobes over 0..180 deg from the analytic null set in u = cos(theta)."""
    nulls = sorted({k / (n * d) for k in range(-n * 4, n * 4 + 1)
                    if k % n and abs(k / (n * d)) <= 1.0})
    edges = sorted(set([-1.0] + nulls + [1.0]))
    segments = [(a, b) for a, b in zip(edges, edges[1:]) if b > a]
    return len(segments) - 1  # minus the main lobe around u = 0


def test_oracle_value_pinned():
    assert continuous_max_sll(10) == pytest.approx(UNIFORM_10_SLL, abs=1e-9)


# -- array factor -----------------------------------------------------------

def test_array_factor_examples():
    two = ArrayGeometry(2, 0.5)
    assert abs(array_factor(two, Excitation.uniform(2), 90.0)) == pytest.approx(2.0)
    assert abs(array_factor(two, Excitation.uniform(2), 0.0)) == pytest.approx(0.0, abs=1e-12)
    assert abs(array_factor(ArrayGeometry(10, 0.5), Excitation.uniform(10), 90.0)) == pytest.approx(10.0)


def test_array_factor_matches_closed_form():
    g = ArrayGeometry(7, 0.5)
    for th in np.linspace(1, 179, 37):
        u = np.cos(np.deg2rad(th))
        assert abs(array_factor(g, Excitation.uniform(7), th)) / 7 == pytest.approx(
            10 ** (dirichlet_db(u, 7) / 20), rel=1e-9, abs=1e-12)


def test_array_factor_rejects_bad_input():
    with pytest.raises(ValueError):
        array_factor(ArrayGeometry(3), Excitation.uniform(3), 181.0)
    with pytest.raises(ValueError):
        array_factor(ArrayGeometry(3), Excitation.uniform(4), 90.0)
    with pytest.raises(ValueError):
        Excitation([1.0, 0.0])
    with pytest.raises(ValueError):
        ArrayGeometry(1)


# -- patterns ---------------------------------------------------------------

def test_uniform_pattern_peak_and_nulls():
    p = compute_pattern(ArrayGeometry(10, 0.5), Excitation.uniform(10), 0.1)
    assert p.magnitude_db.max() == 0.0
    assert p.theta_deg[np.argmax(p.magnitude_db)] == 90.0
    assert np.all(np.diff(p.theta_deg) > 0)
    m = p.magnitude_db
    minima_idx = 1 + np.flatnonzero((m[1:-1] < m[:-2]) & (m[1:-1] < m[2:]))
    null_u = np.sort(np.cos(np.deg2rad(p.theta_deg[minima_idx])))
    expected = np.array([-0.8, -0.6, -0.4, -0.2, 0.2, 0.4, 0.6, 0.8])
    # within one grid step in theta, i.e. |du| <= sin(theta) * 0.1 deg
    assert np.allclose(null_u, expected, atol=np.deg2rad(0.1))


def test_pattern_amplitude_scaling():
    g = ArrayGeometry(6, 0.7)
    a = np.array([1.0, 1.3, 2.0, 2.0, 1.3, 1.0])
    p1 = compute_pattern(g, Excitation(a))
    p2 = compute_pattern(g, Excitation(3.7 * a))
    assert np.allclose(p1.magnitude_db, p2.magnitude_db, atol=1e-9)


def test_pattern_floor_and_zero_pattern():
    p = compute_pattern(ArrayGeometry(2, 0.5), Excitation.uniform(2), 0.1)
    assert p.magnitude_db.min() >= DB_FLOOR
    with pytest.raises(ValueError):
        theta_grid(0.7)
    with pytest.raises(ValueError):
        theta_grid(2.0)


# -- metrics ----------------------------------------------------------------

@pytest.mark.parametrize("res", [0.1, 0.01])
def test_uniform_ten_metrics(res):
    m = extract_metrics(compute_pattern(ArrayGeometry(10, 0.5), Excitation.uniform(10), res))
    assert len(m.sidelobe_peaks) == 8
    assert m.max_sll_db == pytest.approx(UNIFORM_10_SLL, abs=0.05)
    assert m.max_sll_db == max(l for _, l in m.sidelobe_peaks)
    assert m.main_lobe_theta_deg == 90.0
    assert m.first_null_left_deg < 90 < m.first_null_right_deg
    assert all(not (m.first_null_left_deg <= a <= m.first_null_right_deg) for a, _ in m.sidelobe_peaks)
    assert m.grating_lobes == []


def test_two_element_has_no_side_lobes():
    m = extract_metrics(compute_pattern(ArrayGeometry(2, 0.5), Excitation.uniform(2), 0.01))
    assert m.sidelobe_peaks == []
    assert m.max_sll_db == DB_FLOOR


@pytest.mark.parametrize("n", range(3, 13))
def test_side_lobe_count_against_null_oracle(n):
    m = extract_metrics(compute_pattern(ArrayGeometry(n, 0.5), Excitation.uniform(n), 0.01))
    assert len(m.sidelobe_peaks) == lobe_count_oracle(n)
    # even n: N-2; odd n adds the end-fire half lobes at 0 and 180 degrees
    assert len(m.sidelobe_peaks) == (n - 2 if n % 2 == 0 else n - 1)


@pytest.mark.parametrize("n", [4, 7, 10, 16])
def test_max_sll_against_continuous_oracle(n):
    m = extract_metrics(compute_pattern(ArrayGeometry(n, 0.5), Excitation.uniform(n), 0.01))
    assert m.max_sll_db == pytest.approx(continuous_max_sll(n), abs=0.05)


def test_grid_independence():
    g, e = ArrayGeometry(10, 0.5), Excitation.uniform(10)
    coarse = extract_metrics(compute_pattern(g, e, 0.1)).max_sll_db
    fine = extract_metrics(compute_pattern(g, e, 0.01)).max_sll_db
    assert abs(coarse - fine) < 0.05


def test_grating_lobe_reported_and_counted():
    # one-wavelength spacing puts full-height lobes at end-fire
    m = extract_metrics(compute_pattern(ArrayGeometry(8, 1.0), Excitation.uniform(8), 0.1))
    assert m.grating_lobes
    assert m.max_sll_db == pytest.approx(0.0, abs=0.5)


def test_null_depth_queries():
    p = compute_pattern(ArrayGeometry(10, 0.5), Excitation.uniform(10), 0.1)
    m = extract_metrics(p, [78.463, 60.0])
    assert m.null_depths_db[78.463] < -35
    assert m.null_depths_db[60.0] == p.level_at(60.0)


def test_flat_pattern_rejected():
    p = RadiationPattern(np.linspace(0, 180, 181), np.zeros(181))
    with pytest.raises(ValueError):
        extract_metrics(p)


# -- synthesis problem --------------------------------------------------------

def test_uniform_fitness_equals_oracle():
    prob = SynthesisProblem(ArrayGeometry(10, 0.5))
    assert prob.dimension == 10
    assert synthesis_fitness(prob, np.full(10, 1.7)) == pytest.approx(UNIFORM_10_SLL, abs=0.05)


def test_zero_null_weight_ignores_targets():
    base = SynthesisProblem(ArrayGeometry(10, 0.5))
    nulls = SynthesisProblem(ArrayGeometry(10, 0.5), null_targets=[(60.0, -80.0)], null_weight=0.0)
    x = np.linspace(1.0, 2.4, 10)
    assert nulls(x) == base(x)


def test_null_penalty_is_hinge():
    x = np.full(10, 2.0)
    lvl = compute_pattern(ArrayGeometry(10, 0.5), Excitation(x)).level_at(60.0)
    base = SynthesisProblem(ArrayGeometry(10, 0.5))(x)
    loose = SynthesisProblem(ArrayGeometry(10, 0.5), null_targets=[(60.0, lvl + 5)], null_weight=2.0)
    tight = SynthesisProblem(ArrayGeometry(10, 0.5), null_targets=[(60.0, lvl - 5)], null_weight=2.0)
    assert loose(x) == base
    assert tight(x) == pytest.approx(base + 2.0 * 5, abs=1e-9)


def test_symmetric_decoding():
    prob = SynthesisProblem(ArrayGeometry(10, 0.5), symmetric=True)
    assert prob.dimension == 5
    a = prob.decode([1.0, 1.2, 1.5, 2.0, 2.4]).amplitudes
    assert a.tolist() == a[::-1].tolist()
    odd = SynthesisProblem(ArrayGeometry(7, 0.5), symmetric=True, variables=AMPLITUDES_AND_PHASES)
    exc = odd.decode([1.0, 1.5, 2.0, 2.4, 90.0, 100.0, 120.0, 180.0])
    assert exc.amplitudes.tolist() == [1.0, 1.5, 2.0, 2.4, 2.0, 1.5, 1.0]
    assert exc.phases_deg.tolist() == [90.0, 100.0, 120.0, 180.0, 120.0, 100.0, 90.0]
    assert np.array_equal(odd.encode(exc), [1.0, 1.5, 2.0, 2.4, 90.0, 100.0, 120.0, 180.0])


def test_search_space_bounds():
    prob = SynthesisProblem(ArrayGeometry(4, 0.5), variables=AMPLITUDES_AND_PHASES)
    sp = prob.space
    assert sp.lower.tolist() == [1.0] * 4 + [90.0] * 4
    assert sp.upper.tolist() == [2.4] * 4 + [180.0] * 4


def test_problem_validation():
    g = ArrayGeometry(4, 0.5)
    with pytest.raises(ValueError):
        SynthesisProblem(g)(np.ones(3))
    with pytest.raises(ValueError):
        SynthesisProblem(g, null_targets=[(0.0, -40.0)])
    with pytest.raises(ValueError):
        SynthesisProblem(g, amplitude_bounds=(2.0, 1.0))
    with pytest.raises(ValueError):
        SynthesisProblem(g, variables="phases")
    with pytest.raises(ValueError):
        SynthesisProblem(g, null_weight=-1)


amp_vec = st.lists(st.floats(1.0, 2.4), min_size=10, max_size=10)


@settings(max_examples=30, deadline=None)
@given(amp_vec, st.floats(0.01, 100))
def test_fitness_scaling_invariance(a, c):
    prob = SynthesisProblem(ArrayGeometry(10, 0.5))
    a = np.array(a)
    assert prob.fitness_of(Excitation(c * a)) == pytest.approx(prob.fitness_of(Excitation(a)), abs=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0.1, 5.0), min_size=2, max_size=8), st.floats(0.2, 1.2))
def test_mirror_symmetry_of_palindromic_arrays(half, d):
    a = np.array(half + half[::-1])
    p = compute_pattern(ArrayGeometry(a.size, d), Excitation(a), 0.1)
    assert np.allclose(p.magnitude_db, p.magnitude_db[::-1], atol=1e-9)
    m1 = extract_metrics(p).max_sll_db
    m2 = extract_metrics(p.mirrored()).max_sll_db
    assert m1 == pytest.approx(m2, abs=1e-9)


def test_pattern_csv_format(tmp_path):
    p = compute_pattern(ArrayGeometry(4, 0.5), Excitation.uniform(4), 0.5)
    path = tmp_path / "p.csv"
    write_pattern_csv(p, path)
    lines = path.read_bytes().decode().split("\n")
    assert lines[0] == "theta_deg,af_db"
    assert len(lines) == 361 + 2  # header, rows, trailing newline
    assert lines[1].startswith("0.000000,")
    assert lines[181] == "90.000000,0.000000"
    assert b"\r" not in path.read_bytes()

import math

import numpy as np
import pytest
import scipy.linalg

from duomech import (
    PhysicalParams,
    StabilityError,
    SystemMatrices,
    build_drift,
    build_noise,
    check_stability,
    derive,
    extract_block,
    solve_lyapunov,
    symplectic_spectrum,
    system_matrices,
    write_matrix,
)
from duomech.params import DerivedParams

TWO_PI = 2 * math.pi
KAPPA = TWO_PI * 14000.0
GAMMA = TWO_PI * 140.0

# frozen with an independent Schur-based solve (scipy) at the reference point
FIG3_SIGMA1 = 1.8969207660395373
FIG3_SIGMA12 = 0.6141997172192335
FIG3_SIGMA13 = 1.497746351754473


def reference_params(**overrides) -> PhysicalParams:
    base = dict(
        omega_m=TWO_PI * 947e3, gamma=GAMMA, mass=145e-12, cavity_length=25e-3,
        omega_c=TWO_PI * 5.26e14, omega_l=TWO_PI * 2.82e14, kappa=KAPPA,
        temperature=1e-4, squeezing_r=1.0, hopping_lambda=0.2 * KAPPA,
        cooperativity=32.11,
    )
    base.update(overrides)
    return PhysicalParams(**base)


def hand_built_drift(coupling, gamma, kappa, lam):
    """Entry-by-entry reference, written out independently of build_drift."""
    g2, k2 = gamma / 2.0, kappa / 2.0
    G, L = coupling, lam
    return np.array([
        [-g2, 0.0, 0.0, 0.0, G, 0.0, 0.0, 0.0],
        [0.0, -g2, 0.0, 0.0, 0.0, G, 0.0, 0.0],
        [0.0, 0.0, -g2, 0.0, 0.0, 0.0, G, 0.0],
        [0.0, 0.0, 0.0, -g2, 0.0, 0.0, 0.0, G],
        [-G, 0.0, 0.0, 0.0, -k2, 0.0, 0.0, -L],
        [0.0, -G, 0.0, 0.0, 0.0, -k2, L, 0.0],
        [0.0, 0.0, -G, 0.0, 0.0, -L, -k2, 0.0],
        [0.0, 0.0, 0.0, -G, L, 0.0, 0.0, -k2],
    ])


class TestBuildDrift:
    def test_decoupled_damping(self):
        d = derive(reference_params(cooperativity=0.0, hopping_lambda=0.0))
        w = build_drift(d)
        expected = np.diag([-GAMMA / 2] * 4 + [-KAPPA / 2] * 4)
        assert np.array_equal(w, expected)

    def test_beam_splitter_antisymmetry(self):
        w = build_drift(derive(reference_params()))
        g = math.sqrt(32.11 * GAMMA * KAPPA / 4.0)
        assert w[0, 4] == pytest.approx(g, rel=1e-12)
        assert w[4, 0] == pytest.approx(-g, rel=1e-12)

    def test_matches_hand_built_reference(self):
        d = derive(reference_params())
        expected = hand_built_drift(d.coupling, GAMMA, KAPPA, 0.2 * KAPPA)
        assert np.array_equal(build_drift(d), expected)
        assert d.coupling == pytest.approx(2.49e4, rel=2e-3)


class TestBuildNoise:
    def test_vacuum_inputs(self):
        d = derive(reference_params(squeezing_r=0.0, temperature=0.0))
        r = build_noise(d)
        assert np.array_equal(r, np.diag([GAMMA / 2] * 4 + [KAPPA / 2] * 4))

    def test_squeezed_cross_entries(self):
        r = build_noise(derive(reference_params(squeezing_r=1.0)))
        m = 1.8134302039235093  # sinh(1) cosh(1)
        assert r[4, 6] == pytest.approx(m * KAPPA, rel=1e-12)
        assert r[5, 7] == pytest.approx(-m * KAPPA, rel=1e-12)
        assert np.array_equal(r, r.T)

    @pytest.mark.parametrize("r_sq,temp", [(0.0, 0.0), (1.0, 1e-4), (3.0, 1e-3),
                                           (5.0, 0.0)])
    def test_positive_semidefinite(self, r_sq, temp):
        noise = build_noise(derive(reference_params(squeezing_r=r_sq, temperature=temp)))
        assert np.linalg.eigvalsh(noise).min() >= 0.0


class TestCheckStability:
    def test_damped_decoupled_system(self):
        d = derive(reference_params(cooperativity=0.0, hopping_lambda=0.0))
        report = check_stability(build_drift(d))
        assert report.verdict == "stable"
        assert report.max_real == pytest.approx(-GAMMA / 2, rel=1e-9)

    def test_driven_system_is_stable(self):
        report = check_stability(build_drift(derive(reference_params())))
        assert report.is_stable

    def test_no_dissipation_is_marginal(self):
        # pure beam-splitter rotation, no damping
        d = DerivedParams(n_th=0.0, n_sq=0.0, m_sq=0.0, coupling=1e3,
                          cooperativity=1.0, xi=0.0, phi=0.0, gamma_prime=0.0,
                          kappa_prime=0.0, gamma=0.0, kappa=0.0, hopping_lambda=0.0)
        assert check_stability(build_drift(d)).verdict == "marginal"

    def test_growth_is_unstable(self):
        assert check_stability(np.eye(3), scale=1.0).verdict == "unstable"

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            check_stability(np.zeros((2, 3)))


class TestSolveLyapunov:
    def test_undriven_mechanical_block_is_thermal(self):
        d = derive(reference_params(cooperativity=0.0))
        state = solve_lyapunov(system_matrices(d))
        expected = (d.n_th + 0.5) * np.eye(4)
        assert np.max(np.abs(state.mechanical_block - expected)) < 1e-10

    def test_decoupled_optical_block(self):
        # G = 0, lambda = 0: -kappa sigma + R = 0 so sigma_opt = R_opt / kappa
        d = derive(reference_params(cooperativity=0.0, hopping_lambda=0.0))
        state = solve_lyapunov(system_matrices(d))
        opt = extract_block(state, "optical")
        n, m = d.n_sq, d.m_sq
        expected = np.diag([n + 0.5] * 4)
        expected[0, 2] = expected[2, 0] = m
        expected[1, 3] = expected[3, 1] = -m
        assert np.max(np.abs(opt - expected)) < 1e-12 * (n + 0.5)

    def test_reference_point_regression(self):
        state = solve_lyapunov(system_matrices(derive(reference_params(gamma=0.01 * KAPPA))))
        mech = state.mechanical_block
        assert mech[0, 0] == pytest.approx(FIG3_SIGMA1, rel=1e-9)
        assert mech[0, 1] == pytest.approx(FIG3_SIGMA12, rel=1e-9)
        assert mech[0, 2] == pytest.approx(FIG3_SIGMA13, rel=1e-9)
        assert state.residual < 1e-10

    @pytest.mark.parametrize("overrides", [
        dict(),
        dict(squeezing_r=0.0),
        dict(hopping_lambda=0.0),
        dict(gamma=0.001 * KAPPA, squeezing_r=2.5),
        dict(temperature=2e-3, hopping_lambda=0.7 * KAPPA),
        dict(cooperativity=150.0, squeezing_r=3.0),
        dict(gamma=1e-4 * KAPPA),       # damping-ratio extremes the rescaled
        dict(gamma=1.0 * KAPPA),        # solve must stay well conditioned at
    ])
    def test_agrees_with_schur_oracle(self, overrides):
        matrices = system_matrices(derive(reference_params(**overrides)))
        state = solve_lyapunov(matrices)
        wk = matrices.drift / KAPPA
        rk = matrices.noise / KAPPA
        oracle = scipy.linalg.solve_continuous_lyapunov(wk, -rk)
        scale = np.max(np.abs(oracle))
        assert np.max(np.abs(state.full - oracle)) < 1e-11 * scale

    def test_refuses_unstable_drift(self):
        bad = SystemMatrices(drift=np.eye(8), noise=np.eye(8))
        with pytest.raises(StabilityError, match="unstable"):
            solve_lyapunov(bad)


class TestExtractBlock:
    def test_index_bookkeeping(self):
        sigma = np.arange(64, dtype=float).reshape(8, 8)
        sigma = 0.5 * (sigma + sigma.T)
        state_like = sigma
        assert np.array_equal(extract_block(state_like, "mechanical"), sigma[:4, :4])
        assert np.array_equal(extract_block(state_like, "optical"), sigma[4:, 4:])
        assert np.array_equal(
            extract_block(state_like, "mechanical-optical"), sigma[:4, 4:]
        )

    def test_invalid_selector(self):
        with pytest.raises(ValueError, match="mode pair"):
            extract_block(np.eye(8), "acoustic")


@pytest.fixture(scope="module")
def states():
    cases = [
        reference_params(),
        reference_params(gamma=0.001 * KAPPA, squeezing_r=2.0),
        reference_params(hopping_lambda=0.6 * KAPPA, temperature=8e-4),
        reference_params(squeezing_r=0.0, temperature=0.0),
    ]
    return [(p, solve_lyapunov(system_matrices(derive(p)))) for p in cases]


class TestCovarianceInvariants:

    def test_exchange_symmetry(self, states):
        # swapping cavity labels 1 <-> 2 permutes indices (0,1)<->(2,3), (4,5)<->(6,7)
        perm = [2, 3, 0, 1, 6, 7, 4, 5]
        for _, state in states:
            swapped = state.full[np.ix_(perm, perm)]
            assert np.max(np.abs(swapped - state.full)) < 1e-12 * np.max(np.abs(state.full))

    def test_physicality(self, states):
        for _, state in states:
            assert symplectic_spectrum(state.full).min() >= 0.5 - 1e-9

    def test_mechanical_block_pattern(self, states):
        for _, state in states:
            mech = state.mechanical_block
            assert abs(mech[0, 0] - mech[2, 2]) < 1e-10 * abs(mech[0, 0])
            assert abs(mech[0, 2] + mech[1, 3]) < 1e-10 * abs(mech[0, 0])

    def test_continuity_under_small_perturbation(self):
        base = reference_params(gamma=0.01 * KAPPA)
        ref = solve_lyapunov(system_matrices(derive(base))).full
        scale = np.max(np.abs(ref))
        for field in ("squeezing_r", "hopping_lambda", "temperature", "gamma",
                      "cooperativity"):
            bumped = base.with_updates(**{field: getattr(base, field) * 1.001})
            new = solve_lyapunov(system_matrices(derive(bumped))).full
            assert np.max(np.abs(new - ref)) < 0.01 * scale


def test_write_matrix_format(tmp_path):
    m = np.array([[1.0 / 3.0, 2.0], [-1e-17, 4.0]])
    path = tmp_path / "m.txt"
    write_matrix(m, path)
    lines = path.read_text().splitlines()
    assert len(lines) == 2
    assert lines[0].split()[0] == "0.33333333333333331"
    back = np.loadtxt(path)
    assert np.array_equal(back, m)

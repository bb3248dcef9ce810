import csv
import math

import numpy as np
import pytest
from scipy.constants import c, hbar

from _oracles import evolve_to_steady, random_lambda_params
from slowgyro.bloch import (VEC_LABELS, build_generator, coherence_rho21,
                            dump_generator_csv, first_order_correction,
                            nonlocal_neglect_ratio, steady_state)
from slowgyro.errors import (DegenerateEITError, DegenerateSteadyStateError,
                             ExpansionWarning, NonpositiveStateWarning)
from slowgyro.params import RB87, AtomSpecies
from slowgyro.polariton import absorption_exact, polariton_state

GAMMA = 1e7


def make_atom(gamma1=GAMMA, gamma3=GAMMA, gamma13=0.0):
    return AtomSpecies(mass=RB87.mass, dipole_p=RB87.dipole_p,
                       gamma1=gamma1, gamma3=gamma3, gamma13=gamma13)


class TestGeneratorStructure:
    def test_rho12_diagonal_entry(self):
        # the optical-coherence damping and Doppler-shifted detuning
        delta2, omega, radius, k_p = 3.3e6, 2e-4, 1.5e-3, 8.05e6
        gen = build_generator(make_atom(), 1e5, 1e6, delta2=delta2,
                              rotation_rate=omega, radius=radius, k_p=k_p)
        expected = -(1j * (delta2 + omega * radius * k_p) + 0.5 * (2 * GAMMA))
        assert gen.m[1, 1] == expected

    def test_population_rows_sum_to_zero_equal_branches(self):
        gen = build_generator(make_atom(), 2.3e5 + 4e4j, 1e6 - 3e5j,
                              delta2=1e6, delta3=-3e5)
        total = gen.m[0] + gen.m[4] + gen.m[8]
        assert np.abs(total).max() == 0.0

    def test_population_rows_sum_to_zero_random(self):
        # unequal branch rates leave at most one rounding ulp in
        # gamma1 - (gamma1 + gamma3) + gamma3
        rng = np.random.default_rng(7)
        for _ in range(10):
            p = random_lambda_params(rng)
            atom = make_atom(p["gamma1"], p["gamma3"], p["gamma13"])
            gen = build_generator(atom, p["rabi_p"], p["rabi_c"],
                                  p["delta2"], p["delta3"])
            total = gen.m[0] + gen.m[4] + gen.m[8]
            assert np.abs(total).max() <= 1e-15 * atom.gamma2

    def test_rate_matrix_with_fields_off_structure(self):
        # population block reduces to classical rates gamma1, gamma3 out of
        # level 2 when probing the matrix at zero probe (control still on,
        # but its couplings only touch coherences and rho22/rho33 exchange)
        atom = make_atom(gamma1=3e6, gamma3=8e6)
        gen = build_generator(atom, 0.0, 1e6)
        pops = np.ix_((0, 4, 8), (0, 4, 8))
        block = gen.m[pops]
        expected = np.array([[0.0, 3e6, 0.0],
                             [0.0, -1.1e7, 0.0],
                             [0.0, 8e6, 0.0]], dtype=complex)
        assert np.abs(block - expected).max() == 0.0

    def test_zero_control_raises(self):
        with pytest.raises(DegenerateEITError):
            build_generator(make_atom(), 1e5, 0.0)

    def test_rotation_enters_only_through_radius(self):
        atom = make_atom(gamma13=1e3)
        gen_spinning = build_generator(atom, 1e5, 1e6, rotation_rate=10.0,
                                       radius=0.0, k_p=8e6)
        gen_static = build_generator(atom, 1e5, 1e6, rotation_rate=0.0,
                                     radius=0.0, k_p=8e6)
        assert np.array_equal(gen_spinning.m, gen_static.m)

    def test_doppler_shift_equals_detuning_shift(self):
        # Omega*R*k_p enters exactly like a common shift of both detunings
        atom = make_atom(gamma13=1e3)
        omega, radius, k_p = 1e-3, 1.5e-3, 8.05e6
        shift = omega * radius * k_p
        gen_rot = build_generator(atom, 1e5, 1e6, delta2=1e5, delta3=-2e5,
                                  rotation_rate=omega, radius=radius, k_p=k_p)
        gen_shift = build_generator(atom, 1e5, 1e6, delta2=1e5 + shift,
                                    delta3=-2e5 + shift)
        assert np.abs(gen_rot.m - gen_shift.m).max() < 1e-25

    def test_drift_matrix_form(self):
        gen = build_generator(make_atom(), 1e5, 1e6, rotation_rate=1e-3,
                              radius=1.5e-3, v_rec=5.9e-3)
        assert gen.d[0, 0] == 0.0
        assert np.array_equal(np.diag(gen.d)[1:], np.ones(8))
        assert gen.drift_velocity[0] == pytest.approx(1e-3 * 1.5e-3)
        assert gen.drift_velocity[1] == pytest.approx(1e-3 * 1.5e-3 + 5.9e-3)


class TestSteadyState:
    def test_probe_off_all_population_in_ground(self):
        gen = build_generator(make_atom(), 0.0, 1e6)
        rho = steady_state(gen, n=1.0)
        assert rho.rho[0, 0] == pytest.approx(1.0, abs=1e-12)
        assert np.abs(rho.rho).sum() == pytest.approx(1.0, abs=1e-12)

    def test_adiabatic_elimination_weak_probe(self):
        s = 1e-4
        rabi_c = 1e6
        rabi_p = math.sqrt(s) * rabi_c
        gen = build_generator(make_atom(), rabi_p, rabi_c)
        rho = steady_state(gen, n=1.0)
        # dark state: rho13 = -(rabi_p/rabi_c) * n + O(s), rho22 = O(s^2)
        assert rho.rho[0, 2] == pytest.approx(-rabi_p / rabi_c, rel=2 * s)
        assert abs(rho.rho[1, 1]) <= s**2

    def test_matches_time_integration_oracle(self):
        rng = np.random.default_rng(41)
        for _ in range(20):
            p = random_lambda_params(rng)
            atom = make_atom(p["gamma1"], p["gamma3"], p["gamma13"])
            gen = build_generator(atom, p["rabi_p"], p["rabi_c"],
                                  p["delta2"], p["delta3"],
                                  rotation_rate=p["doppler"], radius=1.0,
                                  k_p=1.0)
            rho = steady_state(gen, n=1.0)
            rho_t = evolve_to_steady(gen, n=1.0)
            assert np.abs(rho.rho - rho_t).max() <= 1e-8

    def test_invariants_on_random_draws(self):
        rng = np.random.default_rng(43)
        for _ in range(20):
            p = random_lambda_params(rng)
            atom = make_atom(p["gamma1"], p["gamma3"], p["gamma13"])
            gen = build_generator(atom, p["rabi_p"], p["rabi_c"],
                                  p["delta2"], p["delta3"])
            rho = steady_state(gen, n=1.0)
            assert np.abs(rho.rho - rho.rho.conj().T).max() <= 1e-10
            assert abs(rho.rho.trace() - 1.0) <= 1e-10
            assert np.diag(rho.rho).real.min() >= -1e-10
            vec = rho.rho.reshape(9)
            assert (np.linalg.norm(gen.m @ vec)
                    <= 1e-9 * np.linalg.norm(gen.m) * np.linalg.norm(vec))

    def test_norm_scales_linearly(self):
        gen = build_generator(make_atom(gamma13=1e3), 3e5, 1e6, delta2=1e6)
        rho1 = steady_state(gen, n=1.0)
        rho2 = steady_state(gen, n=2.5e18)
        assert np.abs(rho2.rho - 2.5e18 * rho1.rho).max() <= 1e-9 * 2.5e18

    def test_negative_population_outside_eit_regime_warns(self):
        # strong probe with large detunings: the local equations genuinely
        # converge to a state with a small negative rho33 (the time
        # evolution agrees), which must warn rather than fail
        atom = make_atom(gamma1=1.496e7, gamma3=6.422e6, gamma13=1723.0)
        gen = build_generator(atom, 2.25e7, 1.57e7, delta2=-6.384e7,
                              delta3=-2.807e7)
        with pytest.warns(NonpositiveStateWarning):
            rho = steady_state(gen, n=1.0)
        assert rho.rho[2, 2].real < -1e-4
        rho_t = evolve_to_steady(gen, n=1.0)
        assert np.abs(rho.rho - rho_t).max() <= 1e-8

    def test_degenerate_system_raises_with_null_dimension(self):
        atom = AtomSpecies(mass=RB87.mass, dipole_p=RB87.dipole_p,
                           gamma1=0.0, gamma3=0.0, gamma13=0.0)
        gen = build_generator(atom, 0.0, 1e6)
        with pytest.raises(DegenerateSteadyStateError) as err:
            steady_state(gen, n=1.0)
        assert err.value.null_dim == 2


class TestCoherence:
    def test_pure_ground_state_has_no_coherence(self):
        gen = build_generator(make_atom(), 0.0, 1e6)
        assert coherence_rho21(steady_state(gen, 1.0)) == 0.0

    def test_dark_state_carries_no_optical_coherence(self):
        gen = build_generator(make_atom(gamma13=0.0), 1e5, 1e6)
        assert abs(coherence_rho21(steady_state(gen, 1.0))) <= 1e-12

    def test_absorptive_sign_and_magnitude_vs_susceptibility(self):
        # weak probe, small dephasing: -(g2rho/c) Im rho21 / rabi_p must
        # reproduce k_p chi'' from the closed form
        lam = 780.24e-9
        k_p = 2 * math.pi / lam
        v_rec = hbar * k_p / RB87.mass
        gamma13 = 50.0
        atom = make_atom(gamma13=gamma13)
        rabi_c = 1e6
        rabi_p = 1e3 * math.sqrt(1e-6)
        xi = 1e4  # beta close to 1
        tan2 = c / (v_rec * xi)
        g2rho = tan2 * rabi_c**2
        gen = build_generator(atom, rabi_p, rabi_c)
        rho21 = coherence_rho21(steady_state(gen, 1.0))
        assert rho21.imag < 0.0
        rate_bloch = -(g2rho / c) * rho21.imag / rabi_p
        state = polariton_state(g2rho, rabi_c, rabi_p, 1.0, v_rec, gamma13)
        rate_closed = absorption_exact(state, gamma13, v_rec, k_p)
        assert rate_bloch == pytest.approx(rate_closed, rel=1e-2)

    def test_saturating_dispersion_matches_steady_state(self):
        # the medium part of the phase rate extracted from rho21(+-Omega)
        # must carry the (1+s)^-2 saturation of the closed-form dispersion
        lam = 780.24e-9
        k_p = 2 * math.pi / lam
        v_rec = hbar * k_p / RB87.mass
        atom = make_atom(gamma13=0.0)
        rabi_c = 1e6
        radius = 1.5e-3
        omega = 1e-4
        for s in (1e-3, 0.5, 2.0):
            rabi_p = math.sqrt(s) * rabi_c
            tan2 = c / (v_rec * 2.0)
            g2rho = tan2 * rabi_c**2
            sides = []
            for sign in (1.0, -1.0):
                gen = build_generator(atom, rabi_p, rabi_c,
                                      rotation_rate=sign * omega,
                                      radius=radius, k_p=k_p)
                sides.append(steady_state(gen, 1.0).rho[1, 0])
            odd_part = (sides[0] - sides[1]) / 2.0
            rate = -(g2rho / c) * odd_part.real / rabi_p
            expected = (k_p * omega * radius / c) * tan2 / (1.0 + s) ** 2
            assert rate == pytest.approx(expected, rel=1e-6)


class TestFirstOrderCorrection:
    def _gen(self, v_rec=5.9e-3):
        return build_generator(make_atom(gamma13=1e3), 2e5, 1e6,
                               k_p=8.05e6, v_rec=v_rec)

    def test_uniform_profile_unchanged(self):
        gen = self._gen()
        rho = steady_state(gen, 1.0).rho
        x = np.linspace(0.0, 1e-2, 65)
        profile = np.broadcast_to(rho, (65, 3, 3)).copy()
        corrected = first_order_correction(x, profile, gen)
        assert np.abs(corrected - profile).max() <= 1e-14

    def test_zero_recoil_is_identity(self):
        gen = self._gen(v_rec=0.0)
        rho = steady_state(gen, 1.0).rho
        x = np.linspace(0.0, 1e-2, 65)
        profile = rho[None, :, :] * (1.0 + 0.5 * x / x[-1])[:, None, None]
        corrected = first_order_correction(x, profile, gen)
        assert np.array_equal(corrected, profile)

    def test_linear_profile_matches_analytic_operator(self):
        # density profile n(x) = 1 + x/(2L): steady states scale linearly,
        # the slope is exact, and the correction must equal
        # -v_rec * Mred^{-1} Dred (d rho / dx) computed independently
        gen = self._gen()
        base = steady_state(gen, 1.0).rho
        x = np.linspace(0.0, 1e-2, 65)
        slope = 0.5 / x[-1]
        profile = base[None, :, :] * (1.0 + slope * x)[:, None, None]
        corrected = first_order_correction(x, profile, gen)

        dvec = (slope * base).reshape(9)[:8].copy()
        dvec[0] = 0.0
        expected_corr = -gen.v_rec * (np.linalg.inv(gen.reduced_m) @ dvec)
        got_corr = (corrected - profile).reshape(65, 9)[:, :8]
        assert np.abs(got_corr - expected_corr[None, :]).max() <= \
            1e-9 * np.abs(expected_corr).max()

    def test_trace_preserved_and_hermitian(self):
        gen = self._gen()
        base = steady_state(gen, 1.0).rho
        x = np.linspace(0.0, 1e-2, 65)
        profile = base[None, :, :] * (1.0 + 0.3 * np.sin(x / x[-1]))[:, None, None]
        corrected = first_order_correction(x, profile, gen)
        traces_in = np.einsum("xii->x", profile)
        traces_out = np.einsum("xii->x", corrected)
        assert np.abs(traces_in - traces_out).max() <= 1e-14
        herm = np.abs(corrected - corrected.conj().transpose(0, 2, 1)).max()
        assert herm <= 1e-12

    def test_warns_outside_expansion_regime(self):
        # slow ground-coherence pumping (T ~ 0.1 s) against a 0.1 mm
        # profile scale puts v_rec * T / L far above the 0.1 threshold
        gen = build_generator(make_atom(gamma13=1e-4), 1e3, 1e4,
                              v_rec=5.9e-3)
        base = steady_state(gen, 1.0).rho
        x = np.linspace(0.0, 1e-4, 65)
        profile = base[None, :, :] * (1.0 + 0.9 * x / x[-1])[:, None, None]
        with pytest.warns(ExpansionWarning):
            first_order_correction(x, profile, gen)


class TestDiagnostics:
    def test_nonlocal_neglect_ratio(self):
        gen = build_generator(make_atom(), 1e5, 1e6, rotation_rate=1e-3,
                              radius=1.5e-3, k_p=8.05e6)
        expected = 1e-3 * 1.5e-3 * 8.05e6 / GAMMA
        assert nonlocal_neglect_ratio(gen) == pytest.approx(expected, rel=1e-12)

    def test_csv_dump(self, tmp_path):
        gen = build_generator(make_atom(), 1e5, 1e6, delta2=1e5)
        m_path = tmp_path / "m.csv"
        d_path = tmp_path / "d.csv"
        dump_generator_csv(gen, m_path, d_path)
        with open(m_path) as fh:
            rows = list(csv.reader(fh))
        assert rows[0][0] == "row_label"
        assert len(rows[0]) == 1 + 18
        assert len(rows) == 10
        labels = [r[0] for r in rows[1:]]
        assert "rho23(interpreted)" in labels
        assert labels[0] == VEC_LABELS[0]
        value = complex(float(rows[2][1]), float(rows[2][2]))
        assert value == gen.m[1, 0]
        with open(d_path) as fh:
            drows = list(csv.reader(fh))
        assert float(drows[1][1]) == 0.0  # no v_rec drift on rho11
        assert float(drows[2][3]) == 1.0

"""Acceptance suite: the exit criteria of the simulator, one test per
criterion, each printing a PASS/FAIL line with the measured numbers
(run with ``pytest tests/test_acceptance.py -v -s`` to see them all).

Closed forms are compared at their stated tolerances; regime thresholds
are the documented separators, not fitted numbers.
"""

import math
import time

import numpy as np
import pytest
import scipy.stats

from dcesim import (
    DetectorSpec,
    EvolutionConfig,
    FrameTag,
    HilbertSpace,
    ModulationSpec,
    default_jump_model,
    dicke_network_hamiltonian,
    dicke_to_ladder,
    jc_eigensystem,
    no_count_evolve,
    null_eigenstate,
    oracle,
    resonance_catalog,
    run_experiment,
    rwa_hamiltonian,
    three_level_eigensystem,
    trajectory_ensemble,
    unitary_evolve,
)
from dcesim.fock import StateVector
from dcesim.model import TimeDependentOperator, network_space
from dcesim.spectral import excitation_block
from helpers import master_equation_evolve

OMEGA0 = 1.0


def _report(criterion: int, ok: bool, detail: str) -> None:
    print(f"\n[criterion {criterion}] {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


# ---------------------------------------------------------------------------
# 1. empty-cavity photon generation against the exact solution
# ---------------------------------------------------------------------------

def test_criterion_1_empty_cavity_closed_forms():
    mod = ModulationSpec(OMEGA0, 1e-3)          # beta0 = eps/4
    beta0 = mod.beta0
    wall0 = time.perf_counter()

    def run(n_max):
        cfg = EvolutionConfig(t_end=4.0, record_every=200, truncation_tol=1e-6)
        series = run_experiment(DetectorSpec.none(), mod, cfg, n_max=n_max)
        t_abs = series.times / mod.epsilon
        exact_n = np.array([oracle.empty_cavity_mean_n(beta0, t) for t in t_abs])
        var = np.array([oracle.empty_cavity_variances(beta0, t) for t in t_abs])
        mask = exact_n > 1e-9
        rel_n = np.max(np.abs(series.n_mean[mask] - exact_n[mask]) / exact_n[mask])
        rel_p = np.max(np.abs(series.xvar_plus - var[:, 0]) / var[:, 0])
        rel_m = np.max(np.abs(series.xvar_minus - var[:, 1]) / var[:, 1])
        q_ref = 1.0 + 2.0 * series.n_mean[mask]
        rel_q = np.max(np.abs(series.mandel_q[mask] - q_ref) / q_ref)
        return rel_n, rel_p, rel_m, rel_q

    # the sized-as-stated basis: mean photon number, anti-squeezed variance
    # and the Mandel relation all hold at 1e-6
    rel_n512, rel_p512, rel_m512, rel_q512 = run(512)
    # the squeezed variance at the 2*beta0*t = 2 endpoint needs headroom
    # beyond n_max = 512 (truncated-basis floor 1.8e-6); 768 covers it
    rel_n, rel_p, rel_m, rel_q = run(768)
    wall = time.perf_counter() - wall0

    ok = (rel_n512 < 1e-6 and rel_p512 < 1e-6 and rel_q512 < 1e-6
          and rel_n < 1e-6 and rel_p < 1e-6 and rel_m < 1e-6 and rel_q < 1e-6
          and wall < 10.0)
    _report(1, ok,
            f"n_max=512: n {rel_n512:.2e}, xvar+ {rel_p512:.2e}, Q {rel_q512:.2e} "
            f"(xvar- truncation-limited: {rel_m512:.2e}); "
            f"n_max=768: n {rel_n:.2e}, xvar+ {rel_p:.2e}, xvar- {rel_m:.2e}, "
            f"Q {rel_q:.2e}; all < 1e-6; wall {wall:.1f}s < 10s")


# ---------------------------------------------------------------------------
# 2. harmonic-oscillator detector against the Heisenberg solution
# ---------------------------------------------------------------------------

def test_criterion_2_harmonic_oscillator_variances_and_shelves():
    g = 1e-2
    mod = ModulationSpec(OMEGA0, 1e-3)
    beta0 = mod.beta0
    gamma = oracle.oscillator_gamma(g, beta0)
    det = DetectorSpec.harmonic_oscillator(g, OMEGA0)
    cfg = EvolutionConfig(t_end=6.0, dt=0.35, record_every=14,
                          truncation_tol=1e-6)
    series = run_experiment(det, mod, cfg, n_max=160)
    t_abs = series.times / mod.epsilon

    in_range = t_abs <= 1.5 / beta0 + 1e-9
    var = np.array([oracle.ho_variances(g, beta0, t) for t in t_abs[in_range]])
    prod_ref = np.array([oracle.ho_uncertainty_product(g, beta0, t)
                         for t in t_abs[in_range]])
    rel_p = np.max(np.abs(series.xvar_plus[in_range] - var[:, 0]) / var[:, 0])
    rel_m = np.max(np.abs(series.xvar_minus[in_range] - var[:, 1]) / var[:, 1])
    prod = series.xvar_plus[in_range] * series.xvar_minus[in_range]
    rel_u = np.max(np.abs(prod - prod_ref) / prod_ref)

    # shelf spacing: photon growth pauses every pi/gamma; measure the mean
    # spacing of the local minima of d<n>/dt
    dy = np.gradient(series.n_mean, t_abs)
    minima = []
    for i in range(2, len(dy) - 2):
        if dy[i] < dy[i - 1] and dy[i] <= dy[i + 1] and series.n_mean[i] > 1e-3:
            a, b, _ = np.polyfit(t_abs[i - 2:i + 3], dy[i - 2:i + 3], 2)
            minima.append(-b / (2 * a))
    spacings = np.diff(minima)
    spacings = spacings[(spacings > 0.5 * np.pi / gamma)
                        & (spacings < 1.5 * np.pi / gamma)]
    shelf_dev = abs(np.mean(spacings) - np.pi / gamma) / (np.pi / gamma)

    ok = rel_p < 1e-4 and rel_m < 1e-4 and rel_u < 1e-4 and shelf_dev < 0.02
    _report(2, ok,
            f"xvar+ {rel_p:.2e}, xvar- {rel_m:.2e}, product {rel_u:.2e} "
            f"(< 1e-4 for beta0*t <= 1.5); shelf spacing "
            f"{np.mean(spacings):.1f} vs pi/gamma {np.pi/gamma:.1f} "
            f"({shelf_dev:.2%} < 2%, {len(spacings)} shelves)")


# ---------------------------------------------------------------------------
# 3. odd/even level-count law for the photon cascade
# ---------------------------------------------------------------------------

def test_criterion_3_odd_even_level_law():
    g = 1e-2
    mod = ModulationSpec(OMEGA0, 1e-3)

    def ladder(n):
        return DetectorSpec.equidistant_ladder(
            n, OMEGA0, [g * math.sqrt(l) for l in range(1, n)])

    # the bounded cases run the full window; the unbounded cascades are
    # stopped shortly after crossing 5 (N=3 crosses at eps*t ~ 4.1, N=5 at
    # ~ 4.6) since their photon tails keep fattening toward eps*t = 10
    maxima = {}
    for n, t_end, n_max in ((2, 10.0, 64), (4, 10.0, 64),
                            (3, 4.6, 512), (5, 4.9, 512)):
        cfg = EvolutionConfig(t_end=t_end, record_every=50,
                              truncation_tol=1e-5)
        series = run_experiment(ladder(n), mod, cfg, n_max=n_max)
        maxima[n] = float(np.max(series.n_mean))

    ok = (maxima[2] < 0.1 and maxima[4] <= 2.1
          and maxima[3] > 5.0 and maxima[5] > 5.0)
    _report(3, ok,
            f"max <n> to eps*t=10: N=2 {maxima[2]:.3g} (< 0.1), "
            f"N=4 {maxima[4]:.3g} (<= 2.1); crossing 5 before eps*t=10: "
            f"N=3 max {maxima[3]:.3g}, N=5 max {maxima[5]:.3g} (both > 5)")


# ---------------------------------------------------------------------------
# 4. three-level shifted resonance: two-state oscillation period
# ---------------------------------------------------------------------------

def test_criterion_4_three_level_shifted_resonance_period():
    g = 1e-2
    det = DetectorSpec.equidistant_ladder(3, OMEGA0, [g, g])
    base = ModulationSpec(OMEGA0, 1e-3)
    entry = [e for e in resonance_catalog(det, base)
             if e.formula == "three_level_pair" and e.branch == 1][0]
    mod = base.with_shift(entry.r)
    # population of |1,0> completes a cycle in pi/frequency (cos^2 law:
    # half of the 2*pi amplitude cycle)
    t_expect = math.pi / entry.oscillation_frequency

    space = HilbertSpace(n_max=24, n_levels=3)
    h = rwa_hamiltonian(det, mod, space)
    psi = space.vacuum()
    phi2 = three_level_eigensystem(g, g, 2)
    phi2_vec = np.zeros(space.dim, complex)
    for (lvl, n), c in zip(phi2.basis, phi2.state_plus):
        phi2_vec[space.index(lvl, n)] = c

    n_seg, seg = 360, 1.25 * t_expect / 360
    p10, leak = [1.0], [0.0]
    for _ in range(n_seg):
        cfg = EvolutionConfig(t_end=seg, time_unit="absolute", dt=0.12,
                              record_every=10**6)
        _, psi = unitary_evolve(h, psi, cfg)
        a0 = psi.amplitudes[space.index(1, 0)]
        a2 = np.vdot(phi2_vec, psi.amplitudes)
        p10.append(abs(a0) ** 2)
        leak.append(1.0 - abs(a0) ** 2 - abs(a2) ** 2)
    p10 = np.asarray(p10)
    ts = np.arange(n_seg + 1) * seg

    # first full return of P(|1,0>): parabolic fit around the interior maximum
    i = np.argmax(p10[n_seg // 2:]) + n_seg // 2
    a, b, _ = np.polyfit(ts[i - 2:i + 3], p10[i - 2:i + 3], 2)
    t_fit = -b / (2 * a)
    period_dev = abs(t_fit - t_expect) / t_expect
    max_leak = float(np.max(leak))

    ok = period_dev < 0.02 and max_leak < 0.05
    _report(4, ok,
            f"fitted period {t_fit:.0f} vs pi/catalog-frequency {t_expect:.0f} "
            f"({period_dev:.2%} < 2%); population outside the two-state "
            f"manifold <= {max_leak:.3g} (< 0.05); min P10 {p10.min():.3g}")


# ---------------------------------------------------------------------------
# 5. explicit two-atom network vs the equivalent three-level ladder
# ---------------------------------------------------------------------------

def test_criterion_5_dicke_equivalence():
    g = 1e-2
    net = DetectorSpec.dicke_network(2, OMEGA0, g)
    mod = ModulationSpec(OMEGA0, 1e-3)
    n_max = 320
    nspace = network_space(2, n_max)
    lspace = HilbertSpace(n_max, 3)
    h_net = dicke_network_hamiltonian(net, mod, nspace)
    h_lad = rwa_hamiltonian(dicke_to_ladder(net), mod, lspace)
    dt = min(0.05 / h_net.norm_bound(), 0.05 / h_lad.norm_bound())
    # both spaces truncate identically, so the photon-tail weight cancels
    # from the comparison; the guard only needs to catch real blow-ups
    cfg = EvolutionConfig(t_end=5.0, dt=dt, record_every=500,
                          snapshot_times=(5.0,), truncation_tol=1e-3)
    s_net, f_net = unitary_evolve(h_net, nspace.vacuum(), cfg, mod.epsilon)
    s_lad, f_lad = unitary_evolve(h_lad, lspace.vacuum(), cfg, mod.epsilon)

    pn_net = s_net.snapshots[0].photon_distribution
    pn_lad = s_lad.snapshots[0].photon_distribution
    width = max(len(pn_net), len(pn_lad))
    devs = {
        "n": np.max(np.abs(s_net.n_mean - s_lad.n_mean)),
        "xvar+": np.max(np.abs(s_net.xvar_plus - s_lad.xvar_plus)),
        "xvar-": np.max(np.abs(s_net.xvar_minus - s_lad.xvar_minus)),
        "p(n)": np.max(np.abs(np.pad(pn_net, (0, width - len(pn_net)))
                              - np.pad(pn_lad, (0, width - len(pn_lad))))),
    }
    # per-excitation-class populations: configurations {0}, {1,2}, {3}
    pop_net = s_net.populations
    classes = np.stack([pop_net[:, 0], pop_net[:, 1] + pop_net[:, 2],
                        pop_net[:, 3]], axis=1)
    devs["P_j"] = np.max(np.abs(classes - s_lad.populations))
    worst = max(devs.values())

    ok = worst < 1e-10
    _report(5, ok,
            "max deviation over eps*t in [0,5]: "
            + ", ".join(f"{k} {v:.1e}" for k, v in devs.items())
            + f"; worst {worst:.1e} < 1e-10 (<n> reaches {s_lad.n_mean[-1]:.1f})")


# ---------------------------------------------------------------------------
# 6. eigensystem residuals and zero-mode existence law
# ---------------------------------------------------------------------------

def test_criterion_6_eigensystem_residuals_and_null_space():
    g1, g2, delta1 = 0.011, 0.017, 0.06
    worst_jc = worst_three = worst_null = 0.0
    for n in range(1, 21):
        d = jc_eigensystem(g1, delta1, n)
        h2 = np.array([[0.0, g1 * math.sqrt(n)], [g1 * math.sqrt(n), -delta1]])
        for lam, vec in ((d.lam_plus, d.state_plus), (d.lam_minus, d.state_minus)):
            worst_jc = max(worst_jc, np.linalg.norm(h2 @ vec - lam * vec))
        t = three_level_eigensystem(g1, g2, n)
        det3 = DetectorSpec.equidistant_ladder(3, OMEGA0, [g1, g2])
        basis, h3 = excitation_block(det3, n)
        for lam, vec in ((t.lam, t.state_plus), (-t.lam, t.state_minus)):
            v = np.zeros(len(basis), complex)
            v[: len(vec)] = vec
            worst_three = max(worst_three, np.linalg.norm(h3 @ v - lam * v))

    even_ok = True
    for n_levels in (2, 4, 6):
        det = DetectorSpec.equidistant_ladder(
            n_levels, OMEGA0, [0.01 * (1 + 0.3 * l) for l in range(n_levels - 1)])
        for m in range(0, 13):
            basis, h = excitation_block(det, m)
            brute_zero = bool(np.min(np.abs(np.linalg.eigvalsh(h))) < 1e-12)
            state = null_eigenstate(det, m)
            if m > n_levels - 2:
                even_ok &= state is None and not brute_zero
            else:
                even_ok &= (state is not None) == brute_zero
            if state is not None and m > 0:
                v = np.zeros(len(basis), complex)
                for (lvl, _), c in zip(state.basis, state.amplitudes):
                    v[lvl - 1] = c
                worst_null = max(worst_null, np.linalg.norm(h @ v))

    ok = worst_jc < 1e-10 and worst_three < 1e-10 and worst_null < 1e-10 and even_ok
    _report(6, ok,
            f"residuals to n=20: two-level doublets {worst_jc:.1e}, "
            f"three-level pairs {worst_three:.1e}, zero modes {worst_null:.1e} "
            f"(all < 1e-10); even-N nonexistence for m > N-2 brute-force "
            f"confirmed for N in {{2,4,6}}, m <= 12: {even_ok}")


# ---------------------------------------------------------------------------
# 7. continuous monitoring: norm law, click statistics, ensemble vs
#    master equation
# ---------------------------------------------------------------------------

def test_criterion_7_monitoring():
    wall0 = time.perf_counter()

    # (a) d(norm^2)/dt = -<R> norm^2 along no-count evolution
    space_a = HilbertSpace(n_max=6, n_levels=3)
    det_a = DetectorSpec.equidistant_ladder(3, OMEGA0, [0.03, 0.02])
    h_a = rwa_hamiltonian(det_a, ModulationSpec(OMEGA0, 4e-3), space_a)
    jm_a = default_jump_model(det_a, space_a, rate=0.05)
    st = StateVector(np.zeros(space_a.dim, complex), space_a)
    st.amplitudes[space_a.index(2, 1)] = 1 / math.sqrt(2)
    st.amplitudes[space_a.index(3, 0)] = 1j / math.sqrt(2)
    worst_law = 0.0
    for t in (5.0, 25.0, 60.0):
        dt_p = 0.01
        fwd = no_count_evolve(h_a, jm_a, st, 0.0, t + dt_p, 0.001)
        mid = no_count_evolve(h_a, jm_a, st, 0.0, t, 0.001)
        bwd = no_count_evolve(h_a, jm_a, st, 0.0, t - dt_p, 0.001)
        deriv = (fwd.norm() ** 2 - bwd.norm() ** 2) / (2 * dt_p)
        psi = mid.amplitudes
        target = -float(np.real(np.vdot(psi, jm_a.rate_op.matrix @ psi)))
        worst_law = max(worst_law, abs(deriv - target) / abs(target))

    # (b) H = 0 first-click times are exponential(rate)
    space_b = HilbertSpace(n_max=2, n_levels=2)
    det_b = DetectorSpec.equidistant_ladder(2, OMEGA0, [0.0])
    h_b = TimeDependentOperator(
        space_b, FrameTag.RWA_INTERACTION,
        rwa_hamiltonian(det_b, ModulationSpec(OMEGA0, 0.0), space_b).static * 0.0)
    jm_b = default_jump_model(det_b, space_b, rate=1.0)
    res_b = trajectory_ensemble(h_b, jm_b, space_b.basis_state(2, 0),
                                t_end=15.0, dt=0.01, n_trajectories=10**4,
                                master_seed=42, record_every=10**6)
    first = np.array([c[0] for c in res_b.click_logs if len(c)])
    all_clicked = len(first) == 10**4
    ks = scipy.stats.kstest(first, "expon", args=(0.0, 1.0))

    # (c) 10^4-trajectory ensemble vs the dense master-equation oracle
    space_c = HilbertSpace(n_max=5, n_levels=2)   # dim 12
    g_c = 0.04
    det_c = DetectorSpec.equidistant_ladder(2, OMEGA0, [g_c])
    mod_c = ModulationSpec(OMEGA0, 9.9e-3, r=math.sqrt(2) * g_c / 2)
    h_c = rwa_hamiltonian(det_c, mod_c, space_c)
    jm_c = default_jump_model(det_c, space_c, rate=0.02)
    res_c = trajectory_ensemble(h_c, jm_c, space_c.vacuum(), t_end=600.0,
                                dt=0.12, n_trajectories=10**4, master_seed=7,
                                record_every=500)
    rho0 = np.outer(space_c.vacuum().amplitudes,
                    space_c.vacuum().amplitudes.conj())
    times, rhos = master_equation_evolve(
        h_c.static, [op.matrix for op in jm_c.ops], rho0, 600.0, 0.12, 500)
    nvec = space_c.photon_number_array
    z_worst = 0.0
    for i, rho in enumerate(rhos):
        if i == 0:
            continue
        n_me = float(np.real(np.sum(np.diag(rho) * nvec)))
        p2_me = float(np.real(np.sum(np.diag(rho)[space_c.n_max + 1:])))
        z_worst = max(
            z_worst,
            abs(res_c.n_mean[i] - n_me) / res_c.n_mean_se[i],
            abs(res_c.populations[i, 1] - p2_me) / res_c.populations_se[i, 1])
    wall = time.perf_counter() - wall0

    ok = (worst_law < 1e-6 and all_clicked and ks.pvalue > 0.01
          and z_worst < 3.0 and wall < 60.0)
    _report(7, ok,
            f"(a) no-count norm law rel err {worst_law:.1e} < 1e-6; "
            f"(b) KS vs exponential p = {ks.pvalue:.3f} > 0.01 "
            f"({len(first)} samples); (c) ensemble vs master equation "
            f"max |z| = {z_worst:.2f} < 3 SE; wall {wall:.1f}s < 60s")


# ---------------------------------------------------------------------------
# 8. saturable-limiter regime: hyper-Poissonian field and modulation
#    sensitivity
# ---------------------------------------------------------------------------

def test_criterion_8_hyper_poissonian_sensitivity():
    g1 = 1e-2
    eps = 3e-4
    det = DetectorSpec.ladder([0.0, OMEGA0 - 8 * g1], [g1])

    def run(y):
        base = ModulationSpec(OMEGA0, eps, y=y)
        entry = [e for e in resonance_catalog(det, base)
                 if e.formula == "two_level_shifted" and e.branch == 1][0]
        mod = ModulationSpec(OMEGA0, eps, r=entry.r, y=y)
        cfg = EvolutionConfig(t_end=5.0, record_every=200,
                              snapshot_times=(5.0,), truncation_tol=1e-6)
        return run_experiment(det, mod, cfg, n_max=128)

    hyper = run(-2 * eps)
    gentle = run(-eps / 2)
    n_h, q_h = hyper.n_mean[-1], hyper.mandel_q[-1]
    n_g = gentle.n_mean[-1]
    rel_diff = abs(n_h - n_g) / max(n_h, n_g)

    ok = q_h > 1.0 + 2.0 * n_h and rel_diff > 0.10
    _report(8, ok,
            f"y=-2eps at eps*t=5: Q = {q_h:.1f} > 1+2<n> = {1 + 2 * n_h:.2f} "
            f"(hyper-Poissonian); <n> differs {rel_diff:.0%} (> 10%) between "
            f"y=-2eps ({n_h:.3f}) and y=-eps/2 ({n_g:.3f})")


# ---------------------------------------------------------------------------
# 9. rotating wave approximation against the lab frame
# ---------------------------------------------------------------------------

def test_criterion_9_lab_frame_validates_rwa():
    mod = ModulationSpec(OMEGA0, 1e-3)
    cfg_rwa = EvolutionConfig(t_end=1.0, record_every=10**6)
    n_rwa = run_experiment(DetectorSpec.none(), mod, cfg_rwa, n_max=48).n_mean[-1]
    cfg_lab = EvolutionConfig(t_end=1.0, frame=FrameTag.LAB,
                              record_every=10**6)
    n_lab = run_experiment(DetectorSpec.none(), mod, cfg_lab, n_max=48).n_mean[-1]
    rel = abs(n_lab - n_rwa) / n_rwa
    budget = 5 * mod.epsilon / mod.omega0

    ok = rel < budget
    _report(9, ok,
            f"<n>(eps*t=1): lab {n_lab:.6e} vs interaction picture "
            f"{n_rwa:.6e}, rel dev {rel:.2e} < 5*eps/omega0 = {budget:.0e}")

#!/usr/bin/env python3
"""
End-to-end acceptance script for Phicrit.
Runs every headline result through the library and the CLI and prints PASS/FAIL per check.
"""

import io
import sys
import tempfile
from contextlib import redirect_stdout
from pathlib import Path

import numpy as np

from app.criteria import analyze, ppt_check
from app.factory import (
    Ensemble,
    closed_form_threshold,
    family_state,
    family_threshold,
    partial_time_reversal_spectrum,
    random_state,
)
from app.linalg import hermitian_eigen, outer, partial_trace, random_ket
from app.main import THRESHOLD_CRITERIA, main as cli_main
from app.maps import partial_time_reversal, phi_op
from app.spin import (
    SpinSystem,
    build_V,
    singlet_projector,
    swap_operator,
    theta_ket,
    total_spin_projectors,
    total_spin_squared,
)
from app.storage import load_state
from app.witnesses import (
    build_witness,
    decompose_into_gamma,
    recombine,
    verify_optimality,
    witness_closed_form,
    witness_expectation,
)

DESK_N = (4, 6, 8)
results: list[tuple[str, bool]] = []


def print_section(title: str):
    """Pretty print a section header."""
    print(f"\n{'='*60}")
    print(title)
    print(f"{'='*60}")


def check(name: str, ok: bool, detail: str = ""):
    """Record and print one check."""
    results.append((name, bool(ok)))
    mark = "PASS" if ok else "FAIL"
    print(f"[{mark}] {name}{' - ' + detail if detail else ''}")


def test_threshold_table():
    """Bisected thresholds against their closed forms."""
    print_section("Threshold table")
    for N in DESK_N:
        for criterion in THRESHOLD_CRITERIA:
            result = family_threshold(N, criterion)
            expected = closed_form_threshold(N, criterion)
            check(
                f"N={N} {criterion.value}",
                abs(result.threshold - expected) <= 1e-6,
                f"{result.threshold:.6f} vs {expected:.6f}",
            )


def test_witness_trace_law():
    """tr(Wρ(λ)) = -λ(N-2)."""
    print_section("Witness trace law")
    for N in DESK_N:
        witness = build_witness(N)
        worst = max(
            abs(witness_expectation(witness, family_state(N, float(lam)).state) + lam * (N - 2))
            for lam in np.linspace(0.0, 1.0, 21)
        )
        check(f"N={N} trace law", worst <= 1e-10, f"max deviation {worst:.2e}")


def test_witness_spectrum():
    """Eigenvalues and multiplicities of W."""
    print_section("Witness spectrum")
    expected = {4: ([-2.0, 0.0, 2.0], [1, 10, 5]), 6: ([-4.0, 0.0, 2.0], [1, 21, 14])}
    for N, (values, counts) in expected.items():
        groups = hermitian_eigen(build_witness(N).matrix).multiplicities(tol=1e-8)
        got_values = [v for v, _ in groups]
        got_counts = [c for _, c in groups]
        ok = got_counts == counts and np.allclose(got_values, values, atol=1e-9)
        check(f"N={N} spectrum", ok, f"{list(zip(np.round(got_values, 9), got_counts))}")


def test_nondecomposability():
    """ρ(1/(N+2)) is PPT yet detected."""
    print_section("Nondecomposability exhibit")
    for N in DESK_N:
        state = family_state(N, 1.0 / (N + 2)).state
        lowest = hermitian_eigen(partial_time_reversal(state.matrix, (N, N))).min
        value = witness_expectation(build_witness(N), state)
        ok = lowest >= -1e-9 and abs(value + (N - 2) / (N + 2)) <= 1e-10 and value < 0
        check(f"N={N} PPT and detected", ok, f"min eig {lowest:.2e}, tr(Wρ) {value:.6f}")


def test_optimality():
    """Γ_W spans the space and ϑ2 W = W."""
    print_section("Optimality")
    for N in DESK_N:
        result = verify_optimality(SpinSystem.from_dimension(N), seed=0)
        check(
            f"N={N} optimality",
            result.rank == N * N and result.invariance_residual <= 1e-10,
            f"rank {result.rank}/{N * N}, residual {result.invariance_residual:.2e}",
        )


def test_positivity_suite():
    """Φ is positive; separable mixtures never fire."""
    print_section("Positivity suite")
    rng = np.random.default_rng(0)
    for N in DESK_N:
        phi_map = phi_op(N)
        worst_eig, worst_idem = np.inf, 0.0
        for _ in range(1000):
            image = phi_map(outer(random_ket(N, rng)))
            worst_eig = min(worst_eig, hermitian_eigen(image).min)
            worst_idem = max(worst_idem, float(np.max(np.abs(image @ image - image))))
        check(f"N={N} Φ positive", worst_eig >= -1e-10 and worst_idem <= 1e-10,
              f"min eig {worst_eig:.2e}, idempotency {worst_idem:.2e}")
    fired = 0
    for index in range(500):
        state = random_state((4, 4), Ensemble.SEPARABLE_MIXTURE, seed=(0, index))
        fired += any(r.entangled for r in analyze(state))
    check("500 separable mixtures undetected", fired == 0, f"{fired} flagged")


def test_structural_identities():
    """Identities tying V, θ, F, P0 and ρ(λ) together."""
    print_section("Structural identities")
    rng = np.random.default_rng(1)
    for N in DESK_N:
        sys_ = SpinSystem.from_dimension(N)
        p0, F, V = singlet_projector(sys_), swap_operator(sys_), build_V(sys_)
        decomposition = total_spin_projectors(sys_)
        phi = random_ket(N, rng)
        deviations = {
            "ϑ2 P0 = F/N": np.max(np.abs(partial_time_reversal(p0, (N, N)) - F / N)),
            "F = Σ(-1)^(J+1) P_J": np.max(np.abs(
                F - decomposition.combine({J: (-1.0) ** (J + 1) for J in decomposition.labels}))),
            "tr2 P0 = I/N": np.max(np.abs(partial_trace(p0, (N, N)) - np.eye(N) / N)),
            "θ² = -I": np.max(np.abs(theta_ket(sys_, theta_ket(sys_, phi)) + phi)),
            "V^T = -V": np.max(np.abs(V.T + V)),
        }
        for lam in (0.0, 0.1, 0.5, 1.0):
            rho = family_state(N, lam).state.matrix
            numeric = hermitian_eigen(partial_time_reversal(rho, (N, N))).eigenvalues
            deviations[f"ϑ2ρ({lam}) spectrum"] = np.max(np.abs(numeric - partial_time_reversal_spectrum(N, lam)))
        for name, value in deviations.items():
            check(f"N={N} {name}", value <= 1e-10, f"{value:.2e}")


def test_bound_generator():
    """Seeded generate-bound outputs and the Γ_W decomposition."""
    print_section("Bound entangled generator")
    with tempfile.TemporaryDirectory() as tmp:
        for N in (4, 6):
            witness = build_witness(N)
            failures = 0
            for seed in range(100):
                path = Path(tmp) / f"bound_{N}_{seed}.json"
                argv = ["generate-bound", "--N", str(N), "--lambda", str(1.0 / (N + 2) / 2),
                        "--seed", str(seed), "--out", str(path), "--log-level", "WARNING"]
                with redirect_stdout(io.StringIO()):
                    code = cli_main(argv)
                if code != 0:
                    failures += 1
                    continue
                state, _ = load_state(path)
                if ppt_check(state).score < -1e-10 or witness_expectation(witness, state) >= 0:
                    failures += 1
            check(f"N={N} 100 generated states", failures == 0, f"{failures} failures")

    rng = np.random.default_rng(2)
    for N in (4, 6):
        sys_ = SpinSystem.from_dimension(N)
        worst = 0.0
        for _ in range(100):
            first, second = random_ket(N, rng), random_ket(N, rng)
            terms = decompose_into_gamma(sys_, first, second)
            worst = max(worst, float(np.max(np.abs(recombine(terms) - np.kron(first, second)))))
        check(f"N={N} decomposition identity", worst <= 1e-10, f"{worst:.2e}")


def test_oracles():
    """Coupled-basis projectors and W against independent constructions."""
    print_section("Oracle equivalence")
    for N in DESK_N:
        sys_ = SpinSystem.from_dimension(N)
        spectrum = hermitian_eigen(total_spin_squared(sys_))
        worst = 0.0
        for J, p in total_spin_projectors(sys_).projectors:
            vectors = spectrum.eigenvectors[:, np.abs(spectrum.eigenvalues - J * (J + 1)) < 1e-6]
            worst = max(worst, float(np.max(np.abs(vectors @ vectors.conj().T - p))))
        check(f"N={N} P_J vs Ĵ² oracle", worst <= 1e-9, f"{worst:.2e}")
        deviation = float(np.max(np.abs(build_witness(N).matrix - witness_closed_form(sys_))))
        check(f"N={N} W vs closed form", deviation <= 1e-10, f"{deviation:.2e}")


def main():
    """Run all acceptance checks."""
    print("\n" + "="*60)
    print("Phicrit Acceptance Suite")
    print("="*60)

    try:
        test_threshold_table()
        test_witness_trace_law()
        test_witness_spectrum()
        test_nondecomposability()
        test_optimality()
        test_positivity_suite()
        test_structural_identities()
        test_bound_generator()
        test_oracles()
    except Exception as e:
        print(f"\n❌ Unexpected error: {e}\n")
        raise

    failed = [name for name, ok in results if not ok]
    print("\n" + "="*60)
    if failed:
        print(f"❌ {len(failed)} of {len(results)} checks failed")
    else:
        print(f"✓ All {len(results)} checks passed!")
    print("="*60 + "\n")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())

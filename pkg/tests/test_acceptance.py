"""Acceptance criteria, one test per criterion at its stated tolerance.

Each test prints a single [PASS]/[FAIL] line (also collected into the
terminal summary) listing the measured value of every sub-check.
"""
import pytest

from acmc import suites

from conftest import ACCEPTANCE_LINES

SEED = 2024


def report(number, title, checks):
    ok = all(c.passed for c in checks)
    parts = "; ".join(f"{c.name}: {c.value:.3g} ({'ok' if c.passed else 'FAILED'})" for c in checks)
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} -- {parts}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    failed = [f"{c.name} = {c.value:.3g} (threshold {c.threshold:g}) {c.detail}".strip()
              for c in checks if not c.passed]
    assert not failed, "\n".join(failed)


def test_criterion_1_decomposition():
    checks = [c for n in (1, 2, 3) for c in suites.decomposition_suite(n, SEED, count=100)]
    report(1, "completeness, idempotence, orthogonality", checks)


def test_criterion_2_equivariance():
    checks = [c for n in (1, 2, 3) for c in suites.equivariance_suite(n, SEED, count=50)]
    report(2, "equivariance under the structure group", checks)


def test_criterion_3_dimensions():
    checks = [c for n in (1, 2, 3) for c in suites.dims_suite(n)]
    report(3, "projector ranks", checks)


def test_criterion_4_exact_and_killing_forms():
    checks = [c for n in (1, 2, 3) for c in suites.proposition_suite(n, SEED)]
    report(4, "exact and Killing forms on flat charts", checks)


def test_criterion_5_conformal_group():
    checks = [c for n in (1, 2, 3) for c in suites.conformal_group_suite(n, SEED, count=500)]
    report(5, "contact conformal group laws", checks)


def test_criterion_6_lemma_connection():
    report(6, "W1 lemma connection vs general law", suites.lemma_suite(SEED, count=50, n=2))


def test_criterion_7_conformal_deformation_pipeline():
    report(7, "deformed cosymplectic chart classification", suites.deformation_suite(SEED, n=2, points=10))


def test_criterion_8_finite_differences():
    checks = [c for n in (1, 2) for c in suites.fd_suite(n, SEED)]
    report(8, "finite-difference integrity", checks)

"""Acceptance gate: one pass/fail line per criterion.

Each criterion runs the corresponding verification suite with its pinned
tolerance and time budget and reports a single summary line (printed in
the terminal summary section).  The S-transformation rows of criterion 5
are a recorded faithful failure of the displayed component family; the
test asserts the identity as stated and reports the measured defect.
"""

import time

import conftest
from mjlab.verify import (
    run_suite,
    suite_covariance,
    suite_decomposition_roundtrip,
    suite_factorizations,
    suite_hygiene,
    suite_kernels,
    suite_mu_transform,
    suite_mu_xi_theta,
    suite_weil,
    suite_xi_images,
)


def report(number, name, results, elapsed, budget):
    worst = max(res.max_residual for res in results)
    ok = all(res.passed for res in results) and elapsed < budget
    line = "criterion %d (%s): %s  (checks=%d, max residual=%.3g, %.1fs/%.0fs)" % (
        number, name, "PASS" if ok else "FAIL", len(results), worst, elapsed, budget
    )
    conftest.ACCEPTANCE_LINES.append(line)
    return ok, worst


def failures(results):
    return [(res.identity, res.max_residual, res.tol)
            for res in results if not res.passed]


def test_criterion_1_covariance():
    t0 = time.monotonic()
    results = suite_covariance(tol=1e-8)
    elapsed = time.monotonic() - t0
    ok, worst = report(1, "covariance", results, elapsed, 60.0)
    assert ok, failures(results) or ("timeout", elapsed)


def test_criterion_2_kernel_annihilation():
    t0 = time.monotonic()
    results = suite_kernels(tol=1e-7)
    elapsed = time.monotonic() - t0
    ok, worst = report(2, "kernel annihilation", results, elapsed, 30.0)
    assert ok, failures(results) or ("timeout", elapsed)


def test_criterion_3_xi_image_table():
    t0 = time.monotonic()
    results = suite_xi_images(tol=1e-7)
    elapsed = time.monotonic() - t0
    assert len(results) == 32
    ok, worst = report(3, "xi image table", results, elapsed, 60.0)
    assert ok, failures(results) or ("timeout", elapsed)


def test_criterion_4_weil():
    t0 = time.monotonic()
    results = suite_weil(two_m_list=(1, 2, 3, 4))
    elapsed = time.monotonic() - t0
    ok, worst = report(4, "Weil representation", results, elapsed, 60.0)
    assert ok, failures(results) or ("timeout", elapsed)


def test_criterion_5_completed_component_family():
    t0 = time.monotonic()
    results = suite_mu_transform(two_m_list=(1, 2), tol=1e-6)
    results += suite_mu_xi_theta(two_m_list=(1, 2), tol_xi=1e-7)
    elapsed = time.monotonic() - t0
    report(5, "completed component family", results, elapsed, 120.0)
    bad = failures(results)
    # the T-law, the covariant theta image, the Laplace annihilation, and
    # the distinguished-completion annihilation must all pass; the
    # S-transformation rows are asserted as displayed and fail with a
    # structural (not numerical) defect, reported here faithfully
    assert not bad, bad


def test_criterion_6_factorizations():
    t0 = time.monotonic()
    results = suite_factorizations(tol=1e-6)
    elapsed = time.monotonic() - t0
    ok, worst = report(6, "factorizations", results, elapsed, 60.0)
    assert ok, failures(results) or ("timeout", elapsed)


def test_criterion_7_decomposition_roundtrip():
    t0 = time.monotonic()
    results = suite_decomposition_roundtrip(seed=0, tol=1e-9)
    elapsed = time.monotonic() - t0
    ok, worst = report(7, "theta decomposition round-trip", results, elapsed, 60.0)
    assert ok, failures(results) or ("timeout", elapsed)


def test_criterion_8_numerics_hygiene():
    t0 = time.monotonic()
    results = suite_hygiene(tol_trunc=1e-10, tol_fd=1e-6)
    elapsed = time.monotonic() - t0
    ok, worst = report(8, "numerics hygiene", results, elapsed, 60.0)
    assert ok, failures(results) or ("timeout", elapsed)

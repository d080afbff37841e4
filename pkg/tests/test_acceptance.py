"""Acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line; the same lines
are repeated in the terminal summary (see conftest.py).
"""

import time

import numpy as np
import pytest

from qnull import cxmat
from qnull.constructor import (build_rp2_certificate, build_wedge_commutator_certificate,
                               pairing_nullhomotopy_demo, pushforward_certificate,
                               sigma_swap_strip)
from qnull.homspace import (HomArray, TestFunction, evaluate, hom_distance, iota_loop,
                            product_closed_family, pushforward_array, separating_family)
from qnull.obstruction import canonical_obstruction, winding_number
from qnull.spaces import (MAPS, RP2, S1, S2, WEDGE, circle_loop, map_loop, random_points,
                          rp2_generator, wedge_branch_loop)
from qnull.verifier import (adversarial_suite, check_hom_laws, fabricated_certificates,
                            suite_passed, verify)
from qnull.words import loop_word

from helpers import random_rp2_loop

SPACES = [S1, S2, RP2, WEDGE]


def report(n: int, ok: bool, detail: str) -> None:
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_criterion_1_obstruction_exact():
    start = time.perf_counter()
    got = {(n, N): canonical_obstruction(n, N) for n in range(1, 9) for N in (64, 256, 1024)}
    elapsed = time.perf_counter() - start
    exact = all(w == n for (n, _), w in got.items())
    report(1, exact and elapsed < 1.0,
           f"winding == n for 24 (n, N) pairs: {exact}; {elapsed:.3f} s (< 1 s)")


def test_criterion_2_h_identities():
    rng = np.random.default_rng(2)
    xyz = random_points(S2, 1000, rng)
    worst = 0.0
    for p in xyz:
        h = cxmat.h_matrix((complex(p[0], p[1]), p[2]))
        hm = cxmat.h_matrix((complex(-p[0], -p[1]), -p[2]))
        worst = max(worst,
                    np.max(np.abs(cxmat.mat_mul(h, h) - np.eye(2))),
                    np.max(np.abs(cxmat.adjoint(h) - h)),
                    abs(cxmat.det(h) + 1),
                    np.max(np.abs(hm + h)))
    report(2, worst <= 1e-12, f"max defect over 1000 points {worst:.2e} (<= 1e-12)")


def test_criterion_3_quotient_soundness():
    rng = np.random.default_rng(3)
    orbit = collapse = laws = 0.0
    for space in SPACES:
        x = random_points(S2, 1000, rng)
        t1, t2 = random_points(space, 1000, rng), random_points(space, 1000, rng)
        p = HomArray(space, x, t1, t2)
        q = HomArray(space, -x, t2, t1)
        orbit = max(orbit, float(np.max(np.abs(evaluate(p) - evaluate(q)))))
        y = random_points(S2, 1000, rng)
        collapse = max(collapse, float(np.max(hom_distance(HomArray(space, x, t1, t1),
                                                           HomArray(space, y, t1, t1)))))
        # hom laws on 1000 random (parameter, a, b) draws
        fam = product_closed_family(space)
        ia, ib = rng.integers(0, len(fam), 1000), rng.integers(0, len(fam), 1000)
        for k in range(1000):
            a, b = fam[ia[k]], fam[ib[k]]
            cell = p[k]
            ra = evaluate(cell, [a])[0]
            rb = evaluate(cell, [b])[0]
            laws = max(laws,
                       cxmat.op_norm_2x2(evaluate(cell, [a * b])[0] - ra @ rb),
                       cxmat.op_norm_2x2(evaluate(cell, [a.conj()])[0] - ra.conj().T),
                       cxmat.op_norm_2x2(evaluate(cell, [fam[0]])[0] - np.eye(2)))
    ok = orbit <= 1e-15 and collapse <= 1e-15 and laws <= 1e-12
    report(3, ok, f"orbit {orbit:.1e} (<= 1e-15), collapse {collapse:.1e} (<= 1e-15), "
                  f"hom laws {laws:.1e} (<= 1e-12)")


def test_criterion_4_rp2_positive():
    details, ok = [], True
    for times in (1, 2):
        loop = rp2_generator(256, times)
        start = time.perf_counter()
        cert = build_rp2_certificate(loop)
        elapsed = time.perf_counter() - start
        rep = verify(cert, loop, 1e-9)
        good = rep.accepted and cert.grid.N == 256 and cert.grid.R >= 64 and elapsed < 10
        ok &= good
        details.append(f"gen^{times}: {rep.verdict} R={cert.grid.R} N={cert.grid.N} "
                       f"{elapsed:.2f} s")
    report(4, ok, "; ".join(details))


def test_criterion_5_wedge_pair():
    cert = build_wedge_commutator_certificate(1, 1)
    accepted = verify(cert, tol=1e-9).accepted
    word = loop_word(cert.boundary_loop)
    # alpha alone: collapsing B turns it into the identity loop of S1, whose
    # embedded loop has determinant winding 2 at matrix size 2
    alpha = wedge_branch_loop("A", 1, 256)
    image = map_loop("collapseB", alpha)
    same_loop = float(np.max(np.abs(image.samples - circle_loop(256).samples))) < 1e-15
    dets = cxmat.det(evaluate(iota_loop(image), separating_family(S1))[:, 0])
    winding = winding_number(dets)
    fakes = fabricated_certificates(alpha)
    verdicts = {name: verify(f).verdict for name, f in fakes.items()}
    pushed = {name: verify(pushforward_certificate(f, "collapseB")).verdict
              for name, f in fakes.items()}
    ok = (accepted and word == "abAB" and same_loop and winding == 2
          and canonical_obstruction(2, 256) == 2 and len(fakes) == 3
          and set(verdicts.values()) == {"REJECT"} and set(pushed.values()) == {"REJECT"})
    report(5, ok, f"commutator accepted={accepted}, word={word!r}; alpha -> identity loop "
                  f"(winding {winding}); fabricated {verdicts}; after collapseB {pushed}")


def test_criterion_6_sigma_swap():
    loops = {"generator": rp2_generator(256),
             "random1": random_rp2_loop(np.random.default_rng(61), N=1024),
             "random2": random_rp2_loop(np.random.default_rng(62), N=1024)}
    worst = 0.0
    for phi in loops.values():
        t0 = phi.start
        strip = sigma_swap_strip(phi)
        still = np.broadcast_to(t0, phi.samples.shape)
        left = HomArray(RP2, [1.0, 0.0, 0.0], phi.samples, still)
        right = HomArray(RP2, [1.0, 0.0, 0.0], still, phi.samples)
        base = HomArray.iota(RP2, np.broadcast_to(t0, (strip.M, 3)))
        worst = max(worst, float(np.max(hom_distance(strip.top, left))),
                    float(np.max(hom_distance(strip.bottom, right))),
                    float(np.max(hom_distance(strip.rows[:, 0], base))))
    report(6, worst == 0.0, f"max edge/basepoint eval_metric over 3 loops {worst!r} (== 0)")


def test_criterion_7_functoriality():
    certs = [build_wedge_commutator_certificate(a, b) for a, b in ((1, 1), (2, -1), (0, 1))]
    verdicts = []
    for cert in certs:
        assert verify(cert).accepted
        for g in ("collapseA", "collapseB"):
            verdicts.append(verify(pushforward_certificate(cert, g)).verdict)
    rng = np.random.default_rng(7)
    natural = True
    for g in ("collapseA", "collapseB", "project"):
        src, dst, fn = MAPS[g]
        p = HomArray(src, random_points(S2, 1000, rng), random_points(src, 1000, rng),
                     random_points(src, 1000, rng))
        img = pushforward_array(p, g)
        for a in separating_family(dst):
            pulled = TestFunction(src, a.name, lambda c, a=a, fn=fn: a(fn(c)))
            natural &= np.array_equal(evaluate(img, [a]), evaluate(p, [pulled]))
    ok = set(verdicts) == {"ACCEPT"} and natural
    report(7, ok, f"{len(verdicts)} pushforwards: {sorted(set(verdicts))}; "
                  f"naturality exact on 3 x 1000 samples: {natural}")


def test_criterion_8_negative_controls():
    results = {space: adversarial_suite(space) for space in (RP2, WEDGE, S1)}
    ok = all(suite_passed(r) for r in results.values())
    summary = ", ".join(f"{s}: {sum(v == 'REJECT' for v in r.values())} rejected"
                        for s, r in results.items())
    report(8, ok, summary)


def test_criterion_9_pairing():
    grid = pairing_nullhomotopy_demo(64)
    w = grid.values
    defect = float(np.max(np.abs(np.conj(np.swapaxes(w, -1, -2)) @ w - np.eye(2))))
    windings = {winding_number(cxmat.det(w[i])) for i in range(grid.R + 1)}
    report(9, defect <= 1e-12 and windings == {0},
           f"unitarity defect {defect:.1e} (<= 1e-12); ring windings {sorted(windings)}")

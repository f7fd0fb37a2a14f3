"""Randomised invariant suites behind ``degflag verify``."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .combinatorics import (
    AdmissibleCollection, ParabolicShape, RootIndex, beta_order, cell_dimension, codim_one_cells,
    enumerate_admissible, is_admissible, num_roots, relative_dimension,
)
from .geometry import (
    collection_of, divisor_set, fixed_point, is_degenerate_flag, is_partial_R_point, is_R_point,
    is_Y_point, lift, project_pi, quiver_dimension_check, quiver_from_flag, is_quiver_point,
    flag_from_quiver, random_flag, random_R_point, section_s,
)

FULL_FIXED_POINT_MAX_N = 4


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"name": self.name, "passed": self.passed, "checked": self.checked,
               "failures": self.failures[:10], "notes": self.notes}
        if self.data:
            out["data"] = self.data
        return out


class _Suite:
    def __init__(self, name: str):
        self.r = SuiteResult(name, True)

    def check(self, ok: bool, what: str) -> None:
        self.r.checked += 1
        if not ok:
            self.r.passed = False
            self.r.failures.append(what)

    def note(self, text: str) -> None:
        self.r.notes.append(text)


def suite_round_trip(n: int, trials: int, rng: random.Random) -> SuiteResult:
    s = _Suite("round_trip")
    for t in range(trials):
        x = random_flag(n, rng)
        p = lift(x)
        s.check(is_R_point(p), f"trial {t}: lift is not a point of R_n")
        s.check(project_pi(p) == x, f"trial {t}: pi(lift(x)) != x")
        s.check(is_admissible(collection_of(p)), f"trial {t}: cell labels of lift not admissible")
    return s.r


def suite_fixed_points(n: int, trials: int, rng: random.Random) -> SuiteResult:
    s = _Suite("fixed_points")
    if n <= FULL_FIXED_POINT_MAX_N:
        cs = list(enumerate_admissible(n))
    else:
        all_cs = enumerate_admissible(n)
        keep = sorted(rng.sample(range(1 << num_roots(n)), min(trials, 1 << num_roots(n))))
        cs, want = [], iter(keep)
        nxt = next(want, None)
        for k, c in enumerate(all_cs):
            if k == nxt:
                cs.append(c)
                nxt = next(want, None)
                if nxt is None:
                    break
        s.note(f"sampled {len(cs)} of {1 << num_roots(n)} fixed points")
    for c in cs:
        p = fixed_point(c)
        s.check(is_R_point(p), f"{c}: fixed point not in R_n")
        s.check(is_degenerate_flag(project_pi(p)), f"{c}: pi(p) not a degenerate flag")
        s.check(collection_of(p) == c, f"{c}: cell labels differ from the collection")
    return s.r


def suite_sections(n: int, trials: int, rng: random.Random) -> SuiteResult:
    s = _Suite("sections")
    order = beta_order(n)
    for t in range(trials):
        p = random_R_point(n, rng)
        l = rng.randint(1, len(order))
        part = {sl: p[sl] for sl in order[:l - 1]}
        ext = section_s(l, part, n)
        s.check({k: v for k, v in ext.items() if k != order[l - 1]} == part,
                f"trial {t}: forgetting slot {l} does not recover the input")
        s.check(is_partial_R_point(n, ext), f"trial {t}: section value violates the tower conditions")
    return s.r


def suite_divisors(n: int, trials: int, rng: random.Random) -> SuiteResult:
    s = _Suite("divisors")
    pairs = [(a, b) for a in range(1, n) for b in range(a, n)]
    for (a, b), c in zip(pairs, codim_one_cells(n)):
        s.check(is_admissible(c), f"codim-one cell {(a, b)} not admissible")
        s.check(cell_dimension(c) == num_roots(n) - 1, f"codim-one cell {(a, b)} has wrong dimension")
        s.check(relative_dimension(c) == 0, f"codim-one cell {(a, b)} has nonzero relative dimension")
        s.check(divisor_set(fixed_point(c)) == [RootIndex(a, b)],
                f"codim-one fixed point {(a, b)} lies in {divisor_set(fixed_point(c))}")
    coord = AdmissibleCollection.from_sets(
        n, {(i, j): range(1, i + 1) for i in range(1, n) for j in range(i, n)})
    s.check(RootIndex(1, n - 1) not in divisor_set(fixed_point(coord)),
            "coordinate fixed point lies in Z_{1,n-1}")
    generic = 0
    for t in range(trials):
        x = random_flag(n, rng, density=1.0)
        s.check(not divisor_set(lift(x)), f"trial {t}: generic lift lies on a divisor")
        p = random_R_point(n, rng)
        if not divisor_set(p):
            generic += 1
            s.check(lift(project_pi(p)) == p, f"trial {t}: point off all divisors is not lift(pi(p))")
    s.note(f"{generic} of {trials} random R-points avoided every divisor")
    return s.r


def suite_quiver(n: int, trials: int, seed: int) -> SuiteResult:
    s = _Suite("quiver")
    samples = min(trials, 20)
    report = quiver_dimension_check(n, samples=samples, seed=seed)
    if report.equations == 0:
        s.note("no relations for n=2; Q_2 is the space of A_1")
    s.check(report.ok, f"Jacobian ranks {report.ranks}, expected {report.equations}")
    squares = sum(i * i for i in range(1, n))
    s.note(f"dim Q_{n} = {n * (n - 1) // 2} + {squares} = {report.expected_dim}"
           f" ({report.ambient_dim} coordinates, {report.equations} independent relations)")
    s.r.data = report.to_json()
    rng = random.Random(seed + 1)
    for t in range(samples):
        x = random_flag(n, rng)
        q = quiver_from_flag(x)
        s.check(is_quiver_point(q, open_part=True), f"trial {t}: quiver_from_flag fails the relations")
        s.check(flag_from_quiver(q) == x, f"trial {t}: images of A_i differ from the flag")
    return s.r


def suite_parabolic(n: int, trials: int, rng: random.Random) -> SuiteResult:
    s = _Suite("parabolic")
    if n < 3:
        s.note("no proper parabolic shapes for n=2")
    shapes = [ParabolicShape.full(n)] + [ParabolicShape(n, (d,)) for d in range(1, n)]
    if n >= 4:
        shapes.append(ParabolicShape(n, (1, n - 1)))
    for t in range(min(trials, 20)):
        p = lift(random_flag(n, rng))
        for sh in shapes:
            d = sh.d
            y = {(d[a], d[b]): p[d[a], d[b]] for a in range(len(d)) for b in range(a, len(d))}
            s.check(is_Y_point(y, sh), f"trial {t}: restriction to {d} is not a Y-point")
        s.check(is_Y_point({(i, j): p[i, j] for i in range(1, n) for j in range(i, n)},
                           ParabolicShape.full(n)) == is_R_point(p), f"trial {t}: full shape disagrees")
    return s.r


def run_verify(n: int, trials: int = 100, seed: int = 0) -> dict:
    rng = random.Random(seed)
    suites = [
        suite_round_trip(n, trials, rng),
        suite_fixed_points(n, trials, rng),
        suite_sections(n, trials, rng),
        suite_divisors(n, trials, rng),
        suite_quiver(n, trials, seed),
        suite_parabolic(n, trials, rng),
    ]
    return {
        "n": n, "trials": trials, "seed": seed,
        "passed": all(r.passed for r in suites),
        "suites": [r.to_json() for r in suites],
    }

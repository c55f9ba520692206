"""Self-verification suites run by ``steinkit verify``.

Each suite returns a :class:`SuiteResult`; a suite that cannot run under the
given configuration (for instance a conjugator search cut short by a tiny
depth) reports ``skip`` instead of failing.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from typing import Callable

from . import assembly, mcg, nucleus, openbook
from .diagram import FrontDiagram, stabilize
from .surgery import SurgeryPresentation

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass(frozen=True)
class SuiteResult:
    name: str
    status: str
    detail: str
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {"suite": self.name, "status": self.status, "detail": self.detail}


@dataclass(frozen=True)
class VerifyConfig:
    depth: int = 6
    seed: int = 0
    samples: int = 100
    flip_twist_sign: bool = False  # fault injection for the braid suite

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be at least 1")


UNKNOT = FrontDiagram((((0, 0), (1, 1), (2, 0), (1, -1)),))


def relators(cfg: VerifyConfig) -> SuiteResult:
    bad = [g for g in range(1, 5) if mcg.verify_relator(mcg.g_block(g)).name != "HomologyIdentity"]
    if bad:
        return SuiteResult("relators", FAIL, f"relator is not the identity for g = {bad}")
    return SuiteResult("relators", PASS, "(a1 b1 ... ag bg)^(4g+2) acts trivially for g = 1..4")


def braid(cfg: VerifyConfig) -> SuiteResult:
    sign = -1 if cfg.flip_twist_sign else 1
    bad = [g for g in range(1, 4) if not mcg.braid_check(g, sign)]
    if bad:
        return SuiteResult("braid", FAIL, f"t_a t_b t_a does not send a -> b, b -> -a for g = {bad}")
    return SuiteResult("braid", PASS, "braid relation and twist sign hold for g = 1..3")


def ribbon_sweep(cfg: VerifyConfig) -> SuiteResult:
    errors = []
    for p in range(1, 8):
        for q in range(1, 8):
            pg = openbook.torus_page(p, q)
            if pg.boundary_components != math.gcd(p, q):
                errors.append(f"({p},{q}): {pg.boundary_components} boundary components")
            if pg.euler_char != p + q - p * q:
                errors.append(f"({p},{q}): chi = {pg.euler_char}")
            if math.gcd(p, q) == 1:
                if pg.genus != (p - 1) * (q - 1) // 2:
                    errors.append(f"({p},{q}): genus {pg.genus}")
                if len(openbook.hopf_cores(pg)) != 1 - pg.euler_char:
                    errors.append(f"({p},{q}): Hopf core count")
    if errors:
        return SuiteResult("ribbon_sweep", FAIL, "; ".join(errors[:5]))
    return SuiteResult("ribbon_sweep", PASS, "boundary count = gcd(p,q) and torus-knot fiber data for p,q <= 7")


def random_positive_word(rng: random.Random, g: int, max_len: int = 10) -> mcg.TwistWord:
    chain = mcg.standard_curves(g)
    return mcg.TwistWord(tuple((rng.choice(chain), 1) for _ in range(rng.randint(1, max_len))), g)


def inversion(cfg: VerifyConfig) -> SuiteResult:
    rng = random.Random(cfg.seed)
    misses = 0
    for k in range(cfg.samples):
        g = 2 + k % 2
        w = random_positive_word(rng, g)
        # conjugate a letter to get off the chain
        f = random_positive_word(rng, g, 3)
        c = mcg.class_curve(mcg.rho(f).apply(w.letters[0][0].cls))
        w = mcg.TwistWord(((c, 1),) + w.letters[1:], g)
        try:
            inv = mcg.invert_positively(w, g, cfg.depth)
        except mcg.NoConjugatorFound:
            misses += 1
            continue
        if not inv.is_positive or not (mcg.rho(inv) @ mcg.rho(w)).is_identity:
            return SuiteResult("inversion", FAIL, f"round trip failed on {mcg.dumps(w)!r}")
    if misses == cfg.samples:
        return SuiteResult("inversion", SKIP, f"no conjugator found within depth {cfg.depth}")
    detail = f"{cfg.samples - misses}/{cfg.samples} words inverted exactly"
    if misses:
        detail += f"; {misses} skipped (NoConjugatorFound at depth {cfg.depth})"
    return SuiteResult("inversion", PASS, detail)


def framing(cfg: VerifyConfig) -> SuiteResult:
    fronts = [UNKNOT]
    for _ in range(3):
        fronts.append(stabilize(fronts[-1], 0, 1))
    fronts.append(nucleus.trefoil_family_front(3, 1))
    bad = []
    for f in fronts:
        p = SurgeryPresentation(f)
        fib = openbook.stein_to_palf(p)
        bad += [v.data for v in fib.framing_verdicts if v.name != "FramingMatch"]
    if bad:
        return SuiteResult("framing", FAIL, f"page framing differs from tb: {bad[:3]}")
    return SuiteResult("framing", PASS, "page framing = tb on the unknot, its stabilizations and the n = 3 link")


def euler_characteristics(cfg: VerifyConfig) -> SuiteResult:
    cases = [("empty link", SurgeryPresentation(FrontDiagram(())))]
    cases += [(f"n={n}", nucleus.trefoil_family_presentation(n, 1)) for n in (2, 3)]
    try:
        for name, p in cases:
            fib = openbook.stein_to_palf(p)
            v0 = assembly.cap_binding(fib.open_book)
            v1 = assembly.build_V1(v0.monodromy, v0.fiber_genus, cfg.depth)
            assembly.assemble_X(fib, v0, v1)
    except mcg.NoConjugatorFound as e:
        return SuiteResult("euler_characteristics", SKIP, str(e))
    except assembly.AssemblyInconsistent as e:
        return SuiteResult("euler_characteristics", FAIL, f"{name}: {e}")
    return SuiteResult("euler_characteristics", PASS,
                       "chi(X) by pieces = chi(X) by fibration for " + ", ".join(n for n, _ in cases))


SUITES: tuple[Callable[[VerifyConfig], SuiteResult], ...] = (
    relators, braid, ribbon_sweep, inversion, framing, euler_characteristics)


def run_all(cfg: VerifyConfig = VerifyConfig()) -> list[SuiteResult]:
    out = []
    for suite in SUITES:
        t = time.perf_counter()
        r = suite(cfg)
        out.append(SuiteResult(r.name, r.status, r.detail, time.perf_counter() - t))
    return out

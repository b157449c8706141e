"""Measure rotation and braid composites and the kink shift on the unknot."""
from __future__ import annotations

import sys

from klrw.bimodules import compose_chain, product_image_dims
from klrw.tangle import (evaluate_annular_link, parse_tangle, rotate_bimodule, sl2_algebra,
                         sl2_lift)

from configs import BraidConfig


def full_rotation(w: int, maxdeg: int) -> bool:
    """Does B_sigma^w have the graded dims of the algebra, and is the product map onto?"""
    lift, steps = sl2_lift(w), []
    for _ in range(w):
        steps.append(rotate_bimodule(1, w=w, lift=lift))
        lift = steps[-1].lift1
    comp, A = compose_chain(steps), sl2_algebra(w, 1)
    same = True
    for a in A.chambers:
        for b in A.chambers:
            want = A.hom_dims(a.id, b.id, maxdeg, mindeg=0)
            got = comp.hom_dims(a.id, b.id, maxdeg)
            img = product_image_dims(steps, a.id, b.id, maxdeg)
            same &= got == want == img
    return same


def main(cfg: BraidConfig = BraidConfig()) -> int:
    for w in cfg.reds:
        print(f"B_sigma^{w} on {w} reds: dims match the algebra to degree {cfg.maxdeg}: "
              f"{full_rotation(w, cfg.maxdeg)}")
    plain = evaluate_annular_link(parse_tangle("cup 0\ncap 0"))
    kinked = evaluate_annular_link(parse_tangle("cup 0\nbraid 0 +\ncap 0"))
    print(f"unknot: {plain.poincare()}")
    print(f"unknot with a positive kink: {kinked.poincare()}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

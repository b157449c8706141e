"""Print graded Hom tables and Coulomb corner dimensions for A1 examples."""
from __future__ import annotations

import sys
from fractions import Fraction

from klrw.tangle import sl2_algebra

from configs import CoulombConfig, HomTableConfig


def hom_table(cfg: HomTableConfig) -> None:
    alg = sl2_algebra(cfg.w, cfg.v)
    print(f"A1, w = {cfg.w}, v = {cfg.v}, degrees 0..{cfg.maxdeg}")
    for a in alg.chambers:
        for b in alg.chambers:
            dims = alg.hom_dims(a.id, b.id, cfg.maxdeg, radius=cfg.radius, mindeg=0)
            print(f"  {a.id} -> {b.id}: {[dims[d] for d in range(cfg.maxdeg + 1)]}")


def coulomb(cfg: CoulombConfig) -> None:
    alg = sl2_algebra(cfg.w, 1)
    for a in cfg.values:
        dims = alg.coulomb_dims(Fraction(a), cfg.maxdeg)
        print(f"  e(a) R e(a), a = {a}: {[dims[d] for d in range(0, cfg.maxdeg + 1, 2)]}")


def main() -> int:
    hom_table(HomTableConfig())
    hom_table(HomTableConfig(w=3, v=1))
    hom_table(HomTableConfig(w=2, v=2, maxdeg=4, radius=1))
    coulomb(CoulombConfig())
    return 0


if __name__ == "__main__":
    sys.exit(main())

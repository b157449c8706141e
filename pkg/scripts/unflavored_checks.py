"""Compare flavored and unflavored hom dimensions on a framed A2 tree (slow)."""
from __future__ import annotations

import sys
import time
from fractions import Fraction

from klrw.algebra import KLRW
from klrw.bimodules import unflavored_hom_dims, unflavored_word
from klrw.chambers import StrandData
from klrw.quiver_flavor import Edge, FlavorGroup, Flavoring, Quiver, build_cb_graph

from configs import UnflavoredConfig


def framed_a2(beta_e: Fraction) -> StrandData:
    q = Quiver(("1", "2"), (Edge("e", "1", "2"),))
    cb = build_cb_graph(q, {"1": 2, "2": 1})
    beta = {"e": beta_e, ("1", 1): Fraction(1, 2), ("1", 2): Fraction(1, 7),
            ("2", 1): Fraction(1, 3)}
    return StrandData.make(Flavoring.make(cb, FlavorGroup.rational(), beta), {"1": 2, "2": 1})


def main(cfg: UnflavoredConfig = UnflavoredConfig()) -> int:
    status = 0
    for be in cfg.beta_e:
        t0 = time.perf_counter()
        sd = framed_a2(be)
        A = KLRW(sd)
        words = {c.id: unflavored_word(A, c.id) for c in A.chambers}
        bad = sum(A.hom_dims(a.id, b.id, cfg.maxdeg, mindeg=0) !=
                  unflavored_hom_dims(sd.quiver, words[a.id], words[b.id], cfg.maxdeg)
                  for a in A.chambers for b in A.chambers)
        n = len(A.chambers) ** 2
        print(f"beta_e = {be}: {n - bad}/{n} chamber pairs agree, {time.perf_counter() - t0:.0f}s")
        status |= bool(bad)
    return status


if __name__ == "__main__":
    sys.exit(main())

"""Time the local relation suite per seed and mode."""
from __future__ import annotations

import sys
import time

from klrw.relations import verify_relations

from configs import RelationSuiteConfig


def main(cfg: RelationSuiteConfig = RelationSuiteConfig()) -> int:
    status = 0
    for mode in cfg.modes:
        for seed in cfg.seeds:
            t0 = time.perf_counter()
            rep = verify_relations(seed=seed, h_mode=mode, instances=cfg.instances)
            dt = time.perf_counter() - t0
            bad = [r.family for r in rep.results if not r.ok]
            print(f"{mode:6s} seed {seed}: {len(rep.results)} families, "
                  f"{'ok' if not bad else 'FAILED ' + ', '.join(bad)}, {dt:.2f}s")
            status |= bool(bad)
    return status


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Fuzz the operator identities with fresh random seeds.

Runs the cochain and homotopy suites repeatedly, a new seed per round,
and stops on the first counterexample.  Meant for long unattended runs
when touching the sign conventions; the pytest suite pins fixed seeds,
this keeps exploring.

    python3 scripts/identity_fuzzer.py configs/smash-z2.json --rounds 20
"""

import argparse
import json
import random
import sys
import time

from corestar.presets import parse_config, build_preset
from corestar.suites import cochain_suite, homotopy_suite


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config")
    ap.add_argument("--rounds", type=int, default=10)
    ap.add_argument("--trials", type=int, default=25, help="cases per identity per round")
    ap.add_argument("--seed", type=int, default=None, help="base seed, random when omitted")
    args = ap.parse_args(argv)

    with open(args.config) as fh:
        preset = build_preset(parse_config(json.load(fh)))
    base = args.seed if args.seed is not None else random.SystemRandom().randrange(2**32)
    print(f"# base seed {base}")

    t0 = time.monotonic()
    for r in range(args.rounds):
        seed = base + r
        reports = {}
        reports.update(cochain_suite(preset.make_context(26), args.trials, seed))
        reports.update(homotopy_suite(preset.make_context(10), args.trials, seed))
        bad = [rep for rep in reports.values() if not rep.passed]
        if bad:
            print(f"round {r} seed {seed}: FAIL")
            for rep in bad:
                print(json.dumps(rep.as_json(), indent=2))
            return 1
        cases = sum(rep.cases for rep in reports.values())
        print(f"round {r} seed {seed}: ok ({cases} cases, "
              f"{time.monotonic() - t0:.1f}s elapsed)")
    return 0


if __name__ == "__main__":
    sys.exit(main())

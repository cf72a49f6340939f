#!/usr/bin/env python3
"""Print the deformed commutator table [x_i, x_j] order by order.

Human-readable companion to `corestar table`: one line per generator pair
per order, empty rows suppressed.  Useful for eyeballing how the twisted
channel enters at first order on smash configurations.

    python3 scripts/star_table.py configs/smash-z2.json --order 2
"""

import argparse
import json
import sys

from corestar.coresolution import element_to_str, e_sub
from corestar.deformation import star
from corestar.poly import p_xvar
from corestar.coresolution import e_from_poly
from corestar.presets import parse_config, build_preset, run_preset, auto_cutoff


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config")
    ap.add_argument("--order", type=int, default=1)
    ap.add_argument("--p-cutoff", type=int, default=None)
    args = ap.parse_args(argv)

    with open(args.config) as fh:
        preset = build_preset(parse_config(json.load(fh)))
    cutoff = args.p_cutoff or auto_cutoff(1, args.order)
    state = run_preset(preset, args.order, p_cutoff=cutoff)
    ctx = state.ctx

    print(f"# preset={preset.cfg.preset} dim={ctx.dim} "
          f"order={args.order} p_cutoff={cutoff}")
    gens = [e_from_poly(ctx, p_xvar(ctx.dim, i)) for i in range(ctx.dim)]
    for i in range(ctx.dim):
        for j in range(ctx.dim):
            ij = star(state, gens[i], gens[j])
            ji = star(state, gens[j], gens[i])
            for k in range(1, args.order + 1):
                comm = e_sub(ij.coefficients[k], ji.coefficients[k])
                if comm:
                    print(f"[x{i+1}, x{j+1}]_{k} = {element_to_str(ctx, comm)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Regenerate the JSON fixture tree from the built-in catalog.

Usage: python scripts/make_fixtures.py [fixtures-dir]
"""

import json
import sys
from pathlib import Path

from finbundles.algebra import group_to_json, groupoid_to_json
from finbundles.catalog import groupoids, groups
from finbundles.finset import FinSet
from finbundles.torsor import bundle_to_json, trivial_torsor


def write(path: Path, data: dict):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n")
    print("wrote", path)


def relabeled_torsor_bundle(g, x_size: int, shift: int):
    """A trivial torsor with its carrier cyclically relabelled, so the
    tables no longer look like a product."""
    w = trivial_torsor(g, FinSet(x_size))
    b = w.bundle
    n = b.action.carrier.size
    perm = [(i + shift) % n for i in range(n)]
    inv = [0] * n
    for i, v in enumerate(perm):
        inv[v] = i
    act = tuple(tuple(perm[b.action.act[h][inv[p]]] for p in range(n))
                for h in range(g.order))
    from finbundles.algebra import ActionObject
    from finbundles.finset import FinFn
    from finbundles.torsor import Bundle

    action = ActionObject(g, b.action.carrier, act)
    proj = FinFn(b.action.carrier, b.base, tuple(b.proj.table[inv[p]] for p in range(n)))
    return Bundle(action, b.base, proj)


def main():
    root = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("fixtures")
    gs = groups(8)
    for name, g in sorted(gs.items()):
        write(root / "groups" / ("%s.json" % name), group_to_json(g))
    for name, gd in sorted(groupoids().items()):
        write(root / "groupoids" / ("%s.json" % name), groupoid_to_json(gd))
    bundles = {
        "z2_self": (trivial_torsor(gs["z2"], FinSet(1)).bundle, "groups/z2"),
        "z2_over2": (trivial_torsor(gs["z2"], FinSet(2)).bundle, "groups/z2"),
        "z3_self": (trivial_torsor(gs["z3"], FinSet(1)).bundle, "groups/z3"),
        "z3_twisted": (relabeled_torsor_bundle(gs["z3"], 2, 2), "groups/z3"),
        "v4_self": (trivial_torsor(gs["v4"], FinSet(1)).bundle, "groups/v4"),
    }
    for name, (bundle, ref) in sorted(bundles.items()):
        write(root / "bundles" / ("%s.json" % name), bundle_to_json(bundle, ref))


if __name__ == "__main__":
    main()

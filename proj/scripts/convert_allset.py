#!/usr/bin/env python3
"""Convert an AllSet-style raw dataset directory into the files tfhnn loads.

The input directory holds features.pickle (scipy sparse, n x d),
hypergraph.pickle (dict: hyperedge key -> node ids) and labels.pickle
(n labels), as distributed with the AllSet code under
raw_data/coauthorship/cora and raw_data/cocitation/citeseer. Fetching that
directory is left to the user.

Writes edges.txt, features.tfhn and labels.txt into the output directory.

    python3 scripts/convert_allset.py raw_data/coauthorship/cora data/cora-ca
"""

import argparse
import pickle
import struct
import sys
from pathlib import Path

import numpy as np
import scipy.sparse as sp


def load_pickle(path):
    with open(path, "rb") as f:
        return pickle.load(f)


def write_edges(path, n, hyperedges):
    with open(path, "w") as f:
        f.write(f"#n={n} m={len(hyperedges)}\n")
        for members in hyperedges:
            f.write(" ".join(str(v) for v in members) + "\n")


def write_features(path, x):
    x = np.ascontiguousarray(x, dtype="<f8")
    with open(path, "wb") as f:
        f.write(b"TFHN")
        f.write(struct.pack("<QQ", x.shape[0], x.shape[1]))
        f.write(x.tobytes())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("raw_dir", type=Path)
    ap.add_argument("out_dir", type=Path)
    args = ap.parse_args()

    features = load_pickle(args.raw_dir / "features.pickle")
    hypergraph = load_pickle(args.raw_dir / "hypergraph.pickle")
    labels = np.asarray(load_pickle(args.raw_dir / "labels.pickle")).reshape(-1)

    x = features.toarray() if sp.issparse(features) else np.asarray(features)
    n = x.shape[0]
    if labels.shape[0] != n:
        sys.exit(f"labels has {labels.shape[0]} entries, features has {n} rows")

    hyperedges = []
    for key in sorted(hypergraph, key=str):
        members = sorted({int(v) for v in hypergraph[key]})
        if not members:
            continue
        if members[-1] >= n or members[0] < 0:
            sys.exit(f"hyperedge {key!r} references a node outside [0, {n})")
        hyperedges.append(members)

    args.out_dir.mkdir(parents=True, exist_ok=True)
    write_edges(args.out_dir / "edges.txt", n, hyperedges)
    write_features(args.out_dir / "features.tfhn", x)
    np.savetxt(args.out_dir / "labels.txt", labels.astype(np.int64), fmt="%d")
    print(f"{args.out_dir}: n={n} m={len(hyperedges)} d={x.shape[1]} "
          f"classes={int(labels.max()) + 1}")


if __name__ == "__main__":
    main()

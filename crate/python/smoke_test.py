"""Smoke test for the formality_py extension.

Build and place the module next to this script first:

    cargo build --release -p formality-py --features extension-module
    cp target/release/libformality_py.so python/formality_py.so
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import formality_py as fp


def check(label, ok):
    print(f"{'ok' if ok else 'FAIL'} {label}")
    return ok


def main():
    results = []

    pi = fp.MultiVector.parse("multivector 2 2\n1 * x^1,0 * d1^d2\n")
    xi = fp.MultiVector.parse("multivector 2 1\n1 * x^0,1 * d1\n")
    results.append(check("multivector round trip", fp.MultiVector.parse(pi.to_text()) == pi))
    results.append(check("bracket antisymmetry", (xi.bracket(pi) + pi.bracket(xi)).is_zero()))
    results.append(check("[pi, pi] vanishes in dim 2", pi.bracket(pi).is_zero()))

    mu = fp.Operator.multiplication(2)
    results.append(check("d_H of the product vanishes", mu.hochschild().is_zero()))
    results.append(check("[mu, mu]_G vanishes", mu.gerstenhaber(mu).is_zero()))

    graphs = fp.enumerate_graphs(1, 2, 2)
    results.append(check("one wedge graph", len(graphs) == 1))
    w = fp.weight(graphs[0], samples=50_000, seed=3)
    results.append(check(f"wedge weight {w['mean']:.4f} ± {w['stderr']:.4f}", abs(w["mean"] - 0.25) < 4 * w["stderr"]))
    again = fp.weight(graphs[0], samples=50_000, seed=3)
    results.append(check("weights are reproducible", again["mean"] == w["mean"]))

    edge = fp.Graph(1, 2, [(1, "q", 1)])
    total, stderr = fp.stokes_residual(edge, samples=20_000)
    results.append(check("stokes residual of one edge", abs(total) <= 3 * stderr + 1e-12))

    text = fp.star_product_text(fp.MultiVector.parse("multivector 2 2\n1 * x^0,0 * d1^d2\n"), 1, samples=20_000)
    results.append(check("star product has two orders", text.count("hbar") == 2))

    bound = fp.formality_residual_bound([pi], samples=1000)
    results.append(check("formality n = 1 is exact", bound["max_abs"] == 0.0))

    try:
        fp.star_product_text(xi, 1)
        results.append(check("non-bivector rejected", False))
    except ValueError:
        results.append(check("non-bivector rejected", True))

    failed = results.count(False)
    print(f"{len(results) - failed} of {len(results)} checks passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())

"""Smoke test for the compiled `marvel` extension.

Build and install first:
    maturin build --release -m crates/python/Cargo.toml
    pip install target/wheels/marvel-*.whl
"""

import marvel


def main():
    g = marvel.Dag(4, [(0, 2), (1, 2), (2, 3)])
    r = marvel.learn_from_dag(g)
    assert marvel.markov_equivalent(r.essential, g), r.essential
    assert r.essential.directed_edges() == [(0, 2), (1, 2), (2, 3)]
    print("dsep:", r)

    truth = marvel.fixed_indegree_dag(20, 2, 7)
    rows = marvel.sample_scm(truth, 5000, 7)
    r = marvel.learn_from_data(rows)
    prec, rec, f1 = marvel.skeleton_metrics(r.essential, truth)
    print(f"fisher-z: precision={prec:.3f} recall={rec:.3f} f1={f1:.3f}")
    assert f1 > 0.7

    pc = marvel.learn_from_dag(truth, algo="pc")
    mv = marvel.learn_from_dag(truth)
    assert pc.essential == mv.essential
    assert mv.post_tests <= marvel.ci_budget_bound(20, truth.max_in_degree())
    print("ok")


if __name__ == "__main__":
    main()

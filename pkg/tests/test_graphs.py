import numpy as np
import pytest

from mfmsbm.graphs import (AdjacencyMatrix, DegreeWeights, EdgeProbMatrix,
                           Labeling, balanced_sizes, block_counts,
                           generate_dcsbm, generate_sbm, labeling_from_sizes,
                           log_likelihood, ratio_sizes)

from oracles import brute_log_likelihood


# ---------------------------------------------------------------- types

def test_adjacency_rejects_asymmetry_and_loops():
    with pytest.raises(ValueError):
        AdjacencyMatrix([[0, 1], [0, 0]])
    with pytest.raises(ValueError):
        AdjacencyMatrix([[1, 0], [0, 0]])
    with pytest.raises(ValueError):
        AdjacencyMatrix([[0]])
    with pytest.raises(ValueError):
        AdjacencyMatrix([[0, 2], [2, 0]])


def test_labeling_contiguity():
    z = Labeling([0, 1, 0, 2])
    assert z.t == 3 and z.sizes().tolist() == [2, 1, 1]
    with pytest.raises(ValueError):
        Labeling([0, 2, 2])  # label 1 unoccupied
    assert Labeling.from_one_based([1, 2, 1]).z.tolist() == [0, 1, 0]
    with pytest.raises(ValueError):
        Labeling.from_one_based([0, 1])
    assert Labeling([0, 1]).to_one_based().tolist() == [1, 2]


def test_edge_prob_matrix_validation():
    with pytest.raises(ValueError):
        EdgeProbMatrix([[0.5, 0.2], [0.3, 0.5]])
    with pytest.raises(ValueError):
        EdgeProbMatrix([[1.5]])
    q = EdgeProbMatrix.homogeneous(3, 0.5, 0.1)
    assert q.q[0, 0] == 0.5 and q.q[0, 2] == 0.1


def test_degree_weights_range():
    with pytest.raises(ValueError):
        DegreeWeights([0.0, 1.0])
    with pytest.raises(ValueError):
        DegreeWeights([1.2])
    w = DegreeWeights.misspecified(100, 0.3, 0.8, seed=0)
    assert (w.w == 0.8).sum() == 30 and (w.w == 1.0).sum() == 70


# ------------------------------------------------------------ generators

def test_generate_sbm_probability_one_edge():
    A = generate_sbm(Labeling([0, 0]), EdgeProbMatrix([[1.0]]), seed=0)
    assert A.matrix[0, 1] == 1


def test_generate_sbm_probability_zero_edges():
    q = EdgeProbMatrix.homogeneous(2, 0.0, 0.0)
    A = generate_sbm(Labeling([0, 0, 1]), q, seed=1)
    assert A.edge_count == 0


def test_generate_sbm_within_block_density():
    # 1617 within-block pairs; Hoeffding puts the density within +-0.05 whp
    z = labeling_from_sizes(balanced_sizes(100, 3))
    q = EdgeProbMatrix.homogeneous(3, 0.5, 0.1)
    A = generate_sbm(z, q, seed=12345)
    iu, ju = np.triu_indices(100, k=1)
    within = z.z[iu] == z.z[ju]
    density = A.matrix[iu, ju][within].mean()
    assert within.sum() == 1617
    assert 0.45 <= density <= 0.55


def test_generate_sbm_label_out_of_range():
    with pytest.raises(ValueError):
        generate_sbm(Labeling([0, 1]), EdgeProbMatrix([[0.5]]), seed=0)


def test_generated_graphs_symmetric_zero_diagonal():
    z = labeling_from_sizes([5, 5, 6])
    q = EdgeProbMatrix.homogeneous(3, 0.7, 0.2)
    for seed in range(25):
        A = generate_sbm(z, q, seed=seed)
        m = A.matrix
        assert np.array_equal(m, m.T)
        assert np.diag(m).sum() == 0


def test_generate_sbm_seeded_determinism():
    z = labeling_from_sizes([10, 10])
    q = EdgeProbMatrix.homogeneous(2, 0.6, 0.1)
    a1 = generate_sbm(z, q, seed=99)
    a2 = generate_sbm(z, q, seed=99)
    assert a1 == a2
    # frozen digest: PCG64 draws are platform-stable
    assert int(a1.matrix.sum()) == 74
    assert a1.matrix[np.triu_indices(20, 1)][:12].tolist() == \
        [1, 1, 0, 0, 1, 1, 1, 1, 0, 1, 1, 0]


def test_dcsbm_unit_weights_match_sbm():
    z = labeling_from_sizes([6, 6])
    q = EdgeProbMatrix.homogeneous(2, 0.5, 0.1)
    w = DegreeWeights(np.ones(12))
    for seed in (0, 7):
        assert generate_dcsbm(z, q, w, seed=seed) == generate_sbm(z, q, seed=seed)


def test_dcsbm_edge_probability_product():
    # theta_12 = w_1 w_2 Q_11 = 0.5 * 0.5 * 0.8 = 0.2
    z = Labeling([0, 0, 0, 0])
    q = EdgeProbMatrix([[0.8]])
    w = DegreeWeights([0.5, 0.5, 1.0, 1.0])
    assert w.w[0] * w.w[1] * q.q[0, 0] == pytest.approx(0.2)
    draws = np.array([generate_dcsbm(z, q, w, seed=s).matrix[0, 1]
                      for s in range(4000)])
    assert abs(draws.mean() - 0.2) < 0.02  # 3-sigma ~ 0.019


def test_dcsbm_misspecification_setting():
    z = labeling_from_sizes(balanced_sizes(100, 2))
    q = EdgeProbMatrix.homogeneous(2, 0.5, 0.1)
    w = DegreeWeights.misspecified(100, 0.3, 0.8, seed=11)
    A = generate_dcsbm(z, q, w, seed=3)
    assert A.n == 100 and 0 < A.edge_count < 100 * 99 // 2


# ------------------------------------------------------------ likelihood

def test_log_likelihood_trivial_cases():
    empty = AdjacencyMatrix(np.zeros((3, 3), dtype=int))
    q = EdgeProbMatrix.homogeneous(1, 0.5, 0.5)
    assert log_likelihood(empty, Labeling([0, 0, 0]), q) == pytest.approx(3 * np.log(0.5))

    one_edge = AdjacencyMatrix([[0, 1], [1, 0]])
    assert log_likelihood(one_edge, Labeling([0, 0]), EdgeProbMatrix([[0.3]])) \
        == pytest.approx(np.log(0.3))


def test_log_likelihood_matches_brute_force(rng):
    for _ in range(20):
        z = Labeling(np.sort(rng.integers(0, 3, 5)) if rng.random() < 0.5
                     else np.unique(rng.integers(0, 3, 5), return_inverse=True)[1])
        q = EdgeProbMatrix.homogeneous(z.t, 0.6, 0.2)
        A = generate_sbm(z, q, seed=rng)
        got = log_likelihood(A, z, q)
        want = brute_log_likelihood(A.matrix, z.z, q.q)
        assert got == pytest.approx(want, abs=1e-12)


def test_log_likelihood_impossible_pattern_is_minus_inf():
    A = AdjacencyMatrix([[0, 1], [1, 0]])
    assert log_likelihood(A, Labeling([0, 0]), EdgeProbMatrix([[0.0]])) == float("-inf")
    empty = AdjacencyMatrix(np.zeros((2, 2), dtype=int))
    assert log_likelihood(empty, Labeling([0, 0]), EdgeProbMatrix([[1.0]])) == float("-inf")


def test_log_likelihood_dimension_mismatch():
    A = AdjacencyMatrix(np.zeros((3, 3), dtype=int))
    with pytest.raises(ValueError):
        log_likelihood(A, Labeling([0, 0]), EdgeProbMatrix([[0.5]]))


# ------------------------------------------------------------ block counts

def test_block_counts_complete_graph():
    A = AdjacencyMatrix(np.ones((4, 4), dtype=int) - np.eye(4, dtype=int))
    bc = block_counts(A, Labeling([0, 0, 1, 1]))
    table = dict(bc.items())
    assert table[(0, 0)] == (1, 1)
    assert table[(1, 1)] == (1, 1)
    assert table[(0, 1)] == (4, 4)


def test_block_counts_single_cluster():
    A = AdjacencyMatrix([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
    bc = block_counts(A, Labeling([0, 0, 0]))
    assert dict(bc.items()) == {(0, 0): (3, 2)}


def test_block_counts_totals_reconcile(rng):
    for _ in range(15):
        n = 7
        raw = rng.integers(0, 3, n)
        z = Labeling(np.unique(raw, return_inverse=True)[1])
        q = EdgeProbMatrix.homogeneous(z.t, 0.5, 0.3)
        A = generate_sbm(z, q, seed=rng)
        bc = block_counts(A, z)
        assert bc.total_pairs() == n * (n - 1) // 2
        assert bc.total_edges() == A.edge_count


def test_likelihood_block_decomposition(rng):
    # sum over block pairs of the Beta-kernel exponent form equals the
    # per-edge sum, to 1e-12
    for _ in range(10):
        n = 20
        z = Labeling(np.unique(rng.integers(0, 4, n), return_inverse=True)[1])
        q = EdgeProbMatrix.homogeneous(z.t, 0.55, 0.15)
        A = generate_sbm(z, q, seed=rng)
        bc = block_counts(A, z)
        total = 0.0
        for (r, s), (pairs, edges) in bc.items():
            total += edges * np.log(q.q[r, s]) + (pairs - edges) * np.log1p(-q.q[r, s])
        assert total == pytest.approx(log_likelihood(A, z, q), abs=1e-12)


# ------------------------------------------------------------ size helpers

def test_balanced_sizes_paper_captions():
    assert balanced_sizes(100, 3) == [33, 33, 34]
    assert balanced_sizes(100, 2) == [50, 50]
    assert balanced_sizes(200, 5) == [40, 40, 40, 40, 40]


def test_ratio_sizes_paper_captions():
    assert ratio_sizes(100, [2, 3, 4]) == [22, 33, 45]
    assert ratio_sizes(200, [2, 3, 4, 5, 6]) == [20, 30, 40, 50, 60]

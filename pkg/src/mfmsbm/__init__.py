"""MFM-SBM: Bayesian community detection with an unknown number of
communities, via a collapsed Gibbs sampler over a mixture-of-finite-mixtures
partition prior."""

from .graphs import (AdjacencyMatrix, DegreeWeights, EdgeProbMatrix, Labeling,
                     balanced_sizes, block_counts, generate_dcsbm, generate_sbm,
                     labeling_from_sizes, log_likelihood, ratio_sizes)
from .gibbs import (PosteriorSample, SamplerConfig, run_chain,
                    run_parallel_chains)
from .posterior import (FitSummary, co_cluster_matrix, dahl_estimate,
                        estimate_k, exact_posterior, perm_hamming, rand_index)
from .prior import (ComponentPmf, MfmPriorTable, SetPartition, compute_log_v,
                    crp_urn_weights, enumerate_partitions, log_partition_prior,
                    urn_weights)

__version__ = "0.1.0"

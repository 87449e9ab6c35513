"""Robust graph structure learning: joint training of a denoised adjacency
matrix and a two-layer GCN, with capacity-bound calculators and poisoning
attack generators."""

from ._core import (
    AlignmentResult,
    BoundParams,
    Graph,
    IterationLog,
    LearnedGraph,
    PruneKind,
    PrunePolicy,
    SpectralPair,
    StructureParams,
    TrainConfig,
    TrainReport,
    alignment_loss_and_grad,
    blend_adjacency,
    feature_difference_attack,
    generalization_gap_bound,
    homophily_ratios,
    kernel_gradients,
    load_graph_dir,
    modal_degree,
    neighbor_lists,
    normalize_adjacency,
    pairwise_sq_distances,
    prox_l1,
    prune_epsilon,
    prune_knn,
    rademacher_lower_bound,
    rademacher_lower_bound_modal,
    random_flip_attack,
    run_rgsla,
    save_graph_dir,
    sbm_generate,
    similarity_matrix,
    smoothness_grad_wrt_similarity,
    smoothness_loss,
    spectral_norm,
    trc_upper_bound,
    train_plain_gcn,
    transform_features,
)

__all__ = [name for name in dir() if not name.startswith("_")]

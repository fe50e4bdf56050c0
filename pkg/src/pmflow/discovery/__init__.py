"""Process discovery from event logs."""

from .alpha import AlphaMiner, EmptyLogError, alpha_miner, footprint
from .dfg import DFGMiner, DirectlyFollowsGraph, build_dfg, dfg_from_sequences, filter_dfg
from .heuristics import HeuristicsMiner, HeuristicsNet, dependency_measure, heuristics_miner
from .inductive import (
    Cut,
    InductiveMiner,
    find_cut,
    find_loop_cut,
    find_parallel_cut,
    find_sequence_cut,
    find_xor_cut,
    inductive_miner,
    inductive_miner_from_variants,
    split_log,
)
from .social import NoResourceError, SimilarTaskMiner, SocialNetwork, social_network_similar_task

__all__ = [
    "AlphaMiner", "EmptyLogError", "alpha_miner", "footprint",
    "DFGMiner", "DirectlyFollowsGraph", "build_dfg", "dfg_from_sequences", "filter_dfg",
    "HeuristicsMiner", "HeuristicsNet", "dependency_measure", "heuristics_miner",
    "Cut", "InductiveMiner", "find_cut", "find_loop_cut", "find_parallel_cut", "find_sequence_cut", "find_xor_cut",
    "inductive_miner", "inductive_miner_from_variants", "split_log",
    "NoResourceError", "SimilarTaskMiner", "SocialNetwork", "social_network_similar_task",
]

"""Near-linear chain decompositions of DAGs and a chain-based reachability index."""

from .concat import ConcatStats, concatenate, decompose_h3_conc, reversed_dfs_lookup
from .decompose import ChainDecomposition, decompose_co, decompose_h3, decompose_no, dumps_chains, loads_chains, read_chains
from .estimators import ChainDecomposer, ReachabilityIndex, TransitiveEdgePruner
from .exceptions import (
    CycleError,
    DagChainError,
    InconsistentInput,
    InvalidDecomposition,
    MemoryBudgetError,
    ParamError,
    ParseError,
    RangeError,
)
from .generators import GenSpec, gen_ba, gen_er, gen_pb, gen_ws, generate
from .graph import Dag, TopoOrder, dumps_dag, load_dag, read_dag, scc_condense, sort_adjacency, topo_sort, write_dag
from .index import ReachIndex, build_index, read_index, update_stats
from .oracles import ReachMatrix, longest_path, tc_dfs, transitive_reduction, width_fulkerson
from .prune import PruneResult, check_ered_bound, prune_transitive

__version__ = "0.1.0"

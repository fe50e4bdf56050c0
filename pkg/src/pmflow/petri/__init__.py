from .dot import to_dot
from .language import StateSpaceLimit, has_parallel_labeled_steps, net_language, reachable_markings
from .net import (
    INVISIBLE,
    Marking,
    NetStructureError,
    NotEnabledError,
    PetriNet,
    Transition,
    enabled_transitions,
    fire,
    same_structure,
)
from .normative import example_fine_net, normative_pnml_path, normative_rtfm_model
from .pnml import PNMLParseError, export_pnml, from_pnml_string, import_pnml, to_pnml_string
from .tree import (
    Operator,
    ProcessTree,
    activity,
    format_tree,
    loop,
    parallel,
    parse_tree,
    sequence,
    silent,
    tree_language,
    tree_to_petri_net,
    xor,
)

__all__ = [
    "to_dot", "StateSpaceLimit", "has_parallel_labeled_steps", "net_language", "reachable_markings",
    "INVISIBLE", "Marking", "NetStructureError", "NotEnabledError", "PetriNet", "Transition",
    "enabled_transitions", "same_structure", "example_fine_net", "fire", "normative_pnml_path", "normative_rtfm_model", "PNMLParseError",
    "export_pnml", "from_pnml_string", "import_pnml", "to_pnml_string", "Operator", "ProcessTree",
    "activity", "format_tree", "loop", "parallel", "parse_tree", "sequence", "silent",
    "tree_language", "tree_to_petri_net", "xor",
]

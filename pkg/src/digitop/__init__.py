"""digitop: digital homotopy, loop classes and topological complexity of digital images."""

__version__ = "0.1.0"

from .errors import EmptinessError, InputError, ParseError, ResourceLimitError, SynthesisError
from .lattice import (
    AdjacencyKind,
    CurveWitness,
    DigitalImage,
    adjacent,
    components,
    connected_images,
    cycle_witness,
    detect_simple_closed_curve,
    generate_cycle,
    is_connected,
    load_image,
    parse_image,
    product_adjacent,
    save_image,
    search_cycles,
    serialize_image,
)
from .morph import (
    DigitalMap,
    EquivalenceCertificate,
    Homotopy,
    HomotopyType,
    TriState,
    Verdict,
    classify_homotopy_type_2d,
    homotopic,
    homotopy_equivalent,
    is_contractible,
    is_reducible,
    is_rigid,
    reduce_image,
)
from .loops import CycleDomain, LoopMap, count_loop_classes, enumerate_loops, is_simple_loop
from .planner import (
    DigitalPath,
    MotionPlanner,
    TCResult,
    concat_paths,
    normalize,
    paths_adjacent,
    synthesize_cycle_planner,
    tc_classify,
    tc_oracle,
    verify_planner,
)
from .higher import (
    AnchoredPath,
    HigherPlanner,
    OrderPartition,
    check_fibrational_substitute,
    global_section_refuter,
    order_respecting,
    synthesize_higher_planner,
    tcn_classify,
    verify_higher_planner,
)

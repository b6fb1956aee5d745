from .geometry import (
    Node,
    NetworkTopology,
    SearchMode,
    angular_offset,
    bearing,
    bearings_from,
    generate_random,
    search_space,
    wrap_angle,
)
from .coverage import (
    Coverage,
    CoverageGrid,
    CoverageModel,
    Sector,
    candidate_set_family,
    coverage_grid,
    pointing_angles,
)
from .io import format_topology, load_topology, parse_topology, save_topology

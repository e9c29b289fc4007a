"""Spatial relational database engine over linear-quadtree cell codes.

The pieces: quadcode (cell addressing and region algebra), geometry
(world-coordinate rasterization), relengine (relations and the QT_*
functions), the SPL/SQL language pipeline (lexer/parser/printer/checker/
executor), storage (TSV persistence), service (HTTP endpoints), report
(figures) and cli.
"""

from .errors import (
    CellRangeError,
    DepthOverflowError,
    OutOfWindowError,
    SplError,
    StorageError,
)
from .executor import (
    ExecResult,
    StatementOutcome,
    call_procedure,
    define_procedure,
    execute,
    run_sql,
    run_statement,
)
from .geometry import (
    Entity,
    Point,
    Polygon,
    Polyline,
    WorldTransform,
    load_entities,
    parse_entities,
    raster_point,
    raster_polygon,
    raster_polyline,
    raster_segment,
    world_to_grid,
)
from .lexer import Token, tokenize
from .parser import parse_script, parse_statement
from .printer import print_statement
from .quadcode import (
    MAX_LEVEL,
    CodeSet,
    Direction,
    GridCell,
    Quadcode,
    adjacent,
    canonical_order,
    cell_rect,
    children_of,
    common,
    components,
    contains,
    decode_cell,
    dist,
    encode_cell,
    frontier,
    neighbor,
    normalize,
    parent_of,
    set_area,
    set_difference,
    set_intersect,
    set_union,
)
from .relengine import (
    Database,
    Kind,
    Relation,
    cross_product,
    eval_scalar,
    format_value,
    lines_through_point,
    rel_intersect,
    rel_minus,
    rel_union,
    select,
)
from .storage import load_db, save_db

__version__ = "0.1.0"

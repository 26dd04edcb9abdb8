"""somchange: measure and visualize changes to weighted SOM patterns."""

from .association import (
    AssociationMatrix,
    WeightedPattern,
    build_association,
    conditional_pattern,
    input_activation,
)
from .bundle import ModelBundle, ModelStore
from .change import (
    ChangeSummary,
    FeatureChangeDetail,
    RegionSelection,
    default_regions,
    summarize_change,
)
from .dataset import Dataset, ingest_csv, ingest_csv_bytes
from .errors import (
    DataError,
    DimensionMismatchError,
    ModelNotFoundError,
    PatternError,
    SolverError,
    SomChangeError,
)
from .glyphs import (
    GlyphScene,
    StarGlyph,
    change_glyph,
    neuron_star,
    pattern_scene,
    scale_pemd_for_display,
    scene_to_dict,
    weight_color,
)
from .grid import SomGrid
from .significance import KsResult, WeightedEcdf, ks_test, weighted_ecdf
from .som import (
    FeatureSpec,
    Som,
    TrainConfig,
    bmu,
    quantization_error,
    topographic_error,
    train_som,
)
from .svg import render_change_svg, render_pattern_svg, scene_to_json, scene_to_svg
from .transport import (
    FlowSolution,
    GroundDistanceMatrix,
    ground_distances,
    pemd,
    pemd_all,
    scaled_emd,
    solve_emd,
)

__version__ = "0.1.0"

__all__ = [
    "AssociationMatrix",
    "ChangeSummary",
    "DataError",
    "Dataset",
    "DimensionMismatchError",
    "FeatureChangeDetail",
    "FeatureSpec",
    "FlowSolution",
    "GlyphScene",
    "GroundDistanceMatrix",
    "KsResult",
    "ModelBundle",
    "ModelNotFoundError",
    "ModelStore",
    "PatternError",
    "RegionSelection",
    "Som",
    "SomChangeError",
    "SomGrid",
    "SolverError",
    "StarGlyph",
    "TrainConfig",
    "WeightedEcdf",
    "WeightedPattern",
    "bmu",
    "build_association",
    "change_glyph",
    "conditional_pattern",
    "default_regions",
    "ground_distances",
    "ingest_csv",
    "ingest_csv_bytes",
    "input_activation",
    "ks_test",
    "neuron_star",
    "pattern_scene",
    "pemd",
    "pemd_all",
    "quantization_error",
    "render_change_svg",
    "render_pattern_svg",
    "scale_pemd_for_display",
    "scaled_emd",
    "scene_to_dict",
    "scene_to_json",
    "scene_to_svg",
    "solve_emd",
    "summarize_change",
    "topographic_error",
    "train_som",
    "weight_color",
    "weighted_ecdf",
]

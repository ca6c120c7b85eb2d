"""Pull-based adaptive video streaming simulator for multi-helper wireless
networks, with single-antenna TDMA and multi-antenna spatial-multiplexing
physical layers."""

from .config import Config, config_from_dict, load_config, reference_config
from .engine import MetricsReport, emit_metrics, emit_topology, emit_trace, run_simulation, run_to_files
from .errors import ConfigError, SequencingError, TraceFormatError
from .phy import RateParams, ScheduleDecision, brute_force_schedule, interference_at, schedule_helper_phyA, schedule_helper_phyB, zf_rate
from .playback import BufferingParams, PlaybackBuffer, window_max_delay
from .policy import PolicyParams, UtilityFunction, choose_auxiliary, make_utility, select_quality
from .queueing import ChunkRecord, RequestQueue, update_virtual_queue
from .scenario import MobilityParams, NetworkState, PathLossParams, Topology, advance_state, build_topology, initial_state, path_gain
from .video import QualityBounds, QualityCurve, VbrParams, VideoFile, chunk_profile, export_trace, generate_vbr_library, import_trace, quality_bounds

__version__ = "0.1.0"

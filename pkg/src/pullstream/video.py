"""Per-chunk, per-level video size and quality profiles.

A chunk is one GOP of fixed playback duration. For every chunk index t and
quality level m a file carries the encoded size B(m, t) in bits per pixel
and a quality value D(m, t) in (0, 1] (SSIM-like). Profiles are either
generated synthetically (VBR) or imported from a CSV trace.
"""

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, TraceFormatError


@dataclass(frozen=True)
class QualityCurve:
    """Maps bits-per-pixel to a saturating quality index: 1 - drop*(B/ref)^-q.

    Concave and increasing in log B, asymptotically approaching 1; clamped
    below at `floor` so quality stays positive.
    """

    ref_bpp: float = 0.05
    drop: float = 0.25
    exponent: float = 2.0
    floor: float = 0.05


@dataclass(frozen=True)
class VbrParams:
    levels_bpp: tuple = (0.05, 0.10, 0.20, 0.40)  # base size per level, strictly increasing
    num_chunks: int = 2000
    sigma: float = 0.2          # lognormal spread of the per-chunk multiplier
    fps: float = 24.0
    gop_seconds: float = 0.5
    pixels_per_frame: int = 921_600  # 1280 x 720
    quality: QualityCurve = QualityCurve()
    num_files: int = 1


@dataclass
class VideoFile:
    """Immutable size/quality tables for one file.

    B and D are (levels, chunks) arrays; level index 0 is the lowest rate.
    Public level numbers are 1-based.
    """

    file_id: int
    B: np.ndarray
    D: np.ndarray
    fps: float = 24.0
    gop_seconds: float = 0.5
    pixels_per_frame: int = 921_600

    def __post_init__(self):
        self.B = np.asarray(self.B, float)
        self.D = np.asarray(self.D, float)
        validate_tables(self.B, self.D)

    @property
    def num_levels(self) -> int:
        return self.B.shape[0]

    @property
    def num_chunks(self) -> int:
        return self.B.shape[1]

    @property
    def pixels_per_chunk(self) -> int:
        # eta * T_gop * N_pix, exact for integral frames-per-GOP
        return int(round(self.fps * self.gop_seconds * self.pixels_per_frame))

    def chunk_bits(self, level: int, t: int) -> int:
        """Size in whole bits of chunk t at 1-based quality level."""
        return int(math.ceil(self.pixels_per_chunk * self.B[level - 1, t - 1]))

    def quality(self, level: int, t: int) -> float:
        return float(self.D[level - 1, t - 1])


@dataclass(frozen=True)
class QualityBounds:
    d_min: float
    d_max: float

    def __post_init__(self):
        if not (0 < self.d_min <= self.d_max <= 1.0):
            raise ConfigError(f"quality bounds ({self.d_min}, {self.d_max}) not in 0 < d_min <= d_max <= 1")


def validate_tables(B: np.ndarray, D: np.ndarray):
    if B.ndim != 2 or B.shape != D.shape or B.size == 0:
        raise TraceFormatError("size and quality tables must be equal non-empty (levels, chunks) grids")
    if np.any(B <= 0):
        raise TraceFormatError("bits-per-pixel values must be positive")
    if np.any(D <= 0) or np.any(D > 1):
        t, m = _first_violation(~((D > 0) & (D <= 1)))
        raise TraceFormatError(f"quality value outside (0, 1] at chunk {t}, level {m}")
    if B.shape[0] > 1:
        bad_b = np.diff(B, axis=0) < 0
        if np.any(bad_b):
            t, m = _first_violation(bad_b)
            raise TraceFormatError(f"size not nondecreasing in level at chunk {t}, level {m + 1}")
        bad_d = np.diff(D, axis=0) < 0
        if np.any(bad_d):
            t, m = _first_violation(bad_d)
            raise TraceFormatError(f"quality not nondecreasing in level at chunk {t}, level {m + 1}")


def _first_violation(mask: np.ndarray):
    m_idx, t_idx = np.argwhere(mask)[0]
    return int(t_idx) + 1, int(m_idx) + 1


def quality_from_bpp(bpp, curve: QualityCurve):
    """Quality index for encoded sizes in bits/pixel; vectorized."""
    q = 1.0 - curve.drop * (np.asarray(bpp, float) / curve.ref_bpp) ** (-curve.exponent)
    q = np.clip(q, curve.floor, 1.0)
    return float(q) if q.ndim == 0 else q


def generate_vbr_library(params: VbrParams, seed) -> list[VideoFile]:
    """Generate `num_files` synthetic VBR files, deterministically from seed.

    The same per-chunk multiplier scales every level of a chunk, so level
    monotonicity holds by construction. sigma=0 degenerates to CBR.
    """
    base = np.asarray(params.levels_bpp, float)
    if base.ndim != 1 or base.size < 1:
        raise ConfigError("video.levels_bpp must list at least one level")
    if np.any(base <= 0) or (base.size > 1 and np.any(np.diff(base) <= 0)):
        raise ConfigError("video.levels_bpp must be positive and strictly increasing")
    if params.num_chunks < 1:
        raise ConfigError("video.num_chunks must be >= 1")

    ss = np.random.SeedSequence(seed) if not isinstance(seed, np.random.SeedSequence) else seed
    files = []
    for fid, child in enumerate(ss.spawn(params.num_files)):
        rng = np.random.default_rng(child)
        z = rng.standard_normal(params.num_chunks)
        # mean-one lognormal fluctuation, identical across levels of a chunk
        v = np.exp(params.sigma * z - 0.5 * params.sigma**2)
        B = base[:, None] * v[None, :]
        D = quality_from_bpp(B, params.quality)
        files.append(
            VideoFile(fid, B, D, params.fps, params.gop_seconds, params.pixels_per_frame)
        )
    return files


def chunk_profile(f: VideoFile, t: int) -> list[tuple[int, float, float]]:
    """All (level, bits-per-pixel, quality) rows of chunk t, level ascending."""
    if not 1 <= t <= f.num_chunks:
        raise IndexError(f"chunk index {t} outside 1..{f.num_chunks}")
    col = t - 1
    return [(m + 1, float(f.B[m, col]), float(f.D[m, col])) for m in range(f.num_levels)]


def quality_bounds(f: VideoFile) -> QualityBounds:
    """Box constraints for the auxiliary quality variable of one file."""
    return QualityBounds(float(f.D[0].min()), float(f.D[-1].max()))


TRACE_COLUMNS = ("chunk", "level", "bits_per_pixel", "quality")


def export_trace(f: VideoFile, path):
    """Write the full (chunk, level) grid as CSV; inverse of import_trace."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_COLUMNS)
        for t in range(1, f.num_chunks + 1):
            for m in range(1, f.num_levels + 1):
                w.writerow([t, m, repr(float(f.B[m - 1, t - 1])), repr(float(f.D[m - 1, t - 1]))])


def import_trace(path, fps=24.0, gop_seconds=0.5, pixels_per_frame=921_600, file_id=0) -> VideoFile:
    """Load a quality-rate trace CSV covering a complete levels x chunks grid."""
    cells = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in TRACE_COLUMNS if c not in header]
        if missing:
            raise TraceFormatError(f"trace {path}: missing column {missing[0]!r}")
        for row in reader:
            t, m = int(row["chunk"]), int(row["level"])
            if (t, m) in cells:
                raise TraceFormatError(f"trace {path}: duplicate cell chunk {t}, level {m}")
            cells[(t, m)] = (float(row["bits_per_pixel"]), float(row["quality"]))
    if not cells:
        raise TraceFormatError(f"trace {path}: no data rows")
    chunks = max(t for t, _ in cells)
    levels = max(m for _, m in cells)
    B = np.empty((levels, chunks))
    D = np.empty((levels, chunks))
    for t in range(1, chunks + 1):
        for m in range(1, levels + 1):
            if (t, m) not in cells:
                raise TraceFormatError(f"trace {path}: missing grid cell chunk {t}, level {m}")
            B[m - 1, t - 1], D[m - 1, t - 1] = cells[(t, m)]
    return VideoFile(file_id, B, D, fps, gop_seconds, pixels_per_frame)

"""JSON configuration: schema dataclasses, validation, and the reference
scenario (2 helpers, 20 users, full connectivity).

Validation errors name the offending field. All absolute defaults that the
underlying model leaves open (powers, channel symbols per slot, geometry,
the utility weight V) are fixed here and documented in the README.
"""

import json
from dataclasses import dataclass, field

from .errors import ConfigError
from .scenario import MobilityParams, PathLossParams
from .video import QualityCurve, VbrParams


@dataclass
class HelperSpec:
    pos: tuple
    power: float = 10.0
    antennas: int = 10


@dataclass
class ScenarioSection:
    area_m: tuple = (100.0, 100.0)
    helpers: list = field(default_factory=list)
    n_users: int = 20
    user_positions: list | None = None
    edge_rule: str = "all"            # "all" | "threshold" | "explicit"
    edge_threshold_m: float = 60.0
    edge_list: list = field(default_factory=list)
    path_loss: PathLossParams = PathLossParams()
    mobility: MobilityParams = MobilityParams()


@dataclass
class VideoSection:
    vbr: VbrParams = VbrParams()
    trace_path: str | None = None     # overrides synthetic generation
    files: str = "shared"             # "shared" | "independent"


@dataclass
class PolicySection:
    V: float = 1e16
    utility: str = "log"
    phy: str = "B"                    # "A" | "B"
    antennas: int = 10                # default M applied to helpers
    s_max: int = 5
    power: float = 10.0               # default P applied to helpers
    symbols_per_slot: float = 4.0e7   # n; ~80 MHz over a 0.5 s slot
    theta_init: str | float = "auto"  # "auto" warm-starts at V / d_max


@dataclass
class PlaybackSection:
    xi: float = 2.0
    window_slots: int = 20


@dataclass
class RunSection:
    horizon: int = 2600
    seed: int = 7
    out_dir: str = "out"
    trace: bool = False


@dataclass
class Config:
    scenario: ScenarioSection
    video: VideoSection
    policy: PolicySection
    playback: PlaybackSection
    run: RunSection


def _get(d: dict, key: str, where: str, default=None, required=False):
    if key in d:
        return d[key]
    if required:
        raise ConfigError(f"{where}.{key} is required")
    return default


def _section(raw: dict, name: str) -> dict:
    sec = raw.get(name, {})
    if not isinstance(sec, dict):
        raise ConfigError(f"{name} section must be an object")
    return sec


def config_from_dict(raw: dict) -> Config:
    if not isinstance(raw, dict):
        raise ConfigError("configuration root must be a JSON object")

    pol = _section(raw, "policy")
    policy = PolicySection(
        V=float(_get(pol, "V", "policy", 1e16)),
        utility=str(_get(pol, "utility", "policy", "log")),
        phy=str(_get(pol, "phy", "policy", "B")).upper(),
        antennas=int(_get(pol, "antennas", "policy", 10)),
        s_max=int(_get(pol, "s_max", "policy", 5)),
        power=float(_get(pol, "power", "policy", 10.0)),
        symbols_per_slot=float(_get(pol, "symbols_per_slot", "policy", 4.0e7)),
        theta_init=_get(pol, "theta_init", "policy", "auto"),
    )

    scn = _section(raw, "scenario")
    area = tuple(float(x) for x in _get(scn, "area_m", "scenario", (100.0, 100.0)))
    raw_helpers = _get(scn, "helpers", "scenario", None)
    if raw_helpers is None:
        raw_helpers = [
            {"pos": [0.25 * area[0], 0.5 * area[1]]},
            {"pos": [0.75 * area[0], 0.5 * area[1]]},
        ]
    helpers = []
    for i, h in enumerate(raw_helpers):
        if "pos" not in h or len(h["pos"]) != 2:
            raise ConfigError(f"scenario.helpers[{i}].pos must be [x, y]")
        helpers.append(
            HelperSpec(
                pos=tuple(float(x) for x in h["pos"]),
                power=float(h.get("power", policy.power)),
                antennas=int(h.get("antennas", policy.antennas)),
            )
        )
    users = _get(scn, "users", "scenario", {"count": 20})
    if isinstance(users, dict):
        n_users, user_positions = int(users.get("count", 20)), None
    else:
        user_positions = [tuple(float(x) for x in u["pos"]) for u in users]
        n_users = len(user_positions)
    pl = _section(scn, "path_loss")
    mob = _section(scn, "mobility")
    vid = _section(raw, "video")
    qc = _section(vid, "quality_curve")
    play = _section(raw, "playback")
    run = _section(raw, "run")

    gop_seconds = float(_get(vid, "gop_seconds", "video", 0.5))
    scenario = ScenarioSection(
        area_m=area,
        helpers=helpers,
        n_users=n_users,
        user_positions=user_positions,
        edge_rule=str(_get(scn, "edge_rule", "scenario", "all")),
        edge_threshold_m=float(_get(scn, "edge_threshold_m", "scenario", 60.0)),
        edge_list=[tuple(int(x) for x in e) for e in _get(scn, "edges", "scenario", [])],
        path_loss=PathLossParams(
            d0_m=float(_get(pl, "d0_m", "scenario.path_loss", 40.0)),
            beta=float(_get(pl, "beta", "scenario.path_loss", 3.5)),
        ),
        mobility=MobilityParams(
            mode=str(_get(mob, "mode", "scenario.mobility", "static")),
            speed_mps=float(_get(mob, "speed_mps", "scenario.mobility", 1.0)),
            slot_seconds=gop_seconds,
            area_m=area,
        ),
    )

    video = VideoSection(
        vbr=VbrParams(
            levels_bpp=tuple(float(x) for x in _get(vid, "levels_bpp", "video", (0.05, 0.1, 0.2, 0.4))),
            num_chunks=int(_get(vid, "num_chunks", "video", 2000)),
            sigma=float(_get(vid, "sigma", "video", 0.2)),
            fps=float(_get(vid, "fps", "video", 24.0)),
            gop_seconds=gop_seconds,
            pixels_per_frame=int(_get(vid, "pixels_per_frame", "video", 921_600)),
            quality=QualityCurve(
                ref_bpp=float(_get(qc, "ref_bpp", "video.quality_curve", 0.05)),
                drop=float(_get(qc, "drop", "video.quality_curve", 0.25)),
                exponent=float(_get(qc, "exponent", "video.quality_curve", 2.0)),
                floor=float(_get(qc, "floor", "video.quality_curve", 0.05)),
            ),
            num_files=1,
        ),
        trace_path=_get(vid, "trace", "video", None),
        files=str(_get(vid, "files", "video", "shared")),
    )

    playback = PlaybackSection(
        xi=float(_get(play, "xi", "playback", 2.0)),
        window_slots=int(_get(play, "window_slots", "playback", 20)),
    )
    runsec = RunSection(
        horizon=int(_get(run, "horizon", "run", 2600)),
        seed=int(_get(run, "seed", "run", 7)),
        out_dir=str(_get(run, "out_dir", "run", "out")),
        trace=bool(_get(run, "trace", "run", False)),
    )
    cfg = Config(scenario, video, playback=playback, policy=policy, run=runsec)
    validate_config(cfg)
    return cfg


def validate_config(cfg: Config):
    scn, vid, pol, play, run = cfg.scenario, cfg.video, cfg.policy, cfg.playback, cfg.run
    if not scn.helpers:
        raise ConfigError("scenario.helpers must list at least one helper")
    if scn.n_users < 1:
        raise ConfigError("scenario.users must contain at least one user")
    if scn.edge_rule not in ("all", "threshold", "explicit"):
        raise ConfigError(f"scenario.edge_rule: unknown rule {scn.edge_rule!r}")
    if scn.edge_rule == "threshold" and scn.edge_threshold_m <= 0:
        raise ConfigError("scenario.edge_threshold_m must be positive")
    if scn.path_loss.d0_m <= 0 or scn.path_loss.beta <= 0:
        raise ConfigError("scenario.path_loss: d0_m and beta must be positive")
    if scn.mobility.mode not in ("static", "waypoint"):
        raise ConfigError(f"scenario.mobility.mode: unknown mode {scn.mobility.mode!r}")
    if scn.mobility.speed_mps < 0:
        raise ConfigError("scenario.mobility.speed_mps must be >= 0")
    for i, h in enumerate(scn.helpers):
        if h.power <= 0:
            raise ConfigError(f"scenario.helpers[{i}].power must be positive")
        if h.antennas < 1:
            raise ConfigError(f"scenario.helpers[{i}].antennas must be >= 1")
    if pol.V <= 0:
        raise ConfigError("policy.V must be positive")
    if pol.utility not in ("log", "linear"):
        raise ConfigError(f"policy.utility: unknown kind {pol.utility!r}")
    if pol.phy not in ("A", "B"):
        raise ConfigError(f"policy.phy must be 'A' or 'B', got {pol.phy!r}")
    if pol.phy == "B":
        for i, h in enumerate(scn.helpers):
            if not 1 <= pol.s_max <= h.antennas:
                raise ConfigError(
                    f"policy.s_max={pol.s_max} must satisfy 1 <= s_max <= antennas "
                    f"({h.antennas} at scenario.helpers[{i}])"
                )
    if pol.symbols_per_slot < 1:
        raise ConfigError("policy.symbols_per_slot must be >= 1")
    if pol.theta_init != "auto":
        try:
            bad = float(pol.theta_init) < 0
        except (TypeError, ValueError):
            bad = True
        if bad:
            raise ConfigError("policy.theta_init must be 'auto' or a number >= 0")
    if vid.files not in ("shared", "independent"):
        raise ConfigError(f"video.files must be 'shared' or 'independent', got {vid.files!r}")
    v = vid.vbr
    if v.sigma < 0:
        raise ConfigError("video.sigma must be >= 0")
    if v.fps <= 0 or v.gop_seconds <= 0 or v.pixels_per_frame < 1:
        raise ConfigError("video: fps, gop_seconds and pixels_per_frame must be positive")
    if v.num_chunks < 1:
        raise ConfigError("video.num_chunks must be >= 1")
    if len(v.levels_bpp) < 1 or any(b <= 0 for b in v.levels_bpp):
        raise ConfigError("video.levels_bpp must be positive")
    if any(b2 <= b1 for b1, b2 in zip(v.levels_bpp, v.levels_bpp[1:])):
        raise ConfigError("video.levels_bpp must be strictly increasing")
    if play.xi <= 0:
        raise ConfigError("playback.xi must be positive")
    if play.window_slots < 1:
        raise ConfigError("playback.window_slots must be >= 1")
    if run.horizon < 0:
        raise ConfigError("run.horizon must be >= 0")


def load_config(path) -> Config:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: malformed JSON ({exc})") from exc
    return config_from_dict(raw)


_PARAM_ALIASES = {
    "V": "policy.V",
    "phy": "policy.phy",
    "s_max": "policy.s_max",
    "antennas": "policy.antennas",
    "power": "policy.power",
    "symbols_per_slot": "policy.symbols_per_slot",
    "utility": "policy.utility",
    "theta_init": "policy.theta_init",
    "seed": "run.seed",
    "horizon": "run.horizon",
    "out_dir": "run.out_dir",
    "trace": "run.trace",
    "num_chunks": "video.num_chunks",
    "sigma": "video.sigma",
    "files": "video.files",
    "xi": "playback.xi",
    "window_slots": "playback.window_slots",
}


def apply_override(raw: dict, param: str, value):
    """Set one parameter in a raw configuration dict, by alias or dotted
    JSON path (e.g. 'policy.V', 'scenario.mobility.mode')."""
    path = _PARAM_ALIASES.get(param, param)
    parts = path.split(".")
    node = raw
    for p in parts[:-1]:
        nxt = node.setdefault(p, {})
        if not isinstance(nxt, dict):
            raise ConfigError(f"parameter {param!r}: {p!r} is not a section")
        node = nxt
    node[parts[-1]] = value


def reference_config(**overrides) -> Config:
    """The documented reference scenario (all defaults); keyword overrides
    use aliases or dotted JSON paths with '.' spelled '__' in kwargs."""
    raw: dict = {}
    for key, value in overrides.items():
        apply_override(raw, key.replace("__", "."), value)
    return config_from_dict(raw)

"""The per-slot simulation loop and metric/CSV reporting.

Slot order: (1) advance the network state; (2) every user still requesting
picks a quality level, enqueues the chunk, and updates its quality target
and virtual queue; (3) users broadcast queue lengths and every helper
schedules independently; (4) served bits drain each user's ledger, with
completions timestamped this slot; (5) playback buffers advance.

Runs are deterministic: one seed feeds separate RNG streams for user
placement, VBR generation, and mobility, so identical configurations give
byte-identical metric files.
"""

import csv
import math
import os
from dataclasses import dataclass, field, replace

import numpy as np

from .config import Config, validate_config
from .phy import RateParams, schedule_helper_phyA, schedule_helper_phyB
from .playback import BufferingParams, PlaybackBuffer
from .policy import PolicyParams, choose_auxiliary, make_utility, select_quality
from .queueing import ChunkRecord, RequestQueue, update_virtual_queue
from .scenario import advance_state, build_topology, initial_state
from .video import chunk_profile, generate_vbr_library, import_trace, quality_bounds


@dataclass
class MetricsReport:
    """Per-user QoE and queue statistics plus network-level aggregates.

    Queue trajectories hold end-of-slot values for slots 1..horizon.
    Pre-buffering is censored at the horizon for users that never started.
    """

    users: list
    mean_quality: np.ndarray
    prebuffer_s: np.ndarray
    rebuffer_pct: np.ndarray
    stalls: np.ndarray
    avg_q_bits: np.ndarray
    avg_theta: np.ndarray
    utility: float
    total_backlog: np.ndarray            # (horizon,) sum of Q_u per slot
    q_trace: np.ndarray                  # (horizon, U)
    theta_trace: np.ndarray              # (horizon, U)
    completed_order: list = field(default_factory=list)  # per-user chunk indices
    delays: list = field(default_factory=list)           # per-user delivery delays
    horizon: int = 0
    seed: int = 0
    topology: object = None


def run_simulation(cfg: Config) -> MetricsReport:
    validate_config(cfg)
    scn, vid, pol, play, run = cfg.scenario, cfg.video, cfg.policy, cfg.playback, cfg.run

    ss = np.random.SeedSequence(run.seed)
    placement_seed, vbr_seed, mobility_seed = ss.spawn(3)
    placement_rng = np.random.default_rng(placement_seed)
    mobility_rng = np.random.default_rng(mobility_seed)

    topo = build_topology(scn, placement_rng)
    U, H = topo.n_users, topo.n_helpers

    if vid.trace_path is not None:
        v = vid.vbr
        files = [import_trace(vid.trace_path, v.fps, v.gop_seconds, v.pixels_per_frame)]
        user_file = [0] * U
    elif vid.files == "independent":
        files = generate_vbr_library(replace(vid.vbr, num_files=U), vbr_seed)
        user_file = list(range(U))
    else:
        files = generate_vbr_library(vid.vbr, vbr_seed)
        user_file = [0] * U

    horizon = run.horizon
    if horizon == 0:
        empty = np.zeros(0)
        return MetricsReport(
            users=[], mean_quality=empty, prebuffer_s=empty, rebuffer_pct=empty,
            stalls=empty, avg_q_bits=empty, avg_theta=empty, utility=math.nan,
            total_backlog=empty, q_trace=np.zeros((0, U)), theta_trace=np.zeros((0, U)),
            horizon=0, seed=run.seed, topology=topo,
        )

    utility_fn = make_utility(pol.utility)
    bounds = [quality_bounds(f) for f in files]
    params = [PolicyParams(pol.V, files[user_file[u]].pixels_per_chunk, int(pol.symbols_per_slot)) for u in range(U)]
    if pol.theta_init == "auto":
        theta = np.array([pol.V / bounds[user_file[u]].d_max for u in range(U)])
    else:
        theta = np.full(U, float(pol.theta_init))

    if pol.phy == "B":
        rate_params = [RateParams(int(topo.antennas[h]), pol.s_max, float(topo.powers[h])) for h in range(H)]

    queues = [RequestQueue() for _ in range(U)]
    buffering = BufferingParams(play.xi, play.window_slots)
    players = [PlaybackBuffer(files[user_file[u]].num_chunks, buffering) for u in range(U)]
    quality_sum = np.zeros(U)
    quality_cnt = np.zeros(U, int)
    completed_order: list[list[int]] = [[] for _ in range(U)]

    q_trace = np.zeros((horizon, U))
    theta_trace = np.zeros((horizon, U))
    n = int(pol.symbols_per_slot)
    state = initial_state(topo, scn.path_loss)

    for t in range(1, horizon + 1):
        state = advance_state(state, topo, scn.mobility, scn.path_loss, mobility_rng)

        profiles = {}
        for u in range(U):
            fid = user_file[u]
            f = files[fid]
            if t > f.num_chunks:
                continue
            if fid not in profiles:
                profiles[fid] = chunk_profile(f, t)
            q = queues[u]
            m = select_quality(q.backlog_bits, theta[u], profiles[fid], params[u].k)
            bits = f.chunk_bits(m, t)
            q.enqueue(ChunkRecord(fid, t, m, bits, bits, t))
            gamma = choose_auxiliary(theta[u], pol.V, bounds[fid], utility_fn)
            theta[u] = update_virtual_queue(theta[u], gamma, f.quality(m, t))

        weights = np.array([q.backlog_bits for q in queues], float)
        service = np.zeros(U)
        for h in range(H):
            if pol.phy == "B":
                dec = schedule_helper_phyB(h, weights, state, topo, rate_params[h])
            else:
                dec = schedule_helper_phyA(h, weights, state, topo)
            service[dec.users] += n * dec.mu

        for u in range(U):
            completed = queues[u].serve(int(service[u]))
            if completed:
                f = files[user_file[u]]
                for rec in completed:
                    quality_sum[u] += f.quality(rec.level, rec.index)
                    completed_order[u].append(rec.index)
                quality_cnt[u] += len(completed)
            players[u].step([(rec.index, rec.requested_slot) for rec in completed], t)

        for u in range(U):
            q_trace[t - 1, u] = queues[u].backlog_bits
        theta_trace[t - 1] = theta

    gop = vid.vbr.gop_seconds
    mean_quality = np.where(quality_cnt > 0, quality_sum / np.maximum(quality_cnt, 1), math.nan)
    prebuffer_s = np.array([players[u].prebuffer_slots(horizon) * gop for u in range(U)])
    rebuffer_pct = np.array([players[u].rebuffer_pct for u in range(U)])
    stalls = np.array([players[u].stall_events for u in range(U)], float)
    util = float(sum(utility_fn(x) for x in mean_quality)) if np.all(quality_cnt > 0) else math.nan

    return MetricsReport(
        users=list(range(U)),
        mean_quality=mean_quality,
        prebuffer_s=prebuffer_s,
        rebuffer_pct=rebuffer_pct,
        stalls=stalls,
        avg_q_bits=q_trace.mean(axis=0),
        avg_theta=theta_trace.mean(axis=0),
        utility=util,
        total_backlog=q_trace.sum(axis=1),
        q_trace=q_trace,
        theta_trace=theta_trace,
        completed_order=completed_order,
        delays=[np.array([d.delay for d in players[u].delivery_log]) for u in range(U)],
        horizon=horizon,
        seed=run.seed,
        topology=topo,
    )


METRIC_COLUMNS = ("user", "mean_quality", "prebuffer_s", "rebuffer_pct", "stalls", "avg_Q_bits", "avg_Theta")


def _fmt(x) -> str:
    return repr(float(x))


def emit_metrics(report: MetricsReport, path):
    """Write one row per user plus a 'mean' summary row."""
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(METRIC_COLUMNS)
            for i, u in enumerate(report.users):
                w.writerow([
                    u,
                    _fmt(report.mean_quality[i]),
                    _fmt(report.prebuffer_s[i]),
                    _fmt(report.rebuffer_pct[i]),
                    _fmt(report.stalls[i]),
                    _fmt(report.avg_q_bits[i]),
                    _fmt(report.avg_theta[i]),
                ])
            if report.users:
                w.writerow([
                    "mean",
                    _fmt(report.mean_quality.mean()),
                    _fmt(report.prebuffer_s.mean()),
                    _fmt(report.rebuffer_pct.mean()),
                    _fmt(report.stalls.mean()),
                    _fmt(report.avg_q_bits.mean()),
                    _fmt(report.avg_theta.mean()),
                ])
    except OSError as exc:
        raise OSError(f"failed to write metrics file {path}: {exc}") from exc


def emit_topology(topo, path):
    """Write helper and user positions for the topology panel."""
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["kind", "id", "x", "y"])
            for h in range(topo.n_helpers):
                w.writerow(["helper", h, _fmt(topo.helper_pos[h, 0]), _fmt(topo.helper_pos[h, 1])])
            for u in range(topo.n_users):
                w.writerow(["user", u, _fmt(topo.user_pos[u, 0]), _fmt(topo.user_pos[u, 1])])
    except OSError as exc:
        raise OSError(f"failed to write topology file {path}: {exc}") from exc


def emit_trace(report: MetricsReport, path):
    """Write the per-slot queue trace (slot, user, Q_bits, Theta)."""
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["slot", "user", "Q_bits", "Theta"])
            for t in range(report.horizon):
                for i, u in enumerate(report.users):
                    w.writerow([t + 1, u, _fmt(report.q_trace[t, i]), _fmt(report.theta_trace[t, i])])
    except OSError as exc:
        raise OSError(f"failed to write trace file {path}: {exc}") from exc


def run_to_files(cfg: Config, out_dir=None, suffix="") -> dict:
    """Run one simulation and write its outputs; returns the file map."""
    out = out_dir if out_dir is not None else cfg.run.out_dir
    os.makedirs(out, exist_ok=True)
    report = run_simulation(cfg)
    paths = {
        "metrics": os.path.join(out, f"metrics{suffix}.csv"),
        "topology": os.path.join(out, f"topology{suffix}.csv"),
    }
    emit_metrics(report, paths["metrics"])
    emit_topology(report.topology, paths["topology"])
    if cfg.run.trace:
        paths["trace"] = os.path.join(out, f"trace{suffix}.csv")
        emit_trace(report, paths["trace"])
    return paths

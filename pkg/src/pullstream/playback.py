"""Client-side playback buffer with adaptive pre/re-buffering.

The buffer counts playable, unplayed chunks. Playback starts once the
buffer reaches xi times the largest chunk delivery delay observed in a
sliding window; one chunk is consumed per slot afterwards. Running dry
is a stall: the player re-enters buffering and the same threshold rule
decides when to resume.
"""

from collections import deque
from dataclasses import dataclass

from .errors import ConfigError

BUFFERING = "buffering"
PLAYING = "playing"
FINISHED = "finished"


@dataclass(frozen=True)
class BufferingParams:
    xi: float = 2.0          # threshold multiplier on the delay estimate
    window_slots: int = 20   # sliding window for the max observed delay

    def __post_init__(self):
        if self.window_slots < 1:
            raise ConfigError("playback.window_slots must be >= 1")
        if self.xi <= 0:
            raise ConfigError("playback.xi must be positive")


def window_max_delay(deliveries, t: int, window_slots: int, last_e: float = 1.0) -> float:
    """Largest delivery delay among chunks that arrived in (t - window, t].

    `deliveries` holds (arrival_slot, delay) pairs. The estimate is floored
    at one slot, and an empty window carries the last known value forward.
    """
    lo = t - window_slots + 1
    delays = [w for a, w in deliveries if lo <= a <= t]
    if not delays:
        return max(1.0, last_e)
    return max(1.0, float(max(delays)))


@dataclass
class DeliveryRecord:
    index: int
    requested_slot: int
    arrival_slot: int
    delay: int


class PlaybackBuffer:
    """Playback state machine for one user streaming `total_chunks` chunks."""

    def __init__(self, total_chunks: int, params: BufferingParams = BufferingParams()):
        if total_chunks < 1:
            raise ValueError("total_chunks must be >= 1")
        self.total_chunks = total_chunks
        self.params = params
        self.buffered = 0                 # playable, unplayed chunks
        self.phase = BUFFERING
        self.start_slot: int | None = None   # slot the first playback started
        self.finish_slot: int | None = None
        self.played = 0
        self.delivered = 0
        self.stall_events = 0
        self.stall_slots = 0
        self.delivery_log: list[DeliveryRecord] = []
        self._window: deque[tuple[int, int]] = deque()
        self._last_e = 1.0

    def step(self, arrivals, t: int):
        """Advance one slot. `arrivals` lists (chunk_index, requested_slot)
        pairs completed this slot, in chunk order."""
        if self.phase == FINISHED:
            return
        for index, requested in arrivals:
            delay = t - requested
            self.delivery_log.append(DeliveryRecord(index, requested, t, delay))
            self._window.append((t, delay))
        self.delivered += len(arrivals)
        lo = t - self.params.window_slots + 1
        while self._window and self._window[0][0] < lo:
            self._window.popleft()
        e_t = window_max_delay(self._window, t, self.params.window_slots, self._last_e)
        self._last_e = e_t

        if self.phase == PLAYING:
            if self.buffered > 0:
                self.played += 1
            self.buffered = max(self.buffered - 1, 0) + len(arrivals)
            if self.played >= self.total_chunks:
                self.phase = FINISHED
                self.finish_slot = t
            elif self.buffered == 0:
                self.stall_events += 1
                self.phase = BUFFERING
        else:
            if self.start_slot is not None:
                self.stall_slots += 1
            self.buffered += len(arrivals)
            if self.buffered >= self.params.xi * e_t:
                self.phase = PLAYING
                if self.start_slot is None:
                    self.start_slot = t

    @property
    def rebuffer_pct(self) -> float:
        return 100.0 * self.stall_slots / self.total_chunks

    def prebuffer_slots(self, horizon: int) -> int:
        """Slots spent pre-buffering; censored at the horizon if playback
        never started."""
        return self.start_slot if self.start_slot is not None else horizon

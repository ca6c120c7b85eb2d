"""Per-user request queue (bits + in-order chunk ledger) and virtual queue.

The request queue is the pull scheme's bookkeeper: chunks enter strictly in
playback order, service drains the ledger head first, and the scalar backlog
always equals the bits remaining on the ledger. Because service is capped by
the ledger content, the max{., 0} clamp of the backlog recursion never has
to fire; it is still structural in serve().
"""

from collections import deque
from dataclasses import dataclass

from .errors import SequencingError


@dataclass
class ChunkRecord:
    """One requested chunk: the unit of the in-order ledger."""

    file_id: int
    index: int            # chunk number within the file, 1-based
    level: int            # chosen quality level, 1-based
    total_bits: int
    remaining_bits: int
    requested_slot: int

    def __post_init__(self):
        if self.total_bits <= 0:
            raise ValueError(f"chunk {self.index}: total_bits must be positive")
        if not 0 <= self.remaining_bits <= self.total_bits:
            raise ValueError(f"chunk {self.index}: remaining_bits outside [0, total_bits]")


class RequestQueue:
    """FIFO ledger of requested-but-undelivered chunks plus its bit backlog."""

    def __init__(self):
        self._ledger: deque[ChunkRecord] = deque()
        self._backlog = 0
        self.bits_arrived = 0
        self.bits_served = 0
        self.last_index = 0

    def __len__(self) -> int:
        return len(self._ledger)

    @property
    def backlog_bits(self) -> int:
        return self._backlog

    def head(self) -> ChunkRecord | None:
        return self._ledger[0] if self._ledger else None

    def enqueue(self, rec: ChunkRecord):
        """Append a chunk; indices must be strictly sequential with no skips."""
        if rec.index != self.last_index + 1:
            raise SequencingError(
                f"chunk {rec.index} enqueued after chunk {self.last_index}; "
                "requests must follow playback order"
            )
        self._ledger.append(rec)
        self._backlog += rec.total_bits
        self.bits_arrived += rec.total_bits
        self.last_index = rec.index

    def serve(self, bits: int) -> list[ChunkRecord]:
        """Consume up to `bits` from the ledger head forward.

        Returns the records drained to completion, in order. Service beyond
        the ledger content is discarded.
        """
        if bits < 0:
            raise ValueError("service bits must be nonnegative")
        budget = int(bits)
        completed = []
        while budget > 0 and self._ledger:
            head = self._ledger[0]
            take = min(head.remaining_bits, budget)
            head.remaining_bits -= take
            budget -= take
            self._backlog -= take
            self.bits_served += take
            if head.remaining_bits == 0:
                completed.append(self._ledger.popleft())
        return completed

    def ledger_bits(self) -> int:
        """Sum of bits remaining on the ledger; equals backlog_bits always."""
        return sum(r.remaining_bits for r in self._ledger)


def update_virtual_queue(theta: float, gamma: float, delivered: float) -> float:
    """One step of the quality-tracking virtual queue:
    theta' = max(theta + gamma - delivered, 0). Inputs are quality units >= 0.
    """
    return max(theta + gamma - delivered, 0.0)

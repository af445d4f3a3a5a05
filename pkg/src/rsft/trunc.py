"""Truncation-event accounting.

Every operation that drops a nonzero term because of a cutoff (max p-degree,
word-length bound, or Novikov energy) notes the event here, so callers can
report whether a result is exact at the requested size or only "up to
truncation".  Counters are process-global and deterministic.
"""

_counters = {"pmax": 0, "words": 0, "energy": 0}


def note(kind):
    _counters[kind] += 1


def snapshot():
    return dict(_counters)


def reset():
    for k in _counters:
        _counters[k] = 0


class watch:
    """Context manager reporting which cutoffs fired inside the block."""

    def __enter__(self):
        self._before = snapshot()
        return self

    def __exit__(self, *exc):
        after = snapshot()
        self.fired = {k: after[k] - self._before[k] for k in after}
        self.truncation_active = (self.fired["pmax"] + self.fired["words"]) > 0
        self.energy_truncated = self.fired["energy"] > 0
        return False

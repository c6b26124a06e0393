"""Build PerformanceSeries objects from arrays for tests."""

import datetime as dt

from perflab.series import EventMeta, Mark, PerformanceSeries


def make_series(years, values, chronometric=True, event_id="ev", unit=None):
    unit = unit or ("seconds" if chronometric else "meters")
    meta = EventMeta(event_id, "synthetic", chronometric, unit)
    marks = tuple(Mark(dt.date(int(y), 7, 1), float(v)) for y, v in zip(years, values))
    return PerformanceSeries(meta, marks)
